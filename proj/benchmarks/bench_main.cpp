#include <benchmark/benchmark.h>

#include "ccsim/adaptive.hpp"
#include "ccsim/analytics.hpp"
#include "ccsim/decentralized.hpp"
#include "ccsim/man.hpp"
#include "ccsim/mds.hpp"

using namespace ccsim;

static void BM_SubsetEnumeration(benchmark::State& state) {
    int k = static_cast<int>(state.range(0));
    for (auto _ : state) {
        long count = 0;
        for_each_subset(k, k / 2, [&](const std::vector<int>& s) { count += s.size(); });
        benchmark::DoNotOptimize(count);
    }
}
BENCHMARK(BM_SubsetEnumeration)->Arg(12)->Arg(16)->Arg(20);

static void BM_XorBytes(benchmark::State& state) {
    Bytes a(state.range(0), 0xAB), b(state.range(0), 0x5C);
    for (auto _ : state) {
        Bytes acc = a;
        xor_into(acc, b);
        benchmark::DoNotOptimize(acc.data());
    }
    state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_XorBytes)->Arg(1024)->Arg(65536);

static void BM_ManDelivery(benchmark::State& state) {
    int k = static_cast<int>(state.range(0));
    int t = k / 2;
    man::Config cfg{k, k, Rat(BigInt(t) * k, BigInt(k))};
    std::size_t f = binomial(k, t).convert_to<std::size_t>();
    FileLibrary lib = FileLibrary::random(k, f, 1);
    auto caches = man::placement(lib, cfg);
    DemandVector dv;
    for (int u = 0; u < k; ++u) dv.demands.push_back(Demand{u, u});
    for (auto _ : state) {
        auto log = man::delivery(lib, caches, dv, cfg);
        benchmark::DoNotOptimize(log.entries.size());
    }
}
BENCHMARK(BM_ManDelivery)->Arg(6)->Arg(10)->Arg(14);

static void BM_ManDecode(benchmark::State& state) {
    int k = static_cast<int>(state.range(0));
    int t = k / 2;
    man::Config cfg{k, k, Rat(BigInt(t) * k, BigInt(k))};
    std::size_t f = binomial(k, t).convert_to<std::size_t>();
    FileLibrary lib = FileLibrary::random(k, f, 1);
    auto caches = man::placement(lib, cfg);
    DemandVector dv;
    for (int u = 0; u < k; ++u) dv.demands.push_back(Demand{u, u});
    auto log = man::delivery(lib, caches, dv, cfg);
    for (auto _ : state) {
        Bytes got = man::decode(0, 0, caches[0], log, cfg);
        benchmark::DoNotOptimize(got.data());
    }
}
BENCHMARK(BM_ManDecode)->Arg(6)->Arg(10);

static void BM_DecentralizedDelivery(benchmark::State& state) {
    std::size_t f = static_cast<std::size_t>(state.range(0));
    FileLibrary lib = FileLibrary::random(4, f, 2);
    auto placed = decen::placement(lib, 4, Rat(1), 3);
    DemandVector dv;
    for (int u = 0; u < 4; ++u) dv.demands.push_back(Demand{u, u});
    for (auto _ : state) {
        auto log = decen::delivery(lib, placed.index, dv);
        benchmark::DoNotOptimize(log.total_bits());
    }
    state.SetBytesProcessed(state.iterations() * 4 * f);
}
BENCHMARK(BM_DecentralizedDelivery)->Arg(10000)->Arg(100000);

static void BM_MdsRoundTrip(benchmark::State& state) {
    mds::Code code(8, 4);
    Bytes file(static_cast<std::size_t>(state.range(0)), 0x42);
    std::vector<int> ids = {1, 3, 5, 7};
    for (auto _ : state) {
        auto shares = code.encode(file);
        std::vector<Bytes> picked = {shares[1], shares[3], shares[5], shares[7]};
        Bytes back = code.decode(picked, ids);
        benchmark::DoNotOptimize(back.data());
    }
    state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MdsRoundTrip)->Arg(4096)->Arg(65536);

static void BM_PcdRateAtPaperScale(benchmark::State& state) {
    adaptive::ClusterModel model;
    model.n_files = 256;
    model.n_caches = 256;
    model.cluster_size = 64;
    model.rho = 0.25;
    model.t0 = 0.1;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto profile = adaptive::sample_profile(model, seed++);
        Rat r = adaptive::pcd_rate(model, Rat(16), profile);
        benchmark::DoNotOptimize(boost::multiprecision::numerator(r));
    }
}
BENCHMARK(BM_PcdRateAtPaperScale);

BENCHMARK_MAIN();
