#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccsim/analytics.hpp"
#include "ccsim/man.hpp"
#include "ccsim/rng.hpp"

using namespace ccsim;

namespace {

DemandVector all_users_demand(const std::vector<int>& files) {
    DemandVector dv;
    for (std::size_t u = 0; u < files.size(); ++u)
        dv.demands.push_back(Demand{static_cast<int>(u), files[u]});
    return dv;
}

} // namespace

TEST_CASE("two-user worked example: placement layout and coded payload") {
    man::Config cfg{2, 2, Rat(1)};
    FileLibrary lib = FileLibrary::random(2, 8, 3);
    auto caches = man::placement(lib, cfg);

    // cache 0 holds the first halves (A1, B1), cache 1 the second halves
    Bytes a1(lib.files[0].begin(), lib.files[0].begin() + 4);
    Bytes a2(lib.files[0].begin() + 4, lib.files[0].end());
    Bytes b1(lib.files[1].begin(), lib.files[1].begin() + 4);
    Bytes b2(lib.files[1].begin() + 4, lib.files[1].end());
    CHECK(caches[0].entries.size() == 2);
    CHECK(caches[0].at("s0|f0^0").data == a1);
    CHECK(caches[0].at("s0|f1^0").data == b1);
    CHECK(caches[1].at("s0|f0^1").data == a2);
    CHECK(caches[1].at("s0|f1^1").data == b2);

    auto dv = all_users_demand({0, 1});
    auto log = man::delivery(lib, caches, dv, cfg);
    REQUIRE(log.entries.size() == 1);
    CHECK(log.entries[0].payload == xor_bytes({a2, b1}));
    CHECK(log.rate(8) == Rat(1, 2));

    // user 0 combines B1 with A2^B1 to recover A2
    CHECK(man::decode(0, 0, caches[0], log, cfg) == lib.files[0]);
    CHECK(man::decode(1, 1, caches[1], log, cfg) == lib.files[1]);
}

TEST_CASE("t = 0 places nothing, t = K sends nothing") {
    FileLibrary lib = FileLibrary::random(3, 6, 5);
    SUBCASE("empty caches at M = 0") {
        man::Config cfg{3, 3, Rat(0)};
        auto caches = man::placement(lib, cfg);
        for (const auto& c : caches) CHECK(c.entries.empty());
        auto log = man::delivery(lib, caches, all_users_demand({0, 1, 2}), cfg);
        CHECK(log.rate(6) == Rat(3));   // K full files
    }
    SUBCASE("empty log at M = N") {
        man::Config cfg{3, 3, Rat(3)};
        auto caches = man::placement(lib, cfg);
        auto log = man::delivery(lib, caches, all_users_demand({2, 0, 1}), cfg);
        CHECK(log.entries.empty());
        for (int u = 0; u < 3; ++u)
            CHECK(man::decode(u, (u + 2) % 3, caches[u], log, cfg) == lib.files[(u + 2) % 3]);
    }
}

TEST_CASE("N=3 K=3 t=1: byte budgets and exhaustive decodability") {
    man::Config cfg{3, 3, Rat(1)};
    FileLibrary lib = FileLibrary::random(3, 3, 11);
    auto caches = man::placement(lib, cfg);
    for (const auto& c : caches) {
        CHECK(c.used_bytes() == Rat(3));       // M*F = 1*3 exactly
        CHECK(c.budget_bytes == Rat(3));
        // one 1-byte piece per file
        CHECK(c.entries.size() == 3);
    }
    // all 27 demand vectors decode bit-exactly
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                auto dv = all_users_demand({a, b, c});
                auto log = man::delivery(lib, caches, dv, cfg);
                CHECK(log.rate(3) == Rat(2, 2));
                for (const auto& d : dv.demands)
                    CHECK(man::decode(d.user, d.file, caches[d.user], log, cfg) ==
                          lib.files[d.file]);
            }
}

TEST_CASE("all users demanding the same file still pay the full coded rate") {
    man::Config cfg{4, 4, Rat(1)};
    std::size_t f = 4;   // C(4,1)
    FileLibrary lib = FileLibrary::random(4, f, 13);
    auto caches = man::placement(lib, cfg);
    auto log = man::delivery(lib, caches, all_users_demand({0, 0, 0, 0}), cfg);
    CHECK(log.rate(f) == Rat(3, 2));   // C(4,2)/C(4,1)
    for (int u = 0; u < 4; ++u)
        CHECK(man::decode(u, 0, caches[u], log, cfg) == lib.files[0]);
}

TEST_CASE("memory split solves the sharing equation") {
    SUBCASE("integral t is pure") {
        man::Config cfg{4, 4, Rat(2)};
        auto sp = man::memory_split(cfg);
        CHECK(sp.lambda == 1);
        CHECK(sp.t_low == 2);
    }
    SUBCASE("K=4 N=4 M=1.5") {
        man::Config cfg{4, 4, Rat(3, 2)};
        auto sp = man::memory_split(cfg);
        CHECK(sp.t_low == 1);
        CHECK(sp.t_high == 2);
        CHECK(sp.lambda == Rat(1, 2));
        // lambda t_low N/K + (1-lambda) t_high N/K = M
        Rat left = sp.lambda * Rat(sp.t_low * 4, 4) + (Rat(1) - sp.lambda) * Rat(sp.t_high * 4, 4);
        CHECK(left == Rat(3, 2));
    }
}

TEST_CASE("file quantum makes both segments whole-byte") {
    // the C(K,t1)*C(K,t2) rule of thumb fails here; the lcm form is exact
    man::Config cfg{4, 4, Rat(4, 3)};
    std::uint64_t q = man::file_quantum(cfg);
    auto sp = man::memory_split(cfg);
    Rat lf = sp.lambda * Rat(BigInt(q));
    CHECK(boost::multiprecision::denominator(lf) == 1);
    BigInt prefix = boost::multiprecision::numerator(lf);
    CHECK(prefix % binomial(4, sp.t_low) == 0);
    CHECK((BigInt(q) - prefix) % binomial(4, sp.t_high) == 0);
}

TEST_CASE("memory sharing: K=4 N=4 M=1.5 delivers exactly 13/12") {
    man::Config cfg{4, 4, Rat(3, 2)};
    FileLibrary lib = FileLibrary::random(4, 10, 17);
    auto dv = all_users_demand({0, 1, 2, 3});
    auto run = man::run_with_sharing(lib, cfg, dv);
    CHECK(run.log.rate(run.file_size) == Rat(13, 12));
    CHECK(run.log.rate(run.file_size) == analytics::r_man(4, 4, Rat(3, 2)));
    FileLibrary padded = lib.padded_to_multiple(run.file_size);
    for (const auto& d : dv.demands) {
        CHECK(man::decode_with_sharing(run.placement.meta, d.user, d.file,
                                       run.placement.caches[d.user], run.log) ==
              padded.files[d.file]);
    }
    // placement uses exactly M*F bytes per cache
    for (const auto& c : run.placement.caches) {
        CHECK(c.used_bytes() == Rat(3, 2) * Rat(BigInt(run.file_size)));
        CHECK_NOTHROW(c.check_budget());
    }
}

TEST_CASE("M = 0 run costs K files, M = N costs nothing") {
    FileLibrary lib = FileLibrary::random(4, 6, 19);
    auto dv = all_users_demand({0, 1, 2, 3});
    auto zero = man::run_with_sharing(lib, man::Config{4, 4, Rat(0)}, dv);
    CHECK(zero.log.rate(zero.file_size) == Rat(4));
    auto full = man::run_with_sharing(lib, man::Config{4, 4, Rat(4)}, dv);
    CHECK(full.log.rate(full.file_size) == 0);
}

TEST_CASE("exact rate law across demand vectors and memory points") {
    Rng rng(23);
    for (int k = 2; k <= 5; ++k) {
        for (int t = 0; t <= k; ++t) {
            int n = k + static_cast<int>(rng.below(3));
            man::Config cfg{n, k, Rat(BigInt(t) * n, BigInt(k))};
            std::size_t f = binomial(k, t).convert_to<std::size_t>();
            FileLibrary lib = FileLibrary::random(n, f, 100 + k * 10 + t);
            auto caches = man::placement(lib, cfg);
            for (int trial = 0; trial < 20; ++trial) {
                std::vector<int> files(k);
                for (auto& v : files) v = static_cast<int>(rng.below(n));
                auto log = man::delivery(lib, caches, all_users_demand(files), cfg);
                CHECK(log.rate(f) == Rat(k - t, t + 1));
            }
        }
    }
}

TEST_CASE("partial demands: byte rate equals the closed form and users decode") {
    int k = 6, n = 6;
    Rng rng(29);
    for (int t : {0, 1, 2, 3, 5}) {
        man::Config cfg{n, k, Rat(BigInt(t) * n, BigInt(k))};
        std::size_t f = binomial(k, t).convert_to<std::size_t>();
        FileLibrary lib = FileLibrary::random(n, f, 200 + t);
        auto caches = man::placement(lib, cfg);
        for (int m = 0; m <= k; ++m) {
            // the first m caches demand random files
            DemandVector dv;
            for (int u = 0; u < m; ++u)
                dv.demands.push_back(Demand{u, static_cast<int>(rng.below(n))});
            auto log = man::delivery(lib, caches, dv, cfg);
            CHECK(log.rate(f) == man::coded_delivery_rate(k, t, m));
            for (const auto& d : dv.demands)
                CHECK(man::decode(d.user, d.file, caches[d.user], log, cfg) == lib.files[d.file]);
        }
    }
}

TEST_CASE("closed-form partial rate properties") {
    // full demand reduces to (K-t)/(t+1)
    CHECK(man::coded_delivery_rate(4, 1, 4) == Rat(3, 2));
    // single demander pays exactly the uncached fraction
    CHECK(man::coded_delivery_rate(4, 1, 1) == Rat(3, 4));
    CHECK(man::coded_delivery_rate(8, 2, 1) == Rat(6, 8));
    // nobody demands, nothing is sent
    CHECK(man::coded_delivery_rate(4, 1, 0) == 0);
    // t = K means everything is cached
    CHECK(man::coded_delivery_rate(4, 4, 4) == 0);
    // more demanders never cost less
    for (int m = 1; m <= 6; ++m)
        CHECK(man::coded_delivery_rate(6, 2, m) >= man::coded_delivery_rate(6, 2, m - 1));
    // never above the full-demand rate
    for (int m = 0; m <= 6; ++m)
        CHECK(man::coded_delivery_rate(6, 2, m) <= Rat(4, 3));
}

TEST_CASE("sharing rate for partial demands matches the byte path") {
    man::Config cfg{4, 4, Rat(3, 2)};
    FileLibrary lib = FileLibrary::random(4, 1, 31);
    Rng rng(37);
    for (int m = 0; m <= 4; ++m) {
        DemandVector dv;
        for (int u = 0; u < m; ++u)
            dv.demands.push_back(Demand{u, static_cast<int>(rng.below(4))});
        auto run = man::run_with_sharing(lib, cfg, dv);
        CHECK(run.log.rate(run.file_size) == man::delivery_rate(cfg, m));
    }
}

TEST_CASE("error paths") {
    FileLibrary lib = FileLibrary::random(4, 6, 41);
    SUBCASE("non-integral t needs sharing") {
        CHECK_THROWS_AS(man::placement(lib, man::Config{4, 4, Rat(3, 2)}), RequiresMemorySharing);
    }
    SUBCASE("indivisible file size") {
        FileLibrary bad = FileLibrary::random(4, 5, 41);
        CHECK_THROWS_AS(man::placement(bad, man::Config{4, 4, Rat(2)}), std::invalid_argument);
    }
    SUBCASE("demand beyond library") {
        man::Config cfg{4, 4, Rat(1)};
        FileLibrary ok = FileLibrary::random(4, 4, 41);
        auto caches = man::placement(ok, cfg);
        DemandVector dv;
        dv.demands = {Demand{0, 4}};
        CHECK_THROWS_AS(man::delivery(ok, caches, dv, cfg), std::invalid_argument);
    }
    SUBCASE("two users on one cache") {
        man::Config cfg{4, 4, Rat(1)};
        FileLibrary ok = FileLibrary::random(4, 4, 41);
        auto caches = man::placement(ok, cfg);
        DemandVector dv;
        dv.demands = {Demand{0, 1}, Demand{0, 2}};
        CHECK_THROWS_AS(man::delivery(ok, caches, dv, cfg), std::invalid_argument);
    }
    SUBCASE("decode failure carries the missing piece") {
        man::Config cfg{2, 2, Rat(1)};
        FileLibrary ok = FileLibrary::random(2, 4, 41);
        auto caches = man::placement(ok, cfg);
        auto log = man::delivery(ok, caches, all_users_demand({0, 1}), cfg);
        caches[0].entries.erase("s0|f1^0");   // lose the cached piece needed for cancelling
        CHECK_THROWS_AS(man::decode(0, 0, caches[0], log, cfg), DecodeError);
    }
}

TEST_CASE("memory sharing stays on the chord between grid points") {
    // never below the lower convex envelope of the grid rates
    int k = 5, n = 6;
    FileLibrary lib = FileLibrary::random(n, 1, 43);
    auto dv = all_users_demand({0, 1, 2, 3, 4});
    std::vector<analytics::RatePoint> grid;
    for (int t = 0; t <= k; ++t)
        grid.push_back(analytics::RatePoint{Rat(BigInt(t) * n, BigInt(k)), Rat(k - t, t + 1)});
    auto envelope = analytics::convex_envelope(grid);
    for (int i = 0; i <= 20; ++i) {
        Rat m(BigInt(i) * n, BigInt(20));
        auto run = man::run_with_sharing(lib, man::Config{n, k, m}, dv);
        Rat rate = run.log.rate(run.file_size);
        CHECK(rate >= envelope(m));
        CHECK(rate == analytics::r_man(n, k, m));
    }
}
