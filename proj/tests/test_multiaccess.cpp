#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccsim/analytics.hpp"
#include "ccsim/multiaccess.hpp"
#include "ccsim/rng.hpp"

using namespace ccsim;

namespace {

DemandVector distinct_demands(int k, int n) {
    DemandVector dv;
    for (int u = 0; u < k; ++u) dv.demands.push_back(Demand{u, u % n});
    return dv;
}

std::vector<const CacheContent*> window_caches(const ma::Placement& placed, int user) {
    std::vector<const CacheContent*> out;
    for (int c : ma::window_of(placed.meta.access, user)) out.push_back(&placed.caches[c]);
    return out;
}

} // namespace

TEST_CASE("gf256 arithmetic") {
    using namespace ccsim::gf256;
    CHECK(mul(0, 77) == 0);
    CHECK(mul(1, 77) == 77);
    for (int a = 1; a < 256; ++a) {
        CHECK(mul(static_cast<std::uint8_t>(a), inv(static_cast<std::uint8_t>(a))) == 1);
    }
    // spot-check associativity and distributivity on random triples
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        std::uint8_t a = rng.byte(), b = rng.byte(), c = rng.byte();
        CHECK(mul(a, mul(b, c)) == mul(mul(a, b), c));
        CHECK(mul(a, static_cast<std::uint8_t>(b ^ c)) ==
              static_cast<std::uint8_t>(mul(a, b) ^ mul(a, c)));
    }
    CHECK_THROWS_AS(inv(0), std::invalid_argument);

    auto m = identity(3);
    m[0][2] = 7;
    m[2][0] = 3;
    auto mi = mat_inv(m);
    CHECK(mat_mul(m, mi) == identity(3));
}

TEST_CASE("mds code basics") {
    SUBCASE("d = K is the systematic identity") {
        mds::Code code(3, 3);
        Bytes file = {1, 2, 3, 4, 5, 6};
        auto shares = code.encode(file);
        CHECK(shares[0] == Bytes{1, 2});
        CHECK(shares[1] == Bytes{3, 4});
        CHECK(shares[2] == Bytes{5, 6});
        CHECK(code.decode({shares[0], shares[1], shares[2]}, {0, 1, 2}) == file);
    }
    SUBCASE("d = 1 is a repetition code") {
        mds::Code code(4, 1);
        Bytes file = {9, 8, 7};
        auto shares = code.encode(file);
        for (const auto& s : shares) CHECK(s == file);
        CHECK(code.decode({shares[3]}, {3}) == file);
    }
    SUBCASE("K=6 d=3: every share triple reconstructs a 300-byte file") {
        mds::Code code(6, 3);
        Rng rng(2);
        Bytes file(300);
        for (auto& b : file) b = rng.byte();
        auto shares = code.encode(file);
        for (const auto& s : shares) CHECK(s.size() == 100);
        int triples = 0;
        for_each_subset(6, 3, [&](const std::vector<int>& ids) {
            std::vector<Bytes> picked;
            for (int id : ids) picked.push_back(shares[id]);
            CHECK(code.decode(picked, ids) == file);
            ++triples;
        });
        CHECK(triples == 20);
    }
    SUBCASE("error paths") {
        mds::Code code(5, 3);
        Bytes file(9, 1);
        auto shares = code.encode(file);
        CHECK_THROWS_AS(code.decode({shares[0], shares[1]}, {0, 1}), InsufficientShares);
        CHECK_THROWS_AS(code.decode({shares[0], shares[1], shares[1]}, {0, 1, 1}),
                        std::invalid_argument);
        Bytes ragged(5, 0);
        CHECK_THROWS_AS(code.encode(ragged), std::invalid_argument);   // 5 % 3 != 0
        CHECK_THROWS_AS(mds::Code(300, 3), std::invalid_argument);     // field too small
    }
}

TEST_CASE("cyclic windows wrap around") {
    ma::CyclicAccess a{4, 2};
    CHECK(ma::window_of(a, 0) == std::vector<int>{0, 1});
    CHECK(ma::window_of(a, 3) == std::vector<int>{3, 0});
    CHECK_THROWS_AS(ma::window_of(a, 4), std::invalid_argument);
    CHECK_THROWS_AS((ma::CyclicAccess{4, 5}).validate(), std::invalid_argument);
}

TEST_CASE("rate is exactly zero at M = N/d and everyone decodes from windows") {
    for (int k : {4, 5}) {
        for (int d = 1; d <= 3; ++d) {
            int n = k;
            ma::CyclicAccess access{k, d};
            FileLibrary lib = FileLibrary::random(n, 4, 10 * k + d);
            auto run = ma::run(lib, access, Rat(n, d), distinct_demands(k, n));
            CHECK(run.log.total_bits() == 0);
            FileLibrary padded = lib.padded_to_multiple(run.file_size);
            for (int u = 0; u < k; ++u)
                for (int f = 0; f < n; ++f)
                    CHECK(ma::decode(run.placement.meta, u, f, window_caches(run.placement, u),
                                     run.log) == padded.files[f]);
        }
    }
}

TEST_CASE("window of one behaves exactly like the plain scheme") {
    int n = 5, k = 5;
    ma::CyclicAccess access{k, 1};
    FileLibrary lib = FileLibrary::random(n, 3, 77);
    auto dv = distinct_demands(k, n);
    for (int i = 0; i <= 10; ++i) {
        Rat m(BigInt(i) * n, BigInt(10));
        auto run = ma::run(lib, access, m, dv);
        auto plain = man::run_with_sharing(lib, man::Config{n, k, m}, dv);
        CHECK(run.log == plain.log);
        CHECK(run.file_size == plain.file_size);
    }
}

TEST_CASE("mixed regime: K=6 N=6 d=2 M=2") {
    ma::CyclicAccess access{6, 2};
    FileLibrary lib = FileLibrary::random(6, 1, 3);
    auto dv = distinct_demands(6, 6);
    auto run = ma::run(lib, access, Rat(2), dv);
    // file split fraction lambda = 2(N - dM)/N = 2/3 at the plain scheme's
    // M = N/(2d) = 3/2 operating point
    Rat lambda(2, 3);
    Rat expected = lambda * analytics::r_man(6, 6, Rat(3, 2));
    CHECK(expected == Rat(23, 18));
    CHECK(run.log.rate(run.file_size) == expected);
    CHECK(run.log.rate(run.file_size) == ma::construction_rate(6, access, Rat(2)));
    CHECK(run.log.rate(run.file_size) <= analytics::r_ma_bound(6, 6, 2, Rat(2)));
    FileLibrary padded = lib.padded_to_multiple(run.file_size);
    for (const auto& d : dv.demands)
        CHECK(ma::decode(run.placement.meta, d.user, d.file, window_caches(run.placement, d.user),
                         run.log) == padded.files[d.file]);
    // placement budget is exactly M*F
    for (const auto& c : run.placement.caches) {
        CHECK(c.used_bytes() == Rat(2) * Rat(BigInt(run.file_size)));
        CHECK_NOTHROW(c.check_budget());
    }
}

TEST_CASE("bound, monotonicity and decode across the memory grid") {
    for (int k : {4, 6}) {
        int n = k;
        for (int d = 1; d <= 3; ++d) {
            ma::CyclicAccess access{k, d};
            FileLibrary lib = FileLibrary::random(n, 2, 5 * k + d);
            auto dv = distinct_demands(k, n);
            Rat prev(-1);
            for (int i = 0; i <= 10; ++i) {
                Rat m(BigInt(i) * n, BigInt(10) * d);
                auto run = ma::run(lib, access, m, dv);
                Rat rate = run.log.rate(run.file_size);
                CHECK(rate <= analytics::r_ma_bound(n, k, d, m));
                if (prev >= 0) CHECK(rate <= prev);
                prev = rate;
                FileLibrary padded = lib.padded_to_multiple(run.file_size);
                for (const auto& dm : dv.demands)
                    CHECK(ma::decode(run.placement.meta, dm.user, dm.file,
                                     window_caches(run.placement, dm.user),
                                     run.log) == padded.files[dm.file]);
            }
        }
    }
}

TEST_CASE("memory above N clamps to a zero rate") {
    ma::CyclicAccess access{4, 2};
    FileLibrary lib = FileLibrary::random(4, 2, 9);
    auto run = ma::run(lib, access, Rat(11), distinct_demands(4, 4));
    CHECK(run.log.total_bits() == 0);
    CHECK(ma::construction_rate(4, access, Rat(11)) == 0);
}

TEST_CASE("exhaustive demand vectors decode in every regime") {
    int k = 4, n = 4;
    for (int d = 1; d <= 3; ++d) {
        ma::CyclicAccess access{k, d};
        FileLibrary lib = FileLibrary::random(n, 2, 40 + d);
        // one M per regime: single-cache, mixed, full coverage
        for (Rat m : {Rat(n, 4 * d), Rat(3 * n, 4 * d), Rat(n, d)}) {
            FileLibrary padded = lib.padded_to_multiple(ma::file_quantum(n, access, m));
            auto placed = ma::placement(padded, access, m);
            std::vector<int> files(k, 0);
            for (;;) {
                DemandVector dv;
                for (int u = 0; u < k; ++u) dv.demands.push_back(Demand{u, files[u]});
                auto log = ma::delivery(padded, placed.meta, dv);
                for (const auto& dm : dv.demands)
                    CHECK(ma::decode(placed.meta, dm.user, dm.file, window_caches(placed, dm.user),
                                     log) == padded.files[dm.file]);
                int i = 0;
                while (i < k && ++files[i] == n) files[i++] = 0;
                if (i == k) break;
            }
        }
    }
}

TEST_CASE("decode sees only the window") {
    // passing the wrong number of caches is rejected; a full-coverage decode
    // succeeds with just the d window caches
    ma::CyclicAccess access{5, 2};
    FileLibrary lib = FileLibrary::random(5, 2, 13);
    auto run = ma::run(lib, access, Rat(5, 2), distinct_demands(5, 5));
    auto win = window_caches(run.placement, 1);
    CHECK_THROWS_AS(ma::decode(run.placement.meta, 1, 1, {win[0]}, run.log),
                    std::invalid_argument);
}
