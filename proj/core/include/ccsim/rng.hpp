#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

namespace ccsim {

// splitmix64 step; also used to derive per-trial seeds from a master seed so
// that Monte Carlo results are independent of worker count and trial order.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial) {
    std::uint64_t s = master_seed ^ (0x632be59bd9b4e019ULL * (trial + 1));
    return splitmix64(s);
}

// xoshiro256** seeded via splitmix64. Hand-rolled so that streams are
// bit-reproducible across standard libraries and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        for (auto& word : s_) word = splitmix64(seed);
    }

private:
    std::uint64_t s_[4];

public:

    std::uint64_t next_u64() {
        auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
        std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        std::uint64_t mask = (~0ULL) >> (64 - std::bit_width(n - 1));
        std::uint64_t v;
        do {
            v = next_u64() & mask;
        } while (v >= n);
        return v;
    }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    std::uint8_t byte() { return static_cast<std::uint8_t>(next_u64() & 0xff); }

    // Knuth's product method; every lambda in this codebase is < 1.
    int poisson(double lambda);

    // k distinct values from {0, .., n-1}, ascending. Partial Fisher-Yates.
    std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n, std::uint32_t k);
};

inline int Rng::poisson(double lambda) {
    double limit = std::exp(-lambda);
    double prod = 1.0;
    int count = -1;
    do {
        prod *= uniform01();
        ++count;
    } while (prod > limit);
    return count;
}

inline std::vector<std::uint32_t> Rng::sample_without_replacement(std::uint32_t n, std::uint32_t k) {
    std::vector<std::uint32_t> pool(n);
    for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
    std::vector<std::uint32_t> out(k);
    for (std::uint32_t i = 0; i < k; ++i) {
        std::uint32_t j = i + static_cast<std::uint32_t>(below(n - i));
        std::swap(pool[i], pool[j]);
        out[i] = pool[i];
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace ccsim
