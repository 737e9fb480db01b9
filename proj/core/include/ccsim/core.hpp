#pragma once

#include "ccsim/errors.hpp"
#include "ccsim/rational.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ccsim {

using Bytes = std::vector<std::uint8_t>;

// ---------------------------------------------------------------------------
// Subset enumeration
// ---------------------------------------------------------------------------

// All C(k, t) subsets of {0..k-1}, each sorted ascending, the list in
// lexicographic order of the sorted element lists. Deterministic; every
// delivery loop in the repo iterates in this order.
std::vector<std::vector<int>> subsets_of_size(int k, int t);

// Visits the subsets in the same order without materializing the list.
template <typename Fn>
void for_each_subset(int k, int t, Fn&& fn) {
    if (t < 0 || k < 0 || t > k) throw std::invalid_argument("for_each_subset: need 0 <= t <= k");
    std::vector<int> cur(t);
    for (int i = 0; i < t; ++i) cur[i] = i;
    while (true) {
        fn(static_cast<const std::vector<int>&>(cur));
        int i = t - 1;
        while (i >= 0 && cur[i] == k - t + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < t; ++j) cur[j] = cur[j - 1] + 1;
    }
}

// ---------------------------------------------------------------------------
// Byte-level primitives
// ---------------------------------------------------------------------------

// Bitwise XOR of all inputs. Shorter arrays are zero-padded to the maximum
// length first; the result has that length. Empty input list is an error.
Bytes xor_bytes(const std::vector<Bytes>& parts);
// In-place variant used by delivery loops: acc ^= part (acc grows if needed).
void xor_into(Bytes& acc, const Bytes& part);

// ---------------------------------------------------------------------------
// Files and demands
// ---------------------------------------------------------------------------

struct FileLibrary {
    std::size_t file_size = 0;         // F, bytes
    std::vector<Bytes> files;          // N arrays of exactly file_size bytes

    int n_files() const { return static_cast<int>(files.size()); }

    // Validates the equal-length invariant; throws invalid_argument.
    static FileLibrary from_files(std::vector<Bytes> files);
    static FileLibrary random(int n_files, std::size_t file_size, std::uint64_t seed);
    // Same contents, every file zero-padded so the size is a multiple of
    // `quantum`. Rate accounting downstream uses the padded size.
    FileLibrary padded_to_multiple(std::size_t quantum) const;
};

// A piece of a file under subset-indexed placement: the subset lists the
// caches that store it, sorted ascending.
struct SubfileId {
    int file = 0;
    std::vector<int> subset;

    // cache/entry key; `segment` separates the two halves of a memory split
    std::string key(const std::string& tag = "", int segment = 0) const;
    bool operator==(const SubfileId&) const = default;
};

struct Demand {
    int user = 0;
    int file = 0;
    bool operator==(const Demand&) const = default;
};

struct DemandVector {
    std::vector<Demand> demands;

    void validate(int n_files) const;
    std::vector<int> users() const;
    // Sorted unique file indices.
    std::vector<int> distinct_files() const;
};

// ---------------------------------------------------------------------------
// Cache contents
// ---------------------------------------------------------------------------

struct CacheEntry {
    Bytes data;
    // Size charged against the memory budget. Whole-byte entries carry
    // 8 * data.size(); the decentralized scheme stores bit-granular blobs.
    std::uint64_t bits = 0;

    bool operator==(const CacheEntry&) const = default;
};

struct CacheContent {
    int cache_id = 0;
    Rat budget_bytes;                              // M * F
    std::map<std::string, CacheEntry> entries;

    void put(const std::string& key, Bytes data);
    void put_bits(const std::string& key, Bytes data, std::uint64_t bits);
    const CacheEntry& at(const std::string& key) const;   // DecodeError if missing
    bool has(const std::string& key) const { return entries.count(key) != 0; }

    std::uint64_t used_bits() const;
    Rat used_bytes() const { return Rat(BigInt(used_bits()), BigInt(8)); }
    // Hard budget invariant, checked after every placement.
    void check_budget() const;

    bool operator==(const CacheContent&) const = default;
};

// ---------------------------------------------------------------------------
// Broadcast log and rate accounting
// ---------------------------------------------------------------------------

struct LogEntry {
    std::string label;
    Bytes payload;
    std::uint64_t bits = 0;   // label metadata is free; payload bits are charged

    bool operator==(const LogEntry&) const = default;
};

struct TransmissionLog {
    std::vector<LogEntry> entries;

    void add(std::string label, Bytes payload);
    void add_bits(std::string label, Bytes payload, std::uint64_t bits);
    void append(const TransmissionLog& other);

    std::uint64_t total_bits() const;
    Rat total_bytes() const { return Rat(BigInt(total_bits()), BigInt(8)); }
    Rat rate(std::size_t file_size) const;

    bool operator==(const TransmissionLog&) const = default;
};

// total broadcast bytes divided by the file size, as an exact rational.
Rat measured_rate(const TransmissionLog& log, std::size_t file_size);

} // namespace ccsim
