#pragma once

#include "ccsim/core.hpp"

namespace ccsim::man {

// Centralized placement / coded-delivery scheme over K caches holding an
// N-file library, with one user per cache during delivery. Memory is counted
// in files-worth of bytes per cache (M in [0, N]).
struct Config {
    int n_files = 0;    // N
    int n_caches = 0;   // K
    Rat memory;         // M

    void validate() const;
};

// Subdivision parameter t = K*M/N.
Rat t_exact(const Config& cfg);
bool t_integral(const Config& cfg);
// Integral t or RequiresMemorySharing.
int t_of(const Config& cfg);

// Non-integral t runs as a byte-split pair of schemes: a prefix of
// lambda*F bytes of every file at t_low and the rest at t_high.
struct MemorySplit {
    int t_low = 0;
    int t_high = 0;
    Rat lambda;         // fraction of each file handled at t_low; 1 when t integral
};
MemorySplit memory_split(const Config& cfg);

// Smallest file-size divisor that makes every piece of the (possibly split)
// scheme a whole number of bytes. Libraries are zero-padded up to a multiple
// of this and rate accounting uses the padded size.
std::uint64_t file_quantum(const Config& cfg);

// --- integral-t operations -------------------------------------------------

// Cache i holds the subfiles W_j^S for every file j and every t-subset S
// containing i; uses exactly M*F bytes. Demands never reach placement.
std::vector<CacheContent> placement(const FileLibrary& lib, const Config& cfg);

// One XOR payload per (t+1)-subset of caches that contains at least one
// demanding cache; the payload XORs, for each demander c in the subset G, the
// piece of its file indexed by G\{c}. With all K caches demanding this is the
// textbook delivery with C(K, t+1) entries; with fewer demanders the subsets
// whose members are all silent are skipped, and the singleton-demander
// payloads degenerate to unicasts of the pieces no other demander covers.
TransmissionLog delivery(const FileLibrary& lib, const std::vector<CacheContent>& caches,
                         const DemandVector& demands, const Config& cfg);

// Reconstructs the demanded file from the user's cache and the log alone.
// The library is not reachable from here, by signature.
Bytes decode(int user, int file, const CacheContent& cache, const TransmissionLog& log,
             const Config& cfg);

// --- memory-sharing operations ----------------------------------------------

struct SharingMeta {
    Config cfg;
    MemorySplit split;
    std::size_t file_size = 0;     // padded F the placement was built for
    std::size_t prefix_size = 0;   // lambda * F
};

struct SharedPlacement {
    SharingMeta meta;
    std::vector<CacheContent> caches;
};

// lib.file_size must be a multiple of file_quantum(cfg). `tag` namespaces the
// cache keys so several placements can share one physical cache.
SharedPlacement place_with_sharing(const FileLibrary& lib, const Config& cfg,
                                   const std::string& tag = "");

// `label_prefix` namespaces log entries (several deliveries can share a log).
TransmissionLog deliver_with_sharing(const FileLibrary& lib, const SharingMeta& meta,
                                     const DemandVector& demands,
                                     const std::string& label_prefix = "");

Bytes decode_with_sharing(const SharingMeta& meta, int user, int file, const CacheContent& cache,
                          const TransmissionLog& log, const std::string& tag = "",
                          const std::string& label_prefix = "");

struct RunResult {
    SharedPlacement placement;
    TransmissionLog log;
    std::size_t file_size = 0;   // padded F used for rate accounting
};

// Pads the library, places, delivers. Placement happens before demands are
// looked at.
RunResult run_with_sharing(const FileLibrary& lib, const Config& cfg, const DemandVector& demands);

// --- exact rate accounting ---------------------------------------------------

// Broadcast bytes of the delivery above divided by F, as a closed form:
// (C(K,t+1) - C(K-m,t+1)) / C(K,t) for m demanding caches. Matches the byte
// path bit for bit; used when K is too large to materialize pieces.
Rat coded_delivery_rate(int n_caches, int t, int n_demanders);

// Same, lambda-weighted across the memory split of cfg.
Rat delivery_rate(const Config& cfg, int n_demanders);

} // namespace ccsim::man
