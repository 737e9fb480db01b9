#pragma once

#include "ccsim/core.hpp"

namespace ccsim::decen {

// Random placement: each cache samples, per file, exactly floor(M*8F/N) bit
// positions without replacement, independently across caches. The index
// records who holds each bit; it is placement metadata (positions only, no
// values) and is shared with decoders.
struct OwnershipIndex {
    int n_caches = 0;                                    // K <= 16
    std::size_t file_size = 0;                           // F, bytes
    std::uint64_t bits_per_file_per_cache = 0;           // floor(M*8F/N)
    std::vector<std::vector<std::uint16_t>> owner;       // [file][bit position] -> cache mask
};

struct Placement {
    OwnershipIndex index;
    std::vector<CacheContent> caches;   // per file one packed blob of the sampled bit values
};

Placement placement(const FileLibrary& lib, int n_caches, const Rat& memory, std::uint64_t seed);

// Subset-descending delivery: for every nonempty subset S of the demanding
// users, one zero-padded XOR of the per-user bit groups "of W_{d_k}, cached at
// exactly S\{k} among the demanders and not at k". Every user decodes.
TransmissionLog delivery(const FileLibrary& lib, const OwnershipIndex& index,
                         const DemandVector& demands);

// Reconstruction from the user's own cache, the index metadata, and the log.
Bytes decode(int user, int file, const CacheContent& cache, const OwnershipIndex& index,
             const TransmissionLog& log);

} // namespace ccsim::decen
