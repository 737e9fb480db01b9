#pragma once

#include "ccsim/analytics.hpp"
#include "ccsim/core.hpp"
#include "ccsim/man.hpp"

namespace ccsim::ml {

using analytics::MuLevel;
using analytics::MuPartition;
using analytics::SuLevel;
using analytics::SuPartition;

// ---------------------------------------------------------------------------
// Single-user setup: K caches, one user each; level i contributes K_i users.
// ---------------------------------------------------------------------------

// Threshold rule: level h goes unstored iff K_h / N_h < 1/M, ties stored.
// M = 0 puts every level in H (no storage possible).
SuPartition su_partition(const std::vector<SuLevel>& levels, const Rat& memory);

struct SuDemand {
    int user = 0;    // cache index
    int level = 0;
    int file = 0;    // within the level
};

struct SuRun {
    SuPartition partition;
    std::vector<int> merged_base;   // level -> first merged index, -1 for H levels
    int merged_files = 0;
    bool has_coded = false;
    man::SharingMeta man_meta;      // merged-library system, when has_coded
    std::vector<CacheContent> caches;
    TransmissionLog log;
    std::size_t file_size = 0;      // padded common F

    Rat rate() const { return log.rate(file_size); }
};

// Merges the I levels into one library served by the coded scheme over all K
// caches; users demanding H files get whole-file unicasts and ride along in
// the coded delivery with a dummy demand for merged file 0.
SuRun su_simulate(const std::vector<FileLibrary>& level_libraries,
                  const std::vector<SuLevel>& levels, int n_caches, const Rat& memory,
                  const std::vector<SuDemand>& demands);

// Decode check for one user of a finished run.
Bytes su_decode(const SuRun& run, const SuDemand& demand, const CacheContent& cache);

// ---------------------------------------------------------------------------
// Multi-user setup: level i has exactly U_i users at every cache.
// ---------------------------------------------------------------------------

enum class MTildeVariant {
    ChapterApprox,   // M~ = (M - sum_J N_j) / sum_I sqrt(N_i U_i)
    ClampedExact,    // water level of sum_I min(N_i, M~ sqrt(N_i U_i)) = M - sum_J N_j
};

// All contiguous splits (in N_i/U_i order) that satisfy the three inequality
// families.
std::vector<MuPartition> mu_partition_candidates(const std::vector<MuLevel>& levels, int n_caches,
                                                 const Rat& memory,
                                                 MTildeVariant variant = MTildeVariant::ChapterApprox);

// The unique satisfying partition; NoValidPartition / AmbiguousPartition
// otherwise (knife-edge memories can produce either under the approximate
// M~).
MuPartition mu_partition(const std::vector<MuLevel>& levels, int n_caches, const Rat& memory,
                         MTildeVariant variant = MTildeVariant::ChapterApprox);

struct MuDemand {
    int level = 0;
    int row = 0;     // 0 .. U_level - 1
    int cache = 0;
    int file = 0;    // within the level
};

struct MuRun {
    MuPartition partition;
    std::vector<Rat> level_memory;        // rationalized per-level allocation
    std::vector<man::SharingMeta> meta;   // per level; meaningful when level_memory > 0
    std::vector<bool> has_system;         // level placed at all
    std::vector<CacheContent> caches;
    TransmissionLog log;
    std::size_t file_size = 0;

    Rat rate() const { return log.rate(file_size); }
};

// Splits memory across levels per the partition's allocation (rounded down to
// a rational t-grid so byte counts stay exact), then runs the single-level
// scheme independently on each row of users of each level. H-level demands
// are served by whole-file unicasts, deduplicated per file.
MuRun mu_simulate(const std::vector<FileLibrary>& level_libraries,
                  const std::vector<MuLevel>& levels, int n_caches, const Rat& memory,
                  const std::vector<MuDemand>& demands, const MuPartition& partition);

Bytes mu_decode(const MuRun& run, const MuDemand& demand, const CacheContent& cache);

} // namespace ccsim::ml
