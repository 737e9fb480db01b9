#pragma once

#include "ccsim/core.hpp"
#include "ccsim/man.hpp"
#include "ccsim/mds.hpp"

namespace ccsim::ma {

// User k reads caches k, k+1, ..., k+d-1 (mod K).
struct CyclicAccess {
    int n_caches = 0;   // K (== number of users)
    int window = 1;     // d in {1..K}

    void validate() const;
};

std::vector<int> window_of(const CyclicAccess& a, int user);

// Which construction serves a given memory point:
//  - SingleCache: total window memory dM <= N/2 (or d == 1, where the window
//    adds nothing); user k uses only cache k and the plain scheme runs.
//  - FullCoverage: dM >= N; every cache stores one (K,d)-MDS share of every
//    file and the broadcast is empty.
//  - Mixed: N/2 < dM < N; each file splits into a prefix handled by the
//    single-cache scheme at memory N/(2d) and a suffix handled by shares.
enum class Regime { SingleCache, Mixed, FullCoverage };

struct Meta {
    CyclicAccess access;
    int n_files = 0;
    Rat memory;
    Regime regime = Regime::SingleCache;
    std::size_t file_size = 0;     // padded F
    std::size_t prefix_size = 0;   // bytes per file on the single-cache side
    bool has_man = false;
    man::SharingMeta man_meta;     // valid when has_man
};

struct Placement {
    Meta meta;
    std::vector<CacheContent> caches;
};

std::uint64_t file_quantum(int n_files, const CyclicAccess& access, const Rat& memory);

Placement placement(const FileLibrary& lib, const CyclicAccess& access, const Rat& memory);

TransmissionLog delivery(const FileLibrary& lib, const Meta& meta, const DemandVector& demands);

// Reconstruction sees exactly the user's d window caches (in window order)
// plus the log; nothing else.
Bytes decode(const Meta& meta, int user, int file,
             const std::vector<const CacheContent*>& window_caches, const TransmissionLog& log);

struct RunResult {
    Placement placement;
    TransmissionLog log;
    std::size_t file_size = 0;
};

// Pads, places, delivers.
RunResult run(const FileLibrary& lib, const CyclicAccess& access, const Rat& memory,
              const DemandVector& demands);

// Exact broadcast rate of the construction at full demand (the formula-side
// twin of measuring a run).
Rat construction_rate(int n_files, const CyclicAccess& access, const Rat& memory);

} // namespace ccsim::ma
