#pragma once

#include "ccsim/analytics.hpp"
#include "ccsim/core.hpp"
#include "ccsim/man.hpp"

#include <functional>

namespace ccsim::adaptive {

// K caches in K/d clusters of d; the per-(file, cluster) user counts are
// Poisson(rho d / N).
struct ClusterModel {
    int n_files = 0;      // N
    int n_caches = 0;     // K
    int cluster_size = 0; // d, divides K
    double rho = 0.0;     // in (0, 1/2)
    double t0 = 0.1;      // regularity exponent

    void validate() const;
    int n_clusters() const { return n_caches / cluster_size; }
    double alpha() const { return analytics::alpha_const(rho); }
    bool regularity_ok() const;
    analytics::AdaptiveParams params() const {
        return analytics::AdaptiveParams{n_files, n_caches, cluster_size, rho, t0};
    }
};

struct DemandProfile {
    std::vector<std::vector<int>> u;   // [file][cluster]

    int n_files() const { return static_cast<int>(u.size()); }
    int n_clusters() const { return u.empty() ? 0 : static_cast<int>(u.front().size()); }
    std::int64_t total_users() const;
    // files requested in cluster c, one entry per user, ascending file index
    std::vector<int> cluster_requests(int cluster) const;
};

DemandProfile sample_profile(const ClusterModel& model, std::uint64_t seed);

struct UnmatchedUser {
    int cluster = 0;
    int file = 0;
};

struct MatchingResult {
    std::vector<std::pair<int, int>> assignments;   // (cache, file), one user per cache
    std::vector<UnmatchedUser> unmatched;

    int n_matched() const { return static_cast<int>(assignments.size()); }
    std::vector<int> unmatched_distinct_files() const;
};

// First-come first-served within each cluster, users in (cluster, file,
// multiplicity) order; excess users stay unmatched. Used by PCD and, per
// color, by HCM.
MatchingResult match_fcfs(const DemandProfile& profile, const ClusterModel& model);

// ---------------------------------------------------------------------------
// PCD: centralized placement over all K caches, any valid matching, coded
// delivery to the matched users, direct service for the rest.
// ---------------------------------------------------------------------------

struct PcdRun {
    MatchingResult matching;
    man::SharedPlacement placement;
    TransmissionLog log;
    std::size_t file_size = 0;

    Rat rate() const { return log.rate(file_size); }
};

PcdRun pcd_run(const FileLibrary& lib, const ClusterModel& model, const Rat& memory,
               const DemandProfile& profile);

// Broadcast rate of the same scheme without materializing bytes; matches the
// byte path exactly and stays tractable when C(K, t) is astronomical.
Rat pcd_rate(const ClusterModel& model, const Rat& memory, const DemandProfile& profile);

// ---------------------------------------------------------------------------
// PAM: whole-file replicas within each cluster, maximum matching of users to
// caches holding their file, direct service for the rest.
// ---------------------------------------------------------------------------

struct PamPlacement {
    int replicas = 0;                                 // copies of every file per cluster
    std::vector<std::vector<std::vector<int>>> holders;   // [cluster][file] -> global cache ids
    std::vector<CacheContent> caches;
};

PamPlacement pam_placement(const FileLibrary& lib, const ClusterModel& model, const Rat& memory);

// Maximum-cardinality bipartite matching (augmenting paths) per cluster.
MatchingResult match_maximum(const DemandProfile& profile, const PamPlacement& placement,
                             const ClusterModel& model);

struct PamRun {
    PamPlacement placement;
    MatchingResult matching;
    TransmissionLog log;
    std::size_t file_size = 0;

    Rat rate() const { return log.rate(file_size); }
};

PamRun pam_run(const FileLibrary& lib, const ClusterModel& model, const Rat& memory,
               const DemandProfile& profile);

Rat pam_rate(const ClusterModel& model, const Rat& memory, const DemandProfile& profile);

// ---------------------------------------------------------------------------
// HCM: color caches (per cluster) and files into chi classes; run one coded
// system per color across clusters, match users to same-color caches.
// ---------------------------------------------------------------------------

struct ColoringPlan {
    int chi = 1;
    std::vector<int> cache_color;   // size K
    std::vector<int> file_color;    // size N
    // per color: global cache ids (ascending) and global file ids (ascending)
    std::vector<std::vector<int>> caches_of;
    std::vector<std::vector<int>> files_of;
    int padded_files = 0;           // ceil(N/chi); per-color library size
};

ColoringPlan coloring_plan(const ClusterModel& model, int chi);

struct HcmRun {
    ColoringPlan plan;
    MatchingResult matching;                    // cache ids are global
    std::vector<man::SharedPlacement> per_color;
    std::vector<CacheContent> caches;           // merged physical caches
    TransmissionLog log;
    std::size_t file_size = 0;

    Rat rate() const { return log.rate(file_size); }
};

// t in [0, t0] picks chi = floor(alpha d / (2 (1+t) ln K)); chi == 0 is a
// DegenerateColoring error (PCD is the fallback).
HcmRun hcm_run(const FileLibrary& lib, const ClusterModel& model, const Rat& memory, double t,
               const DemandProfile& profile);

Rat hcm_rate(const ClusterModel& model, const Rat& memory, double t, const DemandProfile& profile);

// ---------------------------------------------------------------------------
// decode checks and Monte Carlo
// ---------------------------------------------------------------------------

// Verifies that every user (matched or not) reconstructs its file from its
// assigned cache (if any) plus the log; returns failure descriptions.
std::vector<std::string> check_pcd_decode(const PcdRun& run, const FileLibrary& lib);
std::vector<std::string> check_pam_decode(const PamRun& run, const FileLibrary& lib);
std::vector<std::string> check_hcm_decode(const HcmRun& run, const FileLibrary& lib);

struct Estimate {
    std::vector<Rat> rates;   // per trial
    Rat mean;
    double std_err = 0.0;
};

// Trial r draws its profile from trial_seed(master_seed, r); results are
// written by trial index, so worker count never changes the outcome.
Estimate estimate_expected_rate(const std::function<Rat(std::uint64_t seed)>& trial_rate,
                                int n_trials, std::uint64_t master_seed, int n_workers);

} // namespace ccsim::adaptive
