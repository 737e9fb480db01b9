#pragma once

#include "ccsim/core.hpp"

#include <optional>

namespace ccsim::analytics {

// NOTE: every "log" in the closed forms below is the natural logarithm. The
// load / excess-user analysis behind these constants is in base e.

// ---------------------------------------------------------------------------
// Single-level rate laws
// ---------------------------------------------------------------------------

// Centralized achievable rate. Exact (K-t)/(t+1) at the grid points
// M in (N/K)*{0..K}; chord interpolation between adjacent grid points
// elsewhere (that is precisely what memory sharing realizes).
Rat r_man(int n, int k, const Rat& m);

// Upper bound min{K, N/M} (1 - M/N); K at M = 0.
Rat r_man_ub(int n, int k, const Rat& m);

// Decentralized achievable rate K (1 - M/N) min{ (N/KM)(1-(1-M/N)^K), N/K }.
Rat r_dec(int n, int k, const Rat& m);

// ---------------------------------------------------------------------------
// Multi-level popularity
// ---------------------------------------------------------------------------

struct SuLevel {
    std::int64_t n_files = 0;   // N_i
    std::int64_t n_users = 0;   // K_i
};

struct MuLevel {
    std::int64_t n_files = 0;          // N_i
    std::int64_t users_per_cache = 0;  // U_i
};

struct SuPartition {
    std::vector<int> h;   // unstored levels
    std::vector<int> i;   // merged, equally stored levels
};

struct MuPartition {
    std::vector<int> h;   // no memory
    std::vector<int> i;   // shared memory, sqrt(N_i U_i)-proportional
    std::vector<int> j;   // fully stored
    double m_tilde = 0.0;
    std::vector<double> alpha;   // per-level fraction of M, all levels
};

// max{ sum_I N_i / M - 1, 0 } + sum_H K_h, exact.
Rat su_rate_bound(const std::vector<SuLevel>& levels, const Rat& m, const SuPartition& p);

// sum_H K U_h + (sum_I sqrt(N_i U_i))^2 / (M - sum_J N_j) - sum_I U_i.
// With I empty no division is performed.
double mu_rate_bound(const std::vector<MuLevel>& levels, int k, double m, const MuPartition& p);

// Per-level form sum_i U_i min{K, max{N_i/(alpha_i M) - 1, 0}}.
double mu_rate_bound_per_level(const std::vector<MuLevel>& levels, int k, double m,
                               const MuPartition& p);

// ---------------------------------------------------------------------------
// Adaptive matching constants and bounds
// ---------------------------------------------------------------------------

struct AdaptiveParams {
    int n_files = 0;     // N
    int n_caches = 0;    // K
    int cluster_size = 0; // d, divides K
    double rho = 0.0;    // load, in (0, 1/2)
    double t0 = 0.0;     // regularity exponent, > 0
};

double alpha_const(double rho);              // -ln(2 rho e^(1-2rho))
double h_const(double rho);                  // (1/rho) ln(1/rho) + 1 - 1/rho
double excess_bound(int k, double t0);       // K^(-t0) / sqrt(2 pi)
int chi(const AdaptiveParams& p, double t);  // floor(alpha d / (2(1+t) ln K))
bool regularity_ok(const AdaptiveParams& p); // d >= 2(1+t0)/alpha * ln K

double pcd_bound(const AdaptiveParams& p, double m);
double pam_bound(const AdaptiveParams& p, double m);
// Throws DegenerateColoring when chi computes to 0.
double hcm_bound(const AdaptiveParams& p, double m, double t);

// ---------------------------------------------------------------------------
// Multi-access and interference formulas
// ---------------------------------------------------------------------------

// 4 min{K, N/M} (1 - dM/N) on M in (0, N/d]; K at M = 0; 0 for M >= N/d.
Rat r_ma_bound(int n, int k, int d, const Rat& m);

// Three-factor DoF product; nullopt flags the unbounded point M_r = N.
std::optional<Rat> dof(int n, int k_t, int k_r, const Rat& m_r);

// ---------------------------------------------------------------------------
// Convex envelope utility
// ---------------------------------------------------------------------------

struct RatePoint {
    Rat memory;
    Rat rate;
};

class PiecewiseLinear {
public:
    explicit PiecewiseLinear(std::vector<RatePoint> hull_points);
    // Linear interpolation; clamps to the endpoint values outside the range.
    Rat operator()(const Rat& m) const;
    const std::vector<RatePoint>& points() const { return pts_; }

private:
    std::vector<RatePoint> pts_;
};

// Lower convex hull in (M, R). Duplicate M with differing R is an error.
PiecewiseLinear convex_envelope(std::vector<RatePoint> points);

} // namespace ccsim::analytics
