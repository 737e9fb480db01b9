#include "ccsim/analytics.hpp"

#include <algorithm>
#include <cmath>

namespace ccsim::analytics {
namespace {

Rat rat_pow(Rat base, int exp) {
    Rat r(1);
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// exact rate at a grid index t
Rat grid_rate(int k, int t) { return Rat(k - t, t + 1); }

} // namespace

Rat r_man(int n, int k, const Rat& m) {
    if (m < 0 || m > n) throw std::invalid_argument("r_man: M must be in [0, N]");
    Rat t = Rat(k) * m / Rat(n);
    if (boost::multiprecision::denominator(t) == 1)
        return grid_rate(k, boost::multiprecision::numerator(t).convert_to<int>());
    int t_low = (boost::multiprecision::numerator(t) / boost::multiprecision::denominator(t))
                    .convert_to<int>();
    Rat lambda = Rat(t_low + 1) - t;
    return lambda * grid_rate(k, t_low) + (Rat(1) - lambda) * grid_rate(k, t_low + 1);
}

Rat r_man_ub(int n, int k, const Rat& m) {
    if (m < 0 || m > n) throw std::invalid_argument("r_man_ub: M must be in [0, N]");
    if (m == 0) return Rat(k);
    Rat local = Rat(1) - m / Rat(n);
    Rat users = Rat(k);
    Rat inv = Rat(n) / m;
    return (users < inv ? users : inv) * local;
}

Rat r_dec(int n, int k, const Rat& m) {
    if (m < 0 || m > n) throw std::invalid_argument("r_dec: M must be in [0, N]");
    Rat local = Rat(1) - m / Rat(n);
    if (m == 0) {
        // M -> 0 limit: both branches tend to K * min{1, N/K}
        Rat one(1);
        Rat nk = Rat(n, k);
        return Rat(k) * (nk < one ? nk : one);
    }
    Rat coded = (Rat(n) / (Rat(k) * m)) * (Rat(1) - rat_pow(local, k));
    Rat cap = Rat(n, k);
    Rat mn = coded < cap ? coded : cap;
    return Rat(k) * local * mn;
}

Rat su_rate_bound(const std::vector<SuLevel>& levels, const Rat& m, const SuPartition& p) {
    if (m <= 0) throw std::invalid_argument("su_rate_bound: M must be > 0");
    Rat n_i(0);
    for (int idx : p.i) n_i += Rat(levels.at(idx).n_files);
    Rat coded = n_i / m - Rat(1);
    if (coded < 0) coded = 0;
    Rat unicast(0);
    for (int idx : p.h) unicast += Rat(levels.at(idx).n_users);
    return coded + unicast;
}

double mu_rate_bound(const std::vector<MuLevel>& levels, int k, double m, const MuPartition& p) {
    double h_term = 0;
    for (int idx : p.h) h_term += static_cast<double>(k) * static_cast<double>(levels.at(idx).users_per_cache);
    if (p.i.empty()) return h_term;
    double j_files = 0;
    for (int idx : p.j) j_files += static_cast<double>(levels.at(idx).n_files);
    if (m <= j_files)
        throw std::invalid_argument("mu_rate_bound: M must exceed the fully stored levels' size");
    double root_sum = 0, u_sum = 0;
    for (int idx : p.i) {
        const auto& lv = levels.at(idx);
        root_sum += std::sqrt(static_cast<double>(lv.n_files) * static_cast<double>(lv.users_per_cache));
        u_sum += static_cast<double>(lv.users_per_cache);
    }
    return h_term + root_sum * root_sum / (m - j_files) - u_sum;
}

double mu_rate_bound_per_level(const std::vector<MuLevel>& levels, int k, double m,
                               const MuPartition& p) {
    double total = 0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        double alloc = p.alpha.at(i) * m;
        double term;
        if (alloc <= 0) {
            term = static_cast<double>(k);
        } else {
            term = std::max(static_cast<double>(levels[i].n_files) / alloc - 1.0, 0.0);
            term = std::min(term, static_cast<double>(k));
        }
        total += static_cast<double>(levels[i].users_per_cache) * term;
    }
    return total;
}

// ---------------------------------------------------------------------------
// adaptive constants
// ---------------------------------------------------------------------------

double alpha_const(double rho) {
    if (rho <= 0 || rho >= 0.5) throw std::invalid_argument("alpha_const: rho must be in (0, 1/2)");
    return -std::log(2.0 * rho * std::exp(1.0 - 2.0 * rho));
}

double h_const(double rho) {
    if (rho <= 0 || rho >= 0.5) throw std::invalid_argument("h_const: rho must be in (0, 1/2)");
    return (1.0 / rho) * std::log(1.0 / rho) + 1.0 - 1.0 / rho;
}

double excess_bound(int k, double t0) {
    return std::pow(static_cast<double>(k), -t0) / std::sqrt(2.0 * M_PI);
}

int chi(const AdaptiveParams& p, double t) {
    double a = alpha_const(p.rho);
    return static_cast<int>(std::floor(a * p.cluster_size / (2.0 * (1.0 + t) * std::log(p.n_caches))));
}

bool regularity_ok(const AdaptiveParams& p) {
    double a = alpha_const(p.rho);
    return p.cluster_size >= 2.0 * (1.0 + p.t0) / a * std::log(p.n_caches);
}

double pcd_bound(const AdaptiveParams& p, double m) {
    double cap = p.rho * p.cluster_size;
    if (m <= 0) return cap;
    double coded = std::max(static_cast<double>(p.n_files) / m - 1.0, 0.0);
    return std::min(cap, coded + excess_bound(p.n_caches, p.t0));
}

double pam_bound(const AdaptiveParams& p, double m) {
    double threshold = static_cast<double>(p.n_files) / p.cluster_size;
    if (m < threshold) return p.rho * p.n_caches;
    double h = h_const(p.rho);
    double expo = -p.rho * h * p.cluster_size * m / p.n_files;
    return static_cast<double>(p.n_caches) * m * std::exp(expo);
}

double hcm_bound(const AdaptiveParams& p, double m, double t) {
    int x = chi(p, t);
    if (x < 1) throw DegenerateColoring("hcm_bound: chi computes to 0; use PCD instead");
    double excess = std::pow(static_cast<double>(p.n_caches), -t) / std::sqrt(2.0 * M_PI);
    double lo = std::floor(static_cast<double>(p.n_files) / x);
    if (m <= lo) {
        double coded = static_cast<double>(p.n_files) / m - x;
        return std::min(p.rho * p.n_caches, coded + excess);
    }
    return excess;
}

// ---------------------------------------------------------------------------
// multi-access + DoF
// ---------------------------------------------------------------------------

Rat r_ma_bound(int n, int k, int d, const Rat& m) {
    if (m < 0) throw std::invalid_argument("r_ma_bound: M must be >= 0");
    if (Rat(d) * m >= Rat(n)) return Rat(0);
    if (m == 0) return Rat(4 * k);
    Rat users = Rat(k);
    Rat inv = Rat(n) / m;
    Rat local = Rat(1) - Rat(d) * m / Rat(n);
    return Rat(4) * (users < inv ? users : inv) * local;
}

std::optional<Rat> dof(int n, int k_t, int k_r, const Rat& m_r) {
    if (k_t < 2) throw std::invalid_argument("dof: need at least two transmitters");
    if (k_r < 1) throw std::invalid_argument("dof: need at least one receiver");
    if (m_r < 0 || m_r > n) throw std::invalid_argument("dof: M_r must be in [0, N]");
    if (m_r == n) return std::nullopt;   // 1/(1 - M_r/N) blows up
    Rat frac = m_r / Rat(n);
    Rat align = Rat(BigInt(k_t) * BigInt(k_r), BigInt(k_t + k_r - 1));
    Rat local = Rat(1) / (Rat(1) - frac);
    Rat harm = Rat(1, k_r) + Rat(1, k_t - 1);
    Rat global = (Rat(k_r) * frac + 1) / (frac / harm + 1);
    return align * local * global;
}

// ---------------------------------------------------------------------------
// convex envelope
// ---------------------------------------------------------------------------

PiecewiseLinear::PiecewiseLinear(std::vector<RatePoint> hull_points) : pts_(std::move(hull_points)) {}

Rat PiecewiseLinear::operator()(const Rat& m) const {
    if (m <= pts_.front().memory) return pts_.front().rate;
    if (m >= pts_.back().memory) return pts_.back().rate;
    for (std::size_t i = 1; i < pts_.size(); ++i) {
        if (m <= pts_[i].memory) {
            const auto& a = pts_[i - 1];
            const auto& b = pts_[i];
            Rat w = (m - a.memory) / (b.memory - a.memory);
            return a.rate + w * (b.rate - a.rate);
        }
    }
    return pts_.back().rate;
}

PiecewiseLinear convex_envelope(std::vector<RatePoint> points) {
    if (points.size() < 2) throw std::invalid_argument("convex_envelope: need at least two points");
    std::sort(points.begin(), points.end(),
              [](const RatePoint& a, const RatePoint& b) { return a.memory < b.memory; });
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].memory == points[i - 1].memory) {
            if (points[i].rate != points[i - 1].rate)
                throw std::invalid_argument("convex_envelope: duplicate M with different R");
        }
    }
    points.erase(std::unique(points.begin(), points.end(),
                             [](const RatePoint& a, const RatePoint& b) {
                                 return a.memory == b.memory;
                             }),
                 points.end());
    // monotone chain, lower hull
    std::vector<RatePoint> hull;
    for (const auto& p : points) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            Rat cross = (b.memory - a.memory) * (p.rate - a.rate) -
                        (p.memory - a.memory) * (b.rate - a.rate);
            if (cross >= 0) break;   // b is on or below the chord a-p: keep it
            hull.pop_back();
        }
        hull.push_back(p);
    }
    return PiecewiseLinear(std::move(hull));
}

} // namespace ccsim::analytics
