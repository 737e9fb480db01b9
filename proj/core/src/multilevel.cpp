#include "ccsim/multilevel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

namespace ccsim::ml {
namespace {

std::string uni_key(int level, int file) {
    return "uni|L" + std::to_string(level) + "f" + std::to_string(file);
}

std::string level_tag(int level) { return "L" + std::to_string(level) + "|"; }

std::string row_tag(int level, int row) {
    return "L" + std::to_string(level) + "r" + std::to_string(row) + "|";
}

} // namespace

SuPartition su_partition(const std::vector<SuLevel>& levels, const Rat& memory) {
    SuPartition p;
    if (memory == 0) {
        for (std::size_t i = 0; i < levels.size(); ++i) p.h.push_back(static_cast<int>(i));
        return p;
    }
    if (memory < 0) throw std::invalid_argument("su_partition: memory must be >= 0");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        Rat popularity(levels[i].n_users, levels[i].n_files);
        if (popularity < Rat(1) / memory) p.h.push_back(static_cast<int>(i));
        else p.i.push_back(static_cast<int>(i));
    }
    return p;
}

SuRun su_simulate(const std::vector<FileLibrary>& level_libraries,
                  const std::vector<SuLevel>& levels, int n_caches, const Rat& memory,
                  const std::vector<SuDemand>& demands) {
    if (level_libraries.size() != levels.size())
        throw std::invalid_argument("su_simulate: one library per level required");
    std::int64_t total_users = 0;
    for (const auto& lv : levels) total_users += lv.n_users;
    if (total_users != n_caches)
        throw std::invalid_argument("su_simulate: sum of K_i must equal K");
    if (static_cast<int>(demands.size()) != n_caches)
        throw std::invalid_argument("su_simulate: need exactly one demand per cache");
    std::vector<std::int64_t> count(levels.size(), 0);
    std::set<int> seen_users;
    for (const auto& d : demands) {
        if (d.level < 0 || d.level >= static_cast<int>(levels.size()))
            throw std::invalid_argument("su_simulate: level out of range");
        if (d.file < 0 || d.file >= levels[d.level].n_files)
            throw std::invalid_argument("su_simulate: file out of range for its level");
        if (!seen_users.insert(d.user).second)
            throw std::invalid_argument("su_simulate: duplicate user");
        ++count[d.level];
    }
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (count[i] != levels[i].n_users)
            throw std::invalid_argument("su_simulate: demand/level counts mismatch");

    SuRun run;
    run.partition = su_partition(levels, memory);
    run.merged_base.assign(levels.size(), -1);
    for (int idx : run.partition.i) {
        run.merged_base[idx] = run.merged_files;
        run.merged_files += static_cast<int>(levels[idx].n_files);
    }
    run.has_coded = run.merged_files > 0;

    // common padded file size
    std::size_t base_f = 0;
    for (const auto& lib : level_libraries) base_f = std::max(base_f, lib.file_size);
    std::uint64_t quantum = 1;
    man::Config cfg;
    if (run.has_coded) {
        Rat m = memory > run.merged_files ? Rat(run.merged_files) : memory;   // extra memory idle
        cfg = man::Config{run.merged_files, n_caches, m};
        quantum = man::file_quantum(cfg);
    }
    std::size_t f = ((base_f + quantum - 1) / quantum) * quantum;
    run.file_size = f;

    std::vector<FileLibrary> padded;
    padded.reserve(levels.size());
    for (const auto& lib : level_libraries) padded.push_back(lib.padded_to_multiple(f));

    // placement of the merged super-level (demand-oblivious)
    if (run.has_coded) {
        FileLibrary merged;
        merged.file_size = f;
        for (int idx : run.partition.i)
            for (const auto& w : padded[idx].files) merged.files.push_back(w);
        auto placed = man::place_with_sharing(merged, cfg, "M|");
        run.man_meta = placed.meta;
        run.caches = std::move(placed.caches);
        for (auto& c : run.caches) c.budget_bytes = memory * Rat(BigInt(f));
        for (const auto& c : run.caches) c.check_budget();

        // coded delivery over all K caches; H users ride along demanding
        // merged file 0
        DemandVector dv;
        for (const auto& d : demands) {
            int merged_file = run.merged_base[d.level] < 0
                                  ? 0
                                  : run.merged_base[d.level] + d.file;
            dv.demands.push_back(Demand{d.user, merged_file});
        }
        run.log = man::deliver_with_sharing(merged, run.man_meta, dv, "M|");
    } else {
        run.caches.resize(n_caches);
        for (int c = 0; c < n_caches; ++c) {
            run.caches[c].cache_id = c;
            run.caches[c].budget_bytes = memory * Rat(BigInt(f));
        }
    }

    // whole-file unicasts for H-level requests, one per distinct file
    std::set<std::pair<int, int>> sent;
    for (const auto& d : demands) {
        if (run.merged_base[d.level] >= 0) continue;
        if (!sent.insert({d.level, d.file}).second) continue;
        run.log.add(uni_key(d.level, d.file), padded[d.level].files[d.file]);
    }
    return run;
}

Bytes su_decode(const SuRun& run, const SuDemand& demand, const CacheContent& cache) {
    if (run.merged_base[demand.level] >= 0) {
        int merged_file = run.merged_base[demand.level] + demand.file;
        return man::decode_with_sharing(run.man_meta, demand.user, merged_file, cache, run.log, "M|",
                                        "M|");
    }
    std::string key = uni_key(demand.level, demand.file);
    for (const auto& e : run.log.entries)
        if (e.label == key) return e.payload;
    throw DecodeError("missing unicast for an unstored-level request", key);
}

// ---------------------------------------------------------------------------
// multi-user
// ---------------------------------------------------------------------------

namespace {

struct SplitContext {
    std::vector<int> order;          // level ids sorted by N_i/U_i ascending
    std::vector<double> root_nu;     // sqrt(N_i U_i), by level id
    std::vector<double> root_n_over_u;
};

SplitContext split_context(const std::vector<MuLevel>& levels) {
    SplitContext ctx;
    ctx.order.resize(levels.size());
    std::iota(ctx.order.begin(), ctx.order.end(), 0);
    std::sort(ctx.order.begin(), ctx.order.end(), [&](int a, int b) {
        Rat ra(levels[a].n_files, levels[a].users_per_cache);
        Rat rb(levels[b].n_files, levels[b].users_per_cache);
        if (ra != rb) return ra < rb;
        return a < b;
    });
    for (const auto& lv : levels) {
        ctx.root_nu.push_back(std::sqrt(static_cast<double>(lv.n_files) *
                                        static_cast<double>(lv.users_per_cache)));
        ctx.root_n_over_u.push_back(std::sqrt(static_cast<double>(lv.n_files) /
                                              static_cast<double>(lv.users_per_cache)));
    }
    return ctx;
}

double solve_m_tilde(const std::vector<MuLevel>& levels, const SplitContext& ctx,
                     const std::vector<int>& i_set, double budget, MTildeVariant variant) {
    double root_sum = 0;
    for (int idx : i_set) root_sum += ctx.root_nu[idx];
    double m_tilde = budget / root_sum;
    if (variant == MTildeVariant::ChapterApprox) return m_tilde;
    // clamped water level: levels whose allocation would exceed N_i are pinned
    // there and the rest of the budget re-spreads
    std::set<int> clamped;
    for (;;) {
        double pinned = 0, roots = 0;
        for (int idx : i_set) {
            if (clamped.count(idx)) pinned += static_cast<double>(levels[idx].n_files);
            else roots += ctx.root_nu[idx];
        }
        if (roots <= 0) return m_tilde;
        double next = (budget - pinned) / roots;
        bool changed = false;
        for (int idx : i_set) {
            if (!clamped.count(idx) && next * ctx.root_nu[idx] > static_cast<double>(levels[idx].n_files)) {
                clamped.insert(idx);
                changed = true;
            }
        }
        if (!changed) return next;
        m_tilde = next;
    }
}

} // namespace

std::vector<MuPartition> mu_partition_candidates(const std::vector<MuLevel>& levels, int n_caches,
                                                 const Rat& memory, MTildeVariant variant) {
    for (const auto& lv : levels) {
        if (lv.n_files < static_cast<std::int64_t>(n_caches) * lv.users_per_cache)
            throw std::invalid_argument("mu_partition: regularity N_i >= K U_i violated");
    }
    Rat total_files(0);
    for (const auto& lv : levels) total_files += Rat(BigInt(lv.n_files));
    if (memory < 0 || memory > total_files)
        throw std::invalid_argument("mu_partition: memory must be in [0, sum N_i]");

    SplitContext ctx = split_context(levels);
    int l = static_cast<int>(levels.size());
    double k = static_cast<double>(n_caches);
    std::vector<MuPartition> found;

    for (int n_j = 0; n_j <= l; ++n_j) {
        for (int n_h = 0; n_h + n_j <= l; ++n_h) {
            std::vector<int> j_set(ctx.order.begin(), ctx.order.begin() + n_j);
            std::vector<int> h_set(ctx.order.end() - n_h, ctx.order.end());
            std::vector<int> i_set(ctx.order.begin() + n_j, ctx.order.end() - n_h);

            Rat j_files(0);
            for (int idx : j_set) j_files += Rat(BigInt(levels[idx].n_files));

            double m_tilde;
            if (i_set.empty()) {
                // all memory must go to fully stored levels, exactly
                if (j_files != memory) continue;
                double lo = 0, hi = std::numeric_limits<double>::infinity();
                for (int idx : j_set) lo = std::max(lo, (1.0 + 1.0 / k) * ctx.root_n_over_u[idx]);
                for (int idx : h_set) hi = std::min(hi, (1.0 / k) * ctx.root_n_over_u[idx]);
                if (lo >= hi) continue;
                m_tilde = std::isinf(hi) ? lo + 1.0 : (lo + hi) / 2.0;
            } else {
                if (memory <= j_files) continue;
                double budget = to_double(memory - j_files);
                m_tilde = solve_m_tilde(levels, ctx, i_set, budget, variant);
                bool ok = true;
                for (int idx : h_set)
                    if (!(m_tilde < (1.0 / k) * ctx.root_n_over_u[idx])) ok = false;
                for (int idx : i_set) {
                    if (!((1.0 / k) * ctx.root_n_over_u[idx] <= m_tilde &&
                          m_tilde <= (1.0 + 1.0 / k) * ctx.root_n_over_u[idx]))
                        ok = false;
                }
                for (int idx : j_set)
                    if (!((1.0 + 1.0 / k) * ctx.root_n_over_u[idx] < m_tilde)) ok = false;
                if (!ok) continue;
            }

            MuPartition p;
            p.h = h_set;
            p.i = i_set;
            p.j = j_set;
            std::sort(p.h.begin(), p.h.end());
            std::sort(p.i.begin(), p.i.end());
            std::sort(p.j.begin(), p.j.end());
            p.m_tilde = m_tilde;
            p.alpha.assign(l, 0.0);
            double m = to_double(memory);
            for (int idx : p.j) p.alpha[idx] = static_cast<double>(levels[idx].n_files) / m;
            for (int idx : p.i) {
                double alloc = m_tilde * ctx.root_nu[idx];
                if (variant == MTildeVariant::ClampedExact)
                    alloc = std::min(alloc, static_cast<double>(levels[idx].n_files));
                p.alpha[idx] = alloc / m;
            }
            found.push_back(std::move(p));
        }
    }
    return found;
}

MuPartition mu_partition(const std::vector<MuLevel>& levels, int n_caches, const Rat& memory,
                         MTildeVariant variant) {
    auto cands = mu_partition_candidates(levels, n_caches, memory, variant);
    if (cands.empty())
        throw NoValidPartition("mu_partition: no split satisfies the threshold inequalities");
    if (cands.size() > 1) {
        // A level stored at exactly N_i through I describes the same placement
        // as listing it in J; knife-edge memories produce both spellings.
        // Splits that allocate identically are one partition; report the
        // largest-J spelling. Anything else is a genuine ambiguity.
        auto same_alloc = [&](const MuPartition& a, const MuPartition& b) {
            for (std::size_t i = 0; i < levels.size(); ++i)
                if (std::abs(a.alpha[i] - b.alpha[i]) > 1e-9 * std::max(1.0, std::abs(a.alpha[i])))
                    return false;
            return true;
        };
        bool all_same = true;
        for (std::size_t i = 1; i < cands.size(); ++i)
            if (!same_alloc(cands[0], cands[i])) all_same = false;
        if (!all_same) {
            std::string what = "mu_partition: " + std::to_string(cands.size()) +
                               " splits satisfy the inequalities:";
            for (const auto& c : cands) {
                what += " [J=" + std::to_string(c.j.size()) + ",I=" + std::to_string(c.i.size()) +
                        ",H=" + std::to_string(c.h.size()) + "]";
            }
            throw AmbiguousPartition(what);
        }
        std::size_t best = 0;
        for (std::size_t i = 1; i < cands.size(); ++i)
            if (cands[i].j.size() > cands[best].j.size()) best = i;
        return cands[best];
    }
    return cands.front();
}

MuRun mu_simulate(const std::vector<FileLibrary>& level_libraries,
                  const std::vector<MuLevel>& levels, int n_caches, const Rat& memory,
                  const std::vector<MuDemand>& demands, const MuPartition& partition) {
    int l = static_cast<int>(levels.size());
    if (static_cast<int>(level_libraries.size()) != l)
        throw std::invalid_argument("mu_simulate: one library per level required");

    // demand shape: every (level, row, cache) exactly once
    std::set<std::tuple<int, int, int>> seen;
    for (const auto& d : demands) {
        if (d.level < 0 || d.level >= l) throw std::invalid_argument("mu_simulate: level out of range");
        if (d.row < 0 || d.row >= levels[d.level].users_per_cache)
            throw std::invalid_argument("mu_simulate: row out of range");
        if (d.cache < 0 || d.cache >= n_caches)
            throw std::invalid_argument("mu_simulate: cache out of range");
        if (d.file < 0 || d.file >= levels[d.level].n_files)
            throw std::invalid_argument("mu_simulate: file out of range");
        if (!seen.insert({d.level, d.row, d.cache}).second)
            throw std::invalid_argument("mu_simulate: duplicate (level, row, cache) demand");
    }
    std::int64_t expected = 0;
    for (const auto& lv : levels) expected += lv.users_per_cache * n_caches;
    if (static_cast<std::int64_t>(demands.size()) != expected)
        throw std::invalid_argument("mu_simulate: demand shape must cover every row of every level");

    MuRun run;
    run.partition = partition;
    run.level_memory.assign(l, Rat(0));
    run.has_system.assign(l, false);
    run.meta.resize(l);

    // Rationalize the sqrt-proportional allocation onto a t-grid of step
    // 1/grid so file splits stay byte-exact; rounding is downward so the
    // total never exceeds M.
    const int grid = 64;
    for (int i : partition.j) run.level_memory[i] = Rat(BigInt(levels[i].n_files));
    for (int i : partition.i) {
        double t_val = static_cast<double>(n_caches) * partition.alpha[i] * to_double(memory) /
                       static_cast<double>(levels[i].n_files);
        t_val = std::min(t_val, static_cast<double>(n_caches));
        long steps = static_cast<long>(std::floor(t_val * grid + 1e-9));
        run.level_memory[i] = Rat(BigInt(steps), BigInt(static_cast<long>(grid) * n_caches)) *
                              Rat(BigInt(levels[i].n_files));
    }
    // exact-budget guard against double rounding
    for (;;) {
        Rat total(0);
        for (const auto& m : run.level_memory) total += m;
        if (total <= memory) break;
        int biggest = -1;
        for (int i : partition.i)
            if (biggest < 0 || run.level_memory[i] > run.level_memory[biggest]) biggest = i;
        if (biggest < 0) throw std::logic_error("mu_simulate: allocation exceeds memory");
        run.level_memory[biggest] -= Rat(BigInt(levels[biggest].n_files), BigInt(static_cast<long>(grid) * n_caches));
    }

    // common padded file size across levels
    std::size_t base_f = 0;
    for (const auto& lib : level_libraries) base_f = std::max(base_f, lib.file_size);
    std::uint64_t quantum = 1;
    std::vector<man::Config> cfg(l);
    for (int i = 0; i < l; ++i) {
        if (run.level_memory[i] == 0) continue;
        cfg[i] = man::Config{static_cast<int>(levels[i].n_files), n_caches, run.level_memory[i]};
        quantum = std::lcm(quantum, man::file_quantum(cfg[i]));
    }
    std::size_t f = ((base_f + quantum - 1) / quantum) * quantum;
    run.file_size = f;

    std::vector<FileLibrary> padded;
    padded.reserve(l);
    for (const auto& lib : level_libraries) padded.push_back(lib.padded_to_multiple(f));

    run.caches.resize(n_caches);
    for (int c = 0; c < n_caches; ++c) {
        run.caches[c].cache_id = c;
        run.caches[c].budget_bytes = memory * Rat(BigInt(f));
    }
    for (int i = 0; i < l; ++i) {
        if (run.level_memory[i] == 0) continue;
        auto placed = man::place_with_sharing(padded[i], cfg[i], level_tag(i));
        run.meta[i] = placed.meta;
        run.has_system[i] = true;
        for (int c = 0; c < n_caches; ++c)
            for (auto& [k, e] : placed.caches[c].entries) run.caches[c].put_bits(k, e.data, e.bits);
    }
    for (const auto& c : run.caches) c.check_budget();

    // deliveries, one independent run per (level, row)
    for (int i = 0; i < l; ++i) {
        if (!run.has_system[i]) continue;
        for (int r = 0; r < levels[i].users_per_cache; ++r) {
            DemandVector dv;
            for (const auto& d : demands)
                if (d.level == i && d.row == r) dv.demands.push_back(Demand{d.cache, d.file});
            run.log.append(man::deliver_with_sharing(padded[i], run.meta[i], dv, row_tag(i, r)));
        }
    }

    // unstored levels: whole-file unicasts, deduplicated
    std::set<std::pair<int, int>> sent;
    for (const auto& d : demands) {
        if (run.has_system[d.level]) continue;
        if (!sent.insert({d.level, d.file}).second) continue;
        run.log.add(uni_key(d.level, d.file), padded[d.level].files[d.file]);
    }
    return run;
}

Bytes mu_decode(const MuRun& run, const MuDemand& demand, const CacheContent& cache) {
    if (run.has_system[demand.level])
        return man::decode_with_sharing(run.meta[demand.level], demand.cache, demand.file, cache,
                                        run.log, level_tag(demand.level),
                                        row_tag(demand.level, demand.row));
    std::string key = uni_key(demand.level, demand.file);
    for (const auto& e : run.log.entries)
        if (e.label == key) return e.payload;
    throw DecodeError("missing unicast for an unstored-level request", key);
}

} // namespace ccsim::ml
