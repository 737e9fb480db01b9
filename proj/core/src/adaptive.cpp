#include "ccsim/adaptive.hpp"

#include "ccsim/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <set>
#include <thread>

namespace ccsim::adaptive {
namespace {

std::string uni_key(int file) { return "uni|f" + std::to_string(file); }

// With a single color HCM is the PCD scheme; untagged keys keep the two runs
// byte-identical.
std::string color_tag(int color, int chi) {
    return chi == 1 ? "" : "C" + std::to_string(color) + "|";
}

DemandVector demands_of(const MatchingResult& m) {
    DemandVector dv;
    for (auto [cache, file] : m.assignments) dv.demands.push_back(Demand{cache, file});
    return dv;
}

void add_unmatched_unicasts(TransmissionLog& log, const MatchingResult& m, const FileLibrary& lib) {
    for (int f : m.unmatched_distinct_files()) log.add(uni_key(f), lib.files[f]);
}

} // namespace

void ClusterModel::validate() const {
    if (n_files < 1 || n_caches < 1 || cluster_size < 1)
        throw std::invalid_argument("ClusterModel: N, K, d must be positive");
    if (n_caches % cluster_size != 0) throw std::invalid_argument("ClusterModel: d must divide K");
    if (rho <= 0 || rho >= 0.5) throw std::invalid_argument("ClusterModel: rho must be in (0, 1/2)");
    if (t0 <= 0) throw std::invalid_argument("ClusterModel: t0 must be > 0");
}

bool ClusterModel::regularity_ok() const { return analytics::regularity_ok(params()); }

std::int64_t DemandProfile::total_users() const {
    std::int64_t total = 0;
    for (const auto& row : u)
        for (int v : row) total += v;
    return total;
}

std::vector<int> DemandProfile::cluster_requests(int cluster) const {
    std::vector<int> files;
    for (int f = 0; f < n_files(); ++f)
        for (int i = 0; i < u[f][cluster]; ++i) files.push_back(f);
    return files;
}

DemandProfile sample_profile(const ClusterModel& model, std::uint64_t seed) {
    model.validate();
    double lambda = model.rho * model.cluster_size / model.n_files;
    Rng rng(seed);
    DemandProfile p;
    p.u.assign(model.n_files, std::vector<int>(model.n_clusters(), 0));
    for (int f = 0; f < model.n_files; ++f)
        for (int c = 0; c < model.n_clusters(); ++c) p.u[f][c] = rng.poisson(lambda);
    return p;
}

std::vector<int> MatchingResult::unmatched_distinct_files() const {
    std::vector<int> files;
    for (const auto& uu : unmatched) files.push_back(uu.file);
    std::sort(files.begin(), files.end());
    files.erase(std::unique(files.begin(), files.end()), files.end());
    return files;
}

MatchingResult match_fcfs(const DemandProfile& profile, const ClusterModel& model) {
    MatchingResult out;
    for (int c = 0; c < model.n_clusters(); ++c) {
        auto requests = profile.cluster_requests(c);
        int next_cache = c * model.cluster_size;
        int end_cache = (c + 1) * model.cluster_size;
        for (int f : requests) {
            if (next_cache < end_cache) out.assignments.emplace_back(next_cache++, f);
            else out.unmatched.push_back(UnmatchedUser{c, f});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// PCD
// ---------------------------------------------------------------------------

PcdRun pcd_run(const FileLibrary& lib, const ClusterModel& model, const Rat& memory,
               const DemandProfile& profile) {
    model.validate();
    man::Config cfg{model.n_files, model.n_caches, memory};
    FileLibrary padded = lib.padded_to_multiple(man::file_quantum(cfg));
    PcdRun run;
    run.file_size = padded.file_size;
    run.placement = man::place_with_sharing(padded, cfg);
    run.matching = match_fcfs(profile, model);
    run.log = man::deliver_with_sharing(padded, run.placement.meta, demands_of(run.matching));
    add_unmatched_unicasts(run.log, run.matching, padded);
    return run;
}

Rat pcd_rate(const ClusterModel& model, const Rat& memory, const DemandProfile& profile) {
    model.validate();
    MatchingResult m = match_fcfs(profile, model);
    Rat r = man::delivery_rate(man::Config{model.n_files, model.n_caches, memory}, m.n_matched());
    return r + Rat(static_cast<int>(m.unmatched_distinct_files().size()));
}

// ---------------------------------------------------------------------------
// PAM
// ---------------------------------------------------------------------------

namespace {

int pam_replicas(const ClusterModel& model, const Rat& memory) {
    Rat r = Rat(model.cluster_size) * memory / Rat(model.n_files);
    BigInt replicas = boost::multiprecision::numerator(r) / boost::multiprecision::denominator(r);
    BigInt whole_files = boost::multiprecision::numerator(memory) /
                         boost::multiprecision::denominator(memory);
    // only complete copies are stored: at most floor(M) files per cache
    BigInt cap = BigInt(model.cluster_size) * whole_files / BigInt(model.n_files);
    if (replicas > cap) replicas = cap;
    if (replicas > model.cluster_size) replicas = model.cluster_size;
    return replicas.convert_to<int>();
}

} // namespace

PamPlacement pam_placement(const FileLibrary& lib, const ClusterModel& model, const Rat& memory) {
    model.validate();
    if (memory < 0) throw std::invalid_argument("pam: memory must be >= 0");
    PamPlacement out;
    out.replicas = pam_replicas(model, memory);
    out.holders.assign(model.n_clusters(),
                       std::vector<std::vector<int>>(model.n_files));
    out.caches.resize(model.n_caches);
    for (int c = 0; c < model.n_caches; ++c) {
        out.caches[c].cache_id = c;
        out.caches[c].budget_bytes = memory * Rat(BigInt(lib.file_size));
    }
    for (int cl = 0; cl < model.n_clusters(); ++cl) {
        std::int64_t pos = 0;
        for (int f = 0; f < model.n_files; ++f) {
            for (int i = 0; i < out.replicas; ++i, ++pos) {
                int cache = cl * model.cluster_size + static_cast<int>(pos % model.cluster_size);
                out.holders[cl][f].push_back(cache);
                out.caches[cache].put("rep|f" + std::to_string(f), lib.files[f]);
            }
        }
    }
    for (const auto& c : out.caches) c.check_budget();
    return out;
}

namespace {

// Kuhn's augmenting-path maximum matching for one cluster.
// users: index into `requests`; caches: local 0..d-1.
struct ClusterMatcher {
    const std::vector<std::vector<int>>& adj;   // user -> local caches holding its file
    std::vector<int> cache_user;                // local cache -> user or -1
    std::vector<char> visited;

    explicit ClusterMatcher(const std::vector<std::vector<int>>& a, int d)
        : adj(a), cache_user(d, -1) {}

    bool try_augment(int user) {
        for (int cache : adj[user]) {
            if (visited[cache]) continue;
            visited[cache] = 1;
            if (cache_user[cache] < 0 || try_augment(cache_user[cache])) {
                cache_user[cache] = user;
                return true;
            }
        }
        return false;
    }
};

} // namespace

MatchingResult match_maximum(const DemandProfile& profile, const PamPlacement& placement,
                             const ClusterModel& model) {
    MatchingResult out;
    int d = model.cluster_size;
    for (int cl = 0; cl < model.n_clusters(); ++cl) {
        auto requests = profile.cluster_requests(cl);
        std::vector<std::vector<int>> adj(requests.size());
        for (std::size_t i = 0; i < requests.size(); ++i)
            for (int cache : placement.holders[cl][requests[i]])
                adj[i].push_back(cache - cl * d);
        ClusterMatcher matcher(adj, d);
        std::vector<int> user_cache(requests.size(), -1);
        for (std::size_t i = 0; i < requests.size(); ++i) {
            matcher.visited.assign(d, 0);
            matcher.try_augment(static_cast<int>(i));
        }
        for (int c = 0; c < d; ++c)
            if (matcher.cache_user[c] >= 0) user_cache[matcher.cache_user[c]] = c;
        for (std::size_t i = 0; i < requests.size(); ++i) {
            if (user_cache[i] >= 0)
                out.assignments.emplace_back(cl * d + user_cache[i], requests[i]);
            else
                out.unmatched.push_back(UnmatchedUser{cl, requests[i]});
        }
    }
    std::sort(out.assignments.begin(), out.assignments.end());
    return out;
}

PamRun pam_run(const FileLibrary& lib, const ClusterModel& model, const Rat& memory,
               const DemandProfile& profile) {
    PamRun run;
    run.file_size = lib.file_size;
    run.placement = pam_placement(lib, model, memory);
    run.matching = match_maximum(profile, run.placement, model);
    add_unmatched_unicasts(run.log, run.matching, lib);
    return run;
}

Rat pam_rate(const ClusterModel& model, const Rat& memory, const DemandProfile& profile) {
    model.validate();
    // matching needs only the replica layout, not bytes
    FileLibrary token;
    token.file_size = 1;
    token.files.assign(model.n_files, Bytes{0});
    PamPlacement placement = pam_placement(token, model, memory);
    MatchingResult m = match_maximum(profile, placement, model);
    return Rat(static_cast<int>(m.unmatched_distinct_files().size()));
}

// ---------------------------------------------------------------------------
// HCM
// ---------------------------------------------------------------------------

ColoringPlan coloring_plan(const ClusterModel& model, int chi) {
    model.validate();
    if (chi < 1 || chi > model.cluster_size)
        throw DegenerateColoring("coloring_plan: chi must be in 1..d");
    ColoringPlan plan;
    plan.chi = chi;
    plan.cache_color.resize(model.n_caches);
    plan.file_color.resize(model.n_files);
    plan.caches_of.assign(chi, {});
    plan.files_of.assign(chi, {});
    // within each cluster, contiguous color classes whose sizes differ by <= 1
    int d = model.cluster_size;
    for (int cl = 0; cl < model.n_clusters(); ++cl) {
        int offset = 0;
        for (int x = 0; x < chi; ++x) {
            int size = d / chi + (x < d % chi ? 1 : 0);
            for (int i = 0; i < size; ++i) {
                int cache = cl * d + offset + i;
                plan.cache_color[cache] = x;
                plan.caches_of[x].push_back(cache);
            }
            offset += size;
        }
    }
    int foffset = 0;
    for (int x = 0; x < chi; ++x) {
        int size = model.n_files / chi + (x < model.n_files % chi ? 1 : 0);
        for (int i = 0; i < size; ++i) {
            plan.file_color[foffset + i] = x;
            plan.files_of[x].push_back(foffset + i);
        }
        foffset += size;
    }
    plan.padded_files = (model.n_files + chi - 1) / chi;
    return plan;
}

namespace {

// same-color greedy matching in user order; returns global cache ids
MatchingResult match_colored(const DemandProfile& profile, const ClusterModel& model,
                             const ColoringPlan& plan) {
    MatchingResult out;
    int d = model.cluster_size;
    for (int cl = 0; cl < model.n_clusters(); ++cl) {
        auto requests = profile.cluster_requests(cl);
        std::vector<char> busy(d, 0);
        for (int f : requests) {
            int want = plan.file_color[f];
            int got = -1;
            for (int i = 0; i < d; ++i) {
                int cache = cl * d + i;
                if (!busy[i] && plan.cache_color[cache] == want) {
                    got = cache;
                    busy[i] = 1;
                    break;
                }
            }
            if (got >= 0) out.assignments.emplace_back(got, f);
            else out.unmatched.push_back(UnmatchedUser{cl, f});
        }
    }
    return out;
}

// per-color coded sub-system: local caches = plan.caches_of[x] in order,
// local files = plan.files_of[x] padded with zero files
man::Config color_config(const ColoringPlan& plan, int color, const Rat& memory) {
    int k_x = static_cast<int>(plan.caches_of[color].size());
    Rat m = memory > plan.padded_files ? Rat(plan.padded_files) : memory;
    return man::Config{plan.padded_files, k_x, m};
}

FileLibrary color_library(const FileLibrary& lib, const ColoringPlan& plan, int color,
                          std::size_t file_size) {
    FileLibrary out;
    out.file_size = file_size;
    for (int f : plan.files_of[color]) out.files.push_back(lib.files[f]);
    while (static_cast<int>(out.files.size()) < plan.padded_files)
        out.files.push_back(Bytes(file_size, 0));
    return out;
}

} // namespace

HcmRun hcm_run(const FileLibrary& lib, const ClusterModel& model, const Rat& memory, double t,
               const DemandProfile& profile) {
    model.validate();
    if (t < 0 || t > model.t0) throw std::invalid_argument("hcm: t must be in [0, t0]");
    int x = analytics::chi(model.params(), t);
    if (x < 1) throw DegenerateColoring("hcm: chi computes to 0 at these parameters; run PCD");
    HcmRun run;
    run.plan = coloring_plan(model, x);
    run.matching = match_colored(profile, model, run.plan);

    // common padded file size across the color systems
    std::uint64_t quantum = 1;
    std::vector<man::Config> cfg(x);
    for (int c = 0; c < x; ++c) {
        cfg[c] = color_config(run.plan, c, memory);
        quantum = std::lcm(quantum, man::file_quantum(cfg[c]));
    }
    FileLibrary padded = lib.padded_to_multiple(quantum);
    run.file_size = padded.file_size;

    run.caches.resize(model.n_caches);
    for (int c = 0; c < model.n_caches; ++c) {
        run.caches[c].cache_id = c;
        run.caches[c].budget_bytes = memory * Rat(BigInt(padded.file_size));
    }
    run.per_color.resize(x);
    for (int c = 0; c < x; ++c) {
        FileLibrary sub = color_library(padded, run.plan, c, padded.file_size);
        run.per_color[c] = man::place_with_sharing(sub, cfg[c], color_tag(c, x));
        for (std::size_t local = 0; local < run.plan.caches_of[c].size(); ++local) {
            int global = run.plan.caches_of[c][local];
            for (auto& [k, e] : run.per_color[c].caches[local].entries)
                run.caches[global].put_bits(k, e.data, e.bits);
        }
    }
    for (const auto& c : run.caches) c.check_budget();

    // per-color coded deliveries over the matched caches of that color
    for (int c = 0; c < x; ++c) {
        DemandVector dv;
        for (auto [cache, file] : run.matching.assignments) {
            if (run.plan.cache_color[cache] != c) continue;
            int local_cache = static_cast<int>(
                std::lower_bound(run.plan.caches_of[c].begin(), run.plan.caches_of[c].end(), cache) -
                run.plan.caches_of[c].begin());
            int local_file = static_cast<int>(
                std::lower_bound(run.plan.files_of[c].begin(), run.plan.files_of[c].end(), file) -
                run.plan.files_of[c].begin());
            dv.demands.push_back(Demand{local_cache, local_file});
        }
        FileLibrary sub = color_library(padded, run.plan, c, padded.file_size);
        run.log.append(man::deliver_with_sharing(sub, run.per_color[c].meta, dv, color_tag(c, x)));
    }
    add_unmatched_unicasts(run.log, run.matching, padded);
    return run;
}

Rat hcm_rate(const ClusterModel& model, const Rat& memory, double t, const DemandProfile& profile) {
    model.validate();
    if (t < 0 || t > model.t0) throw std::invalid_argument("hcm: t must be in [0, t0]");
    int x = analytics::chi(model.params(), t);
    if (x < 1) throw DegenerateColoring("hcm: chi computes to 0 at these parameters; run PCD");
    ColoringPlan plan = coloring_plan(model, x);
    MatchingResult m = match_colored(profile, model, plan);
    std::vector<int> matched_per_color(x, 0);
    for (auto [cache, file] : m.assignments) ++matched_per_color[plan.cache_color[cache]];
    Rat r(0);
    for (int c = 0; c < x; ++c)
        r += man::delivery_rate(color_config(plan, c, memory), matched_per_color[c]);
    return r + Rat(static_cast<int>(m.unmatched_distinct_files().size()));
}

// ---------------------------------------------------------------------------
// decode checks
// ---------------------------------------------------------------------------

namespace {

bool unicast_present(const TransmissionLog& log, const FileLibrary& lib, int file,
                     std::vector<std::string>& failures) {
    std::string key = uni_key(file);
    for (const auto& e : log.entries) {
        if (e.label != key) continue;
        if (e.payload == lib.files[file]) return true;
        failures.push_back("unicast payload mismatch for " + key);
        return false;
    }
    failures.push_back("missing unicast " + key);
    return false;
}

} // namespace

std::vector<std::string> check_pcd_decode(const PcdRun& run, const FileLibrary& lib) {
    std::vector<std::string> failures;
    FileLibrary padded = lib.padded_to_multiple(run.file_size) ;
    for (auto [cache, file] : run.matching.assignments) {
        try {
            Bytes got = man::decode_with_sharing(run.placement.meta, cache, file,
                                                 run.placement.caches[cache], run.log);
            if (got != padded.files[file])
                failures.push_back("pcd: cache " + std::to_string(cache) + " decoded wrong bytes");
        } catch (const std::exception& e) {
            failures.push_back(std::string("pcd: ") + e.what());
        }
    }
    for (const auto& uu : run.matching.unmatched) unicast_present(run.log, padded, uu.file, failures);
    return failures;
}

std::vector<std::string> check_pam_decode(const PamRun& run, const FileLibrary& lib) {
    std::vector<std::string> failures;
    for (auto [cache, file] : run.matching.assignments) {
        const auto& entries = run.placement.caches[cache].entries;
        auto it = entries.find("rep|f" + std::to_string(file));
        if (it == entries.end())
            failures.push_back("pam: cache " + std::to_string(cache) + " lacks its replica");
        else if (it->second.data != lib.files[file])
            failures.push_back("pam: cache " + std::to_string(cache) + " replica bytes differ");
    }
    for (const auto& uu : run.matching.unmatched) unicast_present(run.log, lib, uu.file, failures);
    return failures;
}

std::vector<std::string> check_hcm_decode(const HcmRun& run, const FileLibrary& lib) {
    std::vector<std::string> failures;
    FileLibrary padded = lib.padded_to_multiple(run.file_size);
    for (auto [cache, file] : run.matching.assignments) {
        int color = run.plan.cache_color[cache];
        int local_cache = static_cast<int>(std::lower_bound(run.plan.caches_of[color].begin(),
                                                            run.plan.caches_of[color].end(), cache) -
                                           run.plan.caches_of[color].begin());
        int local_file = static_cast<int>(
            std::lower_bound(run.plan.files_of[color].begin(), run.plan.files_of[color].end(), file) -
            run.plan.files_of[color].begin());
        std::string tag = color_tag(color, run.plan.chi);
        try {
            Bytes got = man::decode_with_sharing(run.per_color[color].meta, local_cache, local_file,
                                                 run.caches[cache], run.log, tag, tag);
            if (got != padded.files[file])
                failures.push_back("hcm: cache " + std::to_string(cache) + " decoded wrong bytes");
        } catch (const std::exception& e) {
            failures.push_back(std::string("hcm: ") + e.what());
        }
    }
    for (const auto& uu : run.matching.unmatched) unicast_present(run.log, padded, uu.file, failures);
    return failures;
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

Estimate estimate_expected_rate(const std::function<Rat(std::uint64_t seed)>& trial_rate,
                                int n_trials, std::uint64_t master_seed, int n_workers) {
    if (n_trials < 1) throw std::invalid_argument("estimate_expected_rate: need at least one trial");
    Estimate est;
    est.rates.assign(n_trials, Rat(0));
    n_workers = std::max(1, std::min(n_workers, n_trials));
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            int r = next.fetch_add(1);
            if (r >= n_trials) return;
            est.rates[r] = trial_rate(trial_seed(master_seed, static_cast<std::uint64_t>(r)));
        }
    };
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    Rat sum(0);
    for (const auto& r : est.rates) sum += r;
    est.mean = sum / n_trials;
    if (n_trials > 1) {
        double mean_d = to_double(est.mean);
        double ss = 0;
        for (const auto& r : est.rates) {
            double d = to_double(r) - mean_d;
            ss += d * d;
        }
        est.std_err = std::sqrt(ss / (static_cast<double>(n_trials) * (n_trials - 1)));
    }
    return est;
}

} // namespace ccsim::adaptive
