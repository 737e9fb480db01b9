#pragma once

#include "ccsim/core.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ccsim::harness {

// exit codes: 0 success, 1 verification/decode failure, 2 usage or config error
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Scheme { Man, Decentralized, Su, Mu, Pcd, Pam, Hcm, Multiaccess };
enum class DemandPolicy { WorstCaseDistinct, AllSame, Explicit, Stochastic };

Scheme scheme_from_string(const std::string& s);
std::string scheme_to_string(Scheme s);
DemandPolicy demand_policy_from_string(const std::string& s);

// Flat key=value configuration; command-line flags override file entries.
struct Scenario {
    Scheme scheme = Scheme::Man;
    std::uint64_t seed = 1;
    int trials = 1;
    DemandPolicy demand_policy = DemandPolicy::WorstCaseDistinct;
    std::optional<std::uint64_t> file_size;   // --file-size override
    bool fault_inject = false;
    std::map<std::string, std::string> params;

    bool has(const std::string& key) const { return params.count(key) != 0; }
    // typed getters; UsageError on absence or malformed value
    std::string get_str(const std::string& key) const;
    std::string get_str_or(const std::string& key, const std::string& fallback) const;
    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    Rat get_rat(const std::string& key) const;
    std::vector<Rat> get_rat_list(const std::string& key) const;
    std::vector<std::int64_t> get_int_list(const std::string& key) const;
    bool get_bool_or(const std::string& key, bool fallback) const;
};

// "3", "1.5", and "3/2" all parse; UsageError otherwise.
Rat parse_rat(const std::string& s);

// key=value lines, '#' comments, blank lines ignored.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> parse_config_file(const std::string& path);

// Builds a Scenario from (optional) config file plus override pairs; the
// reserved keys scheme/seed/trials/demand_policy/file_size/fault_inject are
// lifted out of the map.
Scenario make_scenario(const std::map<std::string, std::string>& file_entries,
                       const std::map<std::string, std::string>& overrides);

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);
// decimal cell (12 significant digits) plus exact p/q sibling cell
std::pair<std::string, std::string> rat_cells(const Rat& value);

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

// Worker count for Monte Carlo fan-out: CCSIM_THREADS caps it.
int worker_count();

int cmd_rate_curve(const Scenario& sc, std::ostream& out, std::ostream& err);
int cmd_simulate(const Scenario& sc, std::ostream& out, std::ostream& err, int workers);
int cmd_sweep(const Scenario& sc, std::ostream& out, std::ostream& err, int workers);

// ---------------------------------------------------------------------------
// acceptance battery
// ---------------------------------------------------------------------------

struct VerifyOptions {
    bool fault_inject = false;
    int workers = 1;
    // cluster size for the adaptive-bounds criterion; lowering it below the
    // regularity threshold makes that criterion skip its bound checks with a
    // stated reason (negative control for tests)
    int c6_cluster_size = 64;
    // when nonempty, run only criteria whose name contains this substring
    std::string only;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

std::vector<CheckResult> run_acceptance(const VerifyOptions& opt);
// Prints one PASS/FAIL line per criterion; kExitOk iff everything passed.
int cmd_verify(const VerifyOptions& opt, std::ostream& out);

} // namespace ccsim::harness
