#include "ccsim/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace ccsim;
using namespace ccsim::harness;

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::string scheme;
    std::vector<std::string> sets;   // raw key=value overrides
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<std::uint64_t> file_size;
    bool fault_inject = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "flat key=value config file");
    cmd->add_option("--scheme", args.scheme,
                    "man|decentralized|su|mu|pcd|pam|hcm|multiaccess");
    cmd->add_option("--seed", args.seed, "64-bit master seed");
    cmd->add_option("--trials", args.trials, "Monte Carlo trial count");
    cmd->add_option("--out", args.out_path, "output path (default stdout)");
    cmd->add_option("--file-size", args.file_size, "file size in bytes (padded up as needed)");
    cmd->add_flag("--fault-inject", args.fault_inject, "test-only placement corruption");
    cmd->add_option("--set,-s", args.sets, "extra key=value override (repeatable)")
        ->expected(-1);
}

Scenario scenario_from(const CommonArgs& args) {
    std::map<std::string, std::string> file_entries;
    if (!args.config_path.empty()) file_entries = parse_config_file(args.config_path);
    std::map<std::string, std::string> overrides;
    for (const auto& kv : args.sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
        overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    if (!args.scheme.empty()) overrides["scheme"] = args.scheme;
    if (args.seed) overrides["seed"] = std::to_string(*args.seed);
    if (args.trials) overrides["trials"] = std::to_string(*args.trials);
    if (args.file_size) overrides["file_size"] = std::to_string(*args.file_size);
    if (args.fault_inject) overrides["fault_inject"] = "true";
    return make_scenario(file_entries, overrides);
}

int with_output(const std::string& path, const std::function<int(std::ostream&)>& fn) {
    if (path.empty()) return fn(std::cout);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open output file '" + path + "'");
    return fn(f);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coded-caching simulator and analytics harness"};
    app.require_subcommand(1);

    CommonArgs curve_args, sim_args, sweep_args;
    bool verify_fault = false;

    CLI::App* curve = app.add_subcommand("rate-curve", "closed-form rate curve over an M grid");
    add_common(curve, curve_args);
    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo / byte-level scheme runs");
    add_common(sim, sim_args);
    CLI::App* sweep = app.add_subcommand("sweep", "rate curve plus measured means over an M grid");
    add_common(sweep, sweep_args);
    CLI::App* verify = app.add_subcommand("verify", "run the full acceptance battery");
    verify->add_flag("--fault-inject", verify_fault, "test-only placement corruption");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : ccsim::harness::kExitUsage;
    }

    try {
        if (curve->parsed()) {
            Scenario sc = scenario_from(curve_args);
            return with_output(curve_args.out_path,
                               [&](std::ostream& os) { return cmd_rate_curve(sc, os, std::cerr); });
        }
        if (sim->parsed()) {
            Scenario sc = scenario_from(sim_args);
            return with_output(sim_args.out_path, [&](std::ostream& os) {
                return cmd_simulate(sc, os, std::cerr, worker_count());
            });
        }
        if (sweep->parsed()) {
            Scenario sc = scenario_from(sweep_args);
            return with_output(sweep_args.out_path, [&](std::ostream& os) {
                return cmd_sweep(sc, os, std::cerr, worker_count());
            });
        }
        if (verify->parsed()) {
            VerifyOptions opt;
            opt.fault_inject = verify_fault;
            opt.workers = worker_count();
            return cmd_verify(opt, std::cout);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
