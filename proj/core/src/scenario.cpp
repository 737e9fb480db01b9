#include "ccsim/harness.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ccsim::harness {
namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t next = s.find(sep, pos);
        if (next == std::string::npos) next = s.size();
        out.push_back(trim(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

} // namespace

Scheme scheme_from_string(const std::string& s) {
    if (s == "man") return Scheme::Man;
    if (s == "decentralized") return Scheme::Decentralized;
    if (s == "su") return Scheme::Su;
    if (s == "mu") return Scheme::Mu;
    if (s == "pcd") return Scheme::Pcd;
    if (s == "pam") return Scheme::Pam;
    if (s == "hcm") return Scheme::Hcm;
    if (s == "multiaccess") return Scheme::Multiaccess;
    throw UsageError("unknown scheme '" + s +
                     "' (expected man|decentralized|su|mu|pcd|pam|hcm|multiaccess)");
}

std::string scheme_to_string(Scheme s) {
    switch (s) {
    case Scheme::Man: return "man";
    case Scheme::Decentralized: return "decentralized";
    case Scheme::Su: return "su";
    case Scheme::Mu: return "mu";
    case Scheme::Pcd: return "pcd";
    case Scheme::Pam: return "pam";
    case Scheme::Hcm: return "hcm";
    case Scheme::Multiaccess: return "multiaccess";
    }
    return "?";
}

DemandPolicy demand_policy_from_string(const std::string& s) {
    if (s == "worst_case_distinct") return DemandPolicy::WorstCaseDistinct;
    if (s == "all_same") return DemandPolicy::AllSame;
    if (s == "explicit") return DemandPolicy::Explicit;
    if (s == "stochastic") return DemandPolicy::Stochastic;
    throw UsageError("unknown demand_policy '" + s + "'");
}

Rat parse_rat(const std::string& raw) {
    std::string s = trim(raw);
    if (s.empty()) throw UsageError("empty numeric value");
    try {
        std::size_t slash = s.find('/');
        if (slash != std::string::npos) {
            BigInt num(s.substr(0, slash));
            BigInt den(s.substr(slash + 1));
            if (den == 0) throw UsageError("zero denominator in '" + s + "'");
            return Rat(num, den);
        }
        std::size_t dot = s.find('.');
        if (dot == std::string::npos) return Rat(BigInt(s));
        std::string whole = s.substr(0, dot);
        std::string frac = s.substr(dot + 1);
        if (frac.empty()) return Rat(BigInt(whole));
        bool neg = !whole.empty() && whole[0] == '-';
        BigInt scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        BigInt value = BigInt(whole.empty() || whole == "-" ? "0" : whole) * scale;
        BigInt f(frac);
        if (neg) value -= f;
        else value += f;
        return Rat(value, scale);
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError("cannot parse number '" + s + "'");
    }
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(lineno) + " is not key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw UsageError("config line " + std::to_string(lineno) + " has empty key");
        out[key] = value;
    }
    return out;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

Scenario make_scenario(const std::map<std::string, std::string>& file_entries,
                       const std::map<std::string, std::string>& overrides) {
    std::map<std::string, std::string> merged = file_entries;
    for (const auto& [k, v] : overrides) merged[k] = v;   // flags win

    Scenario sc;
    auto take = [&](const std::string& key) -> std::optional<std::string> {
        auto it = merged.find(key);
        if (it == merged.end()) return std::nullopt;
        std::string v = it->second;
        merged.erase(it);
        return v;
    };
    if (auto v = take("scheme")) sc.scheme = scheme_from_string(*v);
    else throw UsageError("missing required key 'scheme'");
    if (auto v = take("seed")) {
        try {
            sc.seed = std::stoull(*v);
        } catch (const std::exception&) {
            throw UsageError("seed must be an unsigned integer");
        }
    }
    if (auto v = take("trials")) {
        sc.trials = static_cast<int>(std::stoll(*v));
        if (sc.trials < 1) throw UsageError("trials must be >= 1");
    }
    if (auto v = take("demand_policy")) sc.demand_policy = demand_policy_from_string(*v);
    if (auto v = take("file_size")) {
        sc.file_size = std::stoull(*v);
        if (*sc.file_size < 1) throw UsageError("file_size must be >= 1");
    }
    if (auto v = take("fault_inject")) sc.fault_inject = (*v == "true" || *v == "1");
    sc.params = std::move(merged);
    return sc;
}

std::string Scenario::get_str(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) throw UsageError("missing required key '" + key + "'");
    return it->second;
}

std::string Scenario::get_str_or(const std::string& key, const std::string& fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

std::int64_t Scenario::get_int(const std::string& key) const {
    try {
        return std::stoll(get_str(key));
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError("key '" + key + "' must be an integer");
    }
}

std::int64_t Scenario::get_int_or(const std::string& key, std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
}

double Scenario::get_double(const std::string& key) const {
    try {
        return std::stod(get_str(key));
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError("key '" + key + "' must be a number");
    }
}

double Scenario::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

Rat Scenario::get_rat(const std::string& key) const { return parse_rat(get_str(key)); }

std::vector<Rat> Scenario::get_rat_list(const std::string& key) const {
    std::vector<Rat> out;
    for (const auto& item : split(get_str(key), ','))
        if (!item.empty()) out.push_back(parse_rat(item));
    if (out.empty()) throw UsageError("key '" + key + "' must be a nonempty comma list");
    return out;
}

std::vector<std::int64_t> Scenario::get_int_list(const std::string& key) const {
    std::vector<std::int64_t> out;
    for (const auto& item : split(get_str(key), ','))
        if (!item.empty()) {
            try {
                out.push_back(std::stoll(item));
            } catch (const std::exception&) {
                throw UsageError("key '" + key + "' must be a comma list of integers");
            }
        }
    if (out.empty()) throw UsageError("key '" + key + "' must be a nonempty comma list");
    return out;
}

bool Scenario::get_bool_or(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    std::string v = get_str(key);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw UsageError("key '" + key + "' must be true/false");
}

} // namespace ccsim::harness
