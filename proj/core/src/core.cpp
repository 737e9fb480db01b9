#include "ccsim/core.hpp"

#include "ccsim/rng.hpp"

#include <algorithm>
#include <sstream>

namespace ccsim {

// ---------------------------------------------------------------------------
// rational helpers
// ---------------------------------------------------------------------------

BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

double to_double(const Rat& r) { return boost::multiprecision::numerator(r).convert_to<double>() / boost::multiprecision::denominator(r).convert_to<double>(); }

std::string rat_to_fraction(const Rat& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

std::string rat_to_decimal(const Rat& r, int sig) {
    if (r == 0) return "0";
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    bool neg = num < 0;
    if (neg) num = -num;

    // exponent = floor(log10(num/den)), found by digit counts plus one compare
    long exp10 = static_cast<long>(num.str().size()) - static_cast<long>(den.str().size());
    auto pow10 = [](long e) { BigInt p = 1; for (long i = 0; i < e; ++i) p *= 10; return p; };
    if (exp10 >= 0) {
        if (num / pow10(exp10) < den) --exp10;
    } else {
        if (num * pow10(-exp10) < den) --exp10;
    }

    // round(num/den * 10^(sig-1-exp10)) gives `sig` digits
    long shift = sig - 1 - exp10;
    BigInt scaled_num = num, scaled_den = den;
    if (shift >= 0) scaled_num *= pow10(shift);
    else scaled_den *= pow10(-shift);
    BigInt digits = (2 * scaled_num + scaled_den) / (2 * scaled_den);   // half-up
    std::string ds = digits.str();
    if (static_cast<int>(ds.size()) > sig) {   // rounding carried into a new digit
        ds.pop_back();
        ++exp10;
    }
    while (ds.size() > 1 && ds.back() == '0' && static_cast<long>(ds.size()) - 1 > exp10)
        ds.pop_back();

    std::string out;
    if (exp10 >= 0) {
        if (static_cast<long>(ds.size()) > exp10 + 1) {
            out = ds.substr(0, exp10 + 1) + "." + ds.substr(exp10 + 1);
        } else {
            out = ds + std::string(exp10 + 1 - ds.size(), '0');
        }
    } else {
        out = "0." + std::string(-exp10 - 1, '0') + ds;
    }
    return neg ? "-" + out : out;
}

std::string double_to_string(double v, int sig) {
    std::ostringstream os;
    os.precision(sig);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// subsets
// ---------------------------------------------------------------------------

std::vector<std::vector<int>> subsets_of_size(int k, int t) {
    if (t < 0 || k < 0 || t > k) throw std::invalid_argument("subsets_of_size: need 0 <= t <= k");
    std::vector<std::vector<int>> out;
    out.reserve(static_cast<std::size_t>(binomial(k, t).convert_to<std::uint64_t>()));
    for_each_subset(k, t, [&](const std::vector<int>& s) { out.push_back(s); });
    return out;
}

// ---------------------------------------------------------------------------
// xor
// ---------------------------------------------------------------------------

void xor_into(Bytes& acc, const Bytes& part) {
    if (part.size() > acc.size()) acc.resize(part.size(), 0);
    for (std::size_t i = 0; i < part.size(); ++i) acc[i] ^= part[i];
}

Bytes xor_bytes(const std::vector<Bytes>& parts) {
    if (parts.empty()) throw std::invalid_argument("xor_bytes: empty input list");
    Bytes acc;
    for (const auto& p : parts) xor_into(acc, p);
    return acc;
}

// ---------------------------------------------------------------------------
// FileLibrary
// ---------------------------------------------------------------------------

FileLibrary FileLibrary::from_files(std::vector<Bytes> files) {
    if (files.empty()) throw std::invalid_argument("FileLibrary: need at least one file");
    std::size_t f = files.front().size();
    if (f < 1) throw std::invalid_argument("FileLibrary: file size must be >= 1");
    for (const auto& w : files)
        if (w.size() != f) throw std::invalid_argument("FileLibrary: all files must have identical length");
    return FileLibrary{f, std::move(files)};
}

FileLibrary FileLibrary::random(int n_files, std::size_t file_size, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Bytes> files(n_files);
    for (auto& w : files) {
        w.resize(file_size);
        for (auto& b : w) b = rng.byte();
    }
    return from_files(std::move(files));
}

FileLibrary FileLibrary::padded_to_multiple(std::size_t quantum) const {
    if (quantum == 0) throw std::invalid_argument("padded_to_multiple: quantum must be >= 1");
    std::size_t padded = ((file_size + quantum - 1) / quantum) * quantum;
    if (padded == 0) padded = quantum;
    FileLibrary out;
    out.file_size = padded;
    out.files = files;
    for (auto& w : out.files) w.resize(padded, 0);
    return out;
}

// ---------------------------------------------------------------------------
// SubfileId
// ---------------------------------------------------------------------------

std::string SubfileId::key(const std::string& tag, int segment) const {
    std::string s = tag + "s" + std::to_string(segment) + "|f" + std::to_string(file) + "^";
    if (subset.empty()) return s + "-";
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(subset[i]);
    }
    return s;
}

// ---------------------------------------------------------------------------
// DemandVector
// ---------------------------------------------------------------------------

void DemandVector::validate(int n_files) const {
    for (const auto& d : demands) {
        if (d.file < 0 || d.file >= n_files)
            throw std::invalid_argument("DemandVector: file index out of range");
        if (d.user < 0) throw std::invalid_argument("DemandVector: negative user index");
    }
}

std::vector<int> DemandVector::users() const {
    std::vector<int> out;
    out.reserve(demands.size());
    for (const auto& d : demands) out.push_back(d.user);
    return out;
}

std::vector<int> DemandVector::distinct_files() const {
    std::vector<int> out;
    out.reserve(demands.size());
    for (const auto& d : demands) out.push_back(d.file);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// CacheContent
// ---------------------------------------------------------------------------

void CacheContent::put(const std::string& key, Bytes data) {
    std::uint64_t bits = 8ULL * data.size();
    put_bits(key, std::move(data), bits);
}

void CacheContent::put_bits(const std::string& key, Bytes data, std::uint64_t bits) {
    auto [it, inserted] = entries.emplace(key, CacheEntry{std::move(data), bits});
    if (!inserted) throw std::invalid_argument("CacheContent: duplicate entry key " + key);
}

const CacheEntry& CacheContent::at(const std::string& key) const {
    auto it = entries.find(key);
    if (it == entries.end())
        throw DecodeError("cache " + std::to_string(cache_id) + " is missing entry " + key, key);
    return it->second;
}

std::uint64_t CacheContent::used_bits() const {
    std::uint64_t total = 0;
    for (const auto& [k, e] : entries) total += e.bits;
    return total;
}

void CacheContent::check_budget() const {
    if (used_bytes() > budget_bytes)
        throw std::logic_error("cache " + std::to_string(cache_id) + " exceeds its byte budget: used " +
                               rat_to_fraction(used_bytes()) + " of " + rat_to_fraction(budget_bytes));
}

// ---------------------------------------------------------------------------
// TransmissionLog
// ---------------------------------------------------------------------------

void TransmissionLog::add(std::string label, Bytes payload) {
    std::uint64_t bits = 8ULL * payload.size();
    entries.push_back(LogEntry{std::move(label), std::move(payload), bits});
}

void TransmissionLog::add_bits(std::string label, Bytes payload, std::uint64_t bits) {
    entries.push_back(LogEntry{std::move(label), std::move(payload), bits});
}

void TransmissionLog::append(const TransmissionLog& other) {
    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

std::uint64_t TransmissionLog::total_bits() const {
    std::uint64_t total = 0;
    for (const auto& e : entries) total += e.bits;
    return total;
}

Rat TransmissionLog::rate(std::size_t file_size) const {
    if (file_size < 1) throw std::invalid_argument("rate: file_size must be >= 1");
    return Rat(BigInt(total_bits()), BigInt(8) * BigInt(file_size));
}

Rat measured_rate(const TransmissionLog& log, std::size_t file_size) { return log.rate(file_size); }

} // namespace ccsim
