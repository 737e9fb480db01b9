#include "ccsim/man.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ccsim::man {
namespace {

constexpr std::uint64_t kMaxPieces = 1u << 22;   // byte-path guard on C(K,t)

std::uint64_t binom_u64(int n, int k) {
    BigInt b = binomial(n, k);
    if (b > BigInt(UINT64_MAX)) throw std::invalid_argument("binomial too large for byte-level run");
    return b.convert_to<std::uint64_t>();
}

std::string join_dots(const std::vector<int>& v) {
    if (v.empty()) return "-";
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(v[i]);
    }
    return s;
}

std::vector<int> parse_dots(const std::string& s) {
    std::vector<int> out;
    if (s == "-") return out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t dot = s.find('.', pos);
        if (dot == std::string::npos) dot = s.size();
        out.push_back(std::stoi(s.substr(pos, dot - pos)));
        pos = dot + 1;
    }
    return out;
}

std::string subfile_key(const std::string& tag, int seg, int file, const std::vector<int>& subset) {
    return SubfileId{file, subset}.key(tag, seg);
}

// Lex rank of a sorted subset among subsets_of_size(k, |s|).
std::uint64_t subset_rank(int k, const std::vector<int>& s) {
    std::uint64_t rank = 0;
    int t = static_cast<int>(s.size());
    int prev = -1;
    for (int i = 0; i < t; ++i) {
        for (int v = prev + 1; v < s[i]; ++v) rank += binom_u64(k - 1 - v, t - 1 - i);
        prev = s[i];
    }
    return rank;
}

// demander cache -> demanded file; enforces one user per cache
std::map<int, int> demand_map(const DemandVector& demands, const Config& cfg) {
    demands.validate(cfg.n_files);
    std::map<int, int> m;
    for (const auto& d : demands.demands) {
        if (d.user >= cfg.n_caches)
            throw std::invalid_argument("delivery: demanding cache index out of range");
        if (!m.emplace(d.user, d.file).second)
            throw std::invalid_argument("delivery: more than one user on cache " + std::to_string(d.user));
    }
    return m;
}

void seg_place(const FileLibrary& lib, int K, int t, int seg, std::size_t offset, std::size_t len,
               const std::string& tag, std::vector<CacheContent>& caches) {
    if (t == 0 || len == 0) return;
    std::uint64_t pieces = binom_u64(K, t);
    if (pieces > kMaxPieces) throw std::invalid_argument("C(K,t) too large for byte-level placement");
    if (len % pieces != 0) throw std::invalid_argument("file segment not divisible into C(K,t) pieces");
    std::size_t piece = len / pieces;
    std::uint64_t rank = 0;
    for_each_subset(K, t, [&](const std::vector<int>& s) {
        for (int j = 0; j < lib.n_files(); ++j) {
            const Bytes& w = lib.files[j];
            Bytes data(w.begin() + offset + rank * piece, w.begin() + offset + (rank + 1) * piece);
            std::string key = subfile_key(tag, seg, j, s);
            for (int c : s) caches[c].put(key, data);
        }
        ++rank;
    });
}

void seg_deliver(const FileLibrary& lib, int K, int t, int seg, std::size_t offset, std::size_t len,
                 const std::string& label_prefix, const std::map<int, int>& who, TransmissionLog& log) {
    if (t >= K || len == 0 || who.empty()) return;
    std::uint64_t pieces = binom_u64(K, t);
    std::size_t piece = len / pieces;
    auto piece_of = [&](int file, const std::vector<int>& s) {
        std::uint64_t rank = subset_rank(K, s);
        const Bytes& w = lib.files[file];
        return Bytes(w.begin() + offset + rank * piece, w.begin() + offset + (rank + 1) * piece);
    };
    for_each_subset(K, t + 1, [&](const std::vector<int>& g) {
        std::string wlist;
        Bytes payload;
        for (int c : g) {
            auto it = who.find(c);
            if (it == who.end()) continue;
            std::vector<int> rest;
            rest.reserve(g.size() - 1);
            for (int x : g)
                if (x != c) rest.push_back(x);
            xor_into(payload, piece_of(it->second, rest));
            if (!wlist.empty()) wlist += ',';
            wlist += std::to_string(c) + ":" + std::to_string(it->second);
        }
        if (wlist.empty()) return;   // no demander in this subset
        log.add(label_prefix + "s" + std::to_string(seg) + "|xor G=" + join_dots(g) + " W=" + wlist,
                std::move(payload));
    });
}

struct ParsedLabel {
    std::vector<int> g;
    std::vector<std::pair<int, int>> terms;   // (cache, file)
};

bool parse_label(const std::string& label, const std::string& expected_prefix, ParsedLabel& out) {
    if (label.rfind(expected_prefix, 0) != 0) return false;
    std::string body = label.substr(expected_prefix.size());
    if (body.rfind("xor G=", 0) != 0) return false;
    std::size_t sp = body.find(" W=");
    if (sp == std::string::npos) return false;
    out.g = parse_dots(body.substr(6, sp - 6));
    out.terms.clear();
    std::string wl = body.substr(sp + 3);
    std::size_t pos = 0;
    while (pos < wl.size()) {
        std::size_t comma = wl.find(',', pos);
        if (comma == std::string::npos) comma = wl.size();
        std::string pair = wl.substr(pos, comma - pos);
        std::size_t colon = pair.find(':');
        out.terms.emplace_back(std::stoi(pair.substr(0, colon)), std::stoi(pair.substr(colon + 1)));
        pos = comma + 1;
    }
    return true;
}

Bytes seg_decode(int K, int t, int seg, std::size_t len, const std::string& tag,
                 const std::string& label_prefix, int user, int file, const CacheContent& cache,
                 const TransmissionLog& log) {
    Bytes out(len, 0);
    if (len == 0) return out;
    std::uint64_t pieces = binom_u64(K, t);
    std::size_t piece = len / pieces;

    // pieces already in the cache
    std::uint64_t rank = 0;
    std::vector<bool> have(pieces, false);
    for_each_subset(K, t, [&](const std::vector<int>& s) {
        if (std::binary_search(s.begin(), s.end(), user)) {
            const CacheEntry& e = cache.at(subfile_key(tag, seg, file, s));
            std::copy(e.data.begin(), e.data.end(), out.begin() + rank * piece);
            have[rank] = true;
        }
        ++rank;
    });

    // pieces recovered from XOR payloads: entry for subset G with user in G
    // yields the piece indexed by G \ {user}; every other term is cached here.
    std::string seg_prefix = label_prefix + "s" + std::to_string(seg) + "|";
    for (const auto& entry : log.entries) {
        ParsedLabel pl;
        if (!parse_label(entry.label, seg_prefix, pl)) continue;
        if (!std::binary_search(pl.g.begin(), pl.g.end(), user)) continue;
        bool mine = false;
        for (auto& [c, f] : pl.terms)
            if (c == user) {
                if (f != file) throw DecodeError("log delivers a different file to this user", entry.label);
                mine = true;
            }
        if (!mine) continue;
        Bytes acc = entry.payload;
        for (auto& [c, f] : pl.terms) {
            if (c == user) continue;
            std::vector<int> rest;
            for (int x : pl.g)
                if (x != c) rest.push_back(x);
            xor_into(acc, cache.at(subfile_key(tag, seg, f, rest)).data);
        }
        std::vector<int> rest;
        for (int x : pl.g)
            if (x != user) rest.push_back(x);
        std::uint64_t r = subset_rank(K, rest);
        acc.resize(piece, 0);
        std::copy(acc.begin(), acc.end(), out.begin() + r * piece);
        have[r] = true;
    }

    for (std::uint64_t r = 0; r < pieces; ++r)
        if (!have[r]) {
            std::string id = "f" + std::to_string(file) + "^[rank " + std::to_string(r) + "]";
            throw DecodeError("user " + std::to_string(user) + " cannot recover piece " + id, id);
        }
    return out;
}

} // namespace

void Config::validate() const {
    if (n_files < 1) throw std::invalid_argument("man: need at least one file");
    if (n_caches < 1) throw std::invalid_argument("man: need at least one cache");
    if (memory < 0 || memory > n_files) throw std::invalid_argument("man: memory must be in [0, N]");
}

Rat t_exact(const Config& cfg) {
    cfg.validate();
    return Rat(cfg.n_caches) * cfg.memory / Rat(cfg.n_files);
}

bool t_integral(const Config& cfg) {
    return boost::multiprecision::denominator(t_exact(cfg)) == 1;
}

int t_of(const Config& cfg) {
    Rat t = t_exact(cfg);
    if (boost::multiprecision::denominator(t) != 1)
        throw RequiresMemorySharing("t = KM/N is not integral; use the memory-sharing entry points");
    return boost::multiprecision::numerator(t).convert_to<int>();
}

MemorySplit memory_split(const Config& cfg) {
    Rat t = t_exact(cfg);
    if (boost::multiprecision::denominator(t) == 1) {
        int ti = boost::multiprecision::numerator(t).convert_to<int>();
        return MemorySplit{ti, ti, Rat(1)};
    }
    BigInt lo = boost::multiprecision::numerator(t) / boost::multiprecision::denominator(t);
    int t_low = lo.convert_to<int>();
    return MemorySplit{t_low, t_low + 1, Rat(t_low + 1) - t};
}

std::uint64_t file_quantum(const Config& cfg) {
    MemorySplit sp = memory_split(cfg);
    if (sp.lambda == 1) return binom_u64(cfg.n_caches, sp.t_low);
    // need lambda*F / C(K,t_low) and (1-lambda)*F / C(K,t_high) integral
    Rat a = sp.lambda / Rat(binomial(cfg.n_caches, sp.t_low));
    Rat b = (Rat(1) - sp.lambda) / Rat(binomial(cfg.n_caches, sp.t_high));
    BigInt q = boost::multiprecision::lcm(boost::multiprecision::denominator(a),
                                          boost::multiprecision::denominator(b));
    if (q > BigInt(UINT64_MAX)) throw std::invalid_argument("file quantum too large");
    return q.convert_to<std::uint64_t>();
}

std::vector<CacheContent> placement(const FileLibrary& lib, const Config& cfg) {
    int t = t_of(cfg);
    if (lib.n_files() != cfg.n_files) throw std::invalid_argument("placement: library/config mismatch");
    std::uint64_t pieces = binom_u64(cfg.n_caches, t);
    if (lib.file_size % pieces != 0)
        throw std::invalid_argument("placement: F must be divisible by C(K,t)");
    std::vector<CacheContent> caches(cfg.n_caches);
    for (int c = 0; c < cfg.n_caches; ++c) {
        caches[c].cache_id = c;
        caches[c].budget_bytes = cfg.memory * Rat(lib.file_size);
    }
    seg_place(lib, cfg.n_caches, t, 0, 0, lib.file_size, "", caches);
    for (const auto& c : caches) c.check_budget();
    return caches;
}

TransmissionLog delivery(const FileLibrary& lib, const std::vector<CacheContent>& caches,
                         const DemandVector& demands, const Config& cfg) {
    if (static_cast<int>(caches.size()) != cfg.n_caches)
        throw std::invalid_argument("delivery: cache count mismatch");
    int t = t_of(cfg);
    auto who = demand_map(demands, cfg);
    TransmissionLog log;
    if (t == cfg.n_caches) return log;   // everything cached
    seg_deliver(lib, cfg.n_caches, t, 0, 0, lib.file_size, "", who, log);
    return log;
}

namespace {
// decode() has no library access; the file size is recovered from the scheme
// parameters and the cache's own piece sizes. For t == 0 the cache is empty,
// so the log's payload size pins it instead.
std::size_t infer_file_size(const CacheContent& cache, const TransmissionLog& log, int K, int t) {
    if (t > 0) {
        for (const auto& [k, e] : cache.entries)
            return e.data.size() * static_cast<std::size_t>(binom_u64(K, t));
        throw DecodeError("cache holds no pieces to size the file from", "?");
    }
    for (const auto& e : log.entries) return e.payload.size();
    return 0;
}
} // namespace

Bytes decode(int user, int file, const CacheContent& cache, const TransmissionLog& log,
             const Config& cfg) {
    int t = t_of(cfg);
    std::size_t f = infer_file_size(cache, log, cfg.n_caches, t);
    return seg_decode(cfg.n_caches, t, 0, f, "", "", user, file, cache, log);
}

// --- memory sharing ---------------------------------------------------------

SharedPlacement place_with_sharing(const FileLibrary& lib, const Config& cfg, const std::string& tag) {
    cfg.validate();
    if (lib.n_files() != cfg.n_files) throw std::invalid_argument("placement: library/config mismatch");
    std::uint64_t q = file_quantum(cfg);
    if (lib.file_size % q != 0)
        throw std::invalid_argument("place_with_sharing: F must be a multiple of file_quantum");
    MemorySplit sp = memory_split(cfg);
    Rat prefix = sp.lambda * Rat(lib.file_size);
    SharingMeta meta{cfg, sp, lib.file_size,
                     boost::multiprecision::numerator(prefix).convert_to<std::size_t>()};
    std::vector<CacheContent> caches(cfg.n_caches);
    for (int c = 0; c < cfg.n_caches; ++c) {
        caches[c].cache_id = c;
        caches[c].budget_bytes = cfg.memory * Rat(lib.file_size);
    }
    seg_place(lib, cfg.n_caches, sp.t_low, 0, 0, meta.prefix_size, tag, caches);
    if (sp.lambda != 1)
        seg_place(lib, cfg.n_caches, sp.t_high, 1, meta.prefix_size, lib.file_size - meta.prefix_size,
                  tag, caches);
    for (const auto& c : caches) c.check_budget();
    return SharedPlacement{meta, std::move(caches)};
}

TransmissionLog deliver_with_sharing(const FileLibrary& lib, const SharingMeta& meta,
                                     const DemandVector& demands, const std::string& label_prefix) {
    auto who = demand_map(demands, meta.cfg);
    TransmissionLog log;
    int K = meta.cfg.n_caches;
    seg_deliver(lib, K, meta.split.t_low, 0, 0, meta.prefix_size, label_prefix, who, log);
    if (meta.split.lambda != 1)
        seg_deliver(lib, K, meta.split.t_high, 1, meta.prefix_size, meta.file_size - meta.prefix_size,
                    label_prefix, who, log);
    return log;
}

Bytes decode_with_sharing(const SharingMeta& meta, int user, int file, const CacheContent& cache,
                          const TransmissionLog& log, const std::string& tag,
                          const std::string& label_prefix) {
    int K = meta.cfg.n_caches;
    Bytes out = seg_decode(K, meta.split.t_low, 0, meta.prefix_size, tag, label_prefix, user, file,
                           cache, log);
    if (meta.split.lambda != 1) {
        Bytes suffix = seg_decode(K, meta.split.t_high, 1, meta.file_size - meta.prefix_size, tag,
                                  label_prefix, user, file, cache, log);
        out.insert(out.end(), suffix.begin(), suffix.end());
    }
    return out;
}

RunResult run_with_sharing(const FileLibrary& lib, const Config& cfg, const DemandVector& demands) {
    FileLibrary padded = lib.padded_to_multiple(file_quantum(cfg));
    SharedPlacement placed = place_with_sharing(padded, cfg);
    TransmissionLog log = deliver_with_sharing(padded, placed.meta, demands);
    return RunResult{std::move(placed), std::move(log), padded.file_size};
}

// --- exact accounting ---------------------------------------------------------

Rat coded_delivery_rate(int n_caches, int t, int n_demanders) {
    if (t >= n_caches || n_demanders == 0) return Rat(0);
    BigInt sent = binomial(n_caches, t + 1) - binomial(n_caches - n_demanders, t + 1);
    return Rat(sent, binomial(n_caches, t));
}

Rat delivery_rate(const Config& cfg, int n_demanders) {
    MemorySplit sp = memory_split(cfg);
    Rat r = sp.lambda * coded_delivery_rate(cfg.n_caches, sp.t_low, n_demanders);
    if (sp.lambda != 1)
        r += (Rat(1) - sp.lambda) * coded_delivery_rate(cfg.n_caches, sp.t_high, n_demanders);
    return r;
}

} // namespace ccsim::man
