#include "ccsim/multiaccess.hpp"

namespace ccsim::ma {
namespace {

std::string share_key(int file) { return "mds|f" + std::to_string(file); }

// Mixed-regime file split: lambda * (N/2d) + (1-lambda) * (N/d) = M.
Rat mixed_lambda(int n, const CyclicAccess& a, const Rat& m) {
    return Rat(2) * (Rat(n) - Rat(a.window) * m) / Rat(n);
}

man::Config man_config(int n, const CyclicAccess& a, const Rat& m, Regime regime) {
    if (regime == Regime::Mixed) return man::Config{n, a.n_caches, Rat(n, 2 * a.window)};
    return man::Config{n, a.n_caches, m};
}

Regime regime_of(int n, const CyclicAccess& a, const Rat& m) {
    if (a.window == 1) return Regime::SingleCache;   // the window adds nothing
    Rat dm = Rat(a.window) * m;
    if (dm >= Rat(n)) return Regime::FullCoverage;
    if (dm * 2 <= Rat(n)) return Regime::SingleCache;
    return Regime::Mixed;
}

} // namespace

void CyclicAccess::validate() const {
    if (n_caches < 1) throw std::invalid_argument("ma: need at least one cache");
    if (window < 1 || window > n_caches) throw std::invalid_argument("ma: window must be in 1..K");
}

std::vector<int> window_of(const CyclicAccess& a, int user) {
    a.validate();
    if (user < 0 || user >= a.n_caches) throw std::invalid_argument("ma: user out of range");
    std::vector<int> w(a.window);
    for (int j = 0; j < a.window; ++j) w[j] = (user + j) % a.n_caches;
    return w;
}

std::uint64_t file_quantum(int n_files, const CyclicAccess& access, const Rat& memory) {
    access.validate();
    Regime r = regime_of(n_files, access, memory);
    switch (r) {
    case Regime::SingleCache:
        return man::file_quantum(man_config(n_files, access, memory, r));
    case Regime::FullCoverage:
        return access.window;
    case Regime::Mixed: {
        Rat lambda = mixed_lambda(n_files, access, memory);
        std::uint64_t man_q = man::file_quantum(man_config(n_files, access, memory, r));
        Rat a = lambda / Rat(BigInt(man_q));
        Rat b = (Rat(1) - lambda) / Rat(access.window);
        BigInt q = boost::multiprecision::lcm(boost::multiprecision::denominator(a),
                                              boost::multiprecision::denominator(b));
        return q.convert_to<std::uint64_t>();
    }
    }
    throw std::logic_error("unreachable");
}

Placement placement(const FileLibrary& lib, const CyclicAccess& access, const Rat& memory) {
    access.validate();
    if (memory < 0) throw std::invalid_argument("ma: memory must be >= 0");
    Rat m = memory > lib.n_files() ? Rat(lib.n_files()) : memory;   // extra memory is idle
    int n = lib.n_files();
    Regime regime = regime_of(n, access, m);
    std::uint64_t q = file_quantum(n, access, m);
    if (lib.file_size % q != 0)
        throw std::invalid_argument("ma placement: F must be a multiple of file_quantum");

    Meta meta;
    meta.access = access;
    meta.n_files = n;
    meta.memory = memory;
    meta.regime = regime;
    meta.file_size = lib.file_size;

    std::vector<CacheContent> caches(access.n_caches);
    for (int c = 0; c < access.n_caches; ++c) {
        caches[c].cache_id = c;
        caches[c].budget_bytes = memory * Rat(BigInt(lib.file_size));
    }

    if (regime == Regime::SingleCache) {
        meta.prefix_size = lib.file_size;
        meta.has_man = true;
        auto placed = man::place_with_sharing(lib, man_config(n, access, m, regime), "");
        meta.man_meta = placed.meta;
        for (int c = 0; c < access.n_caches; ++c)
            for (auto& [k, e] : placed.caches[c].entries)
                caches[c].put_bits(k, e.data, e.bits);
    } else if (regime == Regime::FullCoverage) {
        meta.prefix_size = 0;
        mds::Code code(access.n_caches, access.window);
        for (int j = 0; j < n; ++j) {
            auto shares = code.encode(lib.files[j]);
            for (int c = 0; c < access.n_caches; ++c) caches[c].put(share_key(j), std::move(shares[c]));
        }
    } else {
        Rat lambda = mixed_lambda(n, access, m);
        Rat prefix = lambda * Rat(BigInt(lib.file_size));
        meta.prefix_size = boost::multiprecision::numerator(prefix).convert_to<std::size_t>();
        meta.has_man = true;
        // prefix side: plain scheme pinned at memory N/(2d)
        FileLibrary prefix_lib;
        prefix_lib.file_size = meta.prefix_size;
        prefix_lib.files.reserve(n);
        for (const auto& w : lib.files)
            prefix_lib.files.emplace_back(w.begin(), w.begin() + meta.prefix_size);
        auto placed = man::place_with_sharing(prefix_lib, man_config(n, access, m, regime), "A|");
        meta.man_meta = placed.meta;
        for (int c = 0; c < access.n_caches; ++c)
            for (auto& [k, e] : placed.caches[c].entries)
                caches[c].put_bits(k, e.data, e.bits);
        // suffix side: one share of every file per cache
        mds::Code code(access.n_caches, access.window);
        for (int j = 0; j < n; ++j) {
            Bytes suffix(lib.files[j].begin() + meta.prefix_size, lib.files[j].end());
            auto shares = code.encode(suffix);
            for (int c = 0; c < access.n_caches; ++c) caches[c].put(share_key(j), std::move(shares[c]));
        }
    }
    for (const auto& c : caches) c.check_budget();
    return Placement{std::move(meta), std::move(caches)};
}

TransmissionLog delivery(const FileLibrary& lib, const Meta& meta, const DemandVector& demands) {
    demands.validate(meta.n_files);
    TransmissionLog log;
    if (!meta.has_man) return log;   // full coverage: nothing to send
    if (meta.regime == Regime::SingleCache)
        return man::deliver_with_sharing(lib, meta.man_meta, demands, "");
    FileLibrary prefix_lib;
    prefix_lib.file_size = meta.prefix_size;
    prefix_lib.files.reserve(lib.n_files());
    for (const auto& w : lib.files)
        prefix_lib.files.emplace_back(w.begin(), w.begin() + meta.prefix_size);
    return man::deliver_with_sharing(prefix_lib, meta.man_meta, demands, "A|");
}

Bytes decode(const Meta& meta, int user, int file,
             const std::vector<const CacheContent*>& window_caches, const TransmissionLog& log) {
    if (static_cast<int>(window_caches.size()) != meta.access.window)
        throw std::invalid_argument("ma decode: expected exactly the d window caches");
    Bytes out;
    if (meta.has_man) {
        // window[0] is the user's own cache
        std::string tag = meta.regime == Regime::SingleCache ? "" : "A|";
        out = man::decode_with_sharing(meta.man_meta, user, file, *window_caches[0], log, tag, tag);
    }
    if (meta.regime != Regime::SingleCache) {
        mds::Code code(meta.access.n_caches, meta.access.window);
        std::vector<Bytes> shares;
        std::vector<int> ids;
        auto win = window_of(meta.access, user);
        for (int j = 0; j < meta.access.window; ++j) {
            shares.push_back(window_caches[j]->at(share_key(file)).data);
            ids.push_back(win[j]);
        }
        Bytes suffix = code.decode(shares, ids);
        out.insert(out.end(), suffix.begin(), suffix.end());
    }
    if (out.size() != meta.file_size)
        throw DecodeError("ma decode produced a wrong-size file", share_key(file));
    return out;
}

RunResult run(const FileLibrary& lib, const CyclicAccess& access, const Rat& memory,
              const DemandVector& demands) {
    Rat m = memory > lib.n_files() ? Rat(lib.n_files()) : memory;
    FileLibrary padded = lib.padded_to_multiple(file_quantum(lib.n_files(), access, m));
    Placement placed = placement(padded, access, memory);
    TransmissionLog log = delivery(padded, placed.meta, demands);
    return RunResult{std::move(placed), std::move(log), padded.file_size};
}

Rat construction_rate(int n_files, const CyclicAccess& access, const Rat& memory) {
    access.validate();
    Rat m = memory > n_files ? Rat(n_files) : memory;
    switch (regime_of(n_files, access, m)) {
    case Regime::FullCoverage:
        return Rat(0);
    case Regime::SingleCache:
        return man::delivery_rate(man::Config{n_files, access.n_caches, m}, access.n_caches);
    case Regime::Mixed: {
        Rat lambda = mixed_lambda(n_files, access, m);
        man::Config cfg{n_files, access.n_caches, Rat(n_files, 2 * access.window)};
        return lambda * man::delivery_rate(cfg, access.n_caches);
    }
    }
    throw std::logic_error("unreachable");
}

} // namespace ccsim::ma
