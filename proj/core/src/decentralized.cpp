#include "ccsim/decentralized.hpp"

#include "ccsim/rng.hpp"

#include <algorithm>
#include <map>

namespace ccsim::decen {
namespace {

inline bool get_bit(const Bytes& b, std::uint64_t pos) {
    return (b[pos >> 3] >> (pos & 7)) & 1;
}

inline void set_bit(Bytes& b, std::uint64_t pos, bool v) {
    if (v) b[pos >> 3] |= static_cast<std::uint8_t>(1u << (pos & 7));
    else b[pos >> 3] &= static_cast<std::uint8_t>(~(1u << (pos & 7)));
}

std::string blob_key(int file) { return "bits|f" + std::to_string(file); }

struct DemandInfo {
    std::vector<int> d;             // demanding caches, ascending
    std::map<int, int> who;         // cache -> file
    std::uint16_t dmask = 0;
    std::map<int, int> slot;        // cache -> index within d
};

DemandInfo demand_info(const DemandVector& demands, const OwnershipIndex& index, int n_files) {
    demands.validate(n_files);
    DemandInfo info;
    for (const auto& dm : demands.demands) {
        if (dm.user >= index.n_caches) throw std::invalid_argument("decen: user beyond cache count");
        if (!info.who.emplace(dm.user, dm.file).second)
            throw std::invalid_argument("decen: more than one user on cache " + std::to_string(dm.user));
    }
    for (const auto& [c, f] : info.who) {
        info.slot[c] = static_cast<int>(info.d.size());
        info.d.push_back(c);
        info.dmask |= static_cast<std::uint16_t>(1u << c);
    }
    return info;
}

// Bit positions of `file` grouped by which demanding caches hold them.
// Bucket index: bit i set iff cache info.d[i] holds the position.
std::vector<std::vector<std::uint32_t>> bucket_positions(const OwnershipIndex& index,
                                                         const DemandInfo& info, int file) {
    std::vector<std::vector<std::uint32_t>> buckets(1u << info.d.size());
    const auto& own = index.owner[file];
    for (std::uint32_t p = 0; p < own.size(); ++p) {
        std::uint32_t idx = 0;
        for (std::size_t i = 0; i < info.d.size(); ++i)
            if (own[p] & (1u << info.d[i])) idx |= 1u << i;
        buckets[idx].push_back(p);
    }
    return buckets;
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

} // namespace

Placement placement(const FileLibrary& lib, int n_caches, const Rat& memory, std::uint64_t seed) {
    if (n_caches < 1 || n_caches > 16)
        throw std::invalid_argument("decen: K must be in 1..16 (bitmask index)");
    if (memory < 0 || memory > lib.n_files())
        throw std::invalid_argument("decen: memory must be in [0, N]");

    std::uint64_t total_bits = 8ULL * lib.file_size;
    Rat per_file = memory * Rat(BigInt(total_bits)) / Rat(lib.n_files());
    std::uint64_t sampled = (boost::multiprecision::numerator(per_file) /
                             boost::multiprecision::denominator(per_file))
                                .convert_to<std::uint64_t>();

    Placement out;
    out.index.n_caches = n_caches;
    out.index.file_size = lib.file_size;
    out.index.bits_per_file_per_cache = sampled;
    out.index.owner.assign(lib.n_files(), std::vector<std::uint16_t>(total_bits, 0));
    out.caches.resize(n_caches);

    Rng rng(seed);
    for (int c = 0; c < n_caches; ++c) {
        out.caches[c].cache_id = c;
        out.caches[c].budget_bytes = memory * Rat(BigInt(lib.file_size));
        for (int j = 0; j < lib.n_files(); ++j) {
            auto positions = rng.sample_without_replacement(static_cast<std::uint32_t>(total_bits),
                                                            static_cast<std::uint32_t>(sampled));
            Bytes blob((sampled + 7) / 8, 0);
            for (std::uint64_t i = 0; i < sampled; ++i) {
                std::uint32_t p = positions[i];
                out.index.owner[j][p] |= static_cast<std::uint16_t>(1u << c);
                set_bit(blob, i, get_bit(lib.files[j], p));
            }
            out.caches[c].put_bits(blob_key(j), std::move(blob), sampled);
        }
        out.caches[c].check_budget();
    }
    return out;
}

TransmissionLog delivery(const FileLibrary& lib, const OwnershipIndex& index,
                         const DemandVector& demands) {
    DemandInfo info = demand_info(demands, index, lib.n_files());
    TransmissionLog log;
    if (info.d.empty()) return log;

    // header carries the demander set; group composition is derived from it
    {
        std::string w;
        for (int c : info.d) {
            if (!w.empty()) w += ',';
            w += std::to_string(c) + ":" + std::to_string(info.who.at(c));
        }
        log.add_bits("dprofile W=" + w, Bytes{}, 0);
    }

    std::map<int, std::vector<std::vector<std::uint32_t>>> buckets;   // file -> buckets
    for (const auto& [c, f] : info.who)
        if (!buckets.count(f)) buckets[f] = bucket_positions(index, info, f);

    int nd = static_cast<int>(info.d.size());
    for (int s = nd; s >= 1; --s) {
        for_each_subset(nd, s, [&](const std::vector<int>& local) {
            // local indexes into info.d
            std::uint64_t max_bits = 0;
            for (int li : local) {
                int k = info.d[li];
                std::uint32_t a = 0;
                for (int lj : local)
                    if (lj != li) a |= 1u << lj;
                max_bits = std::max<std::uint64_t>(max_bits, buckets.at(info.who.at(k))[a].size());
            }
            if (max_bits == 0) return;
            Bytes payload((max_bits + 7) / 8, 0);
            std::vector<int> caches_in_s;
            std::string terms;
            for (int li : local) {
                int k = info.d[li];
                caches_in_s.push_back(k);
                std::uint32_t a = 0;
                for (int lj : local)
                    if (lj != li) a |= 1u << lj;
                const auto& group = buckets.at(info.who.at(k))[a];
                const Bytes& w = lib.files[info.who.at(k)];
                for (std::size_t i = 0; i < group.size(); ++i)
                    if (get_bit(w, group[i])) set_bit(payload, i, !get_bit(payload, i));
                if (!terms.empty()) terms += ',';
                terms += std::to_string(k) + ":" + std::to_string(info.who.at(k));
            }
            log.add_bits("dxor S=" + join_dots(caches_in_s) + " T=" + terms, std::move(payload),
                         max_bits);
        });
    }
    return log;
}

Bytes decode(int user, int file, const CacheContent& cache, const OwnershipIndex& index,
             const TransmissionLog& log) {
    // recover the demander set from the header
    DemandVector demands;
    for (const auto& e : log.entries) {
        if (e.label.rfind("dprofile W=", 0) != 0) continue;
        std::string w = e.label.substr(11);
        std::size_t pos = 0;
        while (pos < w.size()) {
            std::size_t comma = w.find(',', pos);
            if (comma == std::string::npos) comma = w.size();
            std::string pair = w.substr(pos, comma - pos);
            std::size_t colon = pair.find(':');
            demands.demands.push_back(
                Demand{std::stoi(pair.substr(0, colon)), std::stoi(pair.substr(colon + 1))});
            pos = comma + 1;
        }
        break;
    }
    DemandInfo info = demand_info(demands, index, static_cast<int>(index.owner.size()));
    if (!info.who.count(user) || info.who.at(user) != file)
        throw DecodeError("log was not produced for this (user, file) demand", blob_key(file));

    std::uint64_t total_bits = 8ULL * index.file_size;

    // expand this user's cached values into full-width bit arrays per file
    std::map<int, Bytes> cached_values;   // file -> 8F-bit array, zeros where not cached
    std::map<int, std::vector<std::vector<std::uint32_t>>> buckets;
    for (const auto& [c, f] : info.who) {
        if (!buckets.count(f)) buckets[f] = bucket_positions(index, info, f);
        if (cached_values.count(f)) continue;
        const CacheEntry& blob = cache.at(blob_key(f));
        Bytes full(index.file_size, 0);
        std::uint64_t rank = 0;
        const auto& own = index.owner[f];
        for (std::uint32_t p = 0; p < own.size(); ++p) {
            if (own[p] & (1u << user)) {
                set_bit(full, p, get_bit(blob.data, rank));
                ++rank;
            }
        }
        if (rank != blob.bits)
            throw DecodeError("cache blob size disagrees with ownership index", blob_key(f));
        cached_values[f] = std::move(full);
    }

    Bytes out(index.file_size, 0);
    std::vector<bool> have(total_bits, false);

    // bits this user cached itself
    {
        const auto& own = index.owner[file];
        const Bytes& vals = cached_values.at(file);
        for (std::uint32_t p = 0; p < own.size(); ++p) {
            if (own[p] & (1u << user)) {
                set_bit(out, p, get_bit(vals, p));
                have[p] = true;
            }
        }
    }

    // bits recovered from XOR rounds containing this user
    for (const auto& e : log.entries) {
        if (e.label.rfind("dxor S=", 0) != 0) continue;
        std::size_t tpos = e.label.find(" T=");
        std::string sdots = e.label.substr(7, tpos - 7);
        std::vector<int> caches_in_s;
        {
            std::size_t pos = 0;
            while (pos < sdots.size()) {
                std::size_t dot = sdots.find('.', pos);
                if (dot == std::string::npos) dot = sdots.size();
                caches_in_s.push_back(std::stoi(sdots.substr(pos, dot - pos)));
                pos = dot + 1;
            }
        }
        if (!std::binary_search(caches_in_s.begin(), caches_in_s.end(), user)) continue;

        Bytes acc = e.payload;
        acc.resize((e.bits + 7) / 8, 0);
        // cancel every other user's group with values from this user's cache
        std::uint32_t my_groupmask = 0;
        for (int c : caches_in_s)
            if (c != user) my_groupmask |= 1u << info.slot.at(c);
        for (int c : caches_in_s) {
            if (c == user) continue;
            int f_c = info.who.at(c);
            std::uint32_t a = 0;
            for (int c2 : caches_in_s)
                if (c2 != c) a |= 1u << info.slot.at(c2);
            const auto& group = buckets.at(f_c)[a];
            // every position in this group is cached at `user` (user is in S\{c})
            const Bytes& values = cached_values.at(f_c);
            for (std::size_t i = 0; i < group.size(); ++i)
                if (get_bit(values, group[i])) set_bit(acc, i, !get_bit(acc, i));
        }
        // what remains is this user's group for S\{user}
        const auto& mine = buckets.at(file)[my_groupmask];
        for (std::size_t i = 0; i < mine.size(); ++i) {
            set_bit(out, mine[i], get_bit(acc, i));
            have[mine[i]] = true;
        }
    }

    for (std::uint64_t p = 0; p < total_bits; ++p)
        if (!have[p])
            throw DecodeError("user " + std::to_string(user) + " missing bit " + std::to_string(p) +
                                  " of file " + std::to_string(file),
                              blob_key(file));
    return out;
}

} // namespace ccsim::decen
