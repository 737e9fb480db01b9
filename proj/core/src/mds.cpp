#include "ccsim/mds.hpp"

#include <algorithm>
#include <set>

namespace ccsim::mds {

Code::Code(int n_shares, int threshold) : n_(n_shares), d_(threshold) {
    if (threshold < 1 || n_shares < threshold)
        throw std::invalid_argument("mds: need 1 <= threshold <= n_shares");
    if (n_shares > 255) throw std::invalid_argument("mds: at most 255 shares over GF(2^8)");
    // Vandermonde on distinct points 0..n-1, normalized so the top d x d block
    // is the identity: E = V * inv(V_top). Every d x d submatrix of V is
    // invertible (distinct evaluation points), and multiplying on the right by
    // a fixed invertible matrix preserves that, so any d shares decode.
    gf256::Matrix v(n_, std::vector<std::uint8_t>(d_, 0));
    for (int i = 0; i < n_; ++i) {
        std::uint8_t x = static_cast<std::uint8_t>(i);
        std::uint8_t p = 1;
        for (int j = 0; j < d_; ++j) {
            v[i][j] = p;
            p = gf256::mul(p, x);
        }
    }
    gf256::Matrix top(v.begin(), v.begin() + d_);
    enc_ = gf256::mat_mul(v, gf256::mat_inv(top));
}

std::vector<Bytes> Code::encode(const Bytes& file) const {
    if (file.size() % d_ != 0) throw std::invalid_argument("mds: file size must be divisible by threshold");
    std::size_t shard = file.size() / d_;
    std::vector<Bytes> shares(n_, Bytes(shard, 0));
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < d_; ++j) {
            std::uint8_t c = enc_[i][j];
            if (!c) continue;
            const std::uint8_t* src = file.data() + static_cast<std::size_t>(j) * shard;
            std::uint8_t* dst = shares[i].data();
            for (std::size_t b = 0; b < shard; ++b) dst[b] ^= gf256::mul(c, src[b]);
        }
    }
    return shares;
}

Bytes Code::decode(const std::vector<Bytes>& shares, const std::vector<int>& ids) const {
    if (static_cast<int>(ids.size()) < d_)
        throw InsufficientShares("mds: need " + std::to_string(d_) + " shares, got " +
                                 std::to_string(ids.size()));
    if (shares.size() != ids.size()) throw std::invalid_argument("mds: shares/ids size mismatch");
    std::set<int> uniq(ids.begin(), ids.end());
    if (uniq.size() != ids.size()) throw std::invalid_argument("mds: duplicate share ids");
    for (int id : ids)
        if (id < 0 || id >= n_) throw std::invalid_argument("mds: share id out of range");

    std::size_t shard = shares[0].size();
    for (const auto& s : shares)
        if (s.size() != shard) throw std::invalid_argument("mds: ragged share sizes");

    gf256::Matrix sub(d_, std::vector<std::uint8_t>(d_, 0));
    for (int r = 0; r < d_; ++r) sub[r] = enc_[ids[r]];
    gf256::Matrix dec = gf256::mat_inv(sub);

    Bytes file(shard * d_, 0);
    for (int j = 0; j < d_; ++j) {
        std::uint8_t* dst = file.data() + static_cast<std::size_t>(j) * shard;
        for (int r = 0; r < d_; ++r) {
            std::uint8_t c = dec[j][r];
            if (!c) continue;
            const std::uint8_t* src = shares[r].data();
            for (std::size_t b = 0; b < shard; ++b) dst[b] ^= gf256::mul(c, src[b]);
        }
    }
    return file;
}

} // namespace ccsim::mds
