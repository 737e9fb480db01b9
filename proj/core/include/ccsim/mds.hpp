#pragma once

#include "ccsim/core.hpp"
#include "ccsim/gf256.hpp"

namespace ccsim::mds {

// Systematic (n_shares, threshold) erasure code over GF(2^8): the file splits
// into `threshold` shards of F/threshold bytes; shares 0..threshold-1 are the
// shards themselves and the rest are Vandermonde-derived combinations. Any
// `threshold` shares reconstruct the file.
class Code {
public:
    Code(int n_shares, int threshold);

    int n_shares() const { return n_; }
    int threshold() const { return d_; }

    // file.size() must be divisible by threshold (pad upstream).
    std::vector<Bytes> encode(const Bytes& file) const;

    // Any threshold distinct shares, identified by their indices.
    Bytes decode(const std::vector<Bytes>& shares, const std::vector<int>& ids) const;

    // Row of the encoding matrix applied to the shards to produce share i.
    const std::vector<std::uint8_t>& row(int share) const { return enc_[share]; }

private:
    int n_;
    int d_;
    gf256::Matrix enc_;   // n x d, top d rows = identity, any d rows invertible
};

} // namespace ccsim::mds
