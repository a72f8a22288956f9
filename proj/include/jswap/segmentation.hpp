/*
 * Copyright (C) 2026 The jswap Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * Splitting a secret scalar into m little-endian l-bit limbs,
 *
 *     x = sum_k f_k * limb_k,   f_k = 2^{(k-1) l},  k = 1..m,
 *
 * and putting it back together. Limbs are stored 0-based: limbs[0] is
 * segment 1 with weight f_1 = 1.
 *
 * Secrets carry a zero most significant bit, so a secret has at most
 * q_bits - 1 significant bits. The top limb is range-limited to whatever
 * is left of that width after the m - 1 full limbs; with l dividing q_bits
 * that is l - 1 bits. Under this bound every limb vector passing the range
 * checks sums to less than 2^{q_bits - 1} <= q, so no wrap-around mod q can
 * hide a biased limb.
 */

#ifndef JSWAP_SEGMENTATION_HPP
#define JSWAP_SEGMENTATION_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "jswap/group/concepts.hpp"

namespace jswap {

struct SegmentationParams {
    std::size_t l = 0;       // bits per segment
    std::size_t m = 0;       // segment count
    std::size_t q_bits = 0;  // bit length of the group order

    /// Throws InvalidArgument unless 1 <= l <= 32 and q_bits >= 2.
    static SegmentationParams make(std::size_t q_bits, std::size_t l) {
        if (l == 0 || l > 32) throw Error(Errc::InvalidArgument, "segment bits must be in [1, 32]");
        if (q_bits < 2) throw Error(Errc::InvalidArgument, "group order too small");
        const std::size_t secret = q_bits - 1;
        return {l, (secret + l - 1) / l, q_bits};
    }

    template <PrimeOrderGroup G>
    static SegmentationParams for_group(std::size_t l) {
        return make(G::order_bits(), l);
    }

    /// Maximum significant bits of a segmentable secret.
    std::size_t secret_bits() const noexcept { return q_bits - 1; }

    /// Range-proof width of 0-based segment index i.
    std::size_t bits_of(std::size_t i) const noexcept {
        return i + 1 < m ? l : secret_bits() - (m - 1) * l;
    }

    std::size_t top_bits() const noexcept { return bits_of(m - 1); }
    std::uint64_t limb_bound() const noexcept { return std::uint64_t{1} << l; }
    std::uint64_t msb_bound() const noexcept { return std::uint64_t{1} << top_bits(); }

    /// f_{i+1} = 2^{i l} as a scalar.
    template <PrimeOrderGroup G>
    typename G::Scalar weight(std::size_t i) const {
        using S = typename G::Scalar;
        const S base = S::from_u64(limb_bound());
        S w = S::from_u64(1);
        for (std::size_t k = 0; k < i; ++k) w = w * base;
        return w;
    }

    template <PrimeOrderGroup G>
    std::vector<typename G::Scalar> weights() const {
        using S = typename G::Scalar;
        std::vector<S> out;
        out.reserve(m);
        const S base = S::from_u64(limb_bound());
        S w = S::from_u64(1);
        for (std::size_t k = 0; k < m; ++k) {
            out.push_back(w);
            w = w * base;
        }
        return out;
    }

    friend bool operator==(const SegmentationParams&, const SegmentationParams&) = default;
};

struct Segments {
    std::vector<std::uint64_t> limbs;

    friend bool operator==(const Segments&, const Segments&) = default;
};

/// Segment a big-endian integer. Throws SecretOutOfRange if it has more than
/// params.secret_bits() significant bits.
inline Segments segment_bytes(ByteView be, const SegmentationParams& params) {
    if (bit_length(be) > params.secret_bits()) throw Error(Errc::SecretOutOfRange, "most significant bit must be zero");
    auto bit = [&](std::size_t i) -> std::uint64_t {
        if (i / 8 >= be.size()) return 0;
        return (be[be.size() - 1 - i / 8] >> (i % 8)) & 1u;
    };
    Segments out;
    out.limbs.resize(params.m, 0);
    for (std::size_t k = 0; k < params.m; ++k) {
        std::uint64_t v = 0;
        for (std::size_t b = 0; b < params.l; ++b) v |= bit(k * params.l + b) << b;
        out.limbs[k] = v;
    }
    return out;
}

template <PrimeOrderGroup G>
Segments segment(const typename G::Scalar& x, const SegmentationParams& params) {
    return segment_bytes(x.encode(), params);
}

/// Weighted sum mod q. Throws LimbOutOfRange if the limb count is wrong or
/// any limb exceeds its segment width.
template <PrimeOrderGroup G>
typename G::Scalar reconstruct(const Segments& segs, const SegmentationParams& params) {
    using S = typename G::Scalar;
    if (segs.limbs.size() != params.m) throw Error(Errc::LimbOutOfRange, "wrong limb count");
    const auto f = params.weights<G>();
    S x = S::from_u64(0);
    for (std::size_t k = 0; k < params.m; ++k) {
        if (segs.limbs[k] >= params.limb_bound()) throw Error(Errc::LimbOutOfRange, "limb exceeds 2^l");
        x = x + f[k] * S::from_u64(segs.limbs[k]);
    }
    return x;
}

/// Uniform secret with the most significant bit cleared.
template <PrimeOrderGroup G, std::uniform_random_bit_generator Rng>
typename G::Scalar random_segmentable_secret(Rng& rng) {
    return random_scalar_below_bits<G>(rng, G::order_bits() - 1);
}

} // namespace jswap

#endif // JSWAP_SEGMENTATION_HPP
