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
 * Range proofs for Pedersen commitments C = vG + rY, v in [0, 2^n).
 *
 * Any type satisfying RangeProofSystem can back the juggling setup. The
 * provided backend decomposes v into bits: C = sum_i 2^i B_i with
 * B_i = b_i G + rho_i Y, and each B_i carries a CDS OR-proof that it opens
 * to 0 or to 1 (a Schnorr proof of knowledge of rho_i in base Y for either
 * B_i or B_i - G). The challenge is split additively, e = e0 + e1 mod q;
 * the prover simulates the false branch and answers the true one.
 *
 * Wire format: n (u8) || B_1..B_n || per bit (a0 || a1 || e0 || e1 || z0 || z1).
 */

#ifndef JSWAP_RANGEPROOF_HPP
#define JSWAP_RANGEPROOF_HPP

#include <concepts>
#include <span>
#include <vector>

#include "jswap/fiat_shamir.hpp"
#include "jswap/group/concepts.hpp"

namespace jswap::range {

inline constexpr std::string_view range_tag = "JUGGLE/RANGE/v1";
inline constexpr std::size_t max_bits = 64;

/// Commitment C = vG + rY claimed to hold v < 2^n_bits.
template <PrimeOrderGroup G>
struct Statement {
    typename G::Point commitment;
    typename G::Point Y;
    std::size_t n_bits;
};

template <class RP, class G>
concept RangeProofSystem = PrimeOrderGroup<G> && requires(const typename G::Scalar v, const typename G::Point Y,
                                                          std::size_t n, Drbg rng, const Statement<G> st,
                                                          const typename RP::Proof proof, ByteView bytes) {
    { RP::prove(v, v, Y, n, rng) } -> std::same_as<typename RP::Proof>;
    { RP::verify(st, proof) } -> std::same_as<bool>;
    { proof.encode() } -> std::same_as<Bytes>;
    { RP::Proof::decode(bytes) } -> std::same_as<typename RP::Proof>;
};

template <PrimeOrderGroup G>
struct BitOrProof {
    using Point = typename G::Point;
    using Scalar = typename G::Scalar;

    Point a0, a1;
    Scalar e0, e1, z0, z1;

    static constexpr std::size_t encoded_size() { return 2 * Point::encoded_size() + 4 * Scalar::encoded_size(); }
    Bytes encode() const { return ByteWriter().put(a0).put(a1).put(e0).put(e1).put(z0).put(z1).bytes(); }
    static BitOrProof decode(ByteView b) {
        ByteReader r(b);
        BitOrProof p{r.get<Point>(), r.get<Point>(), r.get<Scalar>(), r.get<Scalar>(), r.get<Scalar>(),
                     r.get<Scalar>()};
        r.expect_done();
        return p;
    }
};

template <PrimeOrderGroup G>
struct BitRangeProof {
    using Point = typename G::Point;

    std::vector<Point> bit_commitments;
    std::vector<BitOrProof<G>> bit_proofs;

    Bytes encode() const {
        ByteWriter w;
        w.u8(static_cast<std::uint8_t>(bit_commitments.size()));
        for (const auto& b : bit_commitments) w.put(b);
        for (const auto& p : bit_proofs) w.put(p);
        return std::move(w).bytes();
    }
    static BitRangeProof decode(ByteView b) {
        ByteReader r(b);
        std::size_t n = r.u8();
        if (n == 0 || n > max_bits) throw Error(Errc::MalformedFrame, "range proof bit count");
        BitRangeProof p;
        p.bit_commitments.reserve(n);
        p.bit_proofs.reserve(n);
        for (std::size_t i = 0; i < n; ++i) p.bit_commitments.push_back(r.get<Point>());
        for (std::size_t i = 0; i < n; ++i) p.bit_proofs.push_back(r.get<BitOrProof<G>>());
        r.expect_done();
        return p;
    }
};

/// An opening (value, rho) of one bit commitment B = value G + rho Y.
template <PrimeOrderGroup G>
struct BitOpening {
    std::uint64_t value;
    typename G::Scalar rho;
};

template <PrimeOrderGroup G>
class BitDecomposition {
public:
    using Scalar = typename G::Scalar;
    using Point = typename G::Point;
    using Proof = BitRangeProof<G>;

    /// Throws ValueOutOfRange unless v < 2^n_bits, InvalidArgument unless
    /// 1 <= n_bits <= 64.
    template <std::uniform_random_bit_generator Rng>
    static Proof prove(const Scalar& v, const Scalar& r, const Point& Y, std::size_t n_bits, Rng& rng) {
        check_width(n_bits);
        auto be = v.encode();
        if (bit_length(be) > n_bits) throw Error(Errc::ValueOutOfRange, "value does not fit in range");

        // rho_0 absorbs the slack so that sum_i 2^i rho_i = r.
        std::vector<BitOpening<G>> openings(n_bits, BitOpening<G>{0, Scalar::from_u64(0)});
        Scalar weighted = Scalar::from_u64(0);
        Scalar pow = Scalar::from_u64(1);
        const Scalar two = Scalar::from_u64(2);
        for (std::size_t i = 0; i < n_bits; ++i) {
            openings[i].value = (be[be.size() - 1 - i / 8] >> (i % 8)) & 1u;
            if (i > 0) {
                openings[i].rho = random_scalar<G>(rng);
                weighted = weighted + pow * openings[i].rho;
            }
            pow = pow * two;
        }
        openings[0].rho = r - weighted;
        const Point commitment = mul_base<G>(v) + r * Y;
        return prove_openings({commitment, Y, n_bits}, openings, rng);
    }

    /// Builds bit commitments from arbitrary openings and proves each with
    /// the OR-proof, taking branch 1 for any nonzero value. Honest callers go
    /// through prove(); this entry point lets tests assemble malformed proofs.
    template <std::uniform_random_bit_generator Rng>
    static Proof prove_openings(const Statement<G>& st, std::span<const BitOpening<G>> openings, Rng& rng) {
        check_width(openings.size());
        Proof proof;
        proof.bit_commitments.reserve(openings.size());
        for (const auto& o : openings) {
            proof.bit_commitments.push_back(mul_base<G>(Scalar::from_u64(o.value)) + o.rho * st.Y);
        }
        const auto prefix = statement_digest(st, proof.bit_commitments);
        const Point gen = G::generator();
        for (std::size_t i = 0; i < openings.size(); ++i) {
            const Point& B = proof.bit_commitments[i];
            const bool one = openings[i].value != 0;
            // Target of each branch: B - jG = rho Y.
            const Point target0 = B;
            const Point target1 = B - gen;

            BitOrProof<G> p;
            const Scalar w = random_scalar<G>(rng);
            const Scalar e_sim = random_scalar<G>(rng);
            const Scalar z_sim = random_scalar<G>(rng);
            if (one) {
                p.a0 = z_sim * st.Y - e_sim * target0;
                p.a1 = w * st.Y;
            } else {
                p.a0 = w * st.Y;
                p.a1 = z_sim * st.Y - e_sim * target1;
            }
            const Scalar e = bit_challenge(prefix, i, p.a0, p.a1);
            const Scalar e_real = e - e_sim;
            const Scalar z_real = w + e_real * openings[i].rho;
            if (one) {
                p.e0 = e_sim;
                p.z0 = z_sim;
                p.e1 = e_real;
                p.z1 = z_real;
            } else {
                p.e0 = e_real;
                p.z0 = z_real;
                p.e1 = e_sim;
                p.z1 = z_sim;
            }
            proof.bit_proofs.push_back(std::move(p));
        }
        return proof;
    }

    /// True iff the bit commitments sum (2^i weighted) to the commitment and
    /// every OR-proof holds. Never throws.
    static bool verify(const Statement<G>& st, const Proof& proof) noexcept {
        try {
            const std::size_t n = st.n_bits;
            if (n == 0 || n > max_bits) return false;
            if (proof.bit_commitments.size() != n || proof.bit_proofs.size() != n) return false;

            Point sum = G::identity();
            Scalar pow = Scalar::from_u64(1);
            const Scalar two = Scalar::from_u64(2);
            for (std::size_t i = 0; i < n; ++i) {
                sum = sum + pow * proof.bit_commitments[i];
                pow = pow * two;
            }
            if (sum != st.commitment) return false;

            const auto prefix = statement_digest(st, proof.bit_commitments);
            const Point gen = G::generator();
            for (std::size_t i = 0; i < n; ++i) {
                const Point& B = proof.bit_commitments[i];
                const auto& p = proof.bit_proofs[i];
                if (p.e0 + p.e1 != bit_challenge(prefix, i, p.a0, p.a1)) return false;
                if (p.z0 * st.Y != p.a0 + p.e0 * B) return false;
                if (p.z1 * st.Y != p.a1 + p.e1 * (B - gen)) return false;
            }
            return true;
        } catch (...) {
            return false;
        }
    }

private:
    static void check_width(std::size_t n) {
        if (n == 0 || n > max_bits) throw Error(Errc::InvalidArgument, "range width must be in [1, 64] bits");
    }

    static Digest statement_digest(const Statement<G>& st, const std::vector<Point>& bits) {
        Sha256 h;
        h.update(range_tag);
        h.update(G::generator().encode());
        h.update(st.Y.encode());
        h.update(st.commitment.encode());
        h.update(ByteWriter().u8(static_cast<std::uint8_t>(st.n_bits)).bytes());
        for (const auto& b : bits) h.update(b.encode());
        return h.finish();
    }

    static Scalar bit_challenge(const Digest& prefix, std::size_t i, const Point& a0, const Point& a1) {
        return FiatShamir<G>(range_tag).absorb_bytes(prefix).absorb_u64(i).absorb(a0).absorb(a1).challenge();
    }
};

template <PrimeOrderGroup G>
using DefaultRangeProof = BitDecomposition<G>;

} // namespace jswap::range

#endif // JSWAP_RANGEPROOF_HPP
