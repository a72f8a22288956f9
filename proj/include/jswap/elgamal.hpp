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
 * Additively homomorphic ElGamal "in the exponent":
 *
 *     Enc_Y(v; r) = (D, E) = (vG + rY, rG)
 *     D - yE = vG
 *
 * Recovering v from vG needs a small-range discrete log, so plaintexts are
 * kept to a few bits (one segment).
 */

#ifndef JSWAP_ELGAMAL_HPP
#define JSWAP_ELGAMAL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "jswap/group/concepts.hpp"
#include "jswap/group/dlog.hpp"

namespace jswap::elgamal {

template <PrimeOrderGroup G>
struct KeyPair {
    typename G::Scalar y;  // decryption key
    typename G::Point Y;   // encryption key, yG

    template <std::uniform_random_bit_generator Rng>
    static KeyPair generate(Rng& rng) {
        auto y = random_nonzero_scalar<G>(rng);
        return {y, mul_base<G>(y)};
    }

    /// Throws KeyMismatch if Y != yG.
    static KeyPair from_secret(const typename G::Scalar& y, const typename G::Point& Y) {
        if (mul_base<G>(y) != Y) throw Error(Errc::KeyMismatch, "decryption key does not match encryption key");
        return {y, Y};
    }
};

/// Public ciphertext. Wire format: encode(D) || encode(E).
template <PrimeOrderGroup G>
struct Ciphertext {
    using Point = typename G::Point;

    Point D;
    Point E;

    static constexpr std::size_t encoded_size() { return 2 * Point::encoded_size(); }

    Bytes encode() const { return ByteWriter().put(D).put(E).bytes(); }
    static Ciphertext decode(ByteView b) {
        ByteReader r(b);
        Ciphertext ct{r.get<Point>(), r.get<Point>()};
        r.expect_done();
        return ct;
    }

    friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

/// Prover-side ciphertext: the public part plus the randomness that made it.
template <PrimeOrderGroup G>
struct OpenCiphertext {
    Ciphertext<G> ct;
    typename G::Scalar r;
};

/// Encrypt with caller-chosen randomness. Tests use this to pin r.
template <PrimeOrderGroup G>
OpenCiphertext<G> encrypt_with(const typename G::Scalar& v, const typename G::Point& Y,
                               const typename G::Scalar& r) {
    return {{mul_base<G>(v) + r * Y, mul_base<G>(r)}, r};
}

template <PrimeOrderGroup G, std::uniform_random_bit_generator Rng>
OpenCiphertext<G> encrypt(const typename G::Scalar& v, const typename G::Point& Y, Rng& rng) {
    return encrypt_with<G>(v, Y, random_scalar<G>(rng));
}

template <PrimeOrderGroup G>
typename G::Point decrypt_point(const Ciphertext<G>& ct, const typename G::Scalar& y) {
    return ct.D - y * ct.E;
}

/// Decrypt a plaintext known to be below 2^bits. Throws NotFound otherwise.
template <PrimeOrderGroup G>
typename G::Scalar decrypt_segment(const Ciphertext<G>& ct, const typename G::Scalar& y, std::size_t bits) {
    if (bits > 32) throw Error(Errc::InvalidArgument, "segment too wide for extraction");
    return brute_force_dlog<G>(decrypt_point(ct, y), std::uint64_t{1} << bits);
}

/// Same, reusing a prebuilt extraction table.
template <PrimeOrderGroup G>
typename G::Scalar decrypt_segment(const Ciphertext<G>& ct, const typename G::Scalar& y,
                                   const BsgsTable<G>& table) {
    return table.solve(decrypt_point(ct, y));
}

/// sum_k w_k * ct_k, componentwise.
template <PrimeOrderGroup G>
Ciphertext<G> aggregate(std::span<const Ciphertext<G>> cts, std::span<const typename G::Scalar> weights) {
    if (cts.size() != weights.size()) throw Error(Errc::InvalidArgument, "ciphertext/weight count mismatch");
    Ciphertext<G> out{G::identity(), G::identity()};
    for (std::size_t k = 0; k < cts.size(); ++k) {
        out.D = out.D + weights[k] * cts[k].D;
        out.E = out.E + weights[k] * cts[k].E;
    }
    return out;
}

/// Aggregate on the prover side; the result carries sum_k w_k r_k.
template <PrimeOrderGroup G>
OpenCiphertext<G> aggregate(std::span<const OpenCiphertext<G>> cts, std::span<const typename G::Scalar> weights) {
    if (cts.size() != weights.size()) throw Error(Errc::InvalidArgument, "ciphertext/weight count mismatch");
    std::vector<Ciphertext<G>> pub;
    pub.reserve(cts.size());
    auto r = G::Scalar::from_u64(0);
    for (std::size_t k = 0; k < cts.size(); ++k) {
        pub.push_back(cts[k].ct);
        r = r + weights[k] * cts[k].r;
    }
    return {aggregate<G>(std::span<const Ciphertext<G>>(pub), weights), r};
}

} // namespace jswap::elgamal

#endif // JSWAP_ELGAMAL_HPP
