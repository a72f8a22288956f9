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
 * Prime-order group interface shared by every protocol in the library.
 *
 * A group type G supplies two value types:
 *
 *   G::Scalar  integers mod the group order q, fixed-width big-endian encoding
 *   G::Point   group elements, fixed-width canonical encoding
 *
 * and static metadata (name, order bit length, encoded sizes, generator).
 * Encodings are canonical: decode(encode(v)) == v and decode rejects any
 * byte string that is not the encoding of some element.
 */

#ifndef JSWAP_GROUP_CONCEPTS_HPP
#define JSWAP_GROUP_CONCEPTS_HPP

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "jswap/bytes.hpp"
#include "jswap/rng.hpp"

namespace jswap {

template <class S>
concept ScalarLike = std::regular<S> && requires(const S a, const S b, ByteView bytes, std::uint64_t u) {
    { a + b } -> std::same_as<S>;
    { a - b } -> std::same_as<S>;
    { a * b } -> std::same_as<S>;
    { -a } -> std::same_as<S>;
    { a.inverse() } -> std::same_as<S>;
    { a.is_zero() } -> std::convertible_to<bool>;
    { a.encode() } -> std::same_as<Bytes>;
    { S::from_u64(u) } -> std::same_as<S>;
    { S::decode(bytes) } -> std::same_as<S>;
    { S::try_decode(bytes) } -> std::same_as<std::optional<S>>;
    { S::reduce(bytes) } -> std::same_as<S>;
    { S::encoded_size() } -> std::convertible_to<std::size_t>;
};

template <class P, class S>
concept PointLike = std::regular<P> && requires(const P a, const P b, const S k, ByteView bytes) {
    { a + b } -> std::same_as<P>;
    { a - b } -> std::same_as<P>;
    { -a } -> std::same_as<P>;
    { k * a } -> std::same_as<P>;
    { a.is_identity() } -> std::convertible_to<bool>;
    { a.encode() } -> std::same_as<Bytes>;
    { P::decode(bytes) } -> std::same_as<P>;
    { P::encoded_size() } -> std::convertible_to<std::size_t>;
};

template <class G>
concept PrimeOrderGroup = requires {
    typename G::Scalar;
    typename G::Point;
    { G::name() } -> std::convertible_to<std::string_view>;
    { G::order_bits() } -> std::convertible_to<std::size_t>;
    { G::order_bytes() } -> std::same_as<Bytes>;
    { G::generator() } -> std::same_as<typename G::Point>;
    { G::identity() } -> std::same_as<typename G::Point>;
} && ScalarLike<typename G::Scalar> && PointLike<typename G::Point, typename G::Scalar>;

/// Uniform scalar in [0, q) by rejection sampling on the masked byte width.
template <PrimeOrderGroup G, std::uniform_random_bit_generator Rng>
typename G::Scalar random_scalar(Rng& rng) {
    using S = typename G::Scalar;
    Bytes buf(S::encoded_size());
    const std::size_t excess = buf.size() * 8 - G::order_bits();
    for (;;) {
        fill_random(rng, buf);
        buf[0] &= static_cast<std::uint8_t>(0xff >> excess);
        if (auto s = S::try_decode(buf)) return *s;
    }
}

template <PrimeOrderGroup G, std::uniform_random_bit_generator Rng>
typename G::Scalar random_nonzero_scalar(Rng& rng) {
    for (;;) {
        auto s = random_scalar<G>(rng);
        if (!s.is_zero()) return s;
    }
}

/// Uniform scalar in [0, 2^bits). Requires bits < order_bits so every
/// candidate is already below q.
template <PrimeOrderGroup G, std::uniform_random_bit_generator Rng>
typename G::Scalar random_scalar_below_bits(Rng& rng, std::size_t bits) {
    using S = typename G::Scalar;
    if (bits >= G::order_bits()) throw Error(Errc::InvalidArgument, "bit bound must be below order bit length");
    Bytes buf(S::encoded_size());
    fill_random(rng, buf);
    const std::size_t total = buf.size() * 8;
    for (std::size_t bit = bits; bit < total; ++bit) {
        // bit index counts from the least significant end
        std::size_t byte = buf.size() - 1 - bit / 8;
        buf[byte] &= static_cast<std::uint8_t>(~(1u << (bit % 8)));
    }
    return S::decode(buf);
}

template <PrimeOrderGroup G>
typename G::Point mul_base(const typename G::Scalar& k) {
    return k * G::generator();
}

/// Number of significant bits in a big-endian byte string.
inline std::size_t bit_length(ByteView be) noexcept {
    for (std::size_t i = 0; i < be.size(); ++i) {
        if (be[i] != 0) {
            std::size_t bits = 8;
            while (!(be[i] & (1u << (bits - 1)))) --bits;
            return (be.size() - 1 - i) * 8 + bits;
        }
    }
    return 0;
}

template <PrimeOrderGroup G>
std::size_t bit_length(const typename G::Scalar& s) {
    return bit_length(s.encode());
}

/// Small scalar back to an integer. Throws ValueOutOfRange above 64 bits.
template <PrimeOrderGroup G>
std::uint64_t to_u64(const typename G::Scalar& s) {
    auto b = s.encode();
    if (bit_length(b) > 64) throw Error(Errc::ValueOutOfRange, "scalar does not fit in 64 bits");
    std::uint64_t v = 0;
    for (auto x : b) v = (v << 8) | x;
    return v;
}

/// Descriptive parameters of a group instantiation.
template <PrimeOrderGroup G>
struct GroupParams {
    Bytes order_q;
    typename G::Point generator;
    std::string_view name;
    std::size_t scalar_byte_len;
    std::size_t point_byte_len;

    static GroupParams get() {
        return {G::order_bytes(), G::generator(), G::name(), G::Scalar::encoded_size(),
                G::Point::encoded_size()};
    }
};

} // namespace jswap

#endif // JSWAP_GROUP_CONCEPTS_HPP
