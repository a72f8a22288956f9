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
 * Toy group: the order-q subgroup of quadratic residues mod the safe prime
 * p = 2q + 1, with q = 1048571 < 2^20. Small enough that every discrete log
 * can be recovered by exhaustive search, which tests use as an oracle.
 *
 * Written additively to match the rest of the library: "P + Q" is the
 * modular product and "k * P" is modular exponentiation.
 */

#ifndef JSWAP_GROUP_TOY_GROUP_HPP
#define JSWAP_GROUP_TOY_GROUP_HPP

#include <cstdint>
#include <optional>
#include <string_view>

#include "jswap/group/concepts.hpp"

namespace jswap {

struct ToyGroup {
    static constexpr std::uint64_t q = 1048571;  // 0xFFFFB
    static constexpr std::uint64_t p = 2 * q + 1;
    static constexpr std::uint64_t g = 4;

    class Scalar {
    public:
        constexpr Scalar() = default;

        static constexpr Scalar from_u64(std::uint64_t v) noexcept { return Scalar(v % q); }
        static constexpr std::size_t encoded_size() noexcept { return 3; }

        static std::optional<Scalar> try_decode(ByteView b) {
            if (b.size() != encoded_size()) return std::nullopt;
            std::uint64_t v = (std::uint64_t{b[0]} << 16) | (std::uint64_t{b[1]} << 8) | b[2];
            if (v >= q) return std::nullopt;
            return Scalar(v);
        }
        static Scalar decode(ByteView b) {
            auto s = try_decode(b);
            if (!s) throw Error(Errc::MalformedScalar, "toy scalar");
            return *s;
        }
        /// Big-endian integer of any length, reduced mod q.
        static Scalar reduce(ByteView b) noexcept {
            std::uint64_t v = 0;
            for (auto x : b) v = ((v << 8) | x) % q;
            return Scalar(v);
        }

        Bytes encode() const {
            return {static_cast<std::uint8_t>(v_ >> 16), static_cast<std::uint8_t>(v_ >> 8),
                    static_cast<std::uint8_t>(v_)};
        }

        constexpr std::uint64_t value() const noexcept { return v_; }
        constexpr bool is_zero() const noexcept { return v_ == 0; }

        friend constexpr Scalar operator+(Scalar a, Scalar b) noexcept { return Scalar((a.v_ + b.v_) % q); }
        friend constexpr Scalar operator-(Scalar a, Scalar b) noexcept { return Scalar((a.v_ + q - b.v_) % q); }
        friend constexpr Scalar operator*(Scalar a, Scalar b) noexcept { return Scalar((a.v_ * b.v_) % q); }
        constexpr Scalar operator-() const noexcept { return Scalar((q - v_) % q); }
        friend constexpr bool operator==(Scalar, Scalar) noexcept = default;

        Scalar inverse() const {
            if (v_ == 0) throw Error(Errc::DivByZero, "inverse of zero");
            return Scalar(powmod(v_, q - 2, q));
        }

    private:
        constexpr explicit Scalar(std::uint64_t v) noexcept : v_(v) {}
        std::uint64_t v_ = 0;
    };

    class Point {
    public:
        /// Identity element.
        constexpr Point() = default;

        static constexpr std::size_t encoded_size() noexcept { return 3; }

        static Point decode(ByteView b) {
            if (b.size() != encoded_size()) throw Error(Errc::MalformedPoint, "toy point length");
            std::uint64_t v = (std::uint64_t{b[0]} << 16) | (std::uint64_t{b[1]} << 8) | b[2];
            if (v == 0 || v >= p || powmod(v, q, p) != 1) throw Error(Errc::MalformedPoint, "not in the order-q subgroup");
            return Point(v);
        }

        Bytes encode() const {
            return {static_cast<std::uint8_t>(v_ >> 16), static_cast<std::uint8_t>(v_ >> 8),
                    static_cast<std::uint8_t>(v_)};
        }

        constexpr bool is_identity() const noexcept { return v_ == 1; }
        constexpr std::uint64_t residue() const noexcept { return v_; }

        friend constexpr Point operator+(Point a, Point b) noexcept { return Point((a.v_ * b.v_) % p); }
        Point operator-() const noexcept { return Point(powmod(v_, p - 2, p)); }
        friend Point operator-(Point a, Point b) noexcept { return a + (-b); }
        friend Point operator*(const Scalar& k, Point a) noexcept { return Point(powmod(a.v_, k.value(), p)); }
        friend constexpr bool operator==(Point, Point) noexcept = default;

    private:
        friend struct ToyGroup;
        constexpr explicit Point(std::uint64_t v) noexcept : v_(v) {}
        std::uint64_t v_ = 1;
    };

    static constexpr std::string_view name() noexcept { return "toy"; }
    static constexpr std::size_t order_bits() noexcept { return 20; }
    static Bytes order_bytes() { return {0x0f, 0xff, 0xfb}; }
    static constexpr Point generator() noexcept { return Point(g); }
    static constexpr Point identity() noexcept { return Point(); }

    static constexpr std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) noexcept {
        std::uint64_t result = 1 % mod;
        base %= mod;
        while (exp) {
            if (exp & 1) result = result * base % mod;
            base = base * base % mod;
            exp >>= 1;
        }
        return result;
    }
};

static_assert(PrimeOrderGroup<ToyGroup>);

} // namespace jswap

#endif // JSWAP_GROUP_TOY_GROUP_HPP
