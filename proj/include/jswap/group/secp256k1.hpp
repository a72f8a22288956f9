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
 * secp256k1 backed by OpenSSL's EC and BIGNUM primitives.
 *
 * Scalars are kept as 32-byte big-endian arrays so they stay trivially
 * copyable; arithmetic goes through BIGNUM temporaries. Points wrap an
 * EC_POINT and encode as 33-byte SEC1 compressed form, with 33 zero bytes
 * reserved for the point at infinity.
 */

#ifndef JSWAP_GROUP_SECP256K1_HPP
#define JSWAP_GROUP_SECP256K1_HPP

#include <algorithm>
#include <array>
#include <memory>
#include <optional>
#include <string_view>

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/obj_mac.h>

#include "jswap/group/concepts.hpp"

namespace jswap {

namespace detail {

struct BnCtxFree {
    void operator()(BN_CTX* c) const noexcept { BN_CTX_free(c); }
};
struct BnFree {
    void operator()(BIGNUM* b) const noexcept { BN_free(b); }
};
struct EcPointFree {
    void operator()(EC_POINT* p) const noexcept { EC_POINT_free(p); }
};
struct EcGroupFree {
    void operator()(EC_GROUP* g) const noexcept { EC_GROUP_free(g); }
};

inline BN_CTX* bn_ctx() {
    thread_local std::unique_ptr<BN_CTX, BnCtxFree> ctx(BN_CTX_new());
    return ctx.get();
}

/// Scoped BN_CTX frame; BIGNUMs from get() live until the frame closes.
class BnFrame {
public:
    BnFrame() : ctx_(bn_ctx()) { BN_CTX_start(ctx_); }
    ~BnFrame() { BN_CTX_end(ctx_); }
    BnFrame(const BnFrame&) = delete;
    BnFrame& operator=(const BnFrame&) = delete;

    BIGNUM* get() { return BN_CTX_get(ctx_); }
    BN_CTX* ctx() const noexcept { return ctx_; }

private:
    BN_CTX* ctx_;
};

struct Secp256k1Curve {
    std::unique_ptr<EC_GROUP, EcGroupFree> group;
    std::unique_ptr<BIGNUM, BnFree> order;

    Secp256k1Curve() : group(EC_GROUP_new_by_curve_name(NID_secp256k1)), order(BN_new()) {
        EC_GROUP_get_order(group.get(), order.get(), nullptr);
    }

    static const Secp256k1Curve& get() {
        static const Secp256k1Curve curve;
        return curve;
    }
};

} // namespace detail

struct Secp256k1 {
    class Scalar {
    public:
        using Raw = std::array<std::uint8_t, 32>;

        Scalar() = default;

        static Scalar from_u64(std::uint64_t v) noexcept {
            Scalar s;
            for (int i = 0; i < 8; ++i) s.raw_[31 - i] = static_cast<std::uint8_t>(v >> (8 * i));
            return s;
        }
        static constexpr std::size_t encoded_size() noexcept { return 32; }

        static std::optional<Scalar> try_decode(ByteView b) {
            if (b.size() != encoded_size()) return std::nullopt;
            detail::BnFrame f;
            BIGNUM* v = f.get();
            BN_bin2bn(b.data(), static_cast<int>(b.size()), v);
            if (BN_cmp(v, order()) >= 0) return std::nullopt;
            Scalar s;
            std::copy(b.begin(), b.end(), s.raw_.begin());
            return s;
        }
        static Scalar decode(ByteView b) {
            auto s = try_decode(b);
            if (!s) throw Error(Errc::MalformedScalar, "secp256k1 scalar");
            return *s;
        }
        static Scalar reduce(ByteView b) {
            detail::BnFrame f;
            BIGNUM* v = f.get();
            BN_bin2bn(b.data(), static_cast<int>(b.size()), v);
            BN_nnmod(v, v, order(), f.ctx());
            return from_bn(v);
        }

        Bytes encode() const { return Bytes(raw_.begin(), raw_.end()); }
        const Raw& raw() const noexcept { return raw_; }
        bool is_zero() const noexcept {
            return std::all_of(raw_.begin(), raw_.end(), [](std::uint8_t b) { return b == 0; });
        }

        friend Scalar operator+(const Scalar& a, const Scalar& b) {
            return binary(a, b, [](BIGNUM* r, const BIGNUM* x, const BIGNUM* y, BN_CTX* c) {
                BN_mod_add(r, x, y, order(), c);
            });
        }
        friend Scalar operator-(const Scalar& a, const Scalar& b) {
            return binary(a, b, [](BIGNUM* r, const BIGNUM* x, const BIGNUM* y, BN_CTX* c) {
                BN_mod_sub(r, x, y, order(), c);
            });
        }
        friend Scalar operator*(const Scalar& a, const Scalar& b) {
            return binary(a, b, [](BIGNUM* r, const BIGNUM* x, const BIGNUM* y, BN_CTX* c) {
                BN_mod_mul(r, x, y, order(), c);
            });
        }
        Scalar operator-() const { return Scalar() - *this; }
        friend bool operator==(const Scalar&, const Scalar&) noexcept = default;

        Scalar inverse() const {
            if (is_zero()) throw Error(Errc::DivByZero, "inverse of zero");
            detail::BnFrame f;
            BIGNUM* v = to_bn(f);
            BN_mod_inverse(v, v, order(), f.ctx());
            return from_bn(v);
        }

        BIGNUM* to_bn(detail::BnFrame& f) const {
            BIGNUM* v = f.get();
            BN_bin2bn(raw_.data(), static_cast<int>(raw_.size()), v);
            return v;
        }

    private:
        static const BIGNUM* order() { return detail::Secp256k1Curve::get().order.get(); }

        static Scalar from_bn(const BIGNUM* v) {
            Scalar s;
            BN_bn2binpad(v, s.raw_.data(), static_cast<int>(s.raw_.size()));
            return s;
        }

        template <class Op>
        static Scalar binary(const Scalar& a, const Scalar& b, Op op) {
            detail::BnFrame f;
            BIGNUM* x = a.to_bn(f);
            BIGNUM* y = b.to_bn(f);
            BIGNUM* r = f.get();
            op(r, x, y, f.ctx());
            return from_bn(r);
        }

        Raw raw_{};
    };

    class Point {
    public:
        /// Point at infinity.
        Point() : p_(EC_POINT_new(group())) { EC_POINT_set_to_infinity(group(), p_.get()); }
        Point(const Point& o) : p_(EC_POINT_dup(o.p_.get(), group())) {}
        Point(Point&&) noexcept = default;
        Point& operator=(const Point& o) {
            if (this != &o) p_.reset(EC_POINT_dup(o.p_.get(), group()));
            return *this;
        }
        Point& operator=(Point&&) noexcept = default;
        ~Point() = default;

        static constexpr std::size_t encoded_size() noexcept { return 33; }

        static Point decode(ByteView b) {
            if (b.size() != encoded_size()) throw Error(Errc::MalformedPoint, "secp256k1 point length");
            Point out;
            if (std::all_of(b.begin(), b.end(), [](std::uint8_t x) { return x == 0; })) return out;
            if (b[0] != 0x02 && b[0] != 0x03) throw Error(Errc::MalformedPoint, "bad prefix byte");
            if (EC_POINT_oct2point(group(), out.p_.get(), b.data(), b.size(), detail::bn_ctx()) != 1) {
                throw Error(Errc::MalformedPoint, "not on curve");
            }
            return out;
        }

        Bytes encode() const {
            Bytes out(encoded_size(), 0);
            if (is_identity()) return out;
            EC_POINT_point2oct(group(), p_.get(), POINT_CONVERSION_COMPRESSED, out.data(), out.size(),
                               detail::bn_ctx());
            return out;
        }

        bool is_identity() const noexcept { return EC_POINT_is_at_infinity(group(), p_.get()) == 1; }

        friend Point operator+(const Point& a, const Point& b) {
            Point r;
            EC_POINT_add(group(), r.p_.get(), a.p_.get(), b.p_.get(), detail::bn_ctx());
            return r;
        }
        Point operator-() const {
            Point r(*this);
            EC_POINT_invert(group(), r.p_.get(), detail::bn_ctx());
            return r;
        }
        friend Point operator-(const Point& a, const Point& b) { return a + (-b); }
        friend Point operator*(const Scalar& k, const Point& a) {
            detail::BnFrame f;
            BIGNUM* kb = k.to_bn(f);
            Point r;
            if (a.is_generator()) {
                EC_POINT_mul(group(), r.p_.get(), kb, nullptr, nullptr, f.ctx());
            } else {
                EC_POINT_mul(group(), r.p_.get(), nullptr, a.p_.get(), kb, f.ctx());
            }
            return r;
        }
        friend bool operator==(const Point& a, const Point& b) {
            return EC_POINT_cmp(group(), a.p_.get(), b.p_.get(), detail::bn_ctx()) == 0;
        }

    private:
        friend struct Secp256k1;

        static const EC_GROUP* group() { return detail::Secp256k1Curve::get().group.get(); }

        bool is_generator() const {
            return EC_POINT_cmp(group(), p_.get(), EC_GROUP_get0_generator(group()), detail::bn_ctx()) == 0;
        }

        std::unique_ptr<EC_POINT, detail::EcPointFree> p_;
    };

    static constexpr std::string_view name() noexcept { return "secp256k1"; }
    static constexpr std::size_t order_bits() noexcept { return 256; }
    static Bytes order_bytes() {
        return from_hex("fffffffffffffffffffffffffffffffebaaedce6af48a03bbfd25e8cd0364141");
    }
    static Point generator() {
        static const Point gen = [] {
            Point p;
            EC_POINT_copy(p.p_.get(), EC_GROUP_get0_generator(Point::group()));
            return p;
        }();
        return gen;
    }
    static Point identity() { return Point(); }
};

static_assert(PrimeOrderGroup<Secp256k1>);

} // namespace jswap

#endif // JSWAP_GROUP_SECP256K1_HPP
