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
 * Sigma protocols used by the juggling construction, each available both
 * interactively (Prover::commitment / Prover::respond / check) and as a
 * Fiat-Shamir NIZK (prove / verify).
 *
 *   ddh     H1 = x G1 and H2 = x G2
 *           a_i = alpha G_i,  z = alpha - x e,  check a_i == z G_i + e H_i
 *
 *   enc     D = x G + r Y and E = r G
 *           T = s1 G + s2 Y, A3 = s2 G,  z1 = s1 + e x, z2 = s2 + e r
 *           check z1 G + z2 Y == T + e D and z2 G == A3 + e E
 *
 *   encdlog Q = x G, D = x G + r Y and E = r G
 *           A1 = s1 G, A2 = s2 Y, A3 = s2 G,  z1 = s1 + e x, z2 = s2 + e r
 *           check z1 G == A1 + e Q, z2 G == A3 + e E, z2 Y == A2 + e (D - Q)
 *
 * Proof wire formats are the commitment points followed by the responses,
 * in the order listed above.
 */

#ifndef JSWAP_SIGMA_HPP
#define JSWAP_SIGMA_HPP

#include "jswap/fiat_shamir.hpp"
#include "jswap/group/concepts.hpp"

namespace jswap::sigma {

inline constexpr std::string_view ddh_tag = "JUGGLE/DDH/v1";
inline constexpr std::string_view enc_tag = "JUGGLE/ENC/v1";
inline constexpr std::string_view encdlog_tag = "JUGGLE/ENCDLOG/v1";

namespace detail {

/// Runs a predicate over decoded/untrusted input; any exception is a reject.
template <class F>
bool no_throw(F&& f) noexcept {
    try {
        return f();
    } catch (...) {
        return false;
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// EC-DDH membership

namespace ddh {

template <PrimeOrderGroup G>
struct Statement {
    typename G::Point G1, H1, G2, H2;
};

template <PrimeOrderGroup G>
struct Witness {
    typename G::Scalar x;
};

template <PrimeOrderGroup G>
struct Commitment {
    typename G::Point a1, a2;
};

template <PrimeOrderGroup G>
struct Response {
    typename G::Scalar z;
};

template <PrimeOrderGroup G>
struct Proof {
    using Point = typename G::Point;
    using Scalar = typename G::Scalar;

    Commitment<G> commitment;
    Response<G> response;

    static constexpr std::size_t encoded_size() { return 2 * Point::encoded_size() + Scalar::encoded_size(); }
    Bytes encode() const {
        return ByteWriter().put(commitment.a1).put(commitment.a2).put(response.z).bytes();
    }
    static Proof decode(ByteView b) {
        ByteReader r(b);
        Proof p{{r.get<Point>(), r.get<Point>()}, {r.get<Scalar>()}};
        r.expect_done();
        return p;
    }
};

template <PrimeOrderGroup G>
bool holds(const Statement<G>& st, const Witness<G>& w) {
    return w.x * st.G1 == st.H1 && w.x * st.G2 == st.H2;
}

template <PrimeOrderGroup G>
class Prover {
public:
    template <std::uniform_random_bit_generator Rng>
    Prover(Statement<G> st, Witness<G> w, Rng& rng)
        : st_(std::move(st)), w_(std::move(w)), alpha_(random_scalar<G>(rng)) {}

    Commitment<G> commitment() const { return {alpha_ * st_.G1, alpha_ * st_.G2}; }
    Response<G> respond(const typename G::Scalar& e) const { return {alpha_ - w_.x * e}; }

private:
    Statement<G> st_;
    Witness<G> w_;
    typename G::Scalar alpha_;
};

template <PrimeOrderGroup G>
bool check(const Statement<G>& st, const Commitment<G>& c, const typename G::Scalar& e, const Response<G>& r) {
    return c.a1 == r.z * st.G1 + e * st.H1 && c.a2 == r.z * st.G2 + e * st.H2;
}

template <PrimeOrderGroup G>
typename G::Scalar challenge(const Statement<G>& st, const Commitment<G>& c) {
    return FiatShamir<G>(ddh_tag)
        .absorb(st.G1).absorb(st.H1).absorb(st.G2).absorb(st.H2)
        .absorb(c.a1).absorb(c.a2)
        .challenge();
}

template <PrimeOrderGroup G, std::uniform_random_bit_generator Rng>
Proof<G> prove(const Statement<G>& st, const Witness<G>& w, Rng& rng) {
    Prover<G> p(st, w, rng);
    auto c = p.commitment();
    auto e = challenge(st, c);
    return {c, p.respond(e)};
}

template <PrimeOrderGroup G>
bool verify(const Statement<G>& st, const Proof<G>& proof) noexcept {
    return detail::no_throw([&] { return check(st, proof.commitment, challenge(st, proof.commitment), proof.response); });
}

} // namespace ddh

// ---------------------------------------------------------------------------
// Correct ElGamal encryption

namespace enc {

template <PrimeOrderGroup G>
struct Statement {
    typename G::Point G0, Y, D, E;
};

template <PrimeOrderGroup G>
struct Witness {
    typename G::Scalar x, r;
};

template <PrimeOrderGroup G>
struct Commitment {
    typename G::Point T, A3;
};

template <PrimeOrderGroup G>
struct Response {
    typename G::Scalar z1, z2;
};

template <PrimeOrderGroup G>
struct Proof {
    using Point = typename G::Point;
    using Scalar = typename G::Scalar;

    Commitment<G> commitment;
    Response<G> response;

    static constexpr std::size_t encoded_size() { return 2 * Point::encoded_size() + 2 * Scalar::encoded_size(); }
    Bytes encode() const {
        return ByteWriter()
            .put(commitment.T).put(commitment.A3)
            .put(response.z1).put(response.z2)
            .bytes();
    }
    static Proof decode(ByteView b) {
        ByteReader r(b);
        Proof p{{r.get<Point>(), r.get<Point>()}, {r.get<Scalar>(), r.get<Scalar>()}};
        r.expect_done();
        return p;
    }
};

template <PrimeOrderGroup G>
bool holds(const Statement<G>& st, const Witness<G>& w) {
    return st.D == w.x * st.G0 + w.r * st.Y && st.E == w.r * st.G0;
}

template <PrimeOrderGroup G>
class Prover {
public:
    template <std::uniform_random_bit_generator Rng>
    Prover(Statement<G> st, Witness<G> w, Rng& rng)
        : st_(std::move(st)), w_(std::move(w)), s1_(random_scalar<G>(rng)), s2_(random_scalar<G>(rng)) {}

    Commitment<G> commitment() const { return {s1_ * st_.G0 + s2_ * st_.Y, s2_ * st_.G0}; }
    Response<G> respond(const typename G::Scalar& e) const { return {s1_ + e * w_.x, s2_ + e * w_.r}; }

private:
    Statement<G> st_;
    Witness<G> w_;
    typename G::Scalar s1_, s2_;
};

template <PrimeOrderGroup G>
bool check(const Statement<G>& st, const Commitment<G>& c, const typename G::Scalar& e, const Response<G>& r) {
    return r.z1 * st.G0 + r.z2 * st.Y == c.T + e * st.D && r.z2 * st.G0 == c.A3 + e * st.E;
}

template <PrimeOrderGroup G>
typename G::Scalar challenge(const Statement<G>& st, const Commitment<G>& c) {
    return FiatShamir<G>(enc_tag)
        .absorb(st.G0).absorb(st.Y).absorb(st.D).absorb(st.E)
        .absorb(c.T).absorb(c.A3)
        .challenge();
}

template <PrimeOrderGroup G, std::uniform_random_bit_generator Rng>
Proof<G> prove(const Statement<G>& st, const Witness<G>& w, Rng& rng) {
    Prover<G> p(st, w, rng);
    auto c = p.commitment();
    auto e = challenge(st, c);
    return {c, p.respond(e)};
}

template <PrimeOrderGroup G>
bool verify(const Statement<G>& st, const Proof<G>& proof) noexcept {
    return detail::no_throw([&] { return check(st, proof.commitment, challenge(st, proof.commitment), proof.response); });
}

} // namespace enc

// ---------------------------------------------------------------------------
// Correct ElGamal encryption of the discrete log of Q

namespace encdlog {

template <PrimeOrderGroup G>
struct Statement {
    typename G::Point G0, Y, Q, D, E;
};

template <PrimeOrderGroup G>
struct Witness {
    typename G::Scalar x, r;
};

template <PrimeOrderGroup G>
struct Commitment {
    typename G::Point A1, A2, A3;
};

template <PrimeOrderGroup G>
struct Response {
    typename G::Scalar z1, z2;
};

template <PrimeOrderGroup G>
struct Proof {
    using Point = typename G::Point;
    using Scalar = typename G::Scalar;

    Commitment<G> commitment;
    Response<G> response;

    static constexpr std::size_t encoded_size() { return 3 * Point::encoded_size() + 2 * Scalar::encoded_size(); }
    Bytes encode() const {
        return ByteWriter()
            .put(commitment.A1).put(commitment.A2).put(commitment.A3)
            .put(response.z1).put(response.z2)
            .bytes();
    }
    static Proof decode(ByteView b) {
        ByteReader r(b);
        Proof p{{r.get<Point>(), r.get<Point>(), r.get<Point>()}, {r.get<Scalar>(), r.get<Scalar>()}};
        r.expect_done();
        return p;
    }
};

template <PrimeOrderGroup G>
bool holds(const Statement<G>& st, const Witness<G>& w) {
    return st.Q == w.x * st.G0 && st.D == w.x * st.G0 + w.r * st.Y && st.E == w.r * st.G0;
}

template <PrimeOrderGroup G>
class Prover {
public:
    template <std::uniform_random_bit_generator Rng>
    Prover(Statement<G> st, Witness<G> w, Rng& rng)
        : st_(std::move(st)), w_(std::move(w)), s1_(random_scalar<G>(rng)), s2_(random_scalar<G>(rng)) {}

    Commitment<G> commitment() const { return {s1_ * st_.G0, s2_ * st_.Y, s2_ * st_.G0}; }
    Response<G> respond(const typename G::Scalar& e) const { return {s1_ + e * w_.x, s2_ + e * w_.r}; }

private:
    Statement<G> st_;
    Witness<G> w_;
    typename G::Scalar s1_, s2_;
};

template <PrimeOrderGroup G>
bool check(const Statement<G>& st, const Commitment<G>& c, const typename G::Scalar& e, const Response<G>& r) {
    return r.z1 * st.G0 == c.A1 + e * st.Q
        && r.z2 * st.G0 == c.A3 + e * st.E
        && r.z2 * st.Y == c.A2 + e * (st.D - st.Q);
}

template <PrimeOrderGroup G>
typename G::Scalar challenge(const Statement<G>& st, const Commitment<G>& c) {
    return FiatShamir<G>(encdlog_tag)
        .absorb(st.G0).absorb(st.Y).absorb(st.Q).absorb(st.D).absorb(st.E)
        .absorb(c.A1).absorb(c.A2).absorb(c.A3)
        .challenge();
}

template <PrimeOrderGroup G, std::uniform_random_bit_generator Rng>
Proof<G> prove(const Statement<G>& st, const Witness<G>& w, Rng& rng) {
    Prover<G> p(st, w, rng);
    auto c = p.commitment();
    auto e = challenge(st, c);
    return {c, p.respond(e)};
}

template <PrimeOrderGroup G>
bool verify(const Statement<G>& st, const Proof<G>& proof) noexcept {
    return detail::no_throw([&] { return check(st, proof.commitment, challenge(st, proof.commitment), proof.response); });
}

} // namespace encdlog

} // namespace jswap::sigma

#endif // JSWAP_SIGMA_HPP
