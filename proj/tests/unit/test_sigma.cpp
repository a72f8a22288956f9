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

#include <gtest/gtest.h>

#include "jswap/group/secp256k1.hpp"
#include "jswap/group/toy_group.hpp"
#include "jswap/sigma.hpp"
#include "jswap/sigma_testing.hpp"

using namespace jswap;
namespace st = jswap::sigma::testing;

namespace {

// Instances of each relation, true or perturbed by `bad`.
template <class G>
struct Instances {
    using S = typename G::Scalar;
    using P = typename G::Point;

    static std::pair<sigma::ddh::Statement<G>, sigma::ddh::Witness<G>> ddh(Drbg& rng, bool bad = false) {
        auto x = random_scalar<G>(rng);
        auto G2 = mul_base<G>(random_nonzero_scalar<G>(rng));
        P H2 = x * G2;
        if (bad) H2 = H2 + G::generator();
        return {{G::generator(), mul_base<G>(x), G2, H2}, {x}};
    }

    static std::pair<sigma::enc::Statement<G>, sigma::enc::Witness<G>> enc(Drbg& rng, bool bad = false) {
        auto x = random_scalar<G>(rng), r = random_scalar<G>(rng);
        auto Y = mul_base<G>(random_nonzero_scalar<G>(rng));
        P D = mul_base<G>(x) + r * Y;
        P E = mul_base<G>(r);
        if (bad) E = E + G::generator();
        return {{G::generator(), Y, D, E}, {x, r}};
    }

    static std::pair<sigma::encdlog::Statement<G>, sigma::encdlog::Witness<G>> encdlog(Drbg& rng, bool bad = false) {
        auto x = random_scalar<G>(rng), r = random_scalar<G>(rng);
        auto Y = mul_base<G>(random_nonzero_scalar<G>(rng));
        P Q = mul_base<G>(x);
        P D = mul_base<G>(x) + r * Y;
        if (bad) Q = Q + G::generator();
        return {{G::generator(), Y, Q, D, mul_base<G>(r)}, {x, r}};
    }
};

template <class G>
class Sigma : public ::testing::Test {};
using Groups = ::testing::Types<ToyGroup, Secp256k1>;
TYPED_TEST_SUITE(Sigma, Groups);

TYPED_TEST(Sigma, DdhCompletenessSoundnessZk) {
    using G = TypeParam;
    Drbg rng(31);
    for (int i = 0; i < 50; ++i) {
        auto [s, w] = Instances<G>::ddh(rng);
        ASSERT_TRUE(sigma::ddh::holds(s, w));
        auto proof = sigma::ddh::prove(s, w, rng);
        ASSERT_TRUE(sigma::ddh::verify(s, proof));
        ASSERT_TRUE(sigma::ddh::verify(s, decltype(proof)::decode(proof.encode())));

        auto tampered = proof;
        tampered.response.z = tampered.response.z + G::Scalar::from_u64(1);
        EXPECT_FALSE(sigma::ddh::verify(s, tampered));
        auto other = s;
        other.H2 = other.H2 + G::generator();
        EXPECT_FALSE(sigma::ddh::verify(other, proof));

        sigma::ddh::Prover<G> p(s, w, rng);
        auto c = p.commitment();
        auto e1 = random_scalar<G>(rng), e2 = random_scalar<G>(rng);
        auto r1 = p.respond(e1), r2 = p.respond(e2);
        ASSERT_TRUE(sigma::ddh::check(s, c, e1, r1));
        ASSERT_EQ(st::extract<G>(e1, r1, e2, r2).x, w.x);

        auto sim = st::simulate(s, e1, rng);
        ASSERT_TRUE(sigma::ddh::check(s, sim.commitment, e1, sim.response));
    }
}

TYPED_TEST(Sigma, EncCompletenessSoundnessZk) {
    using G = TypeParam;
    Drbg rng(32);
    for (int i = 0; i < 50; ++i) {
        auto [s, w] = Instances<G>::enc(rng);
        ASSERT_TRUE(sigma::enc::holds(s, w));
        auto proof = sigma::enc::prove(s, w, rng);
        ASSERT_TRUE(sigma::enc::verify(s, proof));
        ASSERT_TRUE(sigma::enc::verify(s, decltype(proof)::decode(proof.encode())));

        auto tampered = proof;
        tampered.commitment.A3 = tampered.commitment.A3 + G::generator();
        EXPECT_FALSE(sigma::enc::verify(s, tampered));
        auto other = s;
        other.D = other.D + G::generator();
        EXPECT_FALSE(sigma::enc::verify(other, proof));

        sigma::enc::Prover<G> p(s, w, rng);
        auto c = p.commitment();
        auto e1 = random_scalar<G>(rng), e2 = random_scalar<G>(rng);
        auto r1 = p.respond(e1), r2 = p.respond(e2);
        auto ext = st::extract<G>(e1, r1, e2, r2);
        ASSERT_EQ(ext.x, w.x);
        ASSERT_EQ(ext.r, w.r);

        auto sim = st::simulate(s, e2, rng);
        ASSERT_TRUE(sigma::enc::check(s, sim.commitment, e2, sim.response));
        ASSERT_TRUE(sigma::enc::check(s, c, e2, r2));
    }
}

TYPED_TEST(Sigma, EncDlogCompletenessSoundnessZk) {
    using G = TypeParam;
    Drbg rng(33);
    for (int i = 0; i < 50; ++i) {
        auto [s, w] = Instances<G>::encdlog(rng);
        ASSERT_TRUE(sigma::encdlog::holds(s, w));
        auto proof = sigma::encdlog::prove(s, w, rng);
        ASSERT_TRUE(sigma::encdlog::verify(s, proof));
        ASSERT_TRUE(sigma::encdlog::verify(s, decltype(proof)::decode(proof.encode())));

        auto other = s;
        other.Q = other.Q + G::generator();
        EXPECT_FALSE(sigma::encdlog::verify(other, proof));
        auto tampered = proof;
        tampered.response.z2 = tampered.response.z2 + G::Scalar::from_u64(1);
        EXPECT_FALSE(sigma::encdlog::verify(s, tampered));

        sigma::encdlog::Prover<G> p(s, w, rng);
        auto c = p.commitment();
        auto e1 = random_scalar<G>(rng), e2 = random_scalar<G>(rng);
        auto r1 = p.respond(e1), r2 = p.respond(e2);
        ASSERT_TRUE(sigma::encdlog::check(s, c, e1, r1));
        auto ext = st::extract<G>(e1, r1, e2, r2);
        ASSERT_EQ(ext.x, w.x);
        ASSERT_EQ(ext.r, w.r);

        auto sim = st::simulate(s, e1, rng);
        ASSERT_TRUE(sigma::encdlog::check(s, sim.commitment, e1, sim.response));
    }
}

TYPED_TEST(Sigma, FalseStatementsDoNotVerifyWithHonestProver) {
    using G = TypeParam;
    Drbg rng(34);
    for (int i = 0; i < 30; ++i) {
        auto [s1, w1] = Instances<G>::ddh(rng, true);
        EXPECT_FALSE(sigma::ddh::verify(s1, sigma::ddh::prove(s1, w1, rng)));
        auto [s2, w2] = Instances<G>::enc(rng, true);
        EXPECT_FALSE(sigma::enc::verify(s2, sigma::enc::prove(s2, w2, rng)));
        auto [s3, w3] = Instances<G>::encdlog(rng, true);
        EXPECT_FALSE(sigma::encdlog::verify(s3, sigma::encdlog::prove(s3, w3, rng)));
    }
}

TEST(SigmaExtract, EqualChallengesAreDivByZero) {
    using S = ToyGroup::Scalar;
    auto e = S::from_u64(5);
    try {
        st::extract<ToyGroup>(e, sigma::ddh::Response<ToyGroup>{S::from_u64(1)}, e,
                              sigma::ddh::Response<ToyGroup>{S::from_u64(2)});
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), Errc::DivByZero);
    }
}

TEST(SigmaSimulator, ToyResponsesCoverTheScalarField) {
    // Simulated z is uniform: over many runs the low bits take every value.
    Drbg rng(35);
    auto [s, w] = Instances<ToyGroup>::ddh(rng);
    std::array<int, 16> hist{};
    for (int i = 0; i < 4000; ++i) {
        auto sim = st::simulate(s, ToyGroup::Scalar::from_u64(77), rng);
        ++hist[sim.response.z.value() & 0xf];
    }
    for (int c : hist) {
        EXPECT_GT(c, 150);
        EXPECT_LT(c, 350);
    }
}

TEST(SigmaCodec, RejectsTruncatedProofs) {
    Drbg rng(36);
    auto [s, w] = Instances<Secp256k1>::encdlog(rng);
    auto enc = sigma::encdlog::prove(s, w, rng).encode();
    EXPECT_EQ(enc.size(), sigma::encdlog::Proof<Secp256k1>::encoded_size());
    enc.pop_back();
    EXPECT_THROW(sigma::encdlog::Proof<Secp256k1>::decode(enc), Error);
}

} // namespace
