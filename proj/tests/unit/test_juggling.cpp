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
#include "jswap/juggling.hpp"

using namespace jswap;
using namespace jswap::juggling;

namespace {

using T = ToyGroup;
using TS = T::Scalar;

// Discrete log in the toy group by walking powers of g mod p.
std::uint64_t toy_dlog_oracle(const T::Point& P) {
    std::uint64_t acc = 1;
    for (std::uint64_t k = 0; k < T::q; ++k) {
        if (acc == P.residue()) return k;
        acc = acc * T::g % T::p;
    }
    return ~0ull;
}

struct ToySession {
    Drbg rng{51};
    elgamal::KeyPair<T> key = elgamal::KeyPair<T>::generate(rng);
    TS x = random_segmentable_secret<T>(rng);
    T::Point Q = mul_base<T>(x);
    SegmentationParams params = SegmentationParams::for_group<T>(4);
};

TEST(Juggling, ToyHonestSessionRecoversSecret) {
    Drbg rng(50);
    for (int trial = 0; trial < 20; ++trial) {
        auto key = elgamal::KeyPair<T>::generate(rng);
        auto x = random_segmentable_secret<T>(rng);
        auto Q = mul_base<T>(x);
        auto params = SegmentationParams::for_group<T>(4);
        Encryptor<T> enc(x, Q, key.Y, params, rng);
        Decryptor<T> dec(key, Q, params);
        ASSERT_TRUE(dec.accept_setup(enc.bundle()));
        while (!enc.done()) dec.accept_segment(enc.release_next());
        auto got = dec.finish();
        EXPECT_EQ(got.value(), toy_dlog_oracle(Q));
        EXPECT_EQ(got, x);
    }
}

TEST(Juggling, PartialProgressMatchesLowBits) {
    ToySession s;
    Encryptor<T> enc(s.x, s.Q, s.key.Y, s.params, s.rng);
    Decryptor<T> dec(s.key, s.Q, s.params);
    ASSERT_TRUE(dec.accept_setup(enc.bundle()));
    for (std::size_t k = 1; k <= s.params.m; ++k) {
        auto limb = dec.accept_segment(enc.release_next());
        EXPECT_EQ(limb.value(), (s.x.value() >> (4 * (k - 1))) & 0xf);
        EXPECT_EQ(dec.partial_secret().value(), s.x.value() & ((1ull << (4 * k)) - 1));
        EXPECT_EQ(dec.limbs_decrypted(), k);
        if (k < s.params.m) {
            try {
                dec.finish();
                FAIL();
            } catch (const Error& e) {
                EXPECT_EQ(e.code(), Errc::Incomplete);
            }
        }
    }
}

TEST(Juggling, KeyMismatchAndSecretOutOfRange) {
    ToySession s;
    try {
        Encryptor<T> enc(s.x, s.Q + T::generator(), s.key.Y, s.params, s.rng);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::KeyMismatch);
    }
    const auto big = TS::from_u64(600000);  // bit 19 set
    try {
        Encryptor<T> enc(big, mul_base<T>(big), s.key.Y, s.params, s.rng);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::SecretOutOfRange);
    }
}

TEST(Juggling, TamperedSetupIsRejected) {
    ToySession s;
    Encryptor<T> enc(s.x, s.Q, s.key.Y, s.params, s.rng);
    auto bundle = enc.bundle();
    ASSERT_TRUE(verify_setup<T>(bundle, s.Q, s.key.Y, s.params));

    auto shifted = bundle;
    shifted.all_D[0] = shifted.all_D[0] + T::generator();
    EXPECT_FALSE(verify_setup<T>(shifted, s.Q, s.key.Y, s.params));

    auto e_shift = bundle;
    e_shift.E_agg = e_shift.E_agg + T::generator();
    EXPECT_FALSE(verify_setup<T>(e_shift, s.Q, s.key.Y, s.params));

    auto short_bundle = bundle;
    short_bundle.all_D.pop_back();
    EXPECT_FALSE(verify_setup<T>(short_bundle, s.Q, s.key.Y, s.params));

    EXPECT_FALSE(verify_setup<T>(bundle, s.Q + T::generator(), s.key.Y, s.params));

    Verifier<T> v(s.Q, s.key.Y, s.params);
    EXPECT_FALSE(v.accept_setup(shifted));
    EXPECT_TRUE(v.poisoned());
    EXPECT_FALSE(v.accept_setup(bundle));
}

TEST(Juggling, BiasedLimbsAreRejected) {
    Drbg rng(52);
    std::size_t rejected = 0, total = 0;
    for (int i = 0; i < 40; ++i) {
        auto key = elgamal::KeyPair<T>::generate(rng);
        auto x = random_segmentable_secret<T>(rng);
        auto Q = mul_base<T>(x);
        auto params = SegmentationParams::for_group<T>(4);
        auto enc = adversary::inverse_weight_biased_encryptor<T>(x, Q, key.Y, params, i % (params.m - 1), rng);
        ++total;
        if (!verify_setup<T>(enc.bundle(), Q, key.Y, params)) ++rejected;
        // The biased limbs still sum to x, so the encdlog part alone is fine.
        const auto f = params.weights<T>();
        T::Point D_agg = T::identity();
        for (std::size_t k = 0; k < params.m; ++k) D_agg = D_agg + f[k] * enc.bundle().all_D[k];
        EXPECT_TRUE(sigma::encdlog::verify<T>({T::generator(), key.Y, Q, D_agg, enc.bundle().E_agg},
                                              enc.bundle().encdlog_proof));
    }
    EXPECT_EQ(rejected, total);
}

TEST(Juggling, ReleasesMustComeInOrder) {
    ToySession s;
    Encryptor<T> enc(s.x, s.Q, s.key.Y, s.params, s.rng);
    try {
        enc.release_segment(2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::OutOfOrder);
    }
    Decryptor<T> dec(s.key, s.Q, s.params);
    auto r1 = enc.release_next();
    try {
        dec.accept_segment(r1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::OutOfOrder);  // no setup yet
    }
    ASSERT_TRUE(dec.accept_setup(enc.bundle()));
    auto r2 = enc.release_next();
    EXPECT_THROW(dec.accept_segment(r2), Error);
    dec.accept_segment(r1);
    dec.accept_segment(r2);
    EXPECT_THROW(dec.accept_setup(enc.bundle()), Error);
}

TEST(Juggling, ReusedEphemeralIsRejected) {
    ToySession s;
    Encryptor<T> enc(s.x, s.Q, s.key.Y, s.params, s.rng);
    Verifier<T> v(s.Q, s.key.Y, s.params);
    ASSERT_TRUE(v.accept_setup(enc.bundle()));
    auto r1 = enc.release_next();
    v.check_release(r1);
    auto r2 = enc.release_next();
    r2.E_k = r1.E_k;
    try {
        v.check_release(r2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ProofRejected);
    }
    EXPECT_TRUE(v.poisoned());
    EXPECT_EQ(v.verified_segments(), 1u);
}

TEST(Juggling, CorruptedReleaseIsRejected) {
    ToySession s;
    Encryptor<T> enc(s.x, s.Q, s.key.Y, s.params, s.rng);
    Decryptor<T> dec(s.key, s.Q, s.params);
    ASSERT_TRUE(dec.accept_setup(enc.bundle()));
    EXPECT_THROW(dec.accept_segment(adversary::corrupt(enc.release_next())), Error);
    EXPECT_TRUE(dec.poisoned());
    EXPECT_EQ(dec.limbs_decrypted(), 0u);
}

TEST(Juggling, WireCodecsRoundTrip) {
    ToySession s;
    Encryptor<T> enc(s.x, s.Q, s.key.Y, s.params, s.rng);
    auto wire = enc.bundle().encode();
    auto back = SetupBundle<T>::decode(wire);
    EXPECT_EQ(back.encode(), wire);
    EXPECT_TRUE(verify_setup<T>(back, s.Q, s.key.Y, s.params));
    auto rel = enc.release_next();
    auto rel_back = SegmentRelease<T>::decode(rel.encode());
    EXPECT_EQ(rel_back.k, 1u);
    EXPECT_EQ(rel_back.encode(), rel.encode());
    wire.pop_back();
    EXPECT_THROW(SetupBundle<T>::decode(wire), Error);
}

TEST(Juggling, Secp256k1EightBitSegments) {
    Drbg rng(53);
    auto key = elgamal::KeyPair<Secp256k1>::generate(rng);
    auto x = random_segmentable_secret<Secp256k1>(rng);
    auto Q = mul_base<Secp256k1>(x);
    auto params = SegmentationParams::for_group<Secp256k1>(8);
    Encryptor<Secp256k1> enc(x, Q, key.Y, params, rng);
    Decryptor<Secp256k1> dec(key, Q, params);
    EXPECT_EQ(dec.extraction_table().table_size(), 16u);
    ASSERT_TRUE(dec.accept_setup(enc.bundle()));
    while (!enc.done()) dec.accept_segment(enc.release_next());
    EXPECT_EQ(dec.finish(), x);
    auto segs = segment<Secp256k1>(x, params);
    EXPECT_EQ(dec.limbs(), segs.limbs);
}

} // namespace
