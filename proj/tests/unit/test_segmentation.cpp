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
#include <openssl/bn.h>

#include <memory>

#include "jswap/group/secp256k1.hpp"
#include "jswap/group/toy_group.hpp"
#include "jswap/segmentation.hpp"

using namespace jswap;

namespace {

TEST(SegmentationParams, CountsAndTopWidth) {
    auto p = SegmentationParams::make(16, 4);
    EXPECT_EQ(p.m, 4u);
    EXPECT_EQ(p.top_bits(), 3u);
    auto s = SegmentationParams::for_group<Secp256k1>(8);
    EXPECT_EQ(s.m, 32u);
    EXPECT_EQ(s.top_bits(), 7u);
    auto t = SegmentationParams::for_group<ToyGroup>(4);
    EXPECT_EQ(t.m, 5u);
    EXPECT_EQ(t.top_bits(), 3u);
    auto odd = SegmentationParams::for_group<ToyGroup>(3);  // 19 secret bits
    EXPECT_EQ(odd.m, 7u);
    EXPECT_EQ(odd.top_bits(), 1u);
    EXPECT_THROW(SegmentationParams::make(16, 0), Error);
    EXPECT_THROW(SegmentationParams::make(16, 33), Error);
}

TEST(Segment, WorkedExample) {
    auto p = SegmentationParams::make(16, 4);
    auto segs = segment_bytes(from_hex("1234"), p);
    EXPECT_EQ(segs.limbs, (std::vector<std::uint64_t>{4, 3, 2, 1}));
}

TEST(Segment, MostSignificantBitMustBeZero) {
    auto p = SegmentationParams::make(16, 4);
    try {
        segment_bytes(from_hex("8000"), p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::SecretOutOfRange);
    }
    EXPECT_NO_THROW(segment_bytes(from_hex("7fff"), p));
}

TEST(Segment, ToyRoundTripAgainstIntegerOracle) {
    auto p = SegmentationParams::for_group<ToyGroup>(4);
    for (std::uint64_t x = 0; x < (1u << 19); x += 397) {
        auto s = segment<ToyGroup>(ToyGroup::Scalar::from_u64(x), p);
        for (std::size_t k = 0; k < p.m; ++k) ASSERT_EQ(s.limbs[k], (x >> (4 * k)) & 0xf);
        ASSERT_EQ(reconstruct<ToyGroup>(s, p).value(), x);
    }
}

TEST(Segment, SecpLimbsMatchBignumBits) {
    Drbg rng(3);
    for (std::size_t l : {2u, 5u, 8u, 16u}) {
        auto p = SegmentationParams::for_group<Secp256k1>(l);
        for (int i = 0; i < 200; ++i) {
            auto x = random_segmentable_secret<Secp256k1>(rng);
            auto enc = x.encode();
            std::unique_ptr<BIGNUM, decltype(&BN_free)> bn(BN_bin2bn(enc.data(), static_cast<int>(enc.size()), nullptr),
                                                           &BN_free);
            ASSERT_LE(BN_num_bits(bn.get()), 255);
            auto segs = segment<Secp256k1>(x, p);
            for (std::size_t k = 0; k < p.m; ++k) {
                std::uint64_t v = 0;
                for (std::size_t b = 0; b < l; ++b) {
                    if (BN_is_bit_set(bn.get(), static_cast<int>(k * l + b))) v |= std::uint64_t{1} << b;
                }
                ASSERT_EQ(segs.limbs[k], v);
                ASSERT_LT(segs.limbs[k], std::uint64_t{1} << p.bits_of(k));
            }
            ASSERT_EQ(reconstruct<Secp256k1>(segs, p), x);
        }
    }
}

TEST(Reconstruct, RejectsBadLimbs) {
    auto p = SegmentationParams::make(16, 4);
    try {
        reconstruct<ToyGroup>(Segments{{4, 3, 16, 1}}, p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::LimbOutOfRange);
    }
    EXPECT_THROW(reconstruct<ToyGroup>(Segments{{4, 3, 2}}, p), Error);
}

TEST(Reconstruct, WeightsArePowersOfTwo) {
    auto p = SegmentationParams::for_group<ToyGroup>(4);
    auto w = p.weights<ToyGroup>();
    for (std::size_t k = 0; k < p.m; ++k) {
        EXPECT_EQ(w[k].value(), std::uint64_t{1} << (4 * k));
        EXPECT_EQ(p.weight<ToyGroup>(k), w[k]);
    }
}

TEST(Segment, RandomSecretsHaveClearTopBit) {
    Drbg rng(11);
    for (int i = 0; i < 1000; ++i) {
        EXPECT_LT(random_segmentable_secret<ToyGroup>(rng).value(), 1u << 19);
        EXPECT_LE(bit_length<Secp256k1>(random_segmentable_secret<Secp256k1>(rng)), 255u);
    }
}

} // namespace
