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

#include <sstream>

#include "jswap/group/toy_group.hpp"
#include "jswap/swap.hpp"

using namespace jswap;
using namespace jswap::swap;

namespace {

using G = ToyGroup;

SwapResult<G> run(Adversary adv = Adversary::none(), std::uint64_t seed = 1, std::size_t key_parties = 3) {
    SwapConfig cfg;
    cfg.adversary = adv;
    cfg.seed = seed;
    cfg.key_parties = key_parties;
    return run_swap<G>(cfg);
}

std::size_t first_ordinal(const Transcript& tr, MsgType t) {
    for (const auto& f : tr.frames())
        if (f.frame.type == t) return f.ordinal;
    return SIZE_MAX;
}

TEST(Swap, HonestRunCompletes) {
    auto r = run();
    ASSERT_TRUE(r.completed()) << r.outcome();
    EXPECT_EQ(r.outcome(), "Done");
    EXPECT_TRUE(r.aborts.empty());
    EXPECT_EQ(r.fairness.m, 5u);
    EXPECT_EQ(r.fairness.p1_decrypted, 5u);
    EXPECT_EQ(r.fairness.p2_decrypted, 5u);
    EXPECT_EQ(r.chain1.log().size(), 2u);
    EXPECT_EQ(r.chain2.log().size(), 2u);
    EXPECT_EQ(r.final.p1, r.initial.p1 - 100 + 250);
    EXPECT_EQ(r.final.p2, r.initial.p2 - 250 + 100);
    EXPECT_EQ(r.final.provider, r.initial.provider);
    EXPECT_EQ(r.chain1.total_supply(), 1000u + 500u);
    EXPECT_EQ(r.chain2.total_supply(), 1000u + 500u);
    EXPECT_EQ(r.chain2.balance(r.terms.out_address(Role::P1)), 250u);
    EXPECT_EQ(r.chain1.balance(r.terms.out_address(Role::P2)), 100u);
    EXPECT_EQ(r.provider_verified_p1, 5u);  // segment releases; the bundle is checked separately
    EXPECT_EQ(r.provider_verified_p2, 5u);
    auto v = audit_transcript<G>(r.transcript);
    EXPECT_TRUE(v.clean()) << v.reason;
    EXPECT_EQ(v.tx_chain1, 2u);
    EXPECT_EQ(v.juggled_p1, 6u);
}

TEST(Swap, TwoPartyKeysComplete) {
    auto r = run(Adversary::none(), 1, 2);
    ASSERT_TRUE(r.completed()) << r.outcome();
    EXPECT_TRUE(audit_transcript<G>(r.transcript).clean());
}

TEST(Swap, DeterministicInSeed) {
    auto a = run(Adversary::none(), 5);
    auto b = run(Adversary::none(), 5);
    auto c = run(Adversary::none(), 6);
    EXPECT_EQ(a.transcript.to_text(), b.transcript.to_text());
    EXPECT_NE(a.transcript.to_text(), c.transcript.to_text());
    EXPECT_EQ(a.chain1.state_hash(), b.chain1.state_hash());
}

TEST(Swap, JugglingStartsAfterBothDepositsConfirm) {
    auto r = run();
    const auto& frames = r.transcript.frames();
    std::size_t confirmations = 0, first_bundle = first_ordinal(r.transcript, MsgType::SetupBundle);
    for (const auto& f : frames) {
        if (f.ordinal >= first_bundle) break;
        if (f.frame.type == MsgType::TxConfirmed) ++confirmations;
    }
    EXPECT_EQ(confirmations, 2u);
}

TEST(Swap, JugglingFramesAlternate) {
    auto r = run();
    std::vector<Role> order;
    for (const auto& f : r.transcript.frames()) {
        if (f.frame.type == MsgType::SetupBundle || f.frame.type == MsgType::SegmentRelease) order.push_back(f.sender);
    }
    ASSERT_EQ(order.size(), 12u);
    for (std::size_t i = 0; i < order.size(); ++i) EXPECT_EQ(order[i], i % 2 == 0 ? Role::P1 : Role::P2) << i;
}

TEST(Swap, ByteAccountingAddsUp) {
    auto r = run();
    std::uint64_t per_role = 0;
    for (Role role : {Role::P1, Role::P2, Role::S, Role::B1, Role::B2, Role::ME}) per_role += r.transcript.payload_bytes(role);
    EXPECT_EQ(per_role, r.transcript.payload_bytes());
    std::uint64_t direct = 0;
    for (const auto& f : r.transcript.frames()) direct += f.frame.payload.size();
    EXPECT_EQ(direct, r.transcript.payload_bytes());
    EXPECT_EQ(r.transcript.count(MsgType::SegmentRelease), 10u);
    EXPECT_EQ(r.transcript.count(MsgType::SegmentRelease, Role::P1), 5u);
}

TEST(Swap, TranscriptTextRoundTrip) {
    auto r = run();
    auto text = r.transcript.to_text();
    auto back = Transcript::parse(text);
    EXPECT_EQ(back.to_text(), text);
    EXPECT_EQ(back.size(), r.transcript.size());
    std::istringstream is(text);
    EXPECT_EQ(Transcript::read(is).size(), r.transcript.size());
}

TEST(Swap, MalformedTranscriptsAreRejected) {
    for (std::string bad : {"", "not a transcript\n", "# jswap-transcript v1\n0\tP1\tEncKey\tzz\n",
                            "# jswap-transcript v1\n0\tXX\tEncKey\t00\n", "# jswap-transcript v1\n0\tP1\tNope\t00\n"}) {
        try {
            Transcript::parse(bad);
            FAIL() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::MalformedTranscript) << bad;
        }
    }
    Transcript headless;
    headless.append(Role::P1, Frame{MsgType::EncKey, {}});
    EXPECT_THROW(audit_transcript<G>(headless), Error);
}

TEST(Swap, AbortByP1LeavesNoAdvantage) {
    for (std::size_t k = 0; k <= 5; ++k) {
        auto r = run(Adversary::abort_at_segment(k, Role::P1));
        EXPECT_FALSE(r.completed());
        EXPECT_EQ(r.fairness.p1_decrypted, r.fairness.p2_decrypted) << k;
        EXPECT_LE(r.fairness.advantage(), 1u);
        ASSERT_TRUE(r.cheater().has_value()) << k;
        EXPECT_EQ(*r.cheater(), Role::P1);
        auto v = audit_transcript<G>(r.transcript);
        ASSERT_TRUE(v.blamed.has_value());
        EXPECT_EQ(*v.blamed, Role::P1) << v.reason;
    }
}

TEST(Swap, AbortByP2LeavesAdvantageOne) {
    for (std::size_t k = 0; k <= 5; ++k) {
        auto r = run(Adversary::abort_at_segment(k, Role::P2));
        EXPECT_FALSE(r.completed() && k < 5);
        EXPECT_LE(r.fairness.advantage(), 1u) << k;
        EXPECT_LE(r.final.p1 + r.final.p2, r.initial.p1 + r.initial.p2);
        auto v = audit_transcript<G>(r.transcript);
        ASSERT_TRUE(v.blamed.has_value()) << k;
        EXPECT_EQ(*v.blamed, Role::P2) << v.reason;
    }
}

TEST(Swap, CorruptProofIsCaughtAndRevoked) {
    auto r = run(Adversary::corrupt_proof(3, Role::P2));
    EXPECT_FALSE(r.completed());
    EXPECT_EQ(r.revoked.count(Role::P2), 1u);
    EXPECT_LE(r.fairness.advantage(), 1u);
    EXPECT_LE(r.final.p2, r.initial.p2);
    auto v = audit_transcript<G>(r.transcript);
    ASSERT_TRUE(v.blamed.has_value());
    EXPECT_EQ(*v.blamed, Role::P2);
}

TEST(Swap, BiasedSegmentsAreRejectedAtSetup) {
    for (Role p : {Role::P1, Role::P2}) {
        auto r = run(Adversary::biased_segments(p));
        EXPECT_FALSE(r.completed());
        EXPECT_EQ(r.fairness.p1_decrypted + r.fairness.p2_decrypted, 0u);
        ASSERT_TRUE(r.cheater().has_value());
        EXPECT_EQ(*r.cheater(), p);
        auto v = audit_transcript<G>(r.transcript);
        ASSERT_TRUE(v.blamed.has_value());
        EXPECT_EQ(*v.blamed, p);
    }
}

TEST(Swap, ProviderMisbehaviourIsBlamed) {
    for (auto adv : {Adversary::provider_withhold(), Adversary::provider_partial_sign()}) {
        auto r = run(adv);
        EXPECT_FALSE(r.completed()) << adv.to_string();
        EXPECT_EQ(r.final.provider, r.initial.provider);
        EXPECT_LE(r.final.p1, r.initial.p1 + 250);
        EXPECT_LE(r.final.p2, r.initial.p2 + 100);
        auto v = audit_transcript<G>(r.transcript);
        ASSERT_TRUE(v.blamed.has_value()) << adv.to_string();
        EXPECT_EQ(*v.blamed, Role::S) << v.reason;
    }
}

TEST(Swap, TamperedTranscriptBlamesSender) {
    auto r = run();
    Transcript t;
    bool done = false;
    for (const auto& f : r.transcript.frames()) {
        Frame fr = f.frame;
        if (!done && fr.type == MsgType::SegmentRelease && f.sender == Role::P2) {
            fr.payload.back() ^= 0x01;
            done = true;
        }
        t.append(f.sender, fr);
    }
    auto v = audit_transcript<G>(t);
    ASSERT_TRUE(v.blamed.has_value());
    EXPECT_EQ(*v.blamed, Role::P2);
}

TEST(Swap, AdversaryGrammar) {
    EXPECT_EQ(Adversary::parse("none").kind, Adversary::Kind::None);
    auto a = Adversary::parse("abort-at=3");
    EXPECT_TRUE(a.is(Adversary::Kind::AbortAtSegment, Role::P1));
    EXPECT_EQ(a.k, 3u);
    EXPECT_TRUE(Adversary::parse("abort-at=2:P2").is(Adversary::Kind::AbortAtSegment, Role::P2));
    EXPECT_TRUE(Adversary::parse("corrupt-proof=1").is(Adversary::Kind::CorruptProof, Role::P2));
    EXPECT_TRUE(Adversary::parse("biased-segments=P2").is(Adversary::Kind::BiasedSegments, Role::P2));
    EXPECT_EQ(Adversary::parse("provider-withhold").kind, Adversary::Kind::ProviderWithhold);
    EXPECT_EQ(Adversary::parse("provider-partial-sign").kind, Adversary::Kind::ProviderPartialSign);
    for (auto bad : {"", "abort-at", "abort-at=x", "abort-at=1:S", "bogus"}) EXPECT_THROW(Adversary::parse(bad), Error) << bad;
    for (auto s : {"abort-at=3:P2", "corrupt-proof=1:P1", "biased-segments=P1", "provider-withhold"}) {
        EXPECT_EQ(Adversary::parse(Adversary::parse(s).to_string()).to_string(), Adversary::parse(s).to_string());
    }
}

TEST(Swap, ConfigValidation) {
    SwapConfig cfg;
    cfg.segment_bits = 1;
    EXPECT_THROW(run_swap<G>(cfg), Error);
    cfg = {};
    cfg.amount1 = 2000;
    EXPECT_THROW(run_swap<G>(cfg), Error);
    cfg = {};
    cfg.adversary = Adversary::abort_at_segment(6, Role::P1);
    EXPECT_THROW(run_swap<G>(cfg), Error);
}

TEST(SwapTerms, CodecRoundTrip) {
    auto r = run();
    auto wire = r.terms.encode();
    auto back = SwapTerms<G>::decode(wire);
    EXPECT_EQ(back.encode(), wire);
    EXPECT_EQ(peek_group(wire), "toy");
    EXPECT_EQ(back.params(), r.terms.params());
}

} // namespace
