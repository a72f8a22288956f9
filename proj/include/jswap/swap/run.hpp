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

#ifndef JSWAP_SWAP_RUN_HPP
#define JSWAP_SWAP_RUN_HPP

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "jswap/swap/roles.hpp"

namespace jswap::swap {

struct FairnessReport {
    std::size_t p1_decrypted = 0;  // segments of P2's share that P1 holds
    std::size_t p2_decrypted = 0;  // segments of P1's share that P2 holds
    std::size_t m = 0;

    std::size_t advantage() const noexcept {
        return p1_decrypted > p2_decrypted ? p1_decrypted - p2_decrypted : p2_decrypted - p1_decrypted;
    }
};

struct Holdings {
    std::int64_t p1 = 0;
    std::int64_t p2 = 0;
    std::int64_t provider = 0;
};

struct AbortRecord {
    Role by{};
    AbortNotice notice;
};

template <PrimeOrderGroup G>
struct SwapResult {
    SwapTerms<G> terms;
    ledger::Chain<G> chain1;
    ledger::Chain<G> chain2;
    Transcript transcript;
    FairnessReport fairness;
    Step p1_step{}, p2_step{};
    std::vector<AbortRecord> aborts;
    std::set<Role> revoked;
    Holdings initial, final;
    std::size_t provider_verified_p1 = 0, provider_verified_p2 = 0;

    bool completed() const noexcept { return p1_step == Step::Done && p2_step == Step::Done; }

    /// Role blamed by the first abort, if any.
    std::optional<Role> cheater() const {
        if (aborts.empty()) return std::nullopt;
        return aborts.front().notice.blamed;
    }

    std::string outcome() const {
        if (completed()) return "Done";
        if (aborts.empty()) return "Stalled";
        return "Aborted(" + aborts.front().notice.reason + ")";
    }
};

template <PrimeOrderGroup G>
Holdings holdings_of(const SwapTerms<G>& t, const ledger::Chain<G>& c1, const ledger::Chain<G>& c2) {
    auto sum = [&](const ledger::Address& a) {
        return static_cast<std::int64_t>(c1.balance(a) + c2.balance(a));
    };
    return {sum(t.in_address(Role::P1)) + sum(t.out_address(Role::P1)),
            sum(t.in_address(Role::P2)) + sum(t.out_address(Role::P2)), sum(t.provider)};
}

/// Runs the full swap among P1, P2 and S on two fresh ledgers. Deterministic
/// in config.seed. Throws InvalidArgument on a bad configuration.
template <PrimeOrderGroup G, class RP = range::DefaultRangeProof<G>>
SwapResult<G> run_swap(const SwapConfig& cfg) {
    using Tx = ledger::Transaction<G>;

    if (cfg.segment_bits < 2 || cfg.segment_bits > 16) throw Error(Errc::InvalidArgument, "segment bits must be in [2, 16]");
    if (cfg.key_parties != 2 && cfg.key_parties != 3) throw Error(Errc::InvalidArgument, "key parties must be 2 or 3");
    if (cfg.chain1 == cfg.chain2) throw Error(Errc::InvalidArgument, "chains must differ");
    if (cfg.amount1 == 0 || cfg.amount2 == 0) throw Error(Errc::InvalidArgument, "amounts must be positive");
    if (cfg.initial1 < cfg.amount1 || cfg.initial2 < cfg.amount2) {
        throw Error(Errc::InvalidArgument, "genesis balance below the swap amount");
    }
    const auto params = SegmentationParams::for_group<G>(cfg.segment_bits);
    const auto& adv = cfg.adversary;
    if ((adv.kind == Adversary::Kind::AbortAtSegment || adv.kind == Adversary::Kind::CorruptProof) && adv.k > params.m) {
        throw Error(Errc::InvalidArgument, "juggling frame index beyond m");
    }

    Drbg root(cfg.seed);
    Drbg setup = root.fork("setup");

    // Wallets exist before the swap: {2,2} keys shared by each owner and S.
    auto wallet = [&](const char* label) {
        Drbg sub = setup.fork(label);
        return threshold::thresh_keygen<G>(2, sub);
    };
    auto in1 = wallet("wallet/P1/in"), out1 = wallet("wallet/P1/out");
    auto in2 = wallet("wallet/P2/in"), out2 = wallet("wallet/P2/out");

    SwapTerms<G> terms;
    terms.group = std::string(G::name());
    terms.segment_bits = static_cast<std::uint8_t>(cfg.segment_bits);
    terms.key_parties = static_cast<std::uint8_t>(cfg.key_parties);
    terms.chain1 = cfg.chain1;
    terms.chain2 = cfg.chain2;
    terms.amount1 = cfg.amount1;
    terms.amount2 = cfg.amount2;
    terms.initial1 = cfg.initial1;
    terms.initial2 = cfg.initial2;
    terms.provider_float = cfg.provider_float;
    terms.wallet_in1 = in1[0].Q;
    terms.wallet_out1 = out1[0].Q;
    terms.wallet_in2 = in2[0].Q;
    terms.wallet_out2 = out2[0].Q;
    {
        Drbg sub = setup.fork("provider/account");
        terms.provider = ledger::address_of<G>(mul_base<G>(random_nonzero_scalar<G>(sub)));
    }

    SwapResult<G> res{terms, ledger::Chain<G>(cfg.chain1, terms.genesis(cfg.chain1)),
                      ledger::Chain<G>(cfg.chain2, terms.genesis(cfg.chain2)), {}, {}, {}, {}, {}, {}, {}, {}};
    res.initial = holdings_of(terms, res.chain1, res.chain2);
    res.fairness.m = params.m;

    std::deque<std::pair<Role, Frame>> queue;
    auto chain_for = [&](std::uint32_t id) -> ledger::Chain<G>* {
        if (id == cfg.chain1) return &res.chain1;
        if (id == cfg.chain2) return &res.chain2;
        return nullptr;
    };
    auto confirm = [&](const Tx& tx) {
        Role node = tx.chain_id == cfg.chain1 ? Role::B1 : Role::B2;
        queue.emplace_back(node, Frame{MsgType::TxConfirmed, tx.encode()});
    };

    auto submit_pair = [&](const Tx& a, const Tx& b, ledger::PairSubmitMode mode) {
        auto* ca = chain_for(a.chain_id);
        auto* cb = chain_for(b.chain_id);
        if (!ca || !cb || ca == cb) return;
        auto r = ledger::atomic_pair_submit<G>(*ca, a, *cb, b, mode);
        if (r.first_applied) confirm(a);
        if (r.second_applied) confirm(b);
    };

    Owner<G, RP> p1(Role::P1, terms, {in1[0], out1[0]}, adv, root.fork("P1"));
    Owner<G, RP> p2(Role::P2, terms, {in2[0], out2[0]}, adv, root.fork("P2"));
    Provider<G, RP> s(terms, {in1[1], out1[1]}, {in2[1], out2[1]}, adv, root.fork("S"), submit_pair);

    auto flush = [&](Role from, Outbox& ob) {
        for (auto& f : ob.frames) queue.emplace_back(from, std::move(f));
        ob.frames.clear();
    };

    auto deliver = [&](const LoggedFrame& lf) {
        Outbox ob;
        if (lf.sender != Role::P1) {
            p1.on_frame(lf, ob);
            flush(Role::P1, ob);
        }
        if (lf.sender != Role::P2) {
            p2.on_frame(lf, ob);
            flush(Role::P2, ob);
        }
        if (lf.sender != Role::S) {
            s.on_frame(lf, ob);
            flush(Role::S, ob);
        }
        if (lf.frame.type == MsgType::Abort) {
            res.aborts.push_back({lf.sender, AbortNotice::decode(lf.frame.payload)});
        }
        // Owners broadcast their own withdrawals to the destination chain.
        if (lf.frame.type == MsgType::TxBroadcast && (lf.sender == Role::P1 || lf.sender == Role::P2)) {
            auto t = untag(lf.frame.payload);
            if (is_withdraw(t.id)) {
                auto tx = Tx::decode(t.inner);
                if (auto* c = chain_for(tx.chain_id); c && c->submit(tx) == ledger::TxStatus::Accepted) confirm(tx);
            }
        }
    };

    auto pump = [&] {
        while (!queue.empty()) {
            auto [from, frame] = std::move(queue.front());
            queue.pop_front();
            deliver(res.transcript.append(from, std::move(frame)));
        }
    };

    queue.emplace_back(Role::ME, Frame{MsgType::Config, terms.encode()});
    {
        Outbox ob;
        p1.start(ob);
        flush(Role::P1, ob);
        p2.start(ob);
        flush(Role::P2, ob);
    }
    pump();
    // Idle rounds model timeouts: each waiting role gets one chance to abort.
    for (int round = 0; round < 3; ++round) {
        Outbox ob;
        p1.on_idle(ob);
        flush(Role::P1, ob);
        p2.on_idle(ob);
        flush(Role::P2, ob);
        s.on_idle(ob);
        flush(Role::S, ob);
        if (queue.empty()) break;
        pump();
    }

    res.fairness.p1_decrypted = p1.decrypted_segments();
    res.fairness.p2_decrypted = p2.decrypted_segments();
    res.p1_step = p1.step();
    res.p2_step = p2.step();
    res.revoked = s.revoked();
    res.provider_verified_p1 = s.verified_segments(Role::P1);
    res.provider_verified_p2 = s.verified_segments(Role::P2);
    res.final = holdings_of(terms, res.chain1, res.chain2);
    return res;
}

} // namespace jswap::swap

#endif // JSWAP_SWAP_RUN_HPP
