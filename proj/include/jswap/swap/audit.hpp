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
 * Offline transcript audit. Replays every frame with public data only:
 * keygen openings, setup bundles, segment proofs and the ledger history
 * rebuilt from genesis. Cryptographic failures are attributed to the
 * sender. Missing work is attributed by the protocol's order of play.
 */

#ifndef JSWAP_SWAP_AUDIT_HPP
#define JSWAP_SWAP_AUDIT_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jswap/juggling.hpp"
#include "jswap/ledger.hpp"
#include "jswap/swap/frame.hpp"
#include "jswap/swap/terms.hpp"

namespace jswap::swap {

struct Verdict {
    std::optional<Role> blamed;
    std::string reason;
    std::size_t tx_chain1 = 0;
    std::size_t tx_chain2 = 0;
    std::size_t juggled_p1 = 0;  // juggling frames verified from P1
    std::size_t juggled_p2 = 0;
    std::vector<std::string> notes;

    bool clean() const noexcept { return !blamed.has_value(); }
};

/// Throws MalformedTranscript if the first frame is not a Config frame for
/// group G.
template <PrimeOrderGroup G, class RP = range::DefaultRangeProof<G>>
Verdict audit_transcript(const Transcript& tr) {
    using Point = typename G::Point;
    using Tx = ledger::Transaction<G>;

    const auto& frames = tr.frames();
    if (frames.empty() || frames[0].frame.type != MsgType::Config || frames[0].sender != Role::ME) {
        throw Error(Errc::MalformedTranscript, "transcript does not start with the swap terms");
    }
    SwapTerms<G> terms;
    try {
        terms = SwapTerms<G>::decode(frames[0].frame.payload);
    } catch (const Error& e) {
        throw Error(Errc::MalformedTranscript, std::string("bad swap terms: ") + e.what());
    }
    if (terms.group != G::name()) throw Error(Errc::MalformedTranscript, "transcript is for group " + terms.group);
    const auto params = terms.params();

    Verdict v;
    auto blame = [&](Role r, std::string why) {
        if (!v.blamed) {
            v.blamed = r;
            v.reason = std::move(why);
        }
    };

    ledger::Chain<G> chain1(terms.chain1, terms.genesis(terms.chain1));
    ledger::Chain<G> chain2(terms.chain2, terms.genesis(terms.chain2));
    std::array<std::optional<Point>, 2> Y;
    std::array<KeygenView<G>, 2> views{KeygenView<G>(terms.key_parties), KeygenView<G>(terms.key_parties)};
    std::array<std::optional<juggling::Verifier<G, RP>>, 2> verifiers;
    std::array<std::size_t, 2> juggled{};
    std::array<bool, 2> deposited{}, withdrawn{}, deposit_signed{};
    std::set<std::uint8_t> requested;
    std::set<std::pair<std::uint8_t, Role>> nonce_committers;

    auto idx = [](Role r) { return r == Role::P1 ? 0 : 1; };
    auto is_owner = [](Role r) { return r == Role::P1 || r == Role::P2; };

    for (std::size_t i = 1; i < frames.size() && !v.blamed; ++i) {
        const auto& f = frames[i];
        const auto& payload = f.frame.payload;
        try {
            switch (f.frame.type) {
            case MsgType::Config: throw Error(Errc::MalformedFrame, "second Config frame");
            case MsgType::EncKey:
                if (!is_owner(f.sender)) throw Error(Errc::MalformedFrame, "encryption key from a non-owner");
                Y[idx(f.sender)] = Point::decode(payload);
                break;
            case MsgType::KeygenCommit:
            case MsgType::KeygenReveal: {
                auto t = untag(payload);
                if (t.id != 1 && t.id != 2) throw Error(Errc::MalformedFrame, "keygen id");
                auto& view = views[t.id - 1];
                if (f.frame.type == MsgType::KeygenCommit) {
                    auto c = threshold::KeygenCommit<G>::decode(t.inner);
                    if (c.party != slot_of(f.sender)) throw Error(Errc::MalformedFrame, "commit for another slot");
                    view.on_commit(c);
                } else {
                    auto r = threshold::KeygenReveal<G>::decode(t.inner);
                    if (r.party != slot_of(f.sender)) throw Error(Errc::MalformedFrame, "reveal for another slot");
                    view.on_reveal(r);
                }
                if (views[0].complete() && views[1].complete() && Y[0] && Y[1] && !verifiers[0]) {
                    verifiers[0].emplace(views[0].local_key(slot_of(Role::P1)), *Y[1], params);
                    verifiers[1].emplace(views[1].local_key(slot_of(Role::P2)), *Y[0], params);
                }
                break;
            }
            case MsgType::SignRequest: requested.insert(untag(payload).id); break;
            case MsgType::NonceCommit: nonce_committers.insert({untag(payload).id, f.sender}); break;
            case MsgType::TxBroadcast: {
                auto t = untag(payload);
                auto tx = Tx::decode(t.inner);
                if (t.id == sid_deposit1 || t.id == sid_deposit2) {
                    if (!threshold::schnorr_verify<G>(tx.pubkey, tx.signing_bytes(), tx.sig)) {
                        throw Error(Errc::ProofRejected, "broadcast deposit carries a bad signature");
                    }
                    deposit_signed[t.id == sid_deposit1 ? 0 : 1] = true;
                }
                break;
            }
            case MsgType::TxConfirmed: {
                if (f.sender != Role::B1 && f.sender != Role::B2) throw Error(Errc::MalformedFrame, "confirmation from a non-chain role");
                auto tx = Tx::decode(payload);
                auto& chain = f.sender == Role::B1 ? chain1 : chain2;
                auto st = chain.submit(tx);
                if (st != ledger::TxStatus::Accepted) {
                    throw Error(Errc::ProofRejected, "confirmed transaction replays as " + std::string(ledger::to_string(st)));
                }
                if (!views[0].complete() || !views[1].complete()) break;
                for (Role r : {Role::P1, Role::P2}) {
                    const auto a_r = ledger::address_of<G>(views[idx(r)].Q());
                    if (tx.chain_id == terms.chain_of(r) && tx.from == terms.in_address(r) && tx.to == a_r &&
                        tx.amount == terms.amount_of(r)) {
                        deposited[idx(r)] = true;
                    }
                    if (tx.from == a_r) {
                        if (tx.to != terms.out_address(peer_of(r))) {
                            throw Error(Errc::ProofRejected, "swap address emptied to a foreign account");
                        }
                        withdrawn[idx(peer_of(r))] = true;
                    }
                }
                break;
            }
            case MsgType::SetupBundle:
            case MsgType::SegmentRelease: {
                if (!is_owner(f.sender)) throw Error(Errc::MalformedFrame, "juggling frame from a non-owner");
                auto& ver = verifiers[idx(f.sender)];
                if (!ver) throw Error(Errc::OutOfOrder, "juggling before key generation");
                if (f.frame.type == MsgType::SetupBundle) {
                    if (!ver->accept_setup(juggling::SetupBundle<G, RP>::decode(payload))) {
                        throw Error(Errc::ProofRejected, "setup bundle rejected");
                    }
                } else {
                    ver->check_release(juggling::SegmentRelease<G>::decode(payload));
                }
                ++juggled[idx(f.sender)];
                break;
            }
            case MsgType::Abort: {
                auto n = AbortNotice::decode(payload);
                v.notes.push_back(std::string(to_string(f.sender)) + " aborted blaming " + std::string(to_string(n.blamed)) +
                                  ": " + n.reason);
                break;
            }
            default: break;
            }
        } catch (const Error& e) {
            blame(f.sender, std::string(to_string(f.frame.type)) + " at ordinal " + std::to_string(f.ordinal) + ": " + e.what());
        }
    }

    v.tx_chain1 = chain1.log().size();
    v.tx_chain2 = chain2.log().size();
    v.juggled_p1 = juggled[0];
    v.juggled_p2 = juggled[1];
    if (v.blamed) return v;

    const bool provider_keys = terms.key_parties == 3;
    auto provider_committed = [&](std::uint8_t sid) { return nonce_committers.count({sid, Role::S}) != 0; };

    // Deposits: both owners asked; the provider must co-sign and land both.
    for (Role r : {Role::P1, Role::P2}) {
        if (requested.count(deposit_sid(r)) && !provider_committed(deposit_sid(r))) {
            blame(Role::S, "provider never co-signed " + std::string(to_string(r)) + "'s deposit");
        }
    }
    if (deposit_signed[0] && deposit_signed[1] && deposited[0] != deposited[1]) {
        blame(Role::S, "only one deposit transaction on-chain");
    } else if (deposit_signed[0] && deposit_signed[1] && !deposited[0]) {
        blame(Role::S, "signed deposits never submitted");
    }
    if (v.blamed) return v;
    if (!deposited[0] || !deposited[1]) {
        v.notes.push_back("swap ended before funding");
        return v;
    }

    // Juggling: P1 leads each round, so equal counts mean P1 owes a frame.
    const std::size_t full = params.m + 1;
    if (juggled[0] < full || juggled[1] < full) {
        if (juggled[0] == juggled[1]) {
            blame(Role::P1, "P1 withheld juggling frame " + std::to_string(juggled[0]));
        } else if (juggled[0] == juggled[1] + 1) {
            blame(Role::P2, "P2 withheld juggling frame " + std::to_string(juggled[1]));
        } else {
            blame(juggled[0] > juggled[1] ? Role::P2 : Role::P1, "juggling frames out of alternation");
        }
        return v;
    }

    // Withdrawals: a request the provider ignored is a denial of service.
    for (Role r : {Role::P1, Role::P2}) {
        if (withdrawn[idx(r)]) continue;
        if (provider_keys && requested.count(withdraw_sid(r)) && !provider_committed(withdraw_sid(r))) {
            blame(Role::S, "provider refused to co-sign " + std::string(to_string(r)) + "'s withdrawal");
        } else {
            v.notes.push_back(std::string(to_string(r)) + " has not withdrawn yet");
        }
    }
    return v;
}

} // namespace jswap::swap

#endif // JSWAP_SWAP_AUDIT_HPP
