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
 * Owner and provider state machines. Each role consumes frames one at a
 * time and appends its reactions to an outbox; it never touches another
 * role's state. The only outside effect is the provider's deposit
 * submission, which goes through a callback because the pair must land on
 * two ledgers at once.
 */

#ifndef JSWAP_SWAP_ROLES_HPP
#define JSWAP_SWAP_ROLES_HPP

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jswap/elgamal.hpp"
#include "jswap/juggling.hpp"
#include "jswap/ledger.hpp"
#include "jswap/swap/frame.hpp"
#include "jswap/swap/terms.hpp"
#include "jswap/threshold.hpp"

namespace jswap::swap {

struct Outbox {
    std::vector<Frame> frames;

    void post(MsgType t, Bytes payload) { frames.push_back({t, std::move(payload)}); }
    void abort(Role blamed, std::string reason) {
        post(MsgType::Abort, AbortNotice{blamed, std::move(reason)}.encode());
    }
};

enum class Step { KeyExchange, Keygen1, Keygen2, Deposit, Juggle, Withdraw, Done, Aborted };

constexpr std::string_view to_string(Step s) noexcept {
    switch (s) {
    case Step::KeyExchange: return "KeyExchange";
    case Step::Keygen1: return "Keygen1";
    case Step::Keygen2: return "Keygen2";
    case Step::Deposit: return "Deposit";
    case Step::Juggle: return "Juggle";
    case Step::Withdraw: return "Withdraw";
    case Step::Done: return "Done";
    case Step::Aborted: return "Aborted";
    }
    return "?";
}

/// Signing sessions keyed by session id, driven by frames. Frames for a
/// session not yet opened are held until it is.
template <PrimeOrderGroup G>
class SignBoard {
public:
    void open(std::uint8_t sid, const threshold::Signer<G>& signer, Bytes message, Drbg& rng, Outbox& out) {
        auto [it, inserted] = sessions_.try_emplace(sid, signer, std::move(message), rng);
        if (!inserted) throw Error(Errc::OutOfOrder, "signing session opened twice");
        auto& e = it->second;
        for (const auto& c : e.session.commits()) {
            e.own.insert(c.slot);
            e.commits.insert(c.slot);
            out.post(MsgType::NonceCommit, tagged(sid, c.encode()));
        }
        auto held = std::move(pending_[sid]);
        pending_.erase(sid);
        for (const auto& [type, bytes] : held) on_frame(type, sid, bytes, out);
        progress(sid, e, out);
    }

    bool is_open(std::uint8_t sid) const { return sessions_.count(sid) != 0; }

    /// Routes one signing frame. Errors from the session propagate.
    void on_frame(MsgType type, std::uint8_t sid, ByteView inner, Outbox& out) {
        auto it = sessions_.find(sid);
        if (it == sessions_.end()) {
            pending_[sid].emplace_back(type, Bytes(inner.begin(), inner.end()));
            return;
        }
        auto& e = it->second;
        switch (type) {
        case MsgType::NonceCommit: {
            auto c = threshold::NonceCommit<G>::decode(inner);
            if (e.own.count(c.slot)) return;
            e.session.receive_commit(c);
            e.commits.insert(c.slot);
            break;
        }
        case MsgType::NonceReveal: {
            auto v = threshold::NonceReveal<G>::decode(inner);
            if (e.own.count(v.slot)) return;
            e.session.receive_reveal(v);
            e.reveals.insert(v.slot);
            break;
        }
        case MsgType::PartialSig: {
            auto p = threshold::PartialSignature<G>::decode(inner);
            if (e.own.count(p.slot)) return;
            e.session.receive_partial(p);
            e.partials.insert(p.slot);
            break;
        }
        default: throw Error(Errc::InvalidArgument, "not a signing frame");
        }
        progress(sid, e, out);
    }

    std::optional<threshold::MultiSignature<G>> signature(std::uint8_t sid) const {
        auto it = sessions_.find(sid);
        if (it == sessions_.end() || it->second.partials.size() != it->second.n) return std::nullopt;
        return it->second.session.signature();
    }

private:
    struct Entry {
        Entry(const threshold::Signer<G>& s, Bytes msg, Drbg& rng) : session(s, std::move(msg), rng), n(s.n()) {}
        threshold::SigningSession<G> session;
        std::size_t n;
        std::set<threshold::Slot> own, commits, reveals, partials;
        bool revealed = false, signed_ = false;
    };

    void progress(std::uint8_t sid, Entry& e, Outbox& out) {
        if (!e.revealed && e.commits.size() == e.n) {
            e.revealed = true;
            for (const auto& v : e.session.reveals()) {
                e.reveals.insert(v.slot);
                out.post(MsgType::NonceReveal, tagged(sid, v.encode()));
            }
        }
        if (e.revealed && !e.signed_ && e.reveals.size() == e.n) {
            e.signed_ = true;
            for (const auto& p : e.session.partials()) {
                e.partials.insert(p.slot);
                out.post(MsgType::PartialSig, tagged(sid, p.encode()));
            }
        }
    }

    std::map<std::uint8_t, Entry> sessions_;
    std::map<std::uint8_t, std::vector<std::pair<MsgType, Bytes>>> pending_;
};

/// Share of a {2,2} wallet key held by one side.
template <PrimeOrderGroup G>
struct WalletShares {
    threshold::ThresholdKeyShare<G> in;
    threshold::ThresholdKeyShare<G> out;
};

// ---------------------------------------------------------------------------
// Owner

template <PrimeOrderGroup G, class RP = range::DefaultRangeProof<G>>
class Owner {
public:
    using Scalar = typename G::Scalar;
    using Point = typename G::Point;
    using Tx = ledger::Transaction<G>;

    Owner(Role me, SwapTerms<G> terms, WalletShares<G> wallet, Adversary adversary, Drbg rng)
        : me_(me), peer_(peer_of(me)), terms_(std::move(terms)), params_(terms_.params()),
          wallet_(std::move(wallet)), adversary_(adversary), rng_(std::move(rng)),
          enc_key_(elgamal::KeyPair<G>::generate(rng_)) {}

    Role role() const noexcept { return me_; }

    void start(Outbox& out) { out.post(MsgType::EncKey, enc_key_.Y.encode()); }

    void on_frame(const LoggedFrame& f, Outbox& out) {
        try {
            dispatch(f, out);
        } catch (const Error& e) {
            if (f.sender == Role::ME || f.sender == Role::B1 || f.sender == Role::B2) throw;
            fail(f.sender, std::string(to_string(f.frame.type)) + " from " + std::string(to_string(f.sender)) + ": " + e.what(), out);
        }
    }

    /// Called when nothing is in flight. Blames whoever the owner is waiting on.
    void on_idle(Outbox& out) {
        if (abort_seen_ || timed_out_ || step() == Step::Done) return;
        auto blame = [&](Role r, std::string why) {
            timed_out_ = true;
            fail(r, std::move(why), out);
        };
        if (deposit_requested_ && !deposit_broadcast_) return blame(Role::S, "provider did not co-sign the deposit");
        if (deposit_broadcast_ && !deposits_ok()) return blame(Role::S, "deposit pair not confirmed on both chains");
        if (juggle_waiting_on_peer()) {
            return blame(peer_, std::string(to_string(peer_)) + " withheld juggling frame " + std::to_string(received_));
        }
        if (withdraw_requested_ && !withdraw_broadcast_ && terms_.key_parties == 3) {
            return blame(Role::S, "provider did not co-sign the withdrawal");
        }
    }

    Step step() const noexcept {
        if (withdraw_confirmed_) return Step::Done;
        if (abort_seen_ && !dec_complete()) return Step::Aborted;
        if (!peer_Y_) return Step::KeyExchange;
        if (!shares_[0]) return Step::Keygen1;
        if (!shares_[1]) return Step::Keygen2;
        if (!deposits_ok()) return Step::Deposit;
        if (!dec_complete()) return Step::Juggle;
        return Step::Withdraw;
    }

    /// Index of the next juggling frame this owner would send.
    std::size_t juggle_index() const noexcept { return sent_; }
    std::size_t decrypted_segments() const { return dec_ ? dec_->limbs_decrypted() : 0; }
    std::size_t released_segments() const noexcept { return sent_ == 0 ? 0 : sent_ - 1; }
    bool withdrawn() const noexcept { return withdraw_confirmed_; }
    const std::vector<std::string>& failures() const noexcept { return failures_; }
    const elgamal::KeyPair<G>& enc_key() const noexcept { return enc_key_; }
    const std::optional<threshold::ThresholdKeyShare<G>>& share(std::size_t j) const { return shares_.at(j); }

private:
    // Keygen j (0-based) yields a_{j+1}; owner P_i juggles its share of a_i.
    std::size_t own_keygen() const { return me_ == Role::P1 ? 0 : 1; }
    std::size_t peer_keygen() const { return 1 - own_keygen(); }

    void dispatch(const LoggedFrame& f, Outbox& out) {
        const auto& payload = f.frame.payload;
        switch (f.frame.type) {
        case MsgType::Abort: abort_seen_ = true; return;
        case MsgType::EncKey:
            if (f.sender == peer_) {
                peer_Y_ = Point::decode(payload);
                begin_keygen(out);
            }
            return;
        case MsgType::KeygenCommit:
        case MsgType::KeygenReveal: on_keygen(f, out); return;
        case MsgType::NonceCommit:
        case MsgType::NonceReveal:
        case MsgType::PartialSig: {
            auto t = untag(payload);
            if (t.id != deposit_sid(me_) && t.id != withdraw_sid(me_)) return;
            board_.on_frame(f.frame.type, t.id, t.inner, out);
            after_signing(out);
            return;
        }
        case MsgType::TxConfirmed: on_confirmed(Tx::decode(payload), out); return;
        case MsgType::SetupBundle:
            if (f.sender == peer_) on_bundle(juggling::SetupBundle<G, RP>::decode(payload), out);
            return;
        case MsgType::SegmentRelease:
            if (f.sender == peer_) on_release(juggling::SegmentRelease<G>::decode(payload), out);
            return;
        default: return;
        }
    }

    void fail(Role blamed, std::string why, Outbox& out) {
        failures_.push_back(why);
        abort_seen_ = true;
        out.abort(blamed, std::move(why));
    }

    // -- keygen ---------------------------------------------------------

    void begin_keygen(Outbox& out) {
        for (std::size_t j = 0; j < 2; ++j) {
            Drbg sub = rng_.fork("keygen/" + std::to_string(j));
            keygen_[j].emplace(slot_of(me_), terms_.key_parties, sub);
            const auto c = keygen_[j]->commit();
            keygen_[j]->receive_commit(c);
            out.post(MsgType::KeygenCommit, tagged(static_cast<std::uint8_t>(j + 1), c.encode()));
            commits_[j] = 1;
            // Commitments from parties that started first.
            for (const auto& held : early_commits_[j]) {
                keygen_[j]->receive_commit(held);
                ++commits_[j];
            }
            early_commits_[j].clear();
            maybe_reveal(j, out);
        }
    }

    void on_keygen(const LoggedFrame& f, Outbox& out) {
        auto t = untag(f.frame.payload);
        if (t.id != 1 && t.id != 2) throw Error(Errc::MalformedFrame, "keygen id");
        const std::size_t j = t.id - 1;
        if (f.frame.type == MsgType::KeygenCommit) {
            auto c = threshold::KeygenCommit<G>::decode(t.inner);
            if (c.party != slot_of(f.sender)) throw Error(Errc::MalformedFrame, "commit for another party's slot");
            if (!keygen_[j]) {
                early_commits_[j].push_back(c);
                return;
            }
            keygen_[j]->receive_commit(c);
            ++commits_[j];
            maybe_reveal(j, out);
        } else {
            auto v = threshold::KeygenReveal<G>::decode(t.inner);
            if (v.party != slot_of(f.sender)) throw Error(Errc::MalformedFrame, "reveal for another party's slot");
            if (!keygen_[j]) throw Error(Errc::OutOfOrder, "reveal before keygen");
            keygen_[j]->receive_reveal(v);
            if (++reveals_[j] == terms_.key_parties) finish_keygen(j, out);
        }
    }

    void maybe_reveal(std::size_t j, Outbox& out) {
        if (revealed_[j] || commits_[j] != terms_.key_parties) return;
        revealed_[j] = true;
        const auto v = keygen_[j]->reveal();
        keygen_[j]->receive_reveal(v);
        ++reveals_[j];
        out.post(MsgType::KeygenReveal, tagged(static_cast<std::uint8_t>(j + 1), v.encode()));
        if (reveals_[j] == terms_.key_parties) finish_keygen(j, out);
    }

    void finish_keygen(std::size_t j, Outbox& out) {
        shares_[j] = keygen_[j]->finish();
        if (shares_[0] && shares_[1]) begin_deposit(out);
    }

    Point swap_key(std::size_t j) const { return shares_[j]->Q; }
    ledger::Address swap_address(std::size_t j) const { return ledger::address_of<G>(swap_key(j)); }

    // -- deposit ----------------------------------------------------------

    void begin_deposit(Outbox& out) {
        const std::size_t j = own_keygen();
        Tx tx;
        tx.chain_id = terms_.chain_of(me_);
        tx.from = terms_.in_address(me_);
        tx.to = swap_address(j);
        tx.amount = terms_.amount_of(me_);
        tx.nonce = 0;
        tx.pubkey = wallet_.in.Q;
        deposit_tx_ = tx;
        deposit_requested_ = true;
        out.post(MsgType::SignRequest, tagged(deposit_sid(me_), tx.encode_unsigned()));
        Drbg sub = rng_.fork("sign/deposit");
        board_.open(deposit_sid(me_), threshold::Signer<G>(wallet_.in), tx.signing_bytes(), sub, out);
        after_signing(out);
    }

    void after_signing(Outbox& out) {
        if (deposit_requested_ && !deposit_broadcast_) {
            if (auto sig = board_.signature(deposit_sid(me_))) {
                deposit_tx_.sig = *sig;
                deposit_broadcast_ = true;
                out.post(MsgType::TxBroadcast, tagged(deposit_sid(me_), deposit_tx_.encode()));
            }
        }
        if (withdraw_requested_ && !withdraw_broadcast_) {
            if (auto sig = board_.signature(withdraw_sid(me_))) {
                withdraw_tx_.sig = *sig;
                withdraw_broadcast_ = true;
                out.post(MsgType::TxBroadcast, tagged(withdraw_sid(me_), withdraw_tx_.encode()));
            }
        }
    }

    void on_confirmed(const Tx& tx, Outbox& out) {
        if (!shares_[0] || !shares_[1]) return;
        for (Role r : {Role::P1, Role::P2}) {
            const std::size_t j = r == Role::P1 ? 0 : 1;
            if (tx.chain_id == terms_.chain_of(r) && tx.from == terms_.in_address(r) && tx.to == swap_address(j) &&
                tx.amount == terms_.amount_of(r)) {
                deposit_confirmed_[j] = true;
            }
        }
        if (withdraw_broadcast_ && tx.from == withdraw_tx_.from && tx.to == withdraw_tx_.to && tx.chain_id == withdraw_tx_.chain_id) {
            withdraw_confirmed_ = true;
        }
        if (deposits_ok()) begin_juggling(out);
    }

    bool deposits_ok() const noexcept { return deposit_confirmed_[0] && deposit_confirmed_[1]; }

    // -- juggling -------------------------------------------------------------

    void begin_juggling(Outbox& out) {
        if (!enc_) {
            const auto& own = *shares_[own_keygen()];
            Drbg sub = rng_.fork("juggle/encrypt");
            if (adversary_.is(Adversary::Kind::BiasedSegments, me_)) {
                enc_.emplace(juggling::adversary::inverse_weight_biased_encryptor<G, RP>(own.x_i, own.Q_i, *peer_Y_, params_, 0, sub));
            } else {
                enc_.emplace(own.x_i, own.Q_i, *peer_Y_, params_, sub);
            }
            const auto& peer_share = *shares_[peer_keygen()];
            dec_.emplace(enc_key_, peer_share.local_keys.at(slot_of(peer_)), params_);
        }
        pump_juggling(out);
    }

    bool withholding(std::size_t t) const {
        return adversary_.is(Adversary::Kind::AbortAtSegment, me_) && t >= adversary_.k;
    }

    /// P1 sends frame t once it holds P2's frame t-1; P2 sends frame t once
    /// it holds P1's frame t.
    void pump_juggling(Outbox& out) {
        const std::size_t lead = me_ == Role::P1 ? 0 : 1;
        while (!abort_seen_ && enc_ && deposits_ok() && sent_ <= params_.m && received_ >= sent_ + lead) {
            if (withholding(sent_)) break;
            const bool corrupt = adversary_.is(Adversary::Kind::CorruptProof, me_) && adversary_.k == sent_;
            if (sent_ == 0) {
                auto bundle = enc_->bundle();
                if (corrupt) bundle.E_agg = bundle.E_agg + G::generator();
                out.post(MsgType::SetupBundle, bundle.encode());
            } else {
                auto rel = enc_->release_next();
                if (corrupt) rel = juggling::adversary::corrupt<G>(rel);
                out.post(MsgType::SegmentRelease, rel.encode());
            }
            ++sent_;
        }
        maybe_withdraw(out);
    }

    bool dec_complete() const { return dec_ && dec_->limbs_decrypted() == params_.m; }

    bool juggle_waiting_on_peer() const {
        if (!enc_ || !deposits_ok() || dec_complete()) return false;
        return me_ == Role::P1 ? received_ < sent_ : received_ <= sent_;
    }

    void on_bundle(const juggling::SetupBundle<G, RP>& b, Outbox& out) {
        if (!dec_ || received_ != 0) throw Error(Errc::OutOfOrder, "unexpected setup bundle");
        if (!dec_->accept_setup(b)) {
            fail(peer_, std::string(to_string(peer_)) + " setup bundle rejected", out);
            return;
        }
        received_ = 1;
        pump_juggling(out);
    }

    void on_release(const juggling::SegmentRelease<G>& rel, Outbox& out) {
        if (!dec_) throw Error(Errc::OutOfOrder, "release before setup");
        if (abort_seen_) return;
        dec_->accept_segment(rel);
        ++received_;
        pump_juggling(out);
    }

    // -- withdraw -------------------------------------------------------------

    void maybe_withdraw(Outbox& out) {
        if (withdraw_requested_ || !dec_complete()) return;
        const std::size_t j = peer_keygen();
        const Scalar learned = dec_->finish();
        auto signer = threshold::assemble_degenerate_share<G>(*shares_[j], slot_of(peer_), learned);
        Tx tx;
        tx.chain_id = terms_.chain_of(peer_);
        tx.from = swap_address(j);
        tx.to = terms_.out_address(me_);
        tx.amount = terms_.amount_of(peer_);
        tx.nonce = 0;
        tx.pubkey = swap_key(j);
        withdraw_tx_ = tx;
        withdraw_requested_ = true;
        out.post(MsgType::SignRequest, tagged(withdraw_sid(me_), tx.encode_unsigned()));
        Drbg sub = rng_.fork("sign/withdraw");
        board_.open(withdraw_sid(me_), signer, tx.signing_bytes(), sub, out);
        after_signing(out);
    }

    Role me_, peer_;
    SwapTerms<G> terms_;
    SegmentationParams params_;
    WalletShares<G> wallet_;
    Adversary adversary_;
    Drbg rng_;
    elgamal::KeyPair<G> enc_key_;
    std::optional<Point> peer_Y_;

    std::array<std::optional<threshold::KeygenParty<G>>, 2> keygen_;
    std::array<std::vector<threshold::KeygenCommit<G>>, 2> early_commits_;
    std::array<std::size_t, 2> commits_{}, reveals_{};
    std::array<bool, 2> revealed_{};
    std::array<std::optional<threshold::ThresholdKeyShare<G>>, 2> shares_;

    SignBoard<G> board_;
    Tx deposit_tx_, withdraw_tx_;
    bool deposit_requested_ = false, deposit_broadcast_ = false;
    bool withdraw_requested_ = false, withdraw_broadcast_ = false, withdraw_confirmed_ = false;
    std::array<bool, 2> deposit_confirmed_{};

    std::optional<juggling::Encryptor<G, RP>> enc_;
    std::optional<juggling::Decryptor<G, RP>> dec_;
    std::size_t sent_ = 0;      // juggling frames sent (bundle counts as one)
    std::size_t received_ = 0;  // peer juggling frames accepted

    bool abort_seen_ = false, timed_out_ = false;
    std::vector<std::string> failures_;
};

// ---------------------------------------------------------------------------
// Provider

template <PrimeOrderGroup G, class RP = range::DefaultRangeProof<G>>
class Provider {
public:
    using Point = typename G::Point;
    using Tx = ledger::Transaction<G>;
    using SubmitPair = std::function<void(const Tx&, const Tx&, ledger::PairSubmitMode)>;

    struct Violation {
        Role party;
        std::string what;
    };

    Provider(SwapTerms<G> terms, WalletShares<G> wallet1, WalletShares<G> wallet2, Adversary adversary, Drbg rng,
             SubmitPair submit)
        : terms_(std::move(terms)), params_(terms_.params()), wallet_{std::move(wallet1), std::move(wallet2)},
          adversary_(adversary), rng_(std::move(rng)), submit_(std::move(submit)),
          views_{KeygenView<G>(terms_.key_parties), KeygenView<G>(terms_.key_parties)} {}

    void on_frame(const LoggedFrame& f, Outbox& out) {
        try {
            dispatch(f, out);
        } catch (const Error& e) {
            if (f.sender == Role::ME || f.sender == Role::B1 || f.sender == Role::B2) throw;
            flag(f.sender, std::string(to_string(f.frame.type)) + ": " + e.what(), out);
        }
    }

    void on_idle(Outbox&) {}

    const std::vector<Violation>& violations() const noexcept { return violations_; }
    const std::set<Role>& revoked() const noexcept { return revoked_; }
    std::size_t verified_segments(Role owner) const {
        const auto& v = verifiers_[owner == Role::P1 ? 0 : 1];
        return v ? v->verified_segments() : 0;
    }

private:
    bool participant() const { return terms_.key_parties == 3; }

    void flag(Role party, std::string what, Outbox& out) {
        violations_.push_back({party, what});
        if (party == Role::P1 || party == Role::P2) revoked_.insert(party);
        out.abort(party, std::move(what));
    }

    void dispatch(const LoggedFrame& f, Outbox& out) {
        const auto& payload = f.frame.payload;
        switch (f.frame.type) {
        case MsgType::EncKey: {
            if (f.sender != Role::P1 && f.sender != Role::P2) return;
            Y_[f.sender == Role::P1 ? 0 : 1] = Point::decode(payload);
            if (Y_[0] && Y_[1] && participant() && !keygen_[0]) begin_keygen(out);
            return;
        }
        case MsgType::KeygenCommit:
        case MsgType::KeygenReveal: on_keygen(f, out); return;
        case MsgType::SignRequest: on_sign_request(f.sender, payload, out); return;
        case MsgType::NonceCommit:
        case MsgType::NonceReveal:
        case MsgType::PartialSig: {
            auto t = untag(payload);
            if (refused_.count(t.id)) return;
            board_.on_frame(f.frame.type, t.id, t.inner, out);
            return;
        }
        case MsgType::TxBroadcast: on_broadcast(f.sender, payload); return;
        case MsgType::SetupBundle: on_bundle(f.sender, payload, out); return;
        case MsgType::SegmentRelease: on_release(f.sender, payload, out); return;
        default: return;
        }
    }

    void begin_keygen(Outbox& out) {
        for (std::size_t j = 0; j < 2; ++j) {
            Drbg sub = rng_.fork("keygen/" + std::to_string(j));
            keygen_[j].emplace(slot_of(Role::S), terms_.key_parties, sub);
            const auto c = keygen_[j]->commit();
            keygen_[j]->receive_commit(c);
            views_[j].on_commit(c);
            out.post(MsgType::KeygenCommit, tagged(static_cast<std::uint8_t>(j + 1), c.encode()));
            for (const auto& held : early_commits_[j]) keygen_[j]->receive_commit(held);
            commits_[j] = 1 + early_commits_[j].size();
            early_commits_[j].clear();
            maybe_reveal(j, out);
        }
    }

    void on_keygen(const LoggedFrame& f, Outbox& out) {
        auto t = untag(f.frame.payload);
        if (t.id != 1 && t.id != 2) throw Error(Errc::MalformedFrame, "keygen id");
        const std::size_t j = t.id - 1;
        if (f.frame.type == MsgType::KeygenCommit) {
            auto c = threshold::KeygenCommit<G>::decode(t.inner);
            if (c.party != slot_of(f.sender)) throw Error(Errc::MalformedFrame, "commit for another party's slot");
            views_[j].on_commit(c);
            if (!participant()) return;
            if (!keygen_[j]) {
                early_commits_[j].push_back(c);
                return;
            }
            keygen_[j]->receive_commit(c);
            ++commits_[j];
            maybe_reveal(j, out);
        } else {
            auto v = threshold::KeygenReveal<G>::decode(t.inner);
            if (v.party != slot_of(f.sender)) throw Error(Errc::MalformedFrame, "reveal for another party's slot");
            views_[j].on_reveal(v);
            if (participant()) keygen_[j]->receive_reveal(v);
            maybe_finish(j);
        }
    }

    void maybe_reveal(std::size_t j, Outbox& out) {
        if (revealed_[j] || commits_[j] != terms_.key_parties) return;
        revealed_[j] = true;
        const auto v = keygen_[j]->reveal();
        keygen_[j]->receive_reveal(v);
        views_[j].on_reveal(v);
        out.post(MsgType::KeygenReveal, tagged(static_cast<std::uint8_t>(j + 1), v.encode()));
        maybe_finish(j);
    }

    void maybe_finish(std::size_t j) {
        if (!views_[j].complete()) return;
        if (participant() && !shares_[j]) shares_[j] = keygen_[j]->finish();
        if (views_[0].complete() && views_[1].complete() && !verifiers_[0]) {
            // P1's stream carries its share of a_1 under Y_2, and vice versa.
            verifiers_[0].emplace(views_[0].local_key(slot_of(Role::P1)), *Y_[1], params_);
            verifiers_[1].emplace(views_[1].local_key(slot_of(Role::P2)), *Y_[0], params_);
        }
    }

    /// The provider co-signs only transactions that match the swap terms.
    void on_sign_request(Role sender, ByteView payload, Outbox& out) {
        auto t = untag(payload);
        const Role who = requester_of(t.id);
        if (sender != who || t.id < sid_deposit1 || t.id > sid_withdraw2) {
            throw Error(Errc::MalformedFrame, "signing request for another party's session");
        }
        const auto tx = Tx::decode_unsigned(t.inner);
        std::optional<threshold::Signer<G>> signer;
        if (!is_withdraw(t.id)) {
            const auto& w = wallet_[who == Role::P1 ? 0 : 1].in;
            const std::size_t j = who == Role::P1 ? 0 : 1;
            if (!views_[j].complete()) throw Error(Errc::OutOfOrder, "deposit before keygen");
            if (tx.pubkey != w.Q || tx.chain_id != terms_.chain_of(who) || tx.from != terms_.in_address(who) ||
                tx.to != ledger::address_of<G>(views_[j].Q()) || tx.amount != terms_.amount_of(who)) {
                flag(who, "deposit request does not match the swap terms", out);
                return;
            }
            signer.emplace(w);
        } else {
            if (!participant()) return;
            const Role peer = peer_of(who);
            const std::size_t j = peer == Role::P1 ? 0 : 1;  // the address being emptied
            if (tx.pubkey != views_[j].Q() || tx.chain_id != terms_.chain_of(peer) ||
                tx.to != terms_.out_address(who) || tx.amount != terms_.amount_of(peer)) {
                flag(who, "withdrawal request does not match the swap terms", out);
                return;
            }
            if (revoked_.count(who)) {
                refused_.insert(t.id);
                out.abort(who, std::string(to_string(who)) + " is revoked; withdrawal not co-signed");
                return;
            }
            if (adversary_.kind == Adversary::Kind::ProviderPartialSign && who == Role::P2) {
                refused_.insert(t.id);  // silent: P2 is left waiting
                return;
            }
            signer.emplace(*shares_[j]);
        }
        Drbg sub = rng_.fork("sign/" + std::to_string(t.id));
        board_.open(t.id, *signer, tx.signing_bytes(), sub, out);
    }

    void on_broadcast(Role sender, ByteView payload) {
        auto t = untag(payload);
        if (is_withdraw(t.id) || requester_of(t.id) != sender) return;
        deposits_[t.id == sid_deposit1 ? 0 : 1] = Tx::decode(t.inner);
        if (deposits_[0] && deposits_[1] && !submitted_) {
            submitted_ = true;
            auto mode = adversary_.kind == Adversary::Kind::ProviderWithhold ? ledger::PairSubmitMode::ApplyFirstOnly
                                                                             : ledger::PairSubmitMode::Honest;
            submit_(*deposits_[0], *deposits_[1], mode);
        }
    }

    void on_bundle(Role sender, ByteView payload, Outbox& out) {
        if (sender != Role::P1 && sender != Role::P2) return;
        auto& v = verifiers_[sender == Role::P1 ? 0 : 1];
        if (!v) throw Error(Errc::OutOfOrder, "setup bundle before keygen");
        if (!v->accept_setup(juggling::SetupBundle<G, RP>::decode(payload))) {
            flag(sender, std::string(to_string(sender)) + " setup bundle rejected", out);
        }
    }

    void on_release(Role sender, ByteView payload, Outbox& out) {
        if (sender != Role::P1 && sender != Role::P2) return;
        auto& v = verifiers_[sender == Role::P1 ? 0 : 1];
        if (!v) throw Error(Errc::OutOfOrder, "release before keygen");
        if (v->poisoned()) return;
        try {
            v->check_release(juggling::SegmentRelease<G>::decode(payload));
        } catch (const Error& e) {
            flag(sender, std::string(to_string(sender)) + " " + e.what(), out);
        }
    }

    SwapTerms<G> terms_;
    SegmentationParams params_;
    std::array<WalletShares<G>, 2> wallet_;
    Adversary adversary_;
    Drbg rng_;
    SubmitPair submit_;

    std::array<std::optional<Point>, 2> Y_;
    std::array<KeygenView<G>, 2> views_;
    std::array<std::optional<threshold::KeygenParty<G>>, 2> keygen_;
    std::array<std::vector<threshold::KeygenCommit<G>>, 2> early_commits_;
    std::array<std::size_t, 2> commits_{};
    std::array<bool, 2> revealed_{};
    std::array<std::optional<threshold::ThresholdKeyShare<G>>, 2> shares_;

    SignBoard<G> board_;
    std::set<std::uint8_t> refused_;
    std::array<std::optional<Tx>, 2> deposits_;
    bool submitted_ = false;

    std::array<std::optional<juggling::Verifier<G, RP>>, 2> verifiers_;
    std::vector<Violation> violations_;
    std::set<Role> revoked_;
};

} // namespace jswap::swap

#endif // JSWAP_SWAP_ROLES_HPP
