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
 * {n,n} additive key generation and Schnorr multi-signatures.
 *
 * Key generation: every party samples x_i, commits to Q_i = x_i G with a
 * blinded hash, and reveals only after all commitments are in. The joint
 * key is Q = sum_i Q_i. Shares are sampled with the most significant bit
 * clear so they can be juggled later.
 *
 * Signing: each slot commits to a nonce point R_i, reveals it, and answers
 * s_i = k_i + c x_i with c = H(R || Q || msg), R = sum_i R_i. The aggregate
 * (R, sum_i s_i) verifies as a plain Schnorr signature under Q.
 *
 * Parties are addressed by slot: slot i is the i-th share of the key. A
 * single signer may hold several slots (its own share plus shares it has
 * learned), in which case it runs every held slot as a separate logical
 * participant.
 */

#ifndef JSWAP_THRESHOLD_HPP
#define JSWAP_THRESHOLD_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jswap/fiat_shamir.hpp"
#include "jswap/group/concepts.hpp"
#include "jswap/segmentation.hpp"

namespace jswap::threshold {

inline constexpr std::string_view keygen_tag = "JUGGLE/KEYGEN/v1";
inline constexpr std::string_view nonce_tag = "JUGGLE/NONCE/v1";
inline constexpr std::string_view schnorr_tag = "JUGGLE/SCHNORR/v1";

using Slot = std::uint32_t;

// ---------------------------------------------------------------------------
// Schnorr

/// Wire format: encode(R) || encode(s).
template <PrimeOrderGroup G>
struct MultiSignature {
    using Point = typename G::Point;
    using Scalar = typename G::Scalar;

    Point R;
    Scalar s;

    static constexpr std::size_t encoded_size() { return Point::encoded_size() + Scalar::encoded_size(); }
    Bytes encode() const { return ByteWriter().put(R).put(s).bytes(); }
    static MultiSignature decode(ByteView b) {
        ByteReader r(b);
        MultiSignature sig{r.get<Point>(), r.get<Scalar>()};
        r.expect_done();
        return sig;
    }
    friend bool operator==(const MultiSignature&, const MultiSignature&) = default;
};

template <PrimeOrderGroup G>
typename G::Scalar schnorr_challenge(const typename G::Point& R, const typename G::Point& Q, ByteView message) {
    return FiatShamir<G>(schnorr_tag).absorb(R).absorb(Q).absorb_bytes(message).challenge();
}

/// sG == R + cQ. Never throws.
template <PrimeOrderGroup G>
bool schnorr_verify(const typename G::Point& Q, ByteView message, const MultiSignature<G>& sig) noexcept {
    try {
        return mul_base<G>(sig.s) == sig.R + schnorr_challenge<G>(sig.R, Q, message) * Q;
    } catch (...) {
        return false;
    }
}

// ---------------------------------------------------------------------------
// Key generation

template <PrimeOrderGroup G>
struct KeygenCommit {
    Slot party = 0;
    Digest hash{};

    Bytes encode() const { return ByteWriter().u32(party).raw(hash).bytes(); }
    static KeygenCommit decode(ByteView b) {
        ByteReader r(b);
        KeygenCommit c;
        c.party = r.u32();
        auto h = r.take(32);
        std::copy(h.begin(), h.end(), c.hash.begin());
        r.expect_done();
        return c;
    }
};

template <PrimeOrderGroup G>
struct KeygenReveal {
    Slot party = 0;
    typename G::Point Q_i;
    Digest blind{};

    Bytes encode() const { return ByteWriter().u32(party).put(Q_i).raw(blind).bytes(); }
    static KeygenReveal decode(ByteView b) {
        ByteReader r(b);
        KeygenReveal v;
        v.party = r.u32();
        v.Q_i = r.get<typename G::Point>();
        auto h = r.take(32);
        std::copy(h.begin(), h.end(), v.blind.begin());
        r.expect_done();
        return v;
    }

    Digest commitment() const {
        return Sha256().update(keygen_tag).update(ByteWriter().u32(party).bytes()).update(Q_i.encode()).update(blind).finish();
    }
};

template <PrimeOrderGroup G>
struct ThresholdKeyShare {
    Slot party_id = 0;
    typename G::Scalar x_i;
    typename G::Point Q_i;
    std::vector<typename G::Point> local_keys;  // Q_j for every slot j
    typename G::Point Q;                        // sum of local_keys
    std::size_t n = 0;
};

/// One party's view of a key generation run.
template <PrimeOrderGroup G>
class KeygenParty {
public:
    using Scalar = typename G::Scalar;
    using Point = typename G::Point;

    KeygenParty(Slot id, std::size_t n, Drbg& rng) : id_(id), n_(n) {
        if (n < 2) throw Error(Errc::InvalidArgument, "threshold keygen needs at least two parties");
        if (id >= n) throw Error(Errc::InvalidArgument, "party id out of range");
        x_ = random_segmentable_secret<G>(rng);
        reveal_ = {id, mul_base<G>(x_), {}};
        rng.fill(reveal_.blind);
    }

    Slot id() const noexcept { return id_; }

    KeygenCommit<G> commit() const { return {id_, reveal_.commitment()}; }

    /// Available only once every party's commitment has arrived.
    KeygenReveal<G> reveal() const {
        if (commits_.size() != n_) throw Error(Errc::OutOfOrder, "reveal before all commitments arrived");
        return reveal_;
    }

    void receive_commit(const KeygenCommit<G>& c) {
        if (c.party >= n_) throw Error(Errc::InvalidArgument, "commit from unknown party");
        if (!reveals_.empty()) throw Error(Errc::OutOfOrder, "commitment after reveals began");
        commits_.emplace(c.party, c.hash);
    }

    /// Throws CommitmentMismatch if the reveal does not open the party's commitment.
    void receive_reveal(const KeygenReveal<G>& v) {
        auto it = commits_.find(v.party);
        if (it == commits_.end()) throw Error(Errc::OutOfOrder, "reveal without commitment");
        if (it->second != v.commitment()) {
            throw Error(Errc::CommitmentMismatch, "party " + std::to_string(v.party) + " revealed a key it did not commit to");
        }
        reveals_.emplace(v.party, v.Q_i);
    }

    /// Throws MissingParty unless all n reveals are in.
    ThresholdKeyShare<G> finish() const {
        if (reveals_.size() != n_) throw Error(Errc::MissingParty, "keygen finished without every reveal");
        ThresholdKeyShare<G> out{id_, x_, reveal_.Q_i, {}, G::identity(), n_};
        for (const auto& [slot, Qj] : reveals_) {
            out.local_keys.push_back(Qj);
            out.Q = out.Q + Qj;
        }
        return out;
    }

private:
    Slot id_;
    std::size_t n_;
    Scalar x_;
    KeygenReveal<G> reveal_;
    std::map<Slot, Digest> commits_;
    std::map<Slot, Point> reveals_;
};

/// All-honest in-process run; party i draws from rng.fork("keygen/party/i").
template <PrimeOrderGroup G>
std::vector<ThresholdKeyShare<G>> thresh_keygen(std::size_t n, Drbg& rng) {
    std::vector<KeygenParty<G>> parties;
    parties.reserve(n);
    for (Slot i = 0; i < n; ++i) {
        Drbg sub = rng.fork("keygen/party/" + std::to_string(i));
        parties.emplace_back(i, n, sub);
    }
    for (const auto& from : parties)
        for (auto& to : parties) to.receive_commit(from.commit());
    for (const auto& from : parties) {
        auto v = from.reveal();
        for (auto& to : parties) to.receive_reveal(v);
    }
    std::vector<ThresholdKeyShare<G>> out;
    out.reserve(n);
    for (const auto& p : parties) out.push_back(p.finish());
    return out;
}

// ---------------------------------------------------------------------------
// Signing

/// Signing capability: the key's public data plus the shares held for one
/// or more slots.
template <PrimeOrderGroup G>
class Signer {
public:
    using Scalar = typename G::Scalar;
    using Point = typename G::Point;

    explicit Signer(const ThresholdKeyShare<G>& share) : Q_(share.Q), local_keys_(share.local_keys) {
        shares_.emplace(share.party_id, share.x_i);
    }

    /// Adds a learned share for another slot. Throws ShareMismatch if
    /// x_j G is not that slot's local public key.
    Signer& absorb(Slot slot, const Scalar& x_j) {
        if (slot >= local_keys_.size()) throw Error(Errc::InvalidArgument, "slot out of range");
        if (mul_base<G>(x_j) != local_keys_[slot]) {
            throw Error(Errc::ShareMismatch, "learned share does not match slot " + std::to_string(slot));
        }
        shares_.insert_or_assign(slot, x_j);
        return *this;
    }

    const Point& Q() const noexcept { return Q_; }
    const std::vector<Point>& local_keys() const noexcept { return local_keys_; }
    std::size_t n() const noexcept { return local_keys_.size(); }
    const std::map<Slot, Scalar>& shares() const noexcept { return shares_; }
    bool holds(Slot s) const { return shares_.count(s) != 0; }

private:
    Point Q_;
    std::vector<Point> local_keys_;
    std::map<Slot, Scalar> shares_;
};

/// Combine an own share with a share learned for slot `slot`.
template <PrimeOrderGroup G>
Signer<G> assemble_degenerate_share(const ThresholdKeyShare<G>& own, Slot slot, const typename G::Scalar& learned) {
    Signer<G> s(own);
    s.absorb(slot, learned);
    return s;
}

template <PrimeOrderGroup G>
struct NonceCommit {
    Slot slot = 0;
    Digest hash{};

    Bytes encode() const { return ByteWriter().u32(slot).raw(hash).bytes(); }
    static NonceCommit decode(ByteView b) {
        ByteReader r(b);
        NonceCommit c;
        c.slot = r.u32();
        auto h = r.take(32);
        std::copy(h.begin(), h.end(), c.hash.begin());
        r.expect_done();
        return c;
    }
};

template <PrimeOrderGroup G>
struct NonceReveal {
    Slot slot = 0;
    typename G::Point R_i;

    Bytes encode() const { return ByteWriter().u32(slot).put(R_i).bytes(); }
    static NonceReveal decode(ByteView b) {
        ByteReader r(b);
        NonceReveal v{r.u32(), r.get<typename G::Point>()};
        r.expect_done();
        return v;
    }
};

template <PrimeOrderGroup G>
struct PartialSignature {
    Slot slot = 0;
    typename G::Scalar s_i;

    Bytes encode() const { return ByteWriter().u32(slot).put(s_i).bytes(); }
    static PartialSignature decode(ByteView b) {
        ByteReader r(b);
        PartialSignature v{r.u32(), r.get<typename G::Scalar>()};
        r.expect_done();
        return v;
    }
};

/// One signer's side of a three-round signing run. Messages for the
/// signer's own slots are recorded on creation, so callers only route
/// messages from other signers (routing them back is harmless).
template <PrimeOrderGroup G>
class SigningSession {
public:
    using Scalar = typename G::Scalar;
    using Point = typename G::Point;

    SigningSession(const Signer<G>& signer, Bytes message, Drbg& rng)
        : Q_(signer.Q()), local_keys_(signer.local_keys()), message_(std::move(message)),
          msg_digest_(sha256(message_)) {
        for (const auto& [slot, x] : signer.shares()) {
            auto k = random_nonzero_scalar<G>(rng);
            auto R = mul_base<G>(k);
            own_.push_back({slot, x, k, R});
            commits_.emplace(slot, nonce_commitment(slot, R));
        }
    }

    std::vector<NonceCommit<G>> commits() const {
        std::vector<NonceCommit<G>> out;
        for (const auto& o : own_) out.push_back({o.slot, nonce_commitment(o.slot, o.R)});
        return out;
    }

    void receive_commit(const NonceCommit<G>& c) {
        check_slot(c.slot);
        if (!reveals_.empty()) throw Error(Errc::OutOfOrder, "nonce commitment after reveals began");
        commits_.insert_or_assign(c.slot, c.hash);
    }

    /// Available once every slot has committed.
    std::vector<NonceReveal<G>> reveals() {
        require_all(commits_.size(), "nonce commitments");
        std::vector<NonceReveal<G>> out;
        for (const auto& o : own_) {
            reveals_.insert_or_assign(o.slot, o.R);
            out.push_back({o.slot, o.R});
        }
        return out;
    }

    /// Throws NonceCommitMismatch if R_i does not open the slot's commitment.
    void receive_reveal(const NonceReveal<G>& v) {
        check_slot(v.slot);
        auto it = commits_.find(v.slot);
        if (it == commits_.end()) throw Error(Errc::OutOfOrder, "nonce reveal without commitment");
        if (it->second != nonce_commitment(v.slot, v.R_i)) {
            throw Error(Errc::NonceCommitMismatch, "slot " + std::to_string(v.slot) + " nonce does not match its commitment");
        }
        reveals_.insert_or_assign(v.slot, v.R_i);
    }

    /// Available once every nonce is revealed.
    std::vector<PartialSignature<G>> partials() {
        require_all(reveals_.size(), "nonce reveals");
        const Scalar c = challenge();
        std::vector<PartialSignature<G>> out;
        for (const auto& o : own_) {
            PartialSignature<G> p{o.slot, o.k + c * o.x};
            partials_.insert_or_assign(o.slot, p.s_i);
            out.push_back(p);
        }
        return out;
    }

    /// Throws InvalidPartialSignature if s_i G != R_i + c Q_i.
    void receive_partial(const PartialSignature<G>& p) {
        check_slot(p.slot);
        require_all(reveals_.size(), "nonce reveals");
        if (mul_base<G>(p.s_i) != reveals_.at(p.slot) + challenge() * local_keys_[p.slot]) {
            throw Error(Errc::InvalidPartialSignature, "slot " + std::to_string(p.slot) + " sent a bad partial signature");
        }
        partials_.insert_or_assign(p.slot, p.s_i);
    }

    /// Throws MissingParty unless every slot's partial is in.
    MultiSignature<G> signature() const {
        if (partials_.size() != local_keys_.size()) throw Error(Errc::MissingParty, "not every slot signed");
        Scalar s = Scalar::from_u64(0);
        for (const auto& [slot, si] : partials_) s = s + si;
        return {aggregate_nonce(), s};
    }

    Point aggregate_nonce() const {
        Point R = G::identity();
        for (const auto& [slot, Ri] : reveals_) R = R + Ri;
        return R;
    }

    const Bytes& message() const noexcept { return message_; }

private:
    struct OwnSlot {
        Slot slot;
        Scalar x;
        Scalar k;
        Point R;
    };

    Digest nonce_commitment(Slot slot, const Point& R) const {
        return Sha256().update(nonce_tag).update(msg_digest_).update(ByteWriter().u32(slot).bytes()).update(R.encode()).finish();
    }

    Scalar challenge() const { return schnorr_challenge<G>(aggregate_nonce(), Q_, message_); }

    void check_slot(Slot s) const {
        if (s >= local_keys_.size()) throw Error(Errc::InvalidArgument, "slot out of range");
    }

    void require_all(std::size_t have, const char* what) const {
        if (have != local_keys_.size()) {
            throw Error(Errc::MissingParty, std::string("missing ") + what + ": " + std::to_string(have) + " of " +
                                                std::to_string(local_keys_.size()));
        }
    }

    Point Q_;
    std::vector<Point> local_keys_;
    Bytes message_;
    Digest msg_digest_;
    std::vector<OwnSlot> own_;
    std::map<Slot, Digest> commits_;
    std::map<Slot, Point> reveals_;
    std::map<Slot, Scalar> partials_;
};

/// In-process run among the given signers. Throws MissingParty unless the
/// signers' slots cover every slot of the key exactly once.
template <PrimeOrderGroup G>
MultiSignature<G> thresh_sign(const std::vector<Signer<G>>& signers, ByteView message, Drbg& rng) {
    if (signers.empty()) throw Error(Errc::MissingParty, "no signers");
    const std::size_t n = signers.front().n();
    std::set<Slot> covered;
    for (const auto& s : signers) {
        if (s.Q() != signers.front().Q()) throw Error(Errc::InvalidArgument, "signers disagree on the public key");
        for (const auto& [slot, x] : s.shares()) {
            if (!covered.insert(slot).second) throw Error(Errc::InvalidArgument, "slot held by two signers");
        }
    }
    if (covered.size() != n) {
        throw Error(Errc::MissingParty, std::to_string(covered.size()) + " of " + std::to_string(n) + " slots present");
    }

    std::vector<SigningSession<G>> sessions;
    sessions.reserve(signers.size());
    for (std::size_t i = 0; i < signers.size(); ++i) {
        Drbg sub = rng.fork("sign/signer/" + std::to_string(i));
        sessions.emplace_back(signers[i], Bytes(message.begin(), message.end()), sub);
    }
    for (auto& from : sessions)
        for (const auto& c : from.commits())
            for (auto& to : sessions) to.receive_commit(c);
    for (auto& from : sessions)
        for (const auto& v : from.reveals())
            for (auto& to : sessions) to.receive_reveal(v);
    for (auto& from : sessions)
        for (const auto& p : from.partials())
            for (auto& to : sessions) to.receive_partial(p);
    return sessions.front().signature();
}

} // namespace jswap::threshold

#endif // JSWAP_THRESHOLD_HPP
