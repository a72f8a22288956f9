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

#ifndef JSWAP_SWAP_TERMS_HPP
#define JSWAP_SWAP_TERMS_HPP

#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "jswap/ledger.hpp"
#include "jswap/segmentation.hpp"
#include "jswap/swap/frame.hpp"

namespace jswap::swap {

/// Scripted misbehaviour injected into one role.
struct Adversary {
    enum class Kind { None, AbortAtSegment, CorruptProof, BiasedSegments, ProviderWithhold, ProviderPartialSign };

    Kind kind = Kind::None;
    std::size_t k = 0;       // juggling frame index; 0 is the setup bundle
    Role party = Role::P1;   // misbehaving owner, where applicable

    static Adversary none() { return {}; }
    /// `party` withholds its juggling frame k and everything after it.
    static Adversary abort_at_segment(std::size_t k, Role party) { return {Kind::AbortAtSegment, k, owner(party)}; }
    /// `party` sends a broken proof in juggling frame k.
    static Adversary corrupt_proof(std::size_t k, Role party) { return {Kind::CorruptProof, k, owner(party)}; }
    static Adversary biased_segments(Role party) { return {Kind::BiasedSegments, 0, owner(party)}; }
    static Adversary provider_withhold() { return {Kind::ProviderWithhold, 0, Role::S}; }
    static Adversary provider_partial_sign() { return {Kind::ProviderPartialSign, 0, Role::S}; }

    /// Accepts none, abort-at=K[:P1|P2], corrupt-proof=K[:P1|P2],
    /// biased-segments[=P1|P2], provider-withhold, provider-partial-sign.
    /// Throws InvalidArgument.
    static Adversary parse(std::string_view s) {
        auto bad = [&] { return Error(Errc::InvalidArgument, "unknown adversary script '" + std::string(s) + "'"); };
        auto eq = s.find('=');
        std::string_view name = s.substr(0, eq);
        std::string_view arg = eq == std::string_view::npos ? std::string_view{} : s.substr(eq + 1);

        auto parse_party = [&](std::string_view p, Role dflt) {
            if (p.empty()) return dflt;
            auto r = role_from_string(p);
            if (!r || (*r != Role::P1 && *r != Role::P2)) throw bad();
            return *r;
        };
        auto parse_indexed = [&](Role dflt) {
            auto colon = arg.find(':');
            auto num = arg.substr(0, colon);
            std::size_t k = 0;
            auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), k);
            if (num.empty() || ec != std::errc{} || ptr != num.data() + num.size()) throw bad();
            Role p = parse_party(colon == std::string_view::npos ? std::string_view{} : arg.substr(colon + 1), dflt);
            return std::pair{k, p};
        };

        if (name == "none" && arg.empty() && eq == std::string_view::npos) return none();
        if (name == "abort-at") {
            auto [k, p] = parse_indexed(Role::P1);
            return abort_at_segment(k, p);
        }
        if (name == "corrupt-proof") {
            auto [k, p] = parse_indexed(Role::P2);
            return corrupt_proof(k, p);
        }
        if (name == "biased-segments") return biased_segments(parse_party(arg, Role::P1));
        if (name == "provider-withhold" && eq == std::string_view::npos) return provider_withhold();
        if (name == "provider-partial-sign" && eq == std::string_view::npos) return provider_partial_sign();
        throw bad();
    }

    std::string to_string() const {
        const std::string p(swap::to_string(party));
        switch (kind) {
        case Kind::None: return "none";
        case Kind::AbortAtSegment: return "abort-at=" + std::to_string(k) + ":" + p;
        case Kind::CorruptProof: return "corrupt-proof=" + std::to_string(k) + ":" + p;
        case Kind::BiasedSegments: return "biased-segments=" + p;
        case Kind::ProviderWithhold: return "provider-withhold";
        case Kind::ProviderPartialSign: return "provider-partial-sign";
        }
        return "?";
    }

    bool is(Kind k_, Role r) const noexcept { return kind == k_ && party == r; }

    friend bool operator==(const Adversary&, const Adversary&) = default;

private:
    static Role owner(Role r) {
        if (r != Role::P1 && r != Role::P2) throw Error(Errc::InvalidArgument, "owner scripts target P1 or P2");
        return r;
    }
};

struct SwapConfig {
    std::size_t segment_bits = 4;
    std::uint64_t amount1 = 100;   // c_1, moved on chain 1
    std::uint64_t amount2 = 250;   // c_2, moved on chain 2
    std::uint64_t initial1 = 1000; // P1's funding on chain 1
    std::uint64_t initial2 = 1000; // P2's funding on chain 2
    std::uint64_t provider_float = 500;
    std::uint32_t chain1 = 1;
    std::uint32_t chain2 = 2;
    std::size_t key_parties = 3;   // 3: owners and provider; 2: owners only
    Adversary adversary;
    std::uint64_t seed = 1;
};

/// Public terms of one swap, published by the matching engine as the first
/// transcript frame.
template <PrimeOrderGroup G>
struct SwapTerms {
    using Point = typename G::Point;

    std::string group;
    std::uint8_t segment_bits = 0;
    std::uint8_t key_parties = 3;
    std::uint32_t chain1 = 1;
    std::uint32_t chain2 = 2;
    std::uint64_t amount1 = 0;
    std::uint64_t amount2 = 0;
    std::uint64_t initial1 = 0;
    std::uint64_t initial2 = 0;
    std::uint64_t provider_float = 0;
    Point wallet_in1, wallet_out1, wallet_in2, wallet_out2;
    ledger::Address provider;

    SegmentationParams params() const { return SegmentationParams::for_group<G>(segment_bits); }

    ledger::Address in_address(Role r) const { return ledger::address_of<G>(r == Role::P1 ? wallet_in1 : wallet_in2); }
    ledger::Address out_address(Role r) const { return ledger::address_of<G>(r == Role::P1 ? wallet_out1 : wallet_out2); }
    std::uint32_t chain_of(Role depositor) const { return depositor == Role::P1 ? chain1 : chain2; }
    std::uint64_t amount_of(Role depositor) const { return depositor == Role::P1 ? amount1 : amount2; }

    std::map<ledger::Address, std::uint64_t> genesis(std::uint32_t chain) const {
        if (chain == chain1) return {{in_address(Role::P1), initial1}, {provider, provider_float}};
        return {{in_address(Role::P2), initial2}, {provider, provider_float}};
    }

    Bytes encode() const {
        return ByteWriter()
            .blob(as_bytes(group))
            .u8(segment_bits)
            .u8(key_parties)
            .u32(chain1)
            .u32(chain2)
            .u64(amount1)
            .u64(amount2)
            .u64(initial1)
            .u64(initial2)
            .u64(provider_float)
            .put(wallet_in1)
            .put(wallet_out1)
            .put(wallet_in2)
            .put(wallet_out2)
            .put(provider)
            .bytes();
    }

    static SwapTerms decode(ByteView b) {
        ByteReader r(b);
        SwapTerms t;
        auto g = r.blob();
        t.group.assign(g.begin(), g.end());
        t.segment_bits = r.u8();
        t.key_parties = r.u8();
        t.chain1 = r.u32();
        t.chain2 = r.u32();
        t.amount1 = r.u64();
        t.amount2 = r.u64();
        t.initial1 = r.u64();
        t.initial2 = r.u64();
        t.provider_float = r.u64();
        t.wallet_in1 = r.get<Point>();
        t.wallet_out1 = r.get<Point>();
        t.wallet_in2 = r.get<Point>();
        t.wallet_out2 = r.get<Point>();
        t.provider = r.get<ledger::Address>();
        r.expect_done();
        if (t.key_parties != 2 && t.key_parties != 3) throw Error(Errc::MalformedFrame, "key party count");
        if (t.chain1 == t.chain2) throw Error(Errc::MalformedFrame, "chains must differ");
        return t;
    }
};

/// Group name from a Config payload, without decoding any points.
inline std::string peek_group(ByteView config_payload) {
    ByteReader r(config_payload);
    auto g = r.blob();
    return std::string(g.begin(), g.end());
}

// Key slots: P1 holds slot 0, P2 slot 1, S slot 2 (3-party keys only).
inline threshold::Slot slot_of(Role r) { return r == Role::P1 ? 0 : r == Role::P2 ? 1 : 2; }
inline Role peer_of(Role r) { return r == Role::P1 ? Role::P2 : Role::P1; }

// Signing session ids.
inline constexpr std::uint8_t sid_deposit1 = 1;
inline constexpr std::uint8_t sid_deposit2 = 2;
inline constexpr std::uint8_t sid_withdraw1 = 3;  // P1 empties a_2
inline constexpr std::uint8_t sid_withdraw2 = 4;  // P2 empties a_1

inline std::uint8_t deposit_sid(Role r) { return r == Role::P1 ? sid_deposit1 : sid_deposit2; }
inline std::uint8_t withdraw_sid(Role r) { return r == Role::P1 ? sid_withdraw1 : sid_withdraw2; }
inline Role requester_of(std::uint8_t sid) { return sid == sid_deposit1 || sid == sid_withdraw1 ? Role::P1 : Role::P2; }
inline bool is_withdraw(std::uint8_t sid) { return sid == sid_withdraw1 || sid == sid_withdraw2; }

/// Payloads of keygen, signing and broadcast frames: u8 id || inner.
inline Bytes tagged(std::uint8_t id, ByteView inner) { return ByteWriter().u8(id).raw(inner).bytes(); }

struct Tagged {
    std::uint8_t id;
    ByteView inner;
};

inline Tagged untag(ByteView payload) {
    if (payload.empty()) throw Error(Errc::MalformedFrame, "empty tagged payload");
    return {payload[0], payload.subspan(1)};
}

/// Abort payload: u8 blamed role || blob reason.
struct AbortNotice {
    Role blamed{};
    std::string reason;

    Bytes encode() const {
        return ByteWriter().u8(static_cast<std::uint8_t>(blamed)).blob(as_bytes(reason)).bytes();
    }
    static AbortNotice decode(ByteView b) {
        ByteReader r(b);
        auto role = static_cast<Role>(r.u8());
        if (!role_from_string(to_string(role))) throw Error(Errc::MalformedFrame, "abort names unknown role");
        auto s = r.blob();
        r.expect_done();
        return {role, std::string(s.begin(), s.end())};
    }
};

/// Public view of one key generation run: checks every reveal against its
/// commitment and accumulates the local public keys. Needs no secret.
template <PrimeOrderGroup G>
class KeygenView {
public:
    using Point = typename G::Point;

    explicit KeygenView(std::size_t n = 0) : n_(n) {}

    void on_commit(const threshold::KeygenCommit<G>& c) {
        if (c.party >= n_) throw Error(Errc::InvalidArgument, "commit from unknown slot");
        commits_.insert_or_assign(c.party, c.hash);
    }

    /// Throws CommitmentMismatch.
    void on_reveal(const threshold::KeygenReveal<G>& v) {
        auto it = commits_.find(v.party);
        if (it == commits_.end()) throw Error(Errc::OutOfOrder, "reveal without commitment");
        if (it->second != v.commitment()) {
            throw Error(Errc::CommitmentMismatch, "slot " + std::to_string(v.party) + " revealed a key it did not commit to");
        }
        reveals_.insert_or_assign(v.party, v.Q_i);
    }

    std::size_t n() const noexcept { return n_; }
    bool complete() const noexcept { return reveals_.size() == n_; }

    std::vector<Point> local_keys() const {
        std::vector<Point> out;
        for (const auto& [slot, Q] : reveals_) out.push_back(Q);
        return out;
    }

    Point local_key(threshold::Slot s) const { return reveals_.at(s); }

    Point Q() const {
        Point sum = G::identity();
        for (const auto& [slot, Qi] : reveals_) sum = sum + Qi;
        return sum;
    }

private:
    std::size_t n_;
    std::map<threshold::Slot, Digest> commits_;
    std::map<threshold::Slot, Point> reveals_;
};

} // namespace jswap::swap

#endif // JSWAP_SWAP_TERMS_HPP
