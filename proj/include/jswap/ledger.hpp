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
 * Deterministic in-memory account ledger standing in for a blockchain node.
 * Transfers are authorized by a Schnorr signature over canonical bytes
 *
 *     chain_id (4 BE) || from (20) || to (20) || amount (8 BE) || nonce (8 BE)
 *
 * and apply instantly; there are no blocks to reorganize.
 */

#ifndef JSWAP_LEDGER_HPP
#define JSWAP_LEDGER_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "jswap/threshold.hpp"

namespace jswap::ledger {

struct Address {
    std::array<std::uint8_t, 20> bytes{};

    static constexpr std::size_t encoded_size() { return 20; }
    Bytes encode() const { return Bytes(bytes.begin(), bytes.end()); }
    static Address decode(ByteView b) {
        if (b.size() != encoded_size()) throw Error(Errc::MalformedFrame, "address length");
        Address a;
        std::copy(b.begin(), b.end(), a.bytes.begin());
        return a;
    }
    std::string hex() const { return to_hex(bytes); }

    friend auto operator<=>(const Address&, const Address&) = default;
};

/// First 20 bytes of SHA-256 over the encoded public key.
template <PrimeOrderGroup G>
Address address_of(const typename G::Point& pubkey) {
    auto d = sha256(pubkey.encode());
    Address a;
    std::copy_n(d.begin(), a.bytes.size(), a.bytes.begin());
    return a;
}

template <PrimeOrderGroup G>
struct Transaction {
    std::uint32_t chain_id = 0;
    Address from;
    Address to;
    std::uint64_t amount = 0;
    std::uint64_t nonce = 0;
    typename G::Point pubkey;
    threshold::MultiSignature<G> sig;

    /// The signed message.
    Bytes signing_bytes() const {
        return ByteWriter().u32(chain_id).put(from).put(to).u64(amount).u64(nonce).bytes();
    }

    /// Body and key without the signature, as sent in a signing request.
    Bytes encode_unsigned() const { return ByteWriter().raw(signing_bytes()).put(pubkey).bytes(); }
    static Transaction decode_unsigned(ByteView b) {
        ByteReader r(b);
        auto tx = read_unsigned(r);
        r.expect_done();
        return tx;
    }

    Bytes encode() const { return ByteWriter().raw(encode_unsigned()).put(sig).bytes(); }
    static Transaction decode(ByteView b) {
        ByteReader r(b);
        auto tx = read_unsigned(r);
        tx.sig = r.get<threshold::MultiSignature<G>>();
        r.expect_done();
        return tx;
    }

private:
    static Transaction read_unsigned(ByteReader& r) {
        Transaction tx;
        tx.chain_id = r.u32();
        tx.from = r.get<Address>();
        tx.to = r.get<Address>();
        tx.amount = r.u64();
        tx.nonce = r.u64();
        tx.pubkey = r.get<typename G::Point>();
        return tx;
    }
};

enum class TxStatus { Accepted, BadSig, InsufficientFunds, BadNonce, WrongChain };

constexpr std::string_view to_string(TxStatus s) noexcept {
    switch (s) {
    case TxStatus::Accepted: return "Accepted";
    case TxStatus::BadSig: return "BadSig";
    case TxStatus::InsufficientFunds: return "InsufficientFunds";
    case TxStatus::BadNonce: return "BadNonce";
    case TxStatus::WrongChain: return "WrongChain";
    }
    return "Unknown";
}

template <PrimeOrderGroup G>
class Chain {
public:
    using Tx = Transaction<G>;

    Chain(std::uint32_t chain_id, const std::map<Address, std::uint64_t>& genesis) : id_(chain_id) {
        for (const auto& [addr, amount] : genesis) {
            if (amount) balances_[addr] = amount;
        }
    }

    std::uint32_t id() const noexcept { return id_; }

    /// Checks a transaction against the current state without applying it.
    TxStatus check(const Tx& tx) const {
        if (tx.chain_id != id_) return TxStatus::WrongChain;
        if (address_of<G>(tx.pubkey) != tx.from) return TxStatus::BadSig;
        if (!threshold::schnorr_verify<G>(tx.pubkey, tx.signing_bytes(), tx.sig)) return TxStatus::BadSig;
        if (tx.nonce != next_nonce(tx.from)) return TxStatus::BadNonce;
        if (balance(tx.from) < tx.amount) return TxStatus::InsufficientFunds;
        return TxStatus::Accepted;
    }

    /// Applies the transaction iff check() accepts it.
    TxStatus submit(const Tx& tx) {
        auto st = check(tx);
        if (st == TxStatus::Accepted) apply(tx);
        return st;
    }

    std::uint64_t balance(const Address& a) const {
        auto it = balances_.find(a);
        return it == balances_.end() ? 0 : it->second;
    }

    std::uint64_t next_nonce(const Address& a) const {
        auto it = nonces_.find(a);
        return it == nonces_.end() ? 0 : it->second;
    }

    std::uint64_t total_supply() const {
        std::uint64_t sum = 0;
        for (const auto& [a, v] : balances_) sum += v;
        return sum;
    }

    const std::vector<Tx>& log() const noexcept { return log_; }

    /// Line-oriented state dump, stable across runs.
    std::string dump() const {
        std::string out = "chain " + std::to_string(id_) + "\n";
        for (const auto& [a, v] : balances_) out += "balance " + a.hex() + " " + std::to_string(v) + "\n";
        for (const auto& [a, n] : nonces_) out += "nonce " + a.hex() + " " + std::to_string(n) + "\n";
        for (std::size_t i = 0; i < log_.size(); ++i) {
            const auto& tx = log_[i];
            out += "tx " + std::to_string(i) + " " + tx.from.hex() + " " + tx.to.hex() + " " +
                   std::to_string(tx.amount) + " " + std::to_string(tx.nonce) + "\n";
        }
        return out;
    }

    Digest state_hash() const { return sha256(as_bytes(dump())); }

private:
    void apply(const Tx& tx) {
        balances_[tx.from] -= tx.amount;
        if (balances_[tx.from] == 0) balances_.erase(tx.from);
        if (tx.amount) balances_[tx.to] += tx.amount;
        nonces_[tx.from] = tx.nonce + 1;
        log_.push_back(tx);
    }

    std::uint32_t id_;
    std::map<Address, std::uint64_t> balances_;
    std::map<Address, std::uint64_t> nonces_;
    std::vector<Tx> log_;
};

enum class PairSubmitMode {
    Honest,          // both or neither
    ApplyFirstOnly,  // dishonest submitter: lands tx1 regardless of tx2
};

struct PairResult {
    TxStatus first;
    TxStatus second;
    bool first_applied;
    bool second_applied;
};

/// Submits one transaction on each of two chains, all or nothing in
/// Honest mode.
template <PrimeOrderGroup G>
PairResult atomic_pair_submit(Chain<G>& c1, const Transaction<G>& tx1, Chain<G>& c2, const Transaction<G>& tx2,
                              PairSubmitMode mode = PairSubmitMode::Honest) {
    PairResult r{c1.check(tx1), c2.check(tx2), false, false};
    if (mode == PairSubmitMode::ApplyFirstOnly) {
        r.first_applied = c1.submit(tx1) == TxStatus::Accepted;
        return r;
    }
    if (r.first == TxStatus::Accepted && r.second == TxStatus::Accepted) {
        c1.submit(tx1);
        c2.submit(tx2);
        r.first_applied = r.second_applied = true;
    }
    return r;
}

} // namespace jswap::ledger

#endif // JSWAP_LEDGER_HPP
