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

#include "jswap/group/toy_group.hpp"
#include "jswap/ledger.hpp"

using namespace jswap;
using namespace jswap::ledger;

namespace {

using G = ToyGroup;
using Tx = Transaction<G>;

struct Wallet {
    std::vector<threshold::Signer<G>> signers;
    G::Point Q;
    Address addr;

    explicit Wallet(Drbg& rng) {
        Drbg sub(rng());  // forks do not advance rng, so draw a fresh seed per wallet
        auto shares = threshold::thresh_keygen<G>(2, sub);
        for (const auto& s : shares) signers.emplace_back(s);
        Q = shares[0].Q;
        addr = address_of<G>(Q);
    }

    Tx pay(std::uint32_t chain, const Address& to, std::uint64_t amount, std::uint64_t nonce, Drbg& rng) const {
        Tx tx{chain, addr, to, amount, nonce, Q, {}};
        tx.sig = threshold::thresh_sign<G>(signers, tx.signing_bytes(), rng);
        return tx;
    }
};

class LedgerTest : public ::testing::Test {
protected:
    Drbg rng{71};
    Wallet alice{rng}, bob{rng};
    Chain<G> chain{7, {{alice.addr, 100}}};
};

TEST_F(LedgerTest, AddressIsTruncatedHash) {
    auto d = sha256(alice.Q.encode());
    EXPECT_EQ(alice.addr.hex(), to_hex(ByteView(d).first(20)));
}

TEST_F(LedgerTest, TransferMovesFundsAndBumpsNonce) {
    EXPECT_EQ(chain.submit(alice.pay(7, bob.addr, 30, 0, rng)), TxStatus::Accepted);
    EXPECT_EQ(chain.balance(alice.addr), 70u);
    EXPECT_EQ(chain.balance(bob.addr), 30u);
    EXPECT_EQ(chain.next_nonce(alice.addr), 1u);
    EXPECT_EQ(chain.total_supply(), 100u);
    EXPECT_EQ(chain.log().size(), 1u);
    EXPECT_EQ(chain.submit(alice.pay(7, bob.addr, 70, 1, rng)), TxStatus::Accepted);
    EXPECT_EQ(chain.balance(alice.addr), 0u);
    EXPECT_EQ(chain.total_supply(), 100u);
}

TEST_F(LedgerTest, RejectionsLeaveStateUntouched) {
    const auto before = chain.state_hash();
    EXPECT_EQ(chain.submit(alice.pay(7, bob.addr, 101, 0, rng)), TxStatus::InsufficientFunds);
    EXPECT_EQ(chain.submit(alice.pay(7, bob.addr, 1, 1, rng)), TxStatus::BadNonce);
    EXPECT_EQ(chain.submit(alice.pay(8, bob.addr, 1, 0, rng)), TxStatus::WrongChain);
    auto forged = alice.pay(7, bob.addr, 1, 0, rng);
    forged.amount = 2;
    EXPECT_EQ(chain.submit(forged), TxStatus::BadSig);
    auto stolen = bob.pay(7, bob.addr, 1, 0, rng);
    stolen.from = alice.addr;  // bob signs, claims alice's account
    EXPECT_EQ(chain.submit(stolen), TxStatus::BadSig);
    EXPECT_EQ(chain.state_hash(), before);
    EXPECT_TRUE(chain.log().empty());
}

TEST_F(LedgerTest, ReplayIsBadNonce) {
    auto tx = alice.pay(7, bob.addr, 10, 0, rng);
    EXPECT_EQ(chain.submit(tx), TxStatus::Accepted);
    EXPECT_EQ(chain.submit(tx), TxStatus::BadNonce);
}

TEST_F(LedgerTest, TransactionCodecs) {
    auto tx = alice.pay(7, bob.addr, 10, 0, rng);
    auto back = Tx::decode(tx.encode());
    EXPECT_EQ(back.encode(), tx.encode());
    EXPECT_EQ(chain.check(back), TxStatus::Accepted);
    auto body = Tx::decode_unsigned(tx.encode_unsigned());
    EXPECT_EQ(body.signing_bytes(), tx.signing_bytes());
    EXPECT_THROW(Tx::decode(tx.encode_unsigned()), Error);
}

TEST(LedgerPair, ModesOfAtomicPairSubmit) {
    Drbg rng(72);
    Wallet a(rng), b(rng), sink(rng);
    auto fresh = [&] {
        return std::pair{Chain<G>(1, {{a.addr, 50}}), Chain<G>(2, {{b.addr, 50}})};
    };
    auto ta = a.pay(1, sink.addr, 20, 0, rng);
    auto tb = b.pay(2, sink.addr, 20, 0, rng);

    {
        auto [c1, c2] = fresh();
        auto r = atomic_pair_submit<G>(c1, ta, c2, tb);
        EXPECT_TRUE(r.first_applied && r.second_applied);
        EXPECT_EQ(c1.balance(sink.addr), 20u);
        EXPECT_EQ(c2.balance(sink.addr), 20u);
    }
    {
        auto [c1, c2] = fresh();
        auto bad = tb;
        bad.amount = 60;
        auto r = atomic_pair_submit<G>(c1, ta, c2, bad);
        EXPECT_FALSE(r.first_applied || r.second_applied);
        EXPECT_EQ(r.second, TxStatus::BadSig);
        EXPECT_TRUE(c1.log().empty());
        EXPECT_TRUE(c2.log().empty());
    }
    {
        auto [c1, c2] = fresh();
        auto r = atomic_pair_submit<G>(c1, ta, c2, tb, PairSubmitMode::ApplyFirstOnly);
        EXPECT_TRUE(r.first_applied);
        EXPECT_FALSE(r.second_applied);
        EXPECT_EQ(c1.log().size(), 1u);
        EXPECT_TRUE(c2.log().empty());
    }
}

TEST(LedgerProperty, RandomTransfersConserveSupply) {
    Drbg rng(73);
    std::vector<Wallet> ws;
    for (int i = 0; i < 4; ++i) ws.emplace_back(rng);
    std::map<Address, std::uint64_t> genesis;
    for (const auto& w : ws) genesis[w.addr] = 40;
    Chain<G> c(3, genesis);
    for (int i = 0; i < 60; ++i) {
        const auto& from = ws[rng() % ws.size()];
        const auto& to = ws[rng() % ws.size()];
        auto amount = rng() % 30;
        auto st = c.submit(from.pay(3, to.addr, amount, c.next_nonce(from.addr), rng));
        EXPECT_TRUE(st == TxStatus::Accepted || st == TxStatus::InsufficientFunds);
        ASSERT_EQ(c.total_supply(), 160u);
    }
}

} // namespace
