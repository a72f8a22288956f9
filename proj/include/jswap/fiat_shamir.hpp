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

#ifndef JSWAP_FIAT_SHAMIR_HPP
#define JSWAP_FIAT_SHAMIR_HPP

#include <string_view>

#include "jswap/group/concepts.hpp"

namespace jswap {

/// Challenge derivation: e = SHA256(tag || absorbed...) read big-endian, mod q.
/// Callers absorb the full statement first, then the prover's first message.
/// Every absorbed item is a fixed-width canonical encoding, so plain
/// concatenation is unambiguous.
template <PrimeOrderGroup G>
class FiatShamir {
public:
    explicit FiatShamir(std::string_view domain_tag) { hash_.update(domain_tag); }

    FiatShamir& absorb(const typename G::Point& p) { return absorb_bytes(p.encode()); }
    FiatShamir& absorb(const typename G::Scalar& s) { return absorb_bytes(s.encode()); }
    FiatShamir& absorb_bytes(ByteView b) {
        hash_.update(b);
        return *this;
    }
    FiatShamir& absorb_u64(std::uint64_t v) { return absorb_bytes(ByteWriter().u64(v).bytes()); }

    typename G::Scalar challenge() {
        auto d = hash_.finish();
        return G::Scalar::reduce(d);
    }

private:
    Sha256 hash_;
};

} // namespace jswap

#endif // JSWAP_FIAT_SHAMIR_HPP
