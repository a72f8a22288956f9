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

#ifndef JSWAP_RNG_HPP
#define JSWAP_RNG_HPP

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string_view>

#include "jswap/bytes.hpp"

namespace jswap {

/// Deterministic SHA-256 counter-mode generator. Block i is
/// SHA256(seed || i). Two generators with equal seeds produce equal streams,
/// which is what makes seeded runs reproducible byte for byte.
///
/// fork() derives an independent child stream by hashing a label into the
/// parent's seed. It does not consume parent output, so the set of forks a
/// caller takes does not perturb the parent stream.
class Drbg {
public:
    using result_type = std::uint64_t;

    explicit Drbg(std::uint64_t seed) {
        ByteWriter w;
        w.raw(as_bytes("JUGGLE/DRBG/v1")).u64(seed);
        seed_ = sha256(w.bytes());
    }
    explicit Drbg(const Digest& seed) : seed_(seed) {}

    Drbg fork(std::string_view label) const {
        return Drbg(Sha256().update(seed_).update("/").update(label).finish());
    }

    void fill(std::span<std::uint8_t> out) {
        for (auto& b : out) {
            if (pos_ == block_.size()) refill();
            b = block_[pos_++];
        }
    }

    result_type operator()() {
        std::uint8_t buf[8];
        fill(buf);
        result_type v = 0;
        for (auto b : buf) v = (v << 8) | b;
        return v;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

private:
    void refill() {
        ByteWriter w;
        w.raw(seed_).u64(counter_++);
        block_ = sha256(w.bytes());
        pos_ = 0;
    }

    Digest seed_{};
    Digest block_{};
    std::size_t pos_ = block_.size();
    std::uint64_t counter_ = 0;
};

static_assert(std::uniform_random_bit_generator<Drbg>);

/// Fills a byte buffer from any 64-bit uniform generator.
template <std::uniform_random_bit_generator Rng>
void fill_random(Rng& rng, std::span<std::uint8_t> out) {
    if constexpr (requires { rng.fill(out); }) {
        rng.fill(out);
    } else {
        std::size_t i = 0;
        while (i < out.size()) {
            auto v = static_cast<std::uint64_t>(rng());
            for (int k = 0; k < 8 && i < out.size(); ++k, ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * k));
        }
    }
}

} // namespace jswap

#endif // JSWAP_RNG_HPP
