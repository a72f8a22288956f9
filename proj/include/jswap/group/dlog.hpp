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

#ifndef JSWAP_GROUP_DLOG_HPP
#define JSWAP_GROUP_DLOG_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>

#include "jswap/group/concepts.hpp"

namespace jswap {

/// Baby-step/giant-step solver for v*G = P with v < bound.
///
/// The table holds the baby steps j*G for j in [0, ceil(sqrt(bound))), keyed
/// by canonical point encoding. It depends only on the bound, so a decryptor
/// builds one table and reuses it for every segment.
template <PrimeOrderGroup G>
class BsgsTable {
public:
    using Scalar = typename G::Scalar;
    using Point = typename G::Point;

    static constexpr std::uint64_t max_bound = std::uint64_t{1} << 32;

    explicit BsgsTable(std::uint64_t bound) : bound_(bound) {
        if (bound == 0 || bound > max_bound) throw Error(Errc::InvalidArgument, "dlog bound must be in [1, 2^32]");
        step_ = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(bound))));
        while (step_ * step_ < bound) ++step_;
        while (step_ > 1 && (step_ - 1) * (step_ - 1) >= bound) --step_;
        baby_.reserve(step_);
        Point acc = G::identity();
        const Point gen = G::generator();
        for (std::uint64_t j = 0; j < step_; ++j) {
            baby_.emplace(key(acc), j);
            acc = acc + gen;
        }
        giant_ = -(Scalar::from_u64(step_) * gen);
    }

    std::optional<std::uint64_t> try_solve(const Point& target) const {
        Point gamma = target;
        for (std::uint64_t i = 0; i * step_ < bound_; ++i) {
            if (auto it = baby_.find(key(gamma)); it != baby_.end()) {
                std::uint64_t v = i * step_ + it->second;
                if (v < bound_) return v;
                return std::nullopt;
            }
            gamma = gamma + giant_;
        }
        return std::nullopt;
    }

    Scalar solve(const Point& target) const {
        if (auto v = try_solve(target)) return Scalar::from_u64(*v);
        throw Error(Errc::NotFound, "no discrete log below bound " + std::to_string(bound_));
    }

    std::uint64_t bound() const noexcept { return bound_; }
    std::size_t table_size() const noexcept { return baby_.size(); }

private:
    static std::string key(const Point& p) {
        auto b = p.encode();
        return std::string(b.begin(), b.end());
    }

    std::uint64_t bound_;
    std::uint64_t step_ = 1;
    std::unordered_map<std::string, std::uint64_t> baby_;
    Point giant_;
};

/// One-shot small-range discrete log. Throws NotFound if no v < bound works.
template <PrimeOrderGroup G>
typename G::Scalar brute_force_dlog(const typename G::Point& target, std::uint64_t bound) {
    return BsgsTable<G>(bound).solve(target);
}

} // namespace jswap

#endif // JSWAP_GROUP_DLOG_HPP
