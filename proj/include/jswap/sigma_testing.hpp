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
 * Special-HVZK simulators and special-soundness extractors for the sigma
 * protocols. Test-only: nothing in the protocol path includes this header.
 */

#ifndef JSWAP_SIGMA_TESTING_HPP
#define JSWAP_SIGMA_TESTING_HPP

#include <utility>

#include "jswap/sigma.hpp"

namespace jswap::sigma::testing {

template <class C, class R>
struct Transcript {
    C commitment;
    R response;
};

namespace detail {

template <PrimeOrderGroup G>
typename G::Scalar challenge_gap_inverse(const typename G::Scalar& e1, const typename G::Scalar& e2) {
    if (e1 == e2) throw Error(Errc::DivByZero, "extraction needs distinct challenges");
    return (e1 - e2).inverse();
}

} // namespace detail

// ddh ------------------------------------------------------------------------

template <PrimeOrderGroup G, std::uniform_random_bit_generator Rng>
Transcript<ddh::Commitment<G>, ddh::Response<G>> simulate(const ddh::Statement<G>& st,
                                                          const typename G::Scalar& e, Rng& rng) {
    auto z = random_scalar<G>(rng);
    return {{z * st.G1 + e * st.H1, z * st.G2 + e * st.H2}, {z}};
}

/// z = alpha - x e, so x = (z2 - z1) / (e1 - e2).
template <PrimeOrderGroup G>
ddh::Witness<G> extract(const typename G::Scalar& e1, const ddh::Response<G>& r1,
                        const typename G::Scalar& e2, const ddh::Response<G>& r2) {
    auto inv = detail::challenge_gap_inverse<G>(e1, e2);
    return {(r2.z - r1.z) * inv};
}

// enc ------------------------------------------------------------------------

template <PrimeOrderGroup G, std::uniform_random_bit_generator Rng>
Transcript<enc::Commitment<G>, enc::Response<G>> simulate(const enc::Statement<G>& st,
                                                          const typename G::Scalar& e, Rng& rng) {
    auto z2 = random_scalar<G>(rng);
    auto A3 = z2 * st.G0 - e * st.E;
    auto z1 = random_scalar<G>(rng);
    auto T = z1 * st.G0 + z2 * st.Y - e * st.D;
    return {{T, A3}, {z1, z2}};
}

template <PrimeOrderGroup G>
enc::Witness<G> extract(const typename G::Scalar& e1, const enc::Response<G>& r1,
                        const typename G::Scalar& e2, const enc::Response<G>& r2) {
    auto inv = detail::challenge_gap_inverse<G>(e1, e2);
    return {(r1.z1 - r2.z1) * inv, (r1.z2 - r2.z2) * inv};
}

// encdlog --------------------------------------------------------------------

template <PrimeOrderGroup G, std::uniform_random_bit_generator Rng>
Transcript<encdlog::Commitment<G>, encdlog::Response<G>> simulate(const encdlog::Statement<G>& st,
                                                                  const typename G::Scalar& e, Rng& rng) {
    auto z2 = random_scalar<G>(rng);
    auto A3 = z2 * st.G0 - e * st.E;
    auto A2 = z2 * st.Y - e * (st.D - st.Q);
    auto z1 = random_scalar<G>(rng);
    auto A1 = z1 * st.G0 - e * st.Q;
    return {{A1, A2, A3}, {z1, z2}};
}

template <PrimeOrderGroup G>
encdlog::Witness<G> extract(const typename G::Scalar& e1, const encdlog::Response<G>& r1,
                            const typename G::Scalar& e2, const encdlog::Response<G>& r2) {
    auto inv = detail::challenge_gap_inverse<G>(e1, e2);
    return {(r1.z1 - r2.z1) * inv, (r1.z2 - r2.z2) * inv};
}

} // namespace jswap::sigma::testing

#endif // JSWAP_SIGMA_TESTING_HPP
