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
 * Segmented verifiable encryption of a discrete log with gradual release.
 *
 * The encryptor holds x with Q = xG and the decryptor's key Y. Setup
 * publishes, once:
 *
 *   D_1..D_m         D_k = [x]_k G + r_k Y
 *   m range proofs   D_k opens to a value below 2^{bits_k}
 *   E                sum_k f_k E_k, where E_k = r_k G
 *   encdlog proof    (sum_k f_k D_k, E) encrypts the discrete log of Q
 *
 * Then segment k is released by publishing E_k with a proof that
 * (D_k, E_k) is a well-formed encryption. The holder of y decrypts each
 * released segment with a small discrete log; anyone holding (Q, Y, bundle)
 * can check every proof.
 *
 * Segments are released in ascending order, least significant first.
 */

#ifndef JSWAP_JUGGLING_HPP
#define JSWAP_JUGGLING_HPP

#include <optional>
#include <vector>

#include "jswap/elgamal.hpp"
#include "jswap/group/dlog.hpp"
#include "jswap/rangeproof.hpp"
#include "jswap/segmentation.hpp"
#include "jswap/sigma.hpp"

namespace jswap::juggling {

/// One-shot setup publication.
///
/// Wire format: m (u16) || D_1..D_m || m x blob(range proof) || E || encdlog proof.
template <PrimeOrderGroup G, class RP = range::DefaultRangeProof<G>>
struct SetupBundle {
    using Point = typename G::Point;
    using RangeProof = typename RP::Proof;

    std::vector<Point> all_D;
    std::vector<RangeProof> range_proofs;
    Point E_agg;
    sigma::encdlog::Proof<G> encdlog_proof;

    Bytes encode() const {
        ByteWriter w;
        w.u16(static_cast<std::uint16_t>(all_D.size()));
        for (const auto& d : all_D) w.put(d);
        for (const auto& rp : range_proofs) w.blob(rp.encode());
        w.put(E_agg).put(encdlog_proof);
        return std::move(w).bytes();
    }

    static SetupBundle decode(ByteView b) {
        ByteReader r(b);
        std::size_t m = r.u16();
        if (m == 0) throw Error(Errc::MalformedFrame, "empty setup bundle");
        SetupBundle out;
        out.all_D.reserve(m);
        out.range_proofs.reserve(m);
        for (std::size_t k = 0; k < m; ++k) out.all_D.push_back(r.get<Point>());
        for (std::size_t k = 0; k < m; ++k) out.range_proofs.push_back(RangeProof::decode(r.blob()));
        out.E_agg = r.get<Point>();
        out.encdlog_proof = r.get<sigma::encdlog::Proof<G>>();
        r.expect_done();
        return out;
    }
};

/// Release of segment k (1-based): E_k and the proof that (D_k, E_k) is a
/// correct encryption under Y.
///
/// Wire format: k (u16) || E_k || enc proof.
template <PrimeOrderGroup G>
struct SegmentRelease {
    using Point = typename G::Point;

    std::size_t k = 0;
    Point E_k;
    sigma::enc::Proof<G> enc_proof;

    Bytes encode() const {
        return ByteWriter().u16(static_cast<std::uint16_t>(k)).put(E_k).put(enc_proof).bytes();
    }
    static SegmentRelease decode(ByteView b) {
        ByteReader r(b);
        SegmentRelease out;
        out.k = r.u16();
        out.E_k = r.get<Point>();
        out.enc_proof = r.get<sigma::enc::Proof<G>>();
        r.expect_done();
        return out;
    }
};

/// Publicly checks a setup bundle: all m range proofs (top segment at its
/// narrower width) and the encdlog proof against aggregates recomputed
/// from the published D_k.
template <PrimeOrderGroup G, class RP = range::DefaultRangeProof<G>>
bool verify_setup(const SetupBundle<G, RP>& bundle, const typename G::Point& Q, const typename G::Point& Y,
                  const SegmentationParams& params) noexcept {
    try {
        if (bundle.all_D.size() != params.m || bundle.range_proofs.size() != params.m) return false;
        for (std::size_t i = 0; i < params.m; ++i) {
            if (!RP::verify({bundle.all_D[i], Y, params.bits_of(i)}, bundle.range_proofs[i])) return false;
        }
        const auto f = params.weights<G>();
        typename G::Point D_agg = G::identity();
        for (std::size_t i = 0; i < params.m; ++i) D_agg = D_agg + f[i] * bundle.all_D[i];
        return sigma::encdlog::verify<G>({G::generator(), Y, Q, D_agg, bundle.E_agg}, bundle.encdlog_proof);
    } catch (...) {
        return false;
    }
}

/// Encryptor side of one juggling session.
template <PrimeOrderGroup G, class RP = range::DefaultRangeProof<G>>
class Encryptor {
public:
    using Scalar = typename G::Scalar;
    using Point = typename G::Point;
    using Bundle = SetupBundle<G, RP>;

    /// Throws KeyMismatch if Q != xG and SecretOutOfRange if x has its most
    /// significant bit set.
    Encryptor(const Scalar& x, const Point& Q, const Point& Y, const SegmentationParams& params, Drbg& rng)
        : Encryptor(check_key(x, Q), Q, Y, params, limb_scalars(segment<G>(x, params)), rng) {}

    /// Encrypts caller-supplied limbs instead of the segmentation of x.
    /// Limbs outside their range get a range proof built from their low bits,
    /// which cannot verify. Only adversary simulations use this.
    static Encryptor with_limbs(const Scalar& x, const Point& Q, const Point& Y, const SegmentationParams& params,
                                std::vector<Scalar> limbs, Drbg& rng) {
        return Encryptor(check_key(x, Q), Q, Y, params, std::move(limbs), rng);
    }

    const Bundle& bundle() const noexcept { return bundle_; }
    const SegmentationParams& params() const noexcept { return params_; }

    /// 1-based index of the next segment to release; m + 1 when done.
    std::size_t next_segment() const noexcept { return next_; }
    bool done() const noexcept { return next_ > params_.m; }

    /// Throws OutOfOrder unless k == next_segment().
    SegmentRelease<G> release_segment(std::size_t k) {
        if (k != next_ || done()) throw Error(Errc::OutOfOrder, "segment " + std::to_string(k) + " requested, next is " + std::to_string(next_));
        const auto& ct = cts_[k - 1];
        auto proof = sigma::enc::prove<G>({G::generator(), Y_, ct.ct.D, ct.ct.E}, {limbs_[k - 1], ct.r}, rng_);
        ++next_;
        return {k, ct.ct.E, proof};
    }

    SegmentRelease<G> release_next() { return release_segment(next_); }

private:
    Encryptor(const Scalar& x, const Point& Q, const Point& Y, const SegmentationParams& params,
              std::vector<Scalar> limbs, Drbg& rng)
        : params_(params), Y_(Y), limbs_(std::move(limbs)), rng_(rng.fork("juggling/encryptor")) {
        if (limbs_.size() != params_.m) throw Error(Errc::InvalidArgument, "limb count does not match m");
        const auto f = params_.weights<G>();
        cts_.reserve(params_.m);
        bundle_.all_D.reserve(params_.m);
        bundle_.range_proofs.reserve(params_.m);
        for (std::size_t i = 0; i < params_.m; ++i) {
            cts_.push_back(elgamal::encrypt<G>(limbs_[i], Y_, rng_));
            bundle_.all_D.push_back(cts_.back().ct.D);
        }
        for (std::size_t i = 0; i < params_.m; ++i) {
            bundle_.range_proofs.push_back(range_proof(i));
        }
        auto agg = elgamal::aggregate<G>(std::span<const elgamal::OpenCiphertext<G>>(cts_),
                                         std::span<const Scalar>(f));
        bundle_.E_agg = agg.ct.E;
        bundle_.encdlog_proof =
            sigma::encdlog::prove<G>({G::generator(), Y_, Q, agg.ct.D, agg.ct.E}, {x, agg.r}, rng_);
    }

    typename RP::Proof range_proof(std::size_t i) {
        const std::size_t bits = params_.bits_of(i);
        const auto& v = limbs_[i];
        const auto& r = cts_[i].r;
        if (bit_length<G>(v) <= bits) return RP::prove(v, r, Y_, bits, rng_);
        if constexpr (std::is_same_v<RP, range::BitDecomposition<G>>) {
            auto be = v.encode();
            std::vector<range::BitOpening<G>> openings(bits, range::BitOpening<G>{0, Scalar::from_u64(0)});
            Scalar weighted = Scalar::from_u64(0);
            Scalar pow = Scalar::from_u64(1);
            for (std::size_t b = 0; b < bits; ++b) {
                openings[b].value = (be[be.size() - 1 - b / 8] >> (b % 8)) & 1u;
                if (b > 0) {
                    openings[b].rho = random_scalar<G>(rng_);
                    weighted = weighted + pow * openings[b].rho;
                }
                pow = pow * Scalar::from_u64(2);
            }
            openings[0].rho = r - weighted;
            return RP::prove_openings({cts_[i].ct.D, Y_, bits}, openings, rng_);
        } else {
            throw Error(Errc::ValueOutOfRange, "limb outside its range");
        }
    }

    static const Scalar& check_key(const Scalar& x, const Point& Q) {
        if (mul_base<G>(x) != Q) throw Error(Errc::KeyMismatch, "Q is not xG");
        return x;
    }

    static std::vector<Scalar> limb_scalars(const Segments& segs) {
        std::vector<Scalar> out;
        out.reserve(segs.limbs.size());
        for (auto v : segs.limbs) out.push_back(Scalar::from_u64(v));
        return out;
    }

    SegmentationParams params_;
    Point Y_;
    std::vector<Scalar> limbs_;
    Drbg rng_;
    std::vector<elgamal::OpenCiphertext<G>> cts_;
    Bundle bundle_;
    std::size_t next_ = 1;
};

/// Checks a juggling session without any secret: the setup bundle once,
/// then each release in order. Any failure poisons the session for good.
template <PrimeOrderGroup G, class RP = range::DefaultRangeProof<G>>
class Verifier {
public:
    using Point = typename G::Point;
    using Bundle = SetupBundle<G, RP>;

    Verifier(Point Q, Point Y, SegmentationParams params) : Q_(std::move(Q)), Y_(std::move(Y)), params_(params) {}

    /// Returns false (and poisons) if the bundle does not verify.
    bool accept_setup(const Bundle& bundle) {
        if (poisoned_) return false;
        if (bundle_) throw Error(Errc::OutOfOrder, "setup already accepted");
        if (!verify_setup<G, RP>(bundle, Q_, Y_, params_)) {
            poisoned_ = true;
            return false;
        }
        bundle_ = bundle;
        return true;
    }

    /// Throws ProofRejected on a bad proof or a poisoned session, OutOfOrder
    /// if no setup was accepted or k is not the next index.
    void check_release(const SegmentRelease<G>& rel) {
        if (poisoned_) throw Error(Errc::ProofRejected, "session poisoned by an earlier rejection");
        if (!bundle_) throw Error(Errc::OutOfOrder, "no verified setup bundle");
        if (rel.k != next_ || next_ > params_.m) {
            throw Error(Errc::OutOfOrder, "expected segment " + std::to_string(next_) + ", got " + std::to_string(rel.k));
        }
        const auto& D = bundle_->all_D[rel.k - 1];
        if (!sigma::enc::verify<G>({G::generator(), Y_, D, rel.E_k}, rel.enc_proof)) {
            poisoned_ = true;
            throw Error(Errc::ProofRejected, "segment " + std::to_string(rel.k) + " proof of correct encryption failed");
        }
        ++next_;
    }

    bool has_setup() const noexcept { return bundle_.has_value(); }
    const Bundle& bundle() const { return *bundle_; }
    bool poisoned() const noexcept { return poisoned_; }
    std::size_t verified_segments() const noexcept { return next_ - 1; }
    const SegmentationParams& params() const noexcept { return params_; }
    const Point& Q() const noexcept { return Q_; }
    const Point& Y() const noexcept { return Y_; }

private:
    Point Q_;
    Point Y_;
    SegmentationParams params_;
    std::optional<Bundle> bundle_;
    std::size_t next_ = 1;
    bool poisoned_ = false;
};

/// Decryptor: a Verifier plus the decryption key and the extraction table.
template <PrimeOrderGroup G, class RP = range::DefaultRangeProof<G>>
class Decryptor {
public:
    using Scalar = typename G::Scalar;
    using Point = typename G::Point;
    using Bundle = SetupBundle<G, RP>;

    Decryptor(elgamal::KeyPair<G> key, Point Q, SegmentationParams params)
        : key_(std::move(key)), verifier_(std::move(Q), key_.Y, params), table_(params.limb_bound()) {}

    bool accept_setup(const Bundle& bundle) { return verifier_.accept_setup(bundle); }

    /// Verifies the release, decrypts it and stores the limb. Errors as in
    /// Verifier::check_release.
    Scalar accept_segment(const SegmentRelease<G>& rel) {
        verifier_.check_release(rel);
        elgamal::Ciphertext<G> ct{verifier_.bundle().all_D[rel.k - 1], rel.E_k};
        auto v = table_.try_solve(elgamal::decrypt_point<G>(ct, key_.y));
        if (!v) fatal("verified segment " + std::to_string(rel.k) + " did not decrypt into range");
        limbs_.push_back(*v);
        return Scalar::from_u64(*v);
    }

    /// Throws Incomplete unless all m limbs are in.
    Scalar finish() const {
        const auto& params = verifier_.params();
        if (limbs_.size() != params.m) {
            throw Error(Errc::Incomplete, std::to_string(limbs_.size()) + " of " + std::to_string(params.m) + " segments");
        }
        auto x = reconstruct<G>(Segments{limbs_}, params);
        if (mul_base<G>(x) != verifier_.Q()) fatal("reconstructed secret does not match Q");
        return x;
    }

    std::size_t limbs_decrypted() const noexcept { return limbs_.size(); }
    const std::vector<std::uint64_t>& limbs() const noexcept { return limbs_; }
    bool poisoned() const noexcept { return verifier_.poisoned(); }
    bool has_setup() const noexcept { return verifier_.has_setup(); }
    const BsgsTable<G>& extraction_table() const noexcept { return table_; }

    /// Partial value sum_{k <= j} f_k [x]_k of the limbs decrypted so far.
    Scalar partial_secret() const {
        const auto f = verifier_.params().template weights<G>();
        Scalar acc = Scalar::from_u64(0);
        for (std::size_t k = 0; k < limbs_.size(); ++k) acc = acc + f[k] * Scalar::from_u64(limbs_[k]);
        return acc;
    }

private:
    elgamal::KeyPair<G> key_;
    Verifier<G, RP> verifier_;
    BsgsTable<G> table_;
    std::vector<std::uint64_t> limbs_;
};

namespace adversary {

/// Biased-segment encryptor: shifts limb `a` by `bias` and compensates in
/// limb `b` by -bias * f_a / f_b, so the weighted sum still equals x mod q
/// and the encdlog proof stays valid. 0-based limb indices, a != b.
template <PrimeOrderGroup G, class RP = range::DefaultRangeProof<G>>
Encryptor<G, RP> biased_encryptor(const typename G::Scalar& x, const typename G::Point& Q, const typename G::Point& Y,
                                  const SegmentationParams& params, std::size_t a, std::size_t b,
                                  const typename G::Scalar& bias, Drbg& rng) {
    using Scalar = typename G::Scalar;
    if (a == b || a >= params.m || b >= params.m) throw Error(Errc::InvalidArgument, "bad biased limb indices");
    auto segs = segment<G>(x, params);
    std::vector<Scalar> limbs;
    limbs.reserve(params.m);
    for (auto v : segs.limbs) limbs.push_back(Scalar::from_u64(v));
    const auto f = params.weights<G>();
    limbs[a] = limbs[a] + bias;
    limbs[b] = limbs[b] - bias * f[a] * f[b].inverse();
    return Encryptor<G, RP>::with_limbs(x, Q, Y, params, std::move(limbs), rng);
}

/// Inverse-weight pair: limb k shifted by f_k^{-1}, limb k+1 by -f_{k+1}^{-1}.
template <PrimeOrderGroup G, class RP = range::DefaultRangeProof<G>>
Encryptor<G, RP> inverse_weight_biased_encryptor(const typename G::Scalar& x, const typename G::Point& Q,
                                                 const typename G::Point& Y, const SegmentationParams& params,
                                                 std::size_t k, Drbg& rng) {
    const auto f = params.weights<G>();
    // bias * f_k / f_{k+1} with bias = f_k^{-1} gives f_{k+1}^{-1}, as required.
    return biased_encryptor<G, RP>(x, Q, Y, params, k, k + 1, f[k].inverse(), rng);
}

/// Copy of a release whose first response is off by one.
template <PrimeOrderGroup G>
SegmentRelease<G> corrupt(SegmentRelease<G> rel) {
    rel.enc_proof.response.z1 = rel.enc_proof.response.z1 + G::Scalar::from_u64(1);
    return rel;
}

} // namespace adversary

} // namespace jswap::juggling

#endif // JSWAP_JUGGLING_HPP
