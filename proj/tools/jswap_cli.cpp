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

// jswap: key generation, standalone juggling, swap simulation and audit.

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "jswap/group/secp256k1.hpp"
#include "jswap/group/toy_group.hpp"
#include "jswap/juggling.hpp"
#include "jswap/swap.hpp"

namespace {

using namespace jswap;
using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_rejected = 1;
constexpr int exit_usage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class F>
int with_group(const std::string& name, F&& f) {
    if (name == ToyGroup::name()) return f(ToyGroup{});
    if (name == Secp256k1::name()) return f(Secp256k1{});
    throw UsageError("unknown group '" + name + "' (expected toy or secp256k1)");
}

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open " + path);
    return Bytes(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::string& path, ByteView data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

json read_json(const std::string& path) {
    auto raw = read_file(path);
    try {
        return json::parse(raw.begin(), raw.end());
    } catch (const json::exception& e) {
        throw UsageError(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// keygen

struct KeygenArgs {
    std::string group = "secp256k1";
    std::uint64_t seed = 1;
    std::string out;
};

template <PrimeOrderGroup G>
json keygen_json(std::uint64_t seed) {
    Drbg rng(seed);
    Drbg xs = rng.fork("keygen/secret"), ys = rng.fork("keygen/encryption");
    auto x = random_segmentable_secret<G>(xs);
    auto kp = elgamal::KeyPair<G>::generate(ys);
    return {{"group", std::string(G::name())},
            {"x", to_hex(x.encode())},
            {"Q", to_hex(mul_base<G>(x).encode())},
            {"y", to_hex(kp.y.encode())},
            {"Y", to_hex(kp.Y.encode())}};
}

int cmd_keygen(const KeygenArgs& a) {
    return with_group(a.group, [&]<class G>(G) {
        auto doc = keygen_json<G>(a.seed).dump(2) + "\n";
        if (a.out.empty()) {
            std::cout << doc;
        } else {
            write_file(a.out, as_bytes(doc));
            std::cout << "wrote " << a.out << "\n";
        }
        return exit_ok;
    });
}

// ---------------------------------------------------------------------------
// juggle
//
// File layout: a Config frame (group, l, Q, Y), one SetupBundle frame and
// m SegmentRelease frames.

struct JuggleArgs {
    std::string group = "secp256k1";
    std::size_t segment_bits = 8;
    std::uint64_t seed = 1;
    std::string file;
    std::string keys;       // prove: own x,Q; verify: own y,Y for decryption
    std::string recipient;  // prove: recipient Y
};

template <PrimeOrderGroup G>
typename G::Scalar scalar_field(const json& j, const char* key) {
    return G::Scalar::decode(from_hex(j.at(key).template get<std::string>()));
}

template <PrimeOrderGroup G>
typename G::Point point_field(const json& j, const char* key) {
    return G::Point::decode(from_hex(j.at(key).template get<std::string>()));
}

template <PrimeOrderGroup G>
int juggle_prove(const JuggleArgs& a) {
    using Scalar = typename G::Scalar;
    using Point = typename G::Point;
    const auto params = SegmentationParams::for_group<G>(a.segment_bits);
    Drbg rng(a.seed);

    Scalar x;
    Point Q;
    Point Y;
    try {
        if (!a.keys.empty()) {
            auto j = read_json(a.keys);
            x = scalar_field<G>(j, "x");
            Q = point_field<G>(j, "Q");
        } else {
            Drbg sub = rng.fork("juggle/secret");
            x = random_segmentable_secret<G>(sub);
            Q = mul_base<G>(x);
        }
        if (!a.recipient.empty()) {
            Y = point_field<G>(read_json(a.recipient), "Y");
        } else {
            Drbg sub = rng.fork("juggle/recipient");
            Y = elgamal::KeyPair<G>::generate(sub).Y;
        }
    } catch (const json::exception& e) {
        throw UsageError(std::string("key file: ") + e.what());
    }

    Drbg sub = rng.fork("juggle/encrypt");
    juggling::Encryptor<G> enc(x, Q, Y, params, sub);
    ByteWriter w;
    auto header = ByteWriter().blob(as_bytes(G::name())).u8(static_cast<std::uint8_t>(a.segment_bits)).put(Q).put(Y).bytes();
    w.raw(swap::Frame{swap::MsgType::Config, header}.encode());
    w.raw(swap::Frame{swap::MsgType::SetupBundle, enc.bundle().encode()}.encode());
    while (!enc.done()) w.raw(swap::Frame{swap::MsgType::SegmentRelease, enc.release_next().encode()}.encode());
    write_file(a.file, w.bytes());
    std::cout << "wrote " << a.file << ": group " << G::name() << ", l=" << params.l << ", m=" << params.m << ", "
              << w.bytes().size() << " bytes\n";
    return exit_ok;
}

int juggle_verify(const JuggleArgs& a) {
    auto data = read_file(a.file);
    auto reject = [](const std::string& why) {
        std::cout << "REJECT: " << why << "\n";
        return exit_rejected;
    };
    std::vector<swap::Frame> frames;
    std::string group;
    try {
        frames = swap::read_frames(data);
        if (frames.empty() || frames[0].type != swap::MsgType::Config) return reject("missing header frame");
        group = swap::peek_group(frames[0].payload);
    } catch (const Error& e) {
        return reject(std::string("truncated or malformed file: ") + e.what());
    }
    return with_group(group, [&]<class G>(G) {
        try {
            ByteReader hr(frames[0].payload);
            hr.blob();
            const std::size_t l = hr.u8();
            const auto Q = hr.get<typename G::Point>();
            const auto Y = hr.get<typename G::Point>();
            hr.expect_done();
            if (l < 2 || l > 16) return reject("segment bits out of range");
            const auto params = SegmentationParams::for_group<G>(l);
            if (frames.size() != params.m + 2) {
                return reject("expected " + std::to_string(params.m + 2) + " frames, found " + std::to_string(frames.size()));
            }
            if (frames[1].type != swap::MsgType::SetupBundle) return reject("second frame is not a setup bundle");

            std::optional<juggling::Decryptor<G>> dec;
            juggling::Verifier<G> ver(Q, Y, params);
            const auto bundle = juggling::SetupBundle<G>::decode(frames[1].payload);
            if (!a.keys.empty()) {
                auto j = read_json(a.keys);
                auto kp = elgamal::KeyPair<G>::from_secret(scalar_field<G>(j, "y"), point_field<G>(j, "Y"));
                if (kp.Y != Y) throw UsageError("key file does not hold the recipient key of this session");
                dec.emplace(kp, Q, params);
                if (!dec->accept_setup(bundle)) return reject("setup bundle failed verification");
            }
            if (!ver.accept_setup(bundle)) return reject("setup bundle failed verification");
            for (std::size_t k = 1; k <= params.m; ++k) {
                const auto& f = frames[k + 1];
                if (f.type != swap::MsgType::SegmentRelease) return reject("frame " + std::to_string(k + 1) + " is not a release");
                auto rel = juggling::SegmentRelease<G>::decode(f.payload);
                ver.check_release(rel);
                if (dec) dec->accept_segment(rel);
            }
            std::cout << "OK: setup and " << params.m << " segments verified (group " << G::name() << ", l=" << l << ")\n";
            if (dec) std::cout << "recovered x = " << to_hex(dec->finish().encode()) << "\n";
            return exit_ok;
        } catch (const json::exception& e) {
            throw UsageError(std::string("key file: ") + e.what());
        } catch (const Error& e) {
            return reject(e.what());
        }
    });
}

// ---------------------------------------------------------------------------
// swap

struct SwapArgs {
    std::string group = "toy";
    swap::SwapConfig cfg;
    std::string adversary = "none";
    std::string out;
    bool sweep = false;
};

template <PrimeOrderGroup G>
void print_summary(const swap::SwapResult<G>& r, std::chrono::milliseconds elapsed) {
    using swap::Role;
    const auto& t = r.terms;
    std::cout << "outcome: " << r.outcome() << "\n";
    std::cout << "steps: P1=" << swap::to_string(r.p1_step) << " P2=" << swap::to_string(r.p2_step) << "\n";
    if (auto c = r.cheater()) std::cout << "cheater: " << swap::to_string(*c) << "\n";
    for (const auto& a : r.aborts) {
        std::cout << "abort by " << swap::to_string(a.by) << " blaming " << swap::to_string(a.notice.blamed) << ": "
                  << a.notice.reason << "\n";
    }
    if (!r.revoked.empty()) {
        std::cout << "revoked by provider:";
        for (auto role : r.revoked) std::cout << " " << swap::to_string(role);
        std::cout << "\n";
    }
    std::cout << "balances (chain " << t.chain1 << "): P1.in=" << r.chain1.balance(t.in_address(Role::P1))
              << " P2.out=" << r.chain1.balance(t.out_address(Role::P2))
              << " a_1=" << r.chain1.total_supply() - r.chain1.balance(t.in_address(Role::P1)) -
                                 r.chain1.balance(t.out_address(Role::P2)) - r.chain1.balance(t.provider)
              << " S=" << r.chain1.balance(t.provider) << " supply=" << r.chain1.total_supply() << "\n";
    std::cout << "balances (chain " << t.chain2 << "): P2.in=" << r.chain2.balance(t.in_address(Role::P2))
              << " P1.out=" << r.chain2.balance(t.out_address(Role::P1))
              << " a_2=" << r.chain2.total_supply() - r.chain2.balance(t.in_address(Role::P2)) -
                                 r.chain2.balance(t.out_address(Role::P1)) - r.chain2.balance(t.provider)
              << " S=" << r.chain2.balance(t.provider) << " supply=" << r.chain2.total_supply() << "\n";
    std::cout << "holdings: P1 " << r.initial.p1 << " -> " << r.final.p1 << ", P2 " << r.initial.p2 << " -> "
              << r.final.p2 << ", S " << r.initial.provider << " -> " << r.final.provider << "\n";
    std::cout << "fairness: P1 decrypted " << r.fairness.p1_decrypted << "/" << r.fairness.m << ", P2 decrypted "
              << r.fairness.p2_decrypted << "/" << r.fairness.m << ", advantage " << r.fairness.advantage() << "\n";
    std::cout << "provider verified: P1 " << r.provider_verified_p1 << ", P2 " << r.provider_verified_p2 << " segments\n";
    std::cout << "transactions: chain " << t.chain1 << "=" << r.chain1.log().size() << " chain " << t.chain2 << "="
              << r.chain2.log().size() << " (deposit + withdraw = 2 per chain when complete)\n";
    std::cout << "messages: " << r.transcript.size() << " frames, " << r.transcript.payload_bytes() << " payload bytes";
    for (auto role : {Role::P1, Role::P2, Role::S, Role::B1, Role::B2, Role::ME}) {
        std::cout << (role == Role::P1 ? " (" : ", ") << swap::to_string(role) << "=" << r.transcript.payload_bytes(role);
    }
    std::cout << ")\n";
    std::cout << "elapsed: " << elapsed.count() << " ms\n";
}

int cmd_swap(SwapArgs a) {
    try {
        a.cfg.adversary = swap::Adversary::parse(a.adversary);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    return with_group(a.group, [&]<class G>(G) {
        if (a.sweep) {
            const auto m = SegmentationParams::for_group<G>(a.cfg.segment_bits).m;
            std::cout << "abort sweep, group " << G::name() << ", m=" << m << "\n";
            std::cout << "party  k  P1  P2  advantage\n";
            std::size_t worst = 0;
            for (auto party : {swap::Role::P1, swap::Role::P2}) {
                for (std::size_t k = 0; k <= m; ++k) {
                    auto cfg = a.cfg;
                    cfg.adversary = swap::Adversary::abort_at_segment(k, party);
                    auto r = swap::run_swap<G>(cfg);
                    worst = std::max(worst, r.fairness.advantage());
                    std::cout << std::setw(5) << swap::to_string(party) << std::setw(3) << k << std::setw(4)
                              << r.fairness.p1_decrypted << std::setw(4) << r.fairness.p2_decrypted << std::setw(11)
                              << r.fairness.advantage() << "\n";
                }
            }
            std::cout << "max advantage: " << worst << "\n";
            return worst <= 1 ? exit_ok : exit_rejected;
        }
        auto t0 = std::chrono::steady_clock::now();
        auto r = swap::run_swap<G>(a.cfg);
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
        print_summary(r, elapsed);
        if (!a.out.empty()) {
            write_file(a.out, as_bytes(r.transcript.to_text()));
            std::cout << "transcript: " << a.out << "\n";
        }
        return r.completed() ? exit_ok : exit_rejected;
    });
}

// ---------------------------------------------------------------------------
// audit

int cmd_audit(const std::string& path) {
    swap::Transcript tr;
    std::string group;
    try {
        std::ifstream in(path);
        if (!in) throw UsageError("cannot open " + path);
        tr = swap::Transcript::read(in);
        if (tr.frames().empty()) throw Error(Errc::MalformedTranscript, "empty transcript");
        group = swap::peek_group(tr.frames()[0].frame.payload);
    } catch (const Error& e) {
        std::cerr << "malformed transcript: " << e.what() << "\n";
        return exit_usage;
    }
    return with_group(group, [&]<class G>(G) {
        swap::Verdict v;
        try {
            v = swap::audit_transcript<G>(tr);
        } catch (const Error& e) {
            std::cerr << "malformed transcript: " << e.what() << "\n";
            return exit_usage;
        }
        std::cout << "frames: " << tr.size() << ", payload bytes: " << tr.payload_bytes() << "\n";
        std::cout << "transactions: chain 1=" << v.tx_chain1 << " chain 2=" << v.tx_chain2 << "\n";
        std::cout << "juggling frames verified: P1 " << v.juggled_p1 << ", P2 " << v.juggled_p2 << "\n";
        for (const auto& n : v.notes) std::cout << "note: " << n << "\n";
        if (v.clean()) {
            std::cout << "verdict: clean\n";
            return exit_ok;
        }
        std::cout << "verdict: blame " << swap::to_string(*v.blamed) << " (" << v.reason << ")\n";
        return exit_rejected;
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"jswap: segmented verifiable encryption and three-party cross-chain swaps"};
    app.require_subcommand(1);
    const std::vector<std::string> groups{"toy", "secp256k1"};

    KeygenArgs kg;
    auto* keygen = app.add_subcommand("keygen", "generate a segmentable secret and an encryption key pair");
    keygen->add_option("--group", kg.group, "toy or secp256k1")->check(CLI::IsMember(groups))->capture_default_str();
    keygen->add_option("--seed", kg.seed, "generator seed")->capture_default_str();
    keygen->add_option("--out", kg.out, "output JSON file (default: stdout)");

    JuggleArgs jg;
    auto* juggle = app.add_subcommand("juggle", "standalone juggling session");
    juggle->require_subcommand(1);
    auto* prove = juggle->add_subcommand("prove", "encrypt a secret segment by segment and write every frame");
    prove->add_option("--group", jg.group, "toy or secp256k1")->check(CLI::IsMember(groups))->capture_default_str();
    prove->add_option("--segment-bits,-l", jg.segment_bits, "bits per segment")->check(CLI::Range(2, 16))->capture_default_str();
    prove->add_option("--seed", jg.seed, "generator seed")->capture_default_str();
    prove->add_option("--keys", jg.keys, "keygen JSON holding x and Q (default: derived from seed)");
    prove->add_option("--recipient", jg.recipient, "keygen JSON holding the recipient's Y (default: derived from seed)");
    prove->add_option("--out,-o", jg.file, "output frame file")->required();
    auto* verify = juggle->add_subcommand("verify", "verify a frame file written by prove");
    verify->add_option("file", jg.file, "frame file")->required();
    verify->add_option("--keys", jg.keys, "recipient keygen JSON; also decrypts and reconstructs x");

    SwapArgs sw;
    auto* swp = app.add_subcommand("swap", "simulate a full swap between P1 and P2 through provider S");
    swp->add_option("--group", sw.group, "toy or secp256k1")->check(CLI::IsMember(groups))->capture_default_str();
    swp->add_option("--segment-bits,-l", sw.cfg.segment_bits, "bits per segment")->check(CLI::Range(2, 16))->capture_default_str();
    swp->add_option("--amount1", sw.cfg.amount1, "c_1, sent by P1 on chain 1")->check(CLI::PositiveNumber)->capture_default_str();
    swp->add_option("--amount2", sw.cfg.amount2, "c_2, sent by P2 on chain 2")->check(CLI::PositiveNumber)->capture_default_str();
    swp->add_option("--initial1", sw.cfg.initial1, "P1 genesis balance on chain 1")->capture_default_str();
    swp->add_option("--initial2", sw.cfg.initial2, "P2 genesis balance on chain 2")->capture_default_str();
    swp->add_option("--key-parties", sw.cfg.key_parties, "3: swap keys shared with S; 2: owners only")
        ->check(CLI::IsMember({std::size_t{2}, std::size_t{3}}))
        ->capture_default_str();
    swp->add_option("--adversary", sw.adversary,
                    "none | abort-at=K[:P1|P2] | corrupt-proof=K[:P1|P2] | biased-segments[=P1|P2] | "
                    "provider-withhold | provider-partial-sign")
        ->capture_default_str();
    swp->add_option("--seed", sw.cfg.seed, "generator seed")->capture_default_str();
    swp->add_option("--out,-o", sw.out, "transcript output file");
    swp->add_flag("--sweep-aborts", sw.sweep, "run abort-at for every k and both parties; print the advantage table");

    std::string audit_path;
    auto* audit = app.add_subcommand("audit", "re-verify a swap transcript offline and assign blame");
    audit->add_option("transcript", audit_path, "transcript file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*keygen) return cmd_keygen(kg);
        if (*prove) return with_group(jg.group, [&]<class G>(G) { return juggle_prove<G>(jg); });
        if (*verify) return juggle_verify(jg);
        if (*swp) return cmd_swap(sw);
        if (*audit) return cmd_audit(audit_path);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
