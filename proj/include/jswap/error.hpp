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

#ifndef JSWAP_ERROR_HPP
#define JSWAP_ERROR_HPP

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

namespace jswap {

enum class Errc {
    MalformedPoint,
    MalformedScalar,
    DivByZero,
    NotFound,
    SecretOutOfRange,
    LimbOutOfRange,
    ValueOutOfRange,
    KeyMismatch,
    OutOfOrder,
    ProofRejected,
    Incomplete,
    CommitmentMismatch,
    NonceCommitMismatch,
    MissingParty,
    ShareMismatch,
    InvalidPartialSignature,
    MalformedFrame,
    MalformedTranscript,
    InvalidArgument,
};

constexpr std::string_view to_string(Errc c) noexcept {
    switch (c) {
    case Errc::MalformedPoint: return "MalformedPoint";
    case Errc::MalformedScalar: return "MalformedScalar";
    case Errc::DivByZero: return "DivByZero";
    case Errc::NotFound: return "NotFound";
    case Errc::SecretOutOfRange: return "SecretOutOfRange";
    case Errc::LimbOutOfRange: return "LimbOutOfRange";
    case Errc::ValueOutOfRange: return "ValueOutOfRange";
    case Errc::KeyMismatch: return "KeyMismatch";
    case Errc::OutOfOrder: return "OutOfOrder";
    case Errc::ProofRejected: return "ProofRejected";
    case Errc::Incomplete: return "Incomplete";
    case Errc::CommitmentMismatch: return "CommitmentMismatch";
    case Errc::NonceCommitMismatch: return "NonceCommitMismatch";
    case Errc::MissingParty: return "MissingParty";
    case Errc::ShareMismatch: return "ShareMismatch";
    case Errc::InvalidPartialSignature: return "InvalidPartialSignature";
    case Errc::MalformedFrame: return "MalformedFrame";
    case Errc::MalformedTranscript: return "MalformedTranscript";
    case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Recoverable protocol or input error. The code is what callers branch on.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
    explicit Error(Errc code) : std::runtime_error(std::string(to_string(code))), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Conditions that verified proofs rule out. Reaching one means the
/// implementation is broken, so there is nothing sensible to recover.
[[noreturn]] inline void fatal(std::string_view what) {
    std::fprintf(stderr, "jswap: fatal soundness violation: %.*s\n",
                 static_cast<int>(what.size()), what.data());
    std::abort();
}

} // namespace jswap

#endif // JSWAP_ERROR_HPP
