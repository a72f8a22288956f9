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
 * Message frames and the transcript file.
 *
 * Binary frame:   type (u8) || length (u32 BE) || payload
 * Transcript:     "# jswap-transcript v1" header, then one line per frame
 *                 <ordinal> TAB <sender> TAB <type name> TAB <payload hex>
 */

#ifndef JSWAP_SWAP_FRAME_HPP
#define JSWAP_SWAP_FRAME_HPP

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "jswap/bytes.hpp"

namespace jswap::swap {

enum class Role : std::uint8_t { P1 = 1, P2 = 2, S = 3, B1 = 4, B2 = 5, ME = 6 };

constexpr std::string_view to_string(Role r) noexcept {
    switch (r) {
    case Role::P1: return "P1";
    case Role::P2: return "P2";
    case Role::S: return "S";
    case Role::B1: return "B1";
    case Role::B2: return "B2";
    case Role::ME: return "ME";
    }
    return "?";
}

inline std::optional<Role> role_from_string(std::string_view s) {
    for (auto r : {Role::P1, Role::P2, Role::S, Role::B1, Role::B2, Role::ME})
        if (to_string(r) == s) return r;
    return std::nullopt;
}

enum class MsgType : std::uint8_t {
    Config = 0x01,
    EncKey = 0x10,
    KeygenCommit = 0x20,
    KeygenReveal = 0x21,
    SignRequest = 0x30,
    NonceCommit = 0x31,
    NonceReveal = 0x32,
    PartialSig = 0x33,
    TxBroadcast = 0x34,
    TxConfirmed = 0x40,
    SetupBundle = 0x50,
    SegmentRelease = 0x51,
    JugglePublicKeys = 0x52,
    Abort = 0x60,
};

inline constexpr MsgType all_msg_types[] = {
    MsgType::Config,      MsgType::EncKey,      MsgType::KeygenCommit, MsgType::KeygenReveal,
    MsgType::SignRequest, MsgType::NonceCommit, MsgType::NonceReveal,  MsgType::PartialSig,
    MsgType::TxBroadcast, MsgType::TxConfirmed, MsgType::SetupBundle,  MsgType::SegmentRelease,
    MsgType::JugglePublicKeys, MsgType::Abort,
};

constexpr std::string_view to_string(MsgType t) noexcept {
    switch (t) {
    case MsgType::Config: return "Config";
    case MsgType::EncKey: return "EncKey";
    case MsgType::KeygenCommit: return "KeygenCommit";
    case MsgType::KeygenReveal: return "KeygenReveal";
    case MsgType::SignRequest: return "SignRequest";
    case MsgType::NonceCommit: return "NonceCommit";
    case MsgType::NonceReveal: return "NonceReveal";
    case MsgType::PartialSig: return "PartialSig";
    case MsgType::TxBroadcast: return "TxBroadcast";
    case MsgType::TxConfirmed: return "TxConfirmed";
    case MsgType::SetupBundle: return "SetupBundle";
    case MsgType::SegmentRelease: return "SegmentRelease";
    case MsgType::JugglePublicKeys: return "JugglePublicKeys";
    case MsgType::Abort: return "Abort";
    }
    return "?";
}

inline std::optional<MsgType> msg_type_from_byte(std::uint8_t b) {
    for (auto t : all_msg_types)
        if (static_cast<std::uint8_t>(t) == b) return t;
    return std::nullopt;
}

inline std::optional<MsgType> msg_type_from_string(std::string_view s) {
    for (auto t : all_msg_types)
        if (to_string(t) == s) return t;
    return std::nullopt;
}

struct Frame {
    MsgType type{};
    Bytes payload;

    Bytes encode() const {
        return ByteWriter().u8(static_cast<std::uint8_t>(type)).blob(payload).bytes();
    }

    /// Reads one frame from the reader. Throws MalformedFrame.
    static Frame read(ByteReader& r) {
        auto t = msg_type_from_byte(r.u8());
        if (!t) throw Error(Errc::MalformedFrame, "unknown frame type");
        auto body = r.blob();
        return {*t, Bytes(body.begin(), body.end())};
    }

    friend bool operator==(const Frame&, const Frame&) = default;
};

/// Splits a buffer of concatenated frames. Throws MalformedFrame.
inline std::vector<Frame> read_frames(ByteView data) {
    ByteReader r(data);
    std::vector<Frame> out;
    while (!r.done()) out.push_back(Frame::read(r));
    return out;
}

struct LoggedFrame {
    std::uint64_t ordinal = 0;
    Role sender{};
    Frame frame;

    friend bool operator==(const LoggedFrame&, const LoggedFrame&) = default;
};

inline constexpr std::string_view transcript_header = "# jswap-transcript v1";

class Transcript {
public:
    const LoggedFrame& append(Role sender, Frame f) {
        frames_.push_back({frames_.size(), sender, std::move(f)});
        return frames_.back();
    }

    const std::vector<LoggedFrame>& frames() const noexcept { return frames_; }
    std::size_t size() const noexcept { return frames_.size(); }

    std::uint64_t payload_bytes() const {
        std::uint64_t n = 0;
        for (const auto& f : frames_) n += f.frame.payload.size();
        return n;
    }

    std::uint64_t payload_bytes(Role sender) const {
        std::uint64_t n = 0;
        for (const auto& f : frames_)
            if (f.sender == sender) n += f.frame.payload.size();
        return n;
    }

    std::size_t count(MsgType t, std::optional<Role> sender = std::nullopt) const {
        std::size_t n = 0;
        for (const auto& f : frames_)
            if (f.frame.type == t && (!sender || f.sender == *sender)) ++n;
        return n;
    }

    void write(std::ostream& os) const {
        os << transcript_header << '\n';
        for (const auto& f : frames_) {
            os << f.ordinal << '\t' << to_string(f.sender) << '\t' << to_string(f.frame.type) << '\t'
               << to_hex(f.frame.payload) << '\n';
        }
    }

    std::string to_text() const {
        std::ostringstream os;
        write(os);
        return os.str();
    }

    /// Throws MalformedTranscript on any syntax error or out-of-sequence ordinal.
    static Transcript read(std::istream& is) {
        Transcript t;
        std::string line;
        if (!std::getline(is, line) || line != transcript_header) {
            throw Error(Errc::MalformedTranscript, "missing transcript header");
        }
        std::size_t lineno = 1;
        while (std::getline(is, line)) {
            ++lineno;
            if (line.empty()) continue;
            auto fail = [&](const char* why) {
                return Error(Errc::MalformedTranscript, "line " + std::to_string(lineno) + ": " + why);
            };
            std::vector<std::string_view> cols;
            std::string_view rest(line);
            for (int i = 0; i < 3; ++i) {
                auto tab = rest.find('\t');
                if (tab == std::string_view::npos) throw fail("expected four tab-separated columns");
                cols.push_back(rest.substr(0, tab));
                rest.remove_prefix(tab + 1);
            }
            cols.push_back(rest);
            std::uint64_t ordinal = 0;
            try {
                std::size_t used = 0;
                ordinal = std::stoull(std::string(cols[0]), &used);
                if (used != cols[0].size()) throw fail("bad ordinal");
            } catch (const std::logic_error&) {
                throw fail("bad ordinal");
            }
            if (ordinal != t.frames_.size()) throw fail("ordinal out of sequence");
            auto sender = role_from_string(cols[1]);
            if (!sender) throw fail("unknown sender role");
            auto type = msg_type_from_string(cols[2]);
            if (!type) throw fail("unknown message type");
            Bytes payload;
            try {
                payload = from_hex(cols[3]);
            } catch (const Error&) {
                throw fail("bad payload hex");
            }
            t.append(*sender, {*type, std::move(payload)});
        }
        return t;
    }

    static Transcript parse(std::string_view text) {
        std::istringstream is{std::string(text)};
        return read(is);
    }

private:
    std::vector<LoggedFrame> frames_;
};

} // namespace jswap::swap

#endif // JSWAP_SWAP_FRAME_HPP
