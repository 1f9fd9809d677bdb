/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The d2dsim Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

// Network layer: AXI beats <-> AXIS packets, credit accounting and channel
// arbitration.
//
// Packet bit layout, least significant bit first:
//
//   [ header : 4 | payload : P | b_field : B | credits : C ]
//
// P is the widest of the AW, W, AR and R channels (73 bits, the W channel),
// B is the B channel (6 bits) and C = max(1, ceil(log2(CRD))). Header tag 0
// marks a credit-only packet, tags 1..5 are AW, W, B, AR, R. A B response
// travels in b_field and leaves the payload zero.
//
// Field order inside the payload, LSB first:
//   AW/AR : id[4] addr[32] len[8] size[3] burst[2]
//   W     : data[64] strb[8] last[1]
//   R     : id[4] data[64] resp[2] last[1]
// and inside b_field: id[4] resp[2].

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "d2dsim/axi.hpp"
#include "d2dsim/bits.hpp"
#include "d2dsim/link_config.hpp"

namespace d2dsim {

class MalformedHeader : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr unsigned kHeaderBits = 4;
inline constexpr std::uint8_t kCreditOnlyTag = 0;

inline std::uint8_t header_tag(BeatKind k) { return static_cast<std::uint8_t>(k) + 1; }

inline std::optional<BeatKind> kind_of_tag(std::uint8_t tag) {
    if (tag == kCreditOnlyTag) return std::nullopt;
    if (tag > 5) throw MalformedHeader("undefined packet header tag " + std::to_string(tag));
    return static_cast<BeatKind>(tag - 1);
}

/// ceil(log2(crd)), but never narrower than one bit so CRD=1 can still return its credit.
inline unsigned credit_field_bits(std::uint32_t crd) {
    if (crd < 1) throw std::invalid_argument("CRD must be >= 1");
    const unsigned bits = crd == 1 ? 0u : static_cast<unsigned>(std::bit_width(crd - 1));
    return bits == 0 ? 1u : bits;
}

struct PacketLayout {
    unsigned payload_bits = 73;
    unsigned b_bits = 6;
    unsigned credit_bits = 7;

    static PacketLayout for_config(const D2DConfig& cfg, const AxiWidths& w = {}) {
        return {w.max_payload(), w.b(), credit_field_bits(cfg.crd)};
    }

    unsigned payload_lsb() const { return kHeaderBits; }
    unsigned b_lsb() const { return kHeaderBits + payload_bits; }
    unsigned credit_lsb() const { return b_lsb() + b_bits; }
    unsigned total_bits() const { return credit_lsb() + credit_bits; }
    std::uint32_t max_credits_per_packet() const { return (std::uint32_t{1} << credit_bits) - 1; }
};

/// Width of one AXIS packet for this configuration.
inline unsigned packet_width_bits(const D2DConfig& cfg, const AxiWidths& widths = {}) {
    return PacketLayout::for_config(cfg, widths).total_bits();
}

struct AxisPacket {
    std::uint8_t header = kCreditOnlyTag;
    BitVector payload;
    BitVector b_field;
    std::uint32_t credits = 0;

    bool payload_valid() const { return header != kCreditOnlyTag; }
    bool operator==(const AxisPacket&) const = default;
};

inline BitVector to_bits(const AxisPacket& p, const PacketLayout& l) {
    BitVector out(l.total_bits());
    out.set(0, kHeaderBits, p.header);
    out.insert(l.payload_lsb(), p.payload);
    out.insert(l.b_lsb(), p.b_field);
    out.set(l.credit_lsb(), l.credit_bits, p.credits);
    return out;
}

inline AxisPacket from_bits(const BitVector& bits, const PacketLayout& l) {
    if (bits.width() != l.total_bits()) throw std::invalid_argument("packet width does not match layout");
    AxisPacket p;
    p.header = static_cast<std::uint8_t>(bits.get(0, kHeaderBits));
    kind_of_tag(p.header);
    p.payload = bits.slice(l.payload_lsb(), l.payload_bits);
    p.b_field = bits.slice(l.b_lsb(), l.b_bits);
    p.credits = static_cast<std::uint32_t>(bits.get(l.credit_lsb(), l.credit_bits));
    return p;
}

/// Credits held by the sending side of one direction.
struct CreditState {
    std::uint32_t local_credits = 0;   // packets this side may still send
    std::uint32_t pending_return = 0;  // credits owed to the peer
};

/// Encodes `beat` into a payload packet, piggybacking owed credits.
/// Returns nullopt when no credit is left; the caller stalls.
inline std::optional<AxisPacket> serialize(const Beat& beat, CreditState& cs, const PacketLayout& l) {
    if (cs.local_credits == 0) return std::nullopt;
    AxisPacket p;
    p.header = header_tag(beat.kind);
    p.payload = BitVector(l.payload_bits);
    p.b_field = BitVector(l.b_bits);
    auto& pl = p.payload;
    switch (beat.kind) {
        case BeatKind::AW:
        case BeatKind::AR:
            pl.set(0, 4, beat.id);
            pl.set(4, 32, beat.addr);
            pl.set(36, 8, beat.len);
            pl.set(44, 3, beat.size);
            pl.set(47, 2, beat.burst);
            break;
        case BeatKind::W:
            pl.set(0, 64, beat.data);
            pl.set(64, 8, beat.strb);
            pl.set(72, 1, beat.last);
            break;
        case BeatKind::R:
            pl.set(0, 4, beat.id);
            pl.set(4, 64, beat.data);
            pl.set(68, 2, beat.resp);
            pl.set(70, 1, beat.last);
            break;
        case BeatKind::B:
            p.b_field.set(0, 4, beat.id);
            p.b_field.set(4, 2, beat.resp);
            break;
    }
    p.credits = std::min(cs.pending_return, l.max_credits_per_packet());
    cs.pending_return -= p.credits;
    --cs.local_credits;
    return p;
}

struct Deserialized {
    std::optional<Beat> beat;
    std::uint32_t credits = 0;
};

/// Decodes a packet. Throws MalformedHeader on an undefined tag.
inline Deserialized deserialize(const AxisPacket& p) {
    Deserialized out{std::nullopt, p.credits};
    const auto kind = kind_of_tag(p.header);
    if (!kind) return out;
    const auto& pl = p.payload;
    Beat b;
    b.kind = *kind;
    switch (*kind) {
        case BeatKind::AW:
        case BeatKind::AR:
            b.id = static_cast<std::uint8_t>(pl.get(0, 4));
            b.addr = static_cast<std::uint32_t>(pl.get(4, 32));
            b.len = static_cast<std::uint8_t>(pl.get(36, 8));
            b.size = static_cast<std::uint8_t>(pl.get(44, 3));
            b.burst = static_cast<std::uint8_t>(pl.get(47, 2));
            break;
        case BeatKind::W:
            b.data = pl.get(0, 64);
            b.strb = static_cast<std::uint8_t>(pl.get(64, 8));
            b.last = pl.get(72, 1) != 0;
            break;
        case BeatKind::R:
            b.id = static_cast<std::uint8_t>(pl.get(0, 4));
            b.data = pl.get(4, 64);
            b.resp = static_cast<std::uint8_t>(pl.get(68, 2));
            b.last = pl.get(70, 1) != 0;
            break;
        case BeatKind::B:
            b.id = static_cast<std::uint8_t>(p.b_field.get(0, 4));
            b.resp = static_cast<std::uint8_t>(p.b_field.get(4, 2));
            break;
    }
    out.beat = b;
    return out;
}

/// Emits a credit-only packet when enough credits are owed and no payload
/// packet goes out this cycle. Payload packets piggyback credits instead.
inline std::optional<AxisPacket> issue_credit_only(CreditState& cs, std::uint32_t threshold, bool payload_ready,
                                                   const PacketLayout& l) {
    if (payload_ready || cs.pending_return == 0 || cs.pending_return < threshold) return std::nullopt;
    AxisPacket p;
    p.header = kCreditOnlyTag;
    p.payload = BitVector(l.payload_bits);
    p.b_field = BitVector(l.b_bits);
    p.credits = std::min(cs.pending_return, l.max_credits_per_packet());
    cs.pending_return -= p.credits;
    return p;
}

struct RequestSet {
    std::array<bool, 5> pending{};

    bool& operator[](BeatKind k) { return pending[static_cast<std::size_t>(k)]; }
    bool operator[](BeatKind k) const { return pending[static_cast<std::size_t>(k)]; }
    bool any() const { return std::find(pending.begin(), pending.end(), true) != pending.end(); }
};

/// B responses win outright. Otherwise the address group {AW, AR} and the
/// data group {W, R} alternate, and each group rotates between its members.
struct ArbiterState {
    bool data_group_first = false;
    bool ar_first = false;
    bool r_first = false;
    std::array<std::uint64_t, 5> grants{};
};

inline BeatKind arbitrate(const RequestSet& req, ArbiterState& st) {
    if (!req.any()) throw std::logic_error("arbitrate called without requests");
    auto grant = [&st](BeatKind k) {
        ++st.grants[static_cast<std::size_t>(k)];
        return k;
    };
    if (req[BeatKind::B]) return grant(BeatKind::B);

    const bool addr = req[BeatKind::AW] || req[BeatKind::AR];
    const bool data = req[BeatKind::W] || req[BeatKind::R];
    const bool pick_data = data && (!addr || st.data_group_first);
    st.data_group_first = !pick_data;
    if (pick_data) {
        const bool r = req[BeatKind::R] && (!req[BeatKind::W] || st.r_first);
        st.r_first = !r;
        return grant(r ? BeatKind::R : BeatKind::W);
    }
    const bool ar = req[BeatKind::AR] && (!req[BeatKind::AW] || st.ar_first);
    st.ar_first = !ar;
    return grant(ar ? BeatKind::AR : BeatKind::AW);
}

}  // namespace d2dsim
