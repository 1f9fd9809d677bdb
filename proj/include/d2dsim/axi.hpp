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

// Transaction-level AXI4 model: beats, a burst DMA manager, a fixed-latency
// memory subordinate and an ordering checker for recorded traces.

#include <algorithm>
#include <array>
#include <bitset>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "d2dsim/sim_core.hpp"

namespace d2dsim {

enum class BeatKind : std::uint8_t { AW, W, B, AR, R };

inline constexpr std::array<BeatKind, 5> kAllBeatKinds{BeatKind::AW, BeatKind::W, BeatKind::B, BeatKind::AR,
                                                       BeatKind::R};

inline const char* to_string(BeatKind k) {
    switch (k) {
        case BeatKind::AW: return "AW";
        case BeatKind::W: return "W";
        case BeatKind::B: return "B";
        case BeatKind::AR: return "AR";
        case BeatKind::R: return "R";
    }
    return "?";
}

/// Channel field widths in bits. Fixed for the whole model.
struct AxiWidths {
    unsigned id = 4;
    unsigned addr = 32;
    unsigned len = 8;
    unsigned size = 3;
    unsigned burst = 2;
    unsigned data = 64;
    unsigned strb = 8;
    unsigned resp = 2;
    unsigned last = 1;

    unsigned aw() const { return id + addr + len + size + burst; }
    unsigned ar() const { return aw(); }
    unsigned w() const { return data + strb + last; }
    unsigned b() const { return id + resp; }
    unsigned r() const { return id + data + resp + last; }

    unsigned of(BeatKind k) const {
        switch (k) {
            case BeatKind::AW: return aw();
            case BeatKind::W: return w();
            case BeatKind::B: return b();
            case BeatKind::AR: return ar();
            case BeatKind::R: return r();
        }
        return 0;
    }

    /// Widest channel; sets the packet payload field.
    unsigned max_payload() const { return std::max({aw(), w(), ar(), r()}); }
};

inline constexpr unsigned kBeatBytes = 8;
inline constexpr unsigned kMaxBurstBytes = 2048;
inline constexpr std::uint8_t kIncrBurst = 1;
inline constexpr std::uint8_t kSize8Bytes = 3;

/// One transfer on one AXI channel. Fields that do not apply to `kind` stay zero.
struct Beat {
    BeatKind kind = BeatKind::AW;
    std::uint8_t id = 0;
    std::uint32_t addr = 0;
    std::uint64_t data = 0;
    std::uint8_t strb = 0;
    std::uint8_t len = 0;
    std::uint8_t size = 0;
    std::uint8_t burst = 0;
    std::uint8_t resp = 0;
    bool last = false;

    bool operator==(const Beat&) const = default;

    static Beat aw(std::uint8_t id, std::uint32_t addr, std::uint8_t len) {
        return {BeatKind::AW, static_cast<std::uint8_t>(id & 0xF), addr, 0, 0, len, kSize8Bytes, kIncrBurst, 0, false};
    }
    static Beat ar(std::uint8_t id, std::uint32_t addr, std::uint8_t len) {
        return {BeatKind::AR, static_cast<std::uint8_t>(id & 0xF), addr, 0, 0, len, kSize8Bytes, kIncrBurst, 0, false};
    }
    static Beat w(std::uint64_t data, std::uint8_t strb, bool last) {
        return {BeatKind::W, 0, 0, data, strb, 0, 0, 0, 0, last};
    }
    static Beat b(std::uint8_t id, std::uint8_t resp = 0) {
        return {BeatKind::B, static_cast<std::uint8_t>(id & 0xF), 0, 0, 0, 0, 0, 0, static_cast<std::uint8_t>(resp & 3),
                false};
    }
    static Beat r(std::uint8_t id, std::uint64_t data, bool last, std::uint8_t resp = 0) {
        return {BeatKind::R, static_cast<std::uint8_t>(id & 0xF), 0, data, 0, 0, 0, 0,
                static_cast<std::uint8_t>(resp & 3), last};
    }

    unsigned data_bits() const { return kind == BeatKind::W || kind == BeatKind::R ? 64u : 0u; }
};

/// The five channels between one manager and one subordinate.
struct AxiPort {
    HandshakeChannel<Beat>* aw = nullptr;
    HandshakeChannel<Beat>* w = nullptr;
    HandshakeChannel<Beat>* b = nullptr;
    HandshakeChannel<Beat>* ar = nullptr;
    HandshakeChannel<Beat>* r = nullptr;

    HandshakeChannel<Beat>& channel(BeatKind k) const {
        switch (k) {
            case BeatKind::AW: return *aw;
            case BeatKind::W: return *w;
            case BeatKind::B: return *b;
            case BeatKind::AR: return *ar;
            case BeatKind::R: return *r;
        }
        throw std::logic_error("bad beat kind");
    }
};

inline AxiPort make_axi_port(Simulation& sim, const std::string& prefix) {
    return {&sim.make_channel<Beat>(prefix + ".aw"), &sim.make_channel<Beat>(prefix + ".w"),
            &sim.make_channel<Beat>(prefix + ".b"), &sim.make_channel<Beat>(prefix + ".ar"),
            &sim.make_channel<Beat>(prefix + ".r")};
}

/// Byte-addressable sparse store, allocated in 4 KiB pages. Unwritten bytes read as zero.
class SparseMemory {
public:
    std::uint8_t read(std::uint64_t addr) const {
        auto it = pages_.find(addr >> kPageBits);
        return it == pages_.end() ? 0 : (*it->second)[addr & kPageMask];
    }
    void write(std::uint64_t addr, std::uint8_t value) { page(addr)[addr & kPageMask] = value; }

    std::uint64_t read_word(std::uint64_t addr) const {
        std::uint64_t v = 0;
        for (unsigned i = 0; i < kBeatBytes; ++i) v |= std::uint64_t{read(addr + i)} << (8 * i);
        return v;
    }
    void write_word(std::uint64_t addr, std::uint64_t value, std::uint8_t strb = 0xFF) {
        for (unsigned i = 0; i < kBeatBytes; ++i)
            if (strb & (1u << i)) write(addr + i, static_cast<std::uint8_t>(value >> (8 * i)));
    }

    /// Compares both stores over [addr, addr + len).
    bool equal_range(const SparseMemory& other, std::uint64_t addr, std::uint64_t len) const {
        for (std::uint64_t a = addr; a < addr + len; ++a)
            if (read(a) != other.read(a)) return false;
        return true;
    }

private:
    static constexpr unsigned kPageBits = 12;
    static constexpr std::uint64_t kPageMask = (1u << kPageBits) - 1;
    using Page = std::array<std::uint8_t, 1u << kPageBits>;

    Page& page(std::uint64_t addr) {
        auto& p = pages_[addr >> kPageBits];
        if (!p) p = std::make_unique<Page>(Page{});
        return *p;
    }

    std::unordered_map<std::uint64_t, std::unique_ptr<Page>> pages_;
};

enum class DmaDirection { read, write };

class DescriptorInvalid : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A DMA job: `repeat` back-to-back transfers of `length_bytes` each.
/// Writes copy local -> remote, reads copy remote -> local. Each repeat
/// advances both addresses by their stride.
struct DmaDescriptor {
    DmaDirection direction = DmaDirection::write;
    std::uint32_t base_addr = 0;
    std::uint32_t length_bytes = 8;
    std::uint32_t burst_bytes = 8;
    std::uint32_t repeat = 1;
    std::uint32_t local_addr = 0;
    std::uint32_t remote_stride = 0;
    std::uint32_t local_stride = 0;
};

inline void validate(const DmaDescriptor& d) {
    if (d.burst_bytes == 0 || d.burst_bytes % kBeatBytes != 0)
        throw DescriptorInvalid("burst_bytes must be a positive multiple of 8");
    if (d.burst_bytes > kMaxBurstBytes) throw DescriptorInvalid("burst_bytes exceeds the 2048 B AXI4 burst limit");
    if (d.length_bytes == 0 || d.length_bytes % kBeatBytes != 0)
        throw DescriptorInvalid("length_bytes must be a positive multiple of 8");
    if (d.base_addr % kBeatBytes != 0 || d.local_addr % kBeatBytes != 0)
        throw DescriptorInvalid("addresses must be 8 B aligned");
    if (d.repeat == 0) throw DescriptorInvalid("repeat must be at least 1");
}

struct Burst {
    std::uint32_t addr = 0;
    std::uint32_t local_addr = 0;
    unsigned beats = 0;
};

/// Splits one transfer into bursts. The last burst is shortened, never padded.
inline std::vector<Burst> split_bursts(const DmaDescriptor& d, std::uint32_t repeat_index = 0) {
    validate(d);
    std::vector<Burst> out;
    const std::uint32_t remote = d.base_addr + repeat_index * d.remote_stride;
    const std::uint32_t local = d.local_addr + repeat_index * d.local_stride;
    for (std::uint32_t off = 0; off < d.length_bytes; off += d.burst_bytes) {
        const std::uint32_t bytes = std::min(d.burst_bytes, d.length_bytes - off);
        out.push_back({remote + off, local + off, bytes / kBeatBytes});
    }
    return out;
}

/// Request-side beat stream of one transfer, in issue order.
inline std::vector<Beat> dma_issue(const DmaDescriptor& d, const SparseMemory& local, std::uint8_t id = 0) {
    std::vector<Beat> out;
    for (const auto& b : split_bursts(d)) {
        const auto len = static_cast<std::uint8_t>(b.beats - 1);
        if (d.direction == DmaDirection::read) {
            out.push_back(Beat::ar(id, b.addr, len));
            continue;
        }
        out.push_back(Beat::aw(id, b.addr, len));
        for (unsigned i = 0; i < b.beats; ++i)
            out.push_back(Beat::w(local.read_word(b.local_addr + i * kBeatBytes), 0xFF, i + 1 == b.beats));
    }
    return out;
}

struct DmaTiming {
    /// Cycles from the AW handshake to the earliest first W handshake.
    unsigned aw_to_w = 2;
    /// Idle cycles between the completion of one transfer and the next.
    unsigned reload_cycles = 1;
    std::uint8_t id_base = 0;
    /// Bursts of one transfer rotate over this many ids. Each id carries at
    /// most one transaction at a time.
    unsigned ids = 1;
};

/// AXI manager executing a list of descriptors in order. Transfers are
/// serialized; bursts inside one transfer may overlap when `ids` > 1.
class DmaEngine final : public Component {
public:
    DmaEngine(AxiPort port, DmaTiming timing = {}) : port_(port), timing_(timing) {
        if (timing_.ids == 0 || timing_.ids > 16) throw std::invalid_argument("DMA id count must be in 1..16");
    }

    SparseMemory& local() { return local_; }
    const SparseMemory& local() const { return local_; }

    /// Timing may only change between jobs.
    void set_timing(const DmaTiming& t) {
        if (!idle()) throw std::logic_error("DMA timing changed while busy");
        if (t.ids == 0 || t.ids > 16) throw std::invalid_argument("DMA id count must be in 1..16");
        timing_ = t;
    }

    void enqueue(const DmaDescriptor& d) {
        validate(d);
        program_.push_back(d);
    }

    bool idle() const { return !active_ && next_desc_ >= program_.size(); }
    std::uint64_t completed_transfers() const { return completed_; }
    std::optional<Cycle> first_issue_cycle() const { return first_issue_; }
    std::optional<Cycle> last_completion_cycle() const { return last_completion_; }

    void evaluate(Cycle now) override {
        port_.b->set_ready(true);
        port_.r->set_ready(true);
        if (!active_) {
            if (next_desc_ >= program_.size() || now < resume_at_) return;
            start_transfer();
        }
        const bool write = program_[next_desc_].direction == DmaDirection::write;
        if (next_addr_ < bursts_.size()) {
            const auto id = id_of(next_addr_);
            if (!busy_.test(id)) {
                const auto& b = bursts_[next_addr_];
                const auto len = static_cast<std::uint8_t>(b.beats - 1);
                if (write)
                    port_.aw->drive(Beat::aw(id, b.addr, len));
                else
                    port_.ar->drive(Beat::ar(id, b.addr, len));
            }
        }
        if (write && next_w_ < next_addr_ && now >= w_allowed_[next_w_]) {
            const auto& b = bursts_[next_w_];
            port_.w->drive(Beat::w(local_.read_word(b.local_addr + w_beat_ * kBeatBytes), 0xFF,
                                   w_beat_ + 1 == b.beats));
        }
    }

    void commit(Cycle now) override {
        if (!active_) return;
        if (port_.aw->fired() || port_.ar->fired()) {
            if (!first_issue_) first_issue_ = now;
            busy_.set(id_of(next_addr_));
            w_allowed_.push_back(now + timing_.aw_to_w);
            ++next_addr_;
        }
        if (port_.w->fired()) {
            if (++w_beat_ == bursts_[next_w_].beats) {
                w_beat_ = 0;
                ++next_w_;
            }
        }
        if (port_.b->fired()) retire(port_.b->payload().id);
        if (port_.r->fired()) {
            const auto& beat = port_.r->payload();
            const auto& q = pending_by_id_[beat.id];
            if (q.empty()) throw HandshakeViolation("R beat for an id with nothing outstanding");
            const auto& b = bursts_[q.front()];
            local_.write_word(b.local_addr + r_beat_[beat.id] * kBeatBytes, beat.data);
            ++r_beat_[beat.id];
            if (beat.last) {
                if (r_beat_[beat.id] != b.beats) throw HandshakeViolation("R burst length mismatch");
                r_beat_[beat.id] = 0;
                retire(beat.id);
            }
        }
        if (retired_ == bursts_.size()) finish(now);
    }

private:
    std::uint8_t id_of(std::size_t burst) const {
        return static_cast<std::uint8_t>((timing_.id_base + burst % timing_.ids) & 0xF);
    }

    void start_transfer() {
        const auto& d = program_[next_desc_];
        bursts_ = split_bursts(d, repeat_);
        next_addr_ = next_w_ = 0;
        w_beat_ = 0;
        retired_ = 0;
        w_allowed_.clear();
        r_beat_.fill(0);
        for (std::size_t i = 0; i < bursts_.size(); ++i) pending_by_id_[id_of(i)].push_back(i);
        active_ = true;
    }

    void retire(std::uint8_t id) {
        if (!busy_.test(id)) throw HandshakeViolation("response for an id with nothing outstanding");
        busy_.reset(id);
        ++retired_;
        auto& q = pending_by_id_[id];
        q.pop_front();
    }

    void finish(Cycle now) {
        active_ = false;
        ++completed_;
        last_completion_ = now;
        resume_at_ = now + 1 + timing_.reload_cycles;
        if (++repeat_ == program_[next_desc_].repeat) {
            repeat_ = 0;
            ++next_desc_;
        }
    }

    AxiPort port_;
    DmaTiming timing_;
    SparseMemory local_;
    std::vector<DmaDescriptor> program_;
    std::size_t next_desc_ = 0;
    std::uint32_t repeat_ = 0;
    bool active_ = false;
    Cycle resume_at_ = 0;

    std::vector<Burst> bursts_;
    std::size_t next_addr_ = 0;
    std::size_t next_w_ = 0;
    unsigned w_beat_ = 0;
    std::size_t retired_ = 0;
    std::vector<Cycle> w_allowed_;
    std::bitset<16> busy_;
    std::array<std::deque<std::size_t>, 16> pending_by_id_{};
    std::array<unsigned, 16> r_beat_{};

    std::uint64_t completed_ = 0;
    std::optional<Cycle> first_issue_;
    std::optional<Cycle> last_completion_;
};

/// Subordinate with a fixed response latency.
///
/// The B response of a write, and the first R beat of a read, handshake
/// max(1, latency) cycles after the request completes (last W, or AR).
/// A latency of zero therefore answers on the next cycle, the earliest a
/// registered response can appear. R beats then stream one per cycle.
class MemoryModel final : public Component {
public:
    MemoryModel(AxiPort port, unsigned latency_cycles) : port_(port), latency_(latency_cycles) {}

    SparseMemory& storage() { return storage_; }
    const SparseMemory& storage() const { return storage_; }
    unsigned latency_cycles() const { return latency_; }

    void evaluate(Cycle now) override {
        port_.aw->set_ready(true);
        port_.ar->set_ready(true);
        port_.w->set_ready(!writes_.empty());
        if (!responses_.empty() && responses_.front().due <= now) port_.b->drive(Beat::b(responses_.front().id));
        if (!reads_.empty() && reads_.front().next_beat_at <= now) {
            const auto& rd = reads_.front();
            port_.r->drive(Beat::r(rd.id, storage_.read_word(rd.addr + rd.sent * kBeatBytes), rd.sent + 1 == rd.beats));
        }
    }

    void commit(Cycle now) override {
        const Cycle delay = std::max<Cycle>(1, latency_);
        if (port_.aw->fired()) {
            const auto& aw = port_.aw->payload();
            writes_.push_back({aw.id, aw.addr, aw.len + 1u, 0});
        }
        if (port_.w->fired()) {
            auto& wr = writes_.front();
            const auto& w = port_.w->payload();
            storage_.write_word(wr.addr + wr.received * kBeatBytes, w.data, w.strb);
            ++wr.received;
            if (w.last != (wr.received == wr.beats)) throw HandshakeViolation("W last does not match burst length");
            if (w.last) {
                responses_.push_back({wr.id, now + delay});
                writes_.pop_front();
            }
        }
        if (port_.b->fired()) responses_.pop_front();
        if (port_.ar->fired()) {
            const auto& ar = port_.ar->payload();
            reads_.push_back({ar.id, ar.addr, ar.len + 1u, 0, now + delay});
        }
        if (port_.r->fired()) {
            auto& rd = reads_.front();
            if (++rd.sent == rd.beats) {
                reads_.pop_front();
                if (!reads_.empty()) reads_.front().next_beat_at = std::max(reads_.front().next_beat_at, now + 1);
            } else {
                rd.next_beat_at = now + 1;
            }
        }
    }

private:
    struct PendingWrite {
        std::uint8_t id;
        std::uint32_t addr;
        unsigned beats;
        unsigned received;
    };
    struct PendingResponse {
        std::uint8_t id;
        Cycle due;
    };
    struct PendingRead {
        std::uint8_t id;
        std::uint32_t addr;
        unsigned beats;
        unsigned sent;
        Cycle next_beat_at;
    };

    AxiPort port_;
    unsigned latency_;
    SparseMemory storage_;
    std::deque<PendingWrite> writes_;
    std::deque<PendingResponse> responses_;
    std::deque<PendingRead> reads_;
};

struct TraceEvent {
    Cycle cycle = 0;
    Beat beat;

    bool operator==(const TraceEvent&) const = default;
};

using Trace = std::vector<TraceEvent>;

/// Records every handshake on one AXI interface, AW/W/B/AR/R order within a cycle.
inline void attach_trace(Simulation& sim, const AxiPort& port, Trace& out) {
    sim.add_observer([port, &out](Cycle now) {
        for (auto k : kAllBeatKinds) {
            const auto& ch = port.channel(k);
            if (ch.fired()) out.push_back({now, ch.payload()});
        }
    });
}

enum class OrderingRule {
    single_outstanding_per_id,  // (a)
    w_follows_aw,               // (b)
    b_follows_last_w,           // (c)
    r_count_matches_len,        // (d)
};

struct OrderingViolation {
    OrderingRule rule;
    Cycle cycle;
    std::string detail;
};

/// Checks one interface trace against the subset of AXI4 ordering this model relies on.
inline std::optional<OrderingViolation> check_ordering(const Trace& trace) {
    struct WriteTxn {
        unsigned beats;
        unsigned w_seen;
    };
    struct ReadTxn {
        unsigned beats;
        unsigned r_seen;
    };
    std::array<std::optional<WriteTxn>, 16> writes{};
    std::array<std::optional<ReadTxn>, 16> reads{};
    std::deque<std::uint8_t> w_order;  // ids of write bursts still owed W beats, in AW order

    for (const auto& [cycle, beat] : trace) {
        auto fail = [&, cycle = cycle](OrderingRule r, std::string why) {
            return OrderingViolation{r, cycle, std::move(why)};
        };
        switch (beat.kind) {
            case BeatKind::AW:
                if (writes[beat.id])
                    return fail(OrderingRule::single_outstanding_per_id,
                                "second AW for id " + std::to_string(beat.id) + " before its B");
                writes[beat.id] = WriteTxn{beat.len + 1u, 0};
                w_order.push_back(beat.id);
                break;
            case BeatKind::W: {
                if (w_order.empty()) return fail(OrderingRule::w_follows_aw, "W beat without a preceding AW");
                auto& txn = *writes[w_order.front()];
                ++txn.w_seen;
                if (beat.last != (txn.w_seen == txn.beats))
                    return fail(OrderingRule::w_follows_aw, "W last flag does not close the burst");
                if (beat.last) w_order.pop_front();
                break;
            }
            case BeatKind::B: {
                auto& txn = writes[beat.id];
                if (!txn) return fail(OrderingRule::b_follows_last_w, "B for id with no open write");
                if (txn->w_seen != txn->beats) return fail(OrderingRule::b_follows_last_w, "B before the last W");
                txn.reset();
                break;
            }
            case BeatKind::AR:
                if (reads[beat.id])
                    return fail(OrderingRule::single_outstanding_per_id,
                                "second AR for id " + std::to_string(beat.id) + " before its last R");
                reads[beat.id] = ReadTxn{beat.len + 1u, 0};
                break;
            case BeatKind::R: {
                auto& txn = reads[beat.id];
                if (!txn) return fail(OrderingRule::r_count_matches_len, "R for id with no open read");
                ++txn->r_seen;
                if (beat.last != (txn->r_seen == txn->beats))
                    return fail(OrderingRule::r_count_matches_len, "R count does not match len+1");
                if (beat.last) txn.reset();
                break;
            }
        }
    }
    return std::nullopt;
}

}  // namespace d2dsim
