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

// One die's D2D link instance: AXI subordinate port towards local managers,
// AXI manager port towards local subordinates, and a PHY wire in each
// direction to the peer instance.

#include <array>
#include <bitset>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "d2dsim/axi.hpp"
#include "d2dsim/datalink.hpp"
#include "d2dsim/network.hpp"
#include "d2dsim/phy.hpp"
#include "d2dsim/sim_core.hpp"

namespace d2dsim {

/// Lane bundle in one direction. Groups arrive in launch order.
class PhyWire {
public:
    explicit PhyWire(bool record = false) : record_(record) {}

    void launch(LaneStream s) {
        ++clock_active_cycles_;
        if (record_) history_.push_back(s);
        in_flight_.push_back(std::move(s));
    }

    /// Removes every group whose receive side is ready by `now`.
    std::vector<RxFlits> receive(Cycle now, const D2DConfig& cfg) {
        std::vector<RxFlits> out;
        while (!in_flight_.empty()) {
            auto rx = rx_synchronize(in_flight_.front(), cfg);
            if (rx.ready_cycle > now) break;
            out.push_back(std::move(rx));
            in_flight_.pop_front();
        }
        return out;
    }

    std::size_t in_flight() const noexcept { return in_flight_.size(); }
    /// Cycles in which the forwarded clock toggled.
    std::uint64_t clock_active_cycles() const noexcept { return clock_active_cycles_; }
    const std::vector<LaneStream>& history() const noexcept { return history_; }

private:
    bool record_;
    std::deque<LaneStream> in_flight_;
    std::vector<LaneStream> history_;
    std::uint64_t clock_active_cycles_ = 0;
};

/// Counters needed to audit credit conservation from outside.
struct LinkCounters {
    std::uint64_t payload_sent = 0;
    std::uint64_t payload_received = 0;
    std::uint64_t credits_sent = 0;
    std::uint64_t credits_received = 0;
    std::uint64_t credit_only_sent = 0;
    std::uint64_t stall_no_credit = 0;
};

class D2DLink final : public Component {
public:
    static constexpr std::size_t kInputDepth = 2;

    /// `s_port` faces local managers, `m_port` local subordinates.
    D2DLink(const D2DConfig& cfg, AxiPort s_port, AxiPort m_port, PhyWire& tx, PhyWire& rx)
        : cfg_(cfg),
          layout_(PacketLayout::for_config(cfg)),
          chunks_(chunks_per_packet(cfg)),
          s_(s_port),
          m_(m_port),
          tx_(tx),
          rx_(rx),
          fifo_(fifo_depth(cfg), chunks_),
          threshold_(cfg.credit_threshold) {
        validate(cfg);
        credits_.local_credits = cfg.crd;
    }

    /// Test hook: stop returning credits to the peer.
    void set_credit_return_enabled(bool on) { credit_return_ = on; }

    const D2DConfig& config() const noexcept { return cfg_; }
    const CreditState& credits() const noexcept { return credits_; }
    const LinkCounters& counters() const noexcept { return counters_; }
    const FlowFifo& rx_fifo() const noexcept { return fifo_; }
    const ArbiterState& arbiter() const noexcept { return arb_; }
    bool quiescent() const {
        for (const auto& q : in_) if (!q.empty()) return false;
        return fifo_.empty() && reassembly_.empty() && rx_.in_flight() == 0;
    }

    void evaluate(Cycle now) override {
        for (auto k : {BeatKind::AW, BeatKind::W, BeatKind::AR}) s_.channel(k).set_ready(in(k).size() < kInputDepth);
        for (auto k : {BeatKind::B, BeatKind::R}) m_.channel(k).set_ready(in(k).size() < kInputDepth);

        if (!fifo_.empty()) {
            const Beat beat = *deserialize(fifo_.front()).beat;
            out_port(beat.kind).channel(beat.kind).drive(beat);
        }

        plan_.reset();
        if (now < tx_free_at_) return;
        RequestSet req;
        for (auto k : kAllBeatKinds) req[k] = eligible(k);
        if (req.any() && credits_.local_credits > 0) {
            plan_ = arbitrate(req, arb_);
            return;
        }
        if (req.any()) ++counters_.stall_no_credit;
        // Below the threshold, owed credits still go back once the receive
        // FIFO has drained; otherwise they could sit here indefinitely.
        const std::uint32_t threshold = fifo_.empty() ? 1 : threshold_;
        credit_only_ = credit_return_ && credits_.pending_return >= threshold;
    }

    void commit(Cycle now) override {
        // Output side first so freed slots and credits are visible next cycle.
        if (!fifo_.empty()) {
            const auto kind = *kind_of_tag(fifo_.front().header);
            if (out_port(kind).channel(kind).fired()) {
                fifo_.pop();
                ++credits_.pending_return;
            }
        }

        if (plan_) {
            const Beat beat = in(*plan_).front();
            in(*plan_).pop_front();
            CreditState cs = credits_;
            if (!credit_return_) cs.pending_return = 0;
            auto pkt = *serialize(beat, cs, layout_);
            if (credit_return_) credits_.pending_return = cs.pending_return;
            credits_.local_credits = cs.local_credits;
            ++counters_.payload_sent;
            counters_.credits_sent += pkt.credits;
            if (beat.kind == BeatKind::AW) ++open_aw_;
            if (beat.kind == BeatKind::W && beat.last) --open_aw_;
            send(pkt, now);
        } else if (credit_only_) {
            auto pkt = *issue_credit_only(credits_, 1, false, layout_);
            ++counters_.credit_only_sent;
            counters_.credits_sent += pkt.credits;
            send(pkt, now);
        }
        credit_only_ = false;

        for (auto k : {BeatKind::AW, BeatKind::W, BeatKind::AR})
            if (s_.channel(k).fired()) in(k).push_back(s_.channel(k).payload());
        for (auto k : {BeatKind::B, BeatKind::R})
            if (m_.channel(k).fired()) in(k).push_back(m_.channel(k).payload());

        for (auto& rx : rx_.receive(now, cfg_)) {
            reassembly_.push_back(std::move(rx.flits));
            if (reassembly_.size() < chunks_) continue;
            auto pkt = from_bits(merge(reassembly_, layout_.total_bits(), cfg_), layout_);
            reassembly_.clear();
            counters_.credits_received += pkt.credits;
            credits_.local_credits += pkt.credits;
            if (credits_.local_credits > cfg_.crd)
                throw SimError("credit counter exceeds CRD at cycle " + std::to_string(now));
            if (pkt.payload_valid()) {
                ++counters_.payload_received;
                fifo_.push(std::move(pkt));
            }
        }
    }

private:
    std::deque<Beat>& in(BeatKind k) { return in_[static_cast<std::size_t>(k)]; }
    const std::deque<Beat>& in(BeatKind k) const { return in_[static_cast<std::size_t>(k)]; }

    /// Requests travel AW/W/AR to the peer's m-port; responses go back out the s-port.
    const AxiPort& out_port(BeatKind k) const {
        return k == BeatKind::B || k == BeatKind::R ? s_ : m_;
    }

    bool eligible(BeatKind k) const {
        if (in(k).empty()) return false;
        // W data may not overtake the AW it belongs to.
        if (k == BeatKind::W) return open_aw_ > 0;
        return true;
    }

    void send(const AxisPacket& pkt, Cycle now) {
        const auto groups = split_and_route(to_bits(pkt, layout_), cfg_);
        for (std::size_t i = 0; i < groups.size(); ++i) tx_.launch(tx_transmit(groups[i], now + i, cfg_));
        tx_free_at_ = now + groups.size();
    }

    D2DConfig cfg_;
    PacketLayout layout_;
    unsigned chunks_;
    AxiPort s_;
    AxiPort m_;
    PhyWire& tx_;
    PhyWire& rx_;
    FlowFifo fifo_;
    std::uint32_t threshold_;
    bool credit_return_ = true;

    std::array<std::deque<Beat>, 5> in_{};
    ArbiterState arb_;
    CreditState credits_;
    unsigned open_aw_ = 0;
    Cycle tx_free_at_ = 0;
    std::optional<BeatKind> plan_;
    bool credit_only_ = false;
    std::vector<FlitGroup> reassembly_;
    LinkCounters counters_;
};

/// Per-direction audit: every credit is exactly one of held by the sender,
/// spent on a packet in flight, occupying a receive FIFO slot, owed by the
/// receiver, or on its way back.
inline std::int64_t credits_accounted(const D2DLink& sender, const D2DLink& receiver) {
    const auto& s = sender.counters();
    const auto& r = receiver.counters();
    return static_cast<std::int64_t>(sender.credits().local_credits) +
           static_cast<std::int64_t>(s.payload_sent - r.payload_received) +
           static_cast<std::int64_t>(receiver.rx_fifo().packets()) +
           static_cast<std::int64_t>(receiver.credits().pending_return) +
           static_cast<std::int64_t>(r.credits_sent - s.credits_received);
}

class CreditConservationError : public SimError {
public:
    using SimError::SimError;
};

/// Checks conservation in both directions after every cycle.
inline void attach_conservation_check(Simulation& sim, const D2DLink& a, const D2DLink& b) {
    sim.add_observer([&a, &b](Cycle now) {
        const auto crd = static_cast<std::int64_t>(a.config().crd);
        for (const auto& [s, r] : {std::pair{&a, &b}, std::pair{&b, &a}}) {
            const auto total = credits_accounted(*s, *r);
            if (total != crd)
                throw CreditConservationError("credit conservation broken at cycle " + std::to_string(now) + ": " +
                                              std::to_string(total) + " != " + std::to_string(crd));
        }
    });
}

}  // namespace d2dsim
