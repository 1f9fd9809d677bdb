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

// PHY timing model and the closed-form link formulas.
//
// A flit group handed over by the data link at cycle s leaves the clock gate
// at s + cg. With DDR every channel then drives LN bits on the rising and LN
// bits on the falling edge; the receiver sees them T_delta cycles later and
// hands the coalesced 2*LN-bit flit to the data link after the CDC stage.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "d2dsim/datalink.hpp"
#include "d2dsim/link_config.hpp"
#include "d2dsim/sim_core.hpp"

namespace d2dsim {

/// theta: bits per cycle over all channels.
inline unsigned theoretical_bandwidth_bits_per_cycle(const D2DConfig& cfg) { return chunk_bits(cfg); }

/// Duplex throughput 2 * alpha * f * theta for a given per-cycle width.
inline double duplex_throughput_bits_per_s(double alpha, double f_hz, unsigned theta_bits) {
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("utilization must be within [0, 1]");
    if (!(f_hz > 0.0)) throw std::invalid_argument("frequency must be positive");
    return 2.0 * alpha * f_hz * static_cast<double>(theta_bits);
}

inline double duplex_throughput_bits_per_s(const D2DConfig& cfg, double alpha, double f_hz) {
    return duplex_throughput_bits_per_s(alpha, f_hz, theoretical_bandwidth_bits_per_cycle(cfg));
}

/// Data lanes plus one forwarded clock per channel, in both directions.
inline unsigned wire_count(unsigned ch, unsigned ln) { return ch * (2 * (ln + 1)); }
inline unsigned wire_count(const D2DConfig& cfg) { return wire_count(cfg.ch, cfg.ln); }

/// Closed-form latency of one isolated beat from the AXI handshake on the
/// sending die to the AXI handshake on the receiving die.
inline Cycle end_to_end_beat_latency(const D2DConfig& cfg) {
    constexpr Cycle axi_to_axis = 1;
    constexpr Cycle deserialize = 1;
    return axi_to_axis + cfg.cg_latency_cycles + cfg.t_delta_cycles + cfg.cdc_latency_cycles +
           (chunks_per_packet(cfg) - 1) + deserialize;
}

/// Lane samples of one flit group. samples[c][k] is the k-th LN-bit sample
/// of channel c; DDR produces two per cycle, SDR one.
struct LaneStream {
    Cycle launch_cycle = 0;  // first cycle the forwarded clock toggles
    unsigned samples_per_cycle = 2;
    std::vector<std::vector<std::uint64_t>> samples;

    /// Half-cycle index of sample k, counting from cycle 0.
    Cycle half_cycle_of(unsigned k) const {
        return samples_per_cycle == 2 ? 2 * launch_cycle + k : 2 * (launch_cycle + k);
    }
    bool operator==(const LaneStream&) const = default;
};

inline LaneStream tx_transmit(const FlitGroup& group, Cycle handshake_cycle, const D2DConfig& cfg) {
    if (group.size() != cfg.ch) throw std::invalid_argument("flit group does not match the channel count");
    LaneStream s;
    s.launch_cycle = handshake_cycle + cfg.cg_latency_cycles;
    s.samples_per_cycle = cfg.ddr ? 2 : 1;
    s.samples.resize(cfg.ch);
    for (unsigned c = 0; c < cfg.ch; ++c) {
        const auto& flit = group[c];
        if (flit.width() != flit_bits(cfg)) throw std::invalid_argument("flit width does not match the lane count");
        for (unsigned k = 0; k < s.samples_per_cycle; ++k) s.samples[c].push_back(flit.get(k * cfg.ln, cfg.ln));
    }
    return s;
}

struct RxFlits {
    FlitGroup flits;
    Cycle ready_cycle = 0;  // cycle the data link may consume the group
};

inline RxFlits rx_synchronize(const LaneStream& s, const D2DConfig& cfg) {
    RxFlits out;
    out.ready_cycle = s.launch_cycle + cfg.t_delta_cycles + cfg.cdc_latency_cycles;
    out.flits.reserve(s.samples.size());
    for (const auto& lane : s.samples) {
        BitVector flit(static_cast<std::size_t>(lane.size()) * cfg.ln);
        for (unsigned k = 0; k < lane.size(); ++k) flit.set(std::size_t{k} * cfg.ln, cfg.ln, lane[k]);
        out.flits.push_back(std::move(flit));
    }
    return out;
}

}  // namespace d2dsim
