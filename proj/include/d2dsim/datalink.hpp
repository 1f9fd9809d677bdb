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

// Data link layer: packets are zero-padded to a whole number of chunks of
// theta bits, and each chunk is spread over the CH channels. Chunk i covers
// packet bits [i*theta, (i+1)*theta); channel c of that chunk carries the
// sub-range [c*fw, (c+1)*fw) with fw = theta / CH. A single-channel link
// therefore degenerates to plain chunking.

#include <cstddef>
#include <deque>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "d2dsim/bits.hpp"
#include "d2dsim/link_config.hpp"
#include "d2dsim/network.hpp"
#include "d2dsim/sim_core.hpp"

namespace d2dsim {

class IncompletePacket : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FifoOverflow : public SimError {
public:
    using SimError::SimError;
};

/// Bits one flit carries on one channel per cycle.
inline unsigned flit_bits(const D2DConfig& cfg) { return cfg.ddr ? 2 * cfg.ln : cfg.ln; }

/// Bits the link moves per cycle across all channels.
inline unsigned chunk_bits(const D2DConfig& cfg) { return cfg.ch * flit_bits(cfg); }

inline unsigned chunks_per_packet(unsigned packet_bits, unsigned chunk_width) {
    if (chunk_width == 0) throw std::invalid_argument("chunk width must be positive");
    return (packet_bits + chunk_width - 1) / chunk_width;
}

inline unsigned chunks_per_packet(const D2DConfig& cfg) {
    return chunks_per_packet(packet_width_bits(cfg), chunk_bits(cfg));
}

/// Receive FIFO depth in chunk rows: room for CRD whole packets.
inline std::size_t fifo_depth(const D2DConfig& cfg) {
    return static_cast<std::size_t>(cfg.crd) * chunks_per_packet(cfg);
}

/// The CH flits that cross the link in one cycle, indexed by channel.
using FlitGroup = std::vector<BitVector>;

inline std::vector<FlitGroup> split_and_route(const BitVector& packet, const D2DConfig& cfg) {
    const unsigned fw = flit_bits(cfg);
    const unsigned theta = chunk_bits(cfg);
    const unsigned chunks = chunks_per_packet(static_cast<unsigned>(packet.width()), theta);
    BitVector padded(static_cast<std::size_t>(chunks) * theta);
    padded.insert(0, packet);
    std::vector<FlitGroup> out(chunks);
    for (unsigned i = 0; i < chunks; ++i) {
        out[i].reserve(cfg.ch);
        for (unsigned c = 0; c < cfg.ch; ++c) out[i].push_back(padded.slice(std::size_t{i} * theta + c * fw, fw));
    }
    return out;
}

/// Inverse of split_and_route. Throws IncompletePacket if chunks are missing.
inline BitVector merge(std::span<const FlitGroup> groups, unsigned packet_bits, const D2DConfig& cfg) {
    const unsigned fw = flit_bits(cfg);
    const unsigned theta = chunk_bits(cfg);
    const unsigned chunks = chunks_per_packet(packet_bits, theta);
    if (groups.size() < chunks)
        throw IncompletePacket("packet needs " + std::to_string(chunks) + " chunks, got " +
                               std::to_string(groups.size()));
    BitVector padded(static_cast<std::size_t>(chunks) * theta);
    for (unsigned i = 0; i < chunks; ++i) {
        if (groups[i].size() != cfg.ch) throw IncompletePacket("flit group with missing channels");
        for (unsigned c = 0; c < cfg.ch; ++c) padded.insert(std::size_t{i} * theta + c * fw, groups[i][c]);
    }
    return padded.slice(0, packet_bits);
}

/// Receive buffer sized in chunk rows. Whole packets go in and out.
class FlowFifo {
public:
    FlowFifo(std::size_t depth_rows, unsigned rows_per_packet) : depth_(depth_rows), rows_per_packet_(rows_per_packet) {}

    void push(AxisPacket p) {
        if (rows_ + rows_per_packet_ > depth_)
            throw FifoOverflow("receive FIFO overflow: " + std::to_string(rows_) + " of " + std::to_string(depth_) +
                               " rows in use");
        rows_ += rows_per_packet_;
        q_.push_back(std::move(p));
    }

    AxisPacket pop() {
        if (q_.empty()) throw std::logic_error("pop from empty FIFO");
        AxisPacket p = std::move(q_.front());
        q_.pop_front();
        rows_ -= rows_per_packet_;
        return p;
    }

    const AxisPacket& front() const { return q_.front(); }
    bool empty() const noexcept { return q_.empty(); }
    std::size_t packets() const noexcept { return q_.size(); }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t depth() const noexcept { return depth_; }

private:
    std::size_t depth_;
    unsigned rows_per_packet_;
    std::size_t rows_ = 0;
    std::deque<AxisPacket> q_;
};

}  // namespace d2dsim
