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
#include <gtest/gtest.h>

#include <random>

#include "d2dsim/phy.hpp"

using namespace d2dsim;

namespace {

D2DConfig link(unsigned ch, unsigned ln, bool ddr = true) {
    D2DConfig c;
    c.ch = ch;
    c.ln = ln;
    c.ddr = ddr;
    return c;
}

}  // namespace

TEST(Theta, Examples) {
    EXPECT_EQ(theoretical_bandwidth_bits_per_cycle(link(8, 8)), 128u);
    EXPECT_EQ(theoretical_bandwidth_bits_per_cycle(link(7, 8)), 112u);
    EXPECT_EQ(theoretical_bandwidth_bits_per_cycle(link(1, 8, false)), 8u);
}

TEST(DuplexThroughput, Examples) {
    EXPECT_DOUBLE_EQ(duplex_throughput_bits_per_s(link(8, 8), 1.0, 200e6), 51.2e9);
    EXPECT_DOUBLE_EQ(duplex_throughput_bits_per_s(link(8, 8), 0.0, 200e6), 0.0);
    EXPECT_DOUBLE_EQ(duplex_throughput_bits_per_s(link(1, 8), 1.0, 200e6), 6.4e9);
}

TEST(DuplexThroughput, RejectsOutOfRangeInputs) {
    EXPECT_THROW(duplex_throughput_bits_per_s(link(8, 8), 1.5, 200e6), std::invalid_argument);
    EXPECT_THROW(duplex_throughput_bits_per_s(link(8, 8), -0.1, 200e6), std::invalid_argument);
    EXPECT_THROW(duplex_throughput_bits_per_s(link(8, 8), 0.5, 0.0), std::invalid_argument);
}

TEST(WireCount, Examples) {
    EXPECT_EQ(wire_count(link(1, 8)), 18u);
    EXPECT_EQ(wire_count(link(8, 8)), 144u);
    EXPECT_EQ(wire_count(1, 0), 2u);
}

TEST(TxTransmit, SixteenBitFlitIsTwoDdrSamplesAfterClockGate) {
    const auto cfg = link(1, 8);
    BitVector flit(16);
    flit.set(0, 16, 0xBEEF);
    const auto s = tx_transmit({flit}, 10, cfg);
    EXPECT_EQ(s.launch_cycle, 11u);
    ASSERT_EQ(s.samples.size(), 1u);
    ASSERT_EQ(s.samples[0].size(), 2u);
    EXPECT_EQ(s.samples[0][0], 0xEFu);
    EXPECT_EQ(s.samples[0][1], 0xBEu);
    EXPECT_EQ(s.half_cycle_of(0), 22u);
    EXPECT_EQ(s.half_cycle_of(1), 23u);
}

TEST(TxTransmit, BackToBackGroupsLeaveNoGaps) {
    const auto cfg = link(2, 8);
    const FlitGroup g{BitVector(16), BitVector(16)};
    const auto a = tx_transmit(g, 5, cfg);
    const auto b = tx_transmit(g, 6, cfg);
    EXPECT_EQ(b.half_cycle_of(0), a.half_cycle_of(1) + 1);
}

TEST(TxTransmit, RejectsMismatchedGroups) {
    const auto cfg = link(2, 8);
    EXPECT_THROW(tx_transmit({BitVector(16)}, 0, cfg), std::invalid_argument);
    EXPECT_THROW(tx_transmit({BitVector(16), BitVector(8)}, 0, cfg), std::invalid_argument);
}

TEST(RxSynchronize, WireDelayOnePlusCdcThree) {
    auto cfg = link(1, 8);
    cfg.t_delta_cycles = 1;
    cfg.cdc_latency_cycles = 3;
    const auto s = tx_transmit({BitVector(16)}, 0, cfg);
    EXPECT_EQ(rx_synchronize(s, cfg).ready_cycle, s.launch_cycle + 4);
}

TEST(RxSynchronize, NoWireDelayCdcTwo) {
    auto cfg = link(1, 8);
    cfg.t_delta_cycles = 0;
    cfg.cdc_latency_cycles = 2;
    const auto s = tx_transmit({BitVector(16)}, 0, cfg);
    EXPECT_EQ(rx_synchronize(s, cfg).ready_cycle, s.launch_cycle + 2);
}

TEST(RxSynchronize, FiftyCycleWire) {
    auto cfg = link(1, 8);
    cfg.t_delta_cycles = 50;
    const auto s = tx_transmit({BitVector(16)}, 0, cfg);
    EXPECT_EQ(rx_synchronize(s, cfg).ready_cycle, s.launch_cycle + 50 + cfg.cdc_latency_cycles);
}

TEST(RxSynchronize, CoalescesDdrSamplesIntoFlits) {
    std::mt19937_64 rng(8);
    for (unsigned ch = 1; ch <= 8; ++ch)
        for (unsigned ln : {4u, 8u, 16u, 32u})
            for (bool ddr : {true, false}) {
                const auto cfg = link(ch, ln, ddr);
                FlitGroup g;
                for (unsigned c = 0; c < ch; ++c) {
                    BitVector f(flit_bits(cfg));
                    for (std::size_t i = 0; i < f.width(); i += 32)
                        f.set(i, static_cast<unsigned>(std::min<std::size_t>(32, f.width() - i)), rng());
                    g.push_back(f);
                }
                EXPECT_EQ(rx_synchronize(tx_transmit(g, 3, cfg), cfg).flits, g);
            }
}

TEST(RxSynchronize, DdrMatchesSdrAtTwiceTheLanes) {
    std::mt19937_64 rng(12);
    for (unsigned ln : {1u, 4u, 8u, 16u}) {
        const auto ddr = link(4, ln, true);
        const auto sdr = link(4, 2 * ln, false);
        FlitGroup g;
        for (int c = 0; c < 4; ++c) {
            BitVector f(2 * ln);
            f.set(0, 2 * ln, rng());
            g.push_back(f);
        }
        const auto a = rx_synchronize(tx_transmit(g, 7, ddr), ddr);
        const auto b = rx_synchronize(tx_transmit(g, 7, sdr), sdr);
        EXPECT_EQ(a.flits, b.flits);
        EXPECT_EQ(a.ready_cycle, b.ready_cycle);
    }
}

TEST(BeatLatency, Examples) {
    auto wide = link(8, 8);
    wide.cdc_latency_cycles = 2;
    EXPECT_EQ(end_to_end_beat_latency(wide), 5u);

    auto narrow = link(1, 8);
    narrow.crd = 8;
    narrow.cdc_latency_cycles = 2;
    EXPECT_EQ(end_to_end_beat_latency(narrow), 10u);

    auto far = wide;
    far.t_delta_cycles = 50;
    EXPECT_EQ(end_to_end_beat_latency(far), end_to_end_beat_latency(wide) + 50);
}
