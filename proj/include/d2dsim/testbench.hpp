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

// DMA -> memory testbenches. The native variant connects the DMA straight to
// the memory; the D2D variant puts a pair of link instances in between, the
// DMA on the near die and the memory on the far die.

#include <memory>
#include <stdexcept>
#include <string>

#include "d2dsim/axi.hpp"
#include "d2dsim/link.hpp"
#include "d2dsim/sim_core.hpp"

namespace d2dsim {

enum class InterfaceKind { axi4, d2d };

inline const char* to_string(InterfaceKind k) { return k == InterfaceKind::axi4 ? "axi4" : "d2d"; }

struct TestbenchConfig {
    InterfaceKind iface = InterfaceKind::d2d;
    D2DConfig d2d;
    unsigned t_mem_cycles = 1;
    DmaTiming dma;
    bool check_conservation = true;
    bool record_phy = false;
};

/// Width of the DMA data path, the reference for utilization.
inline constexpr unsigned kDmaDataWidth = 64;

class Testbench {
public:
    explicit Testbench(const TestbenchConfig& cfg) : cfg_(cfg), nf_(cfg.record_phy), fn_(cfg.record_phy) {
        if (cfg.iface == InterfaceKind::d2d) validate(cfg.d2d);
        dma_port_ = make_axi_port(sim_, "dma");
        if (cfg.iface == InterfaceKind::axi4) {
            mem_port_ = dma_port_;
        } else {
            mem_port_ = make_axi_port(sim_, "mem");
            const AxiPort near_m = make_axi_port(sim_, "near.m");
            const AxiPort far_s = make_axi_port(sim_, "far.s");
            near_ = &sim_.add<D2DLink>(cfg.d2d, dma_port_, near_m, nf_, fn_);
            far_ = &sim_.add<D2DLink>(cfg.d2d, far_s, mem_port_, fn_, nf_);
            if (cfg.check_conservation) attach_conservation_check(sim_, *near_, *far_);
        }
        dma_ = &sim_.add<DmaEngine>(dma_port_, cfg.dma);
        mem_ = &sim_.add<MemoryModel>(mem_port_, cfg.t_mem_cycles);
        const auto data_bits = [](const Beat& b) { return b.data_bits(); };
        sim_.probe<Beat>("dma.w", *dma_port_.w, data_bits);
        sim_.probe<Beat>("dma.r", *dma_port_.r, data_bits);
    }

    Testbench(const Testbench&) = delete;
    Testbench& operator=(const Testbench&) = delete;

    const TestbenchConfig& config() const noexcept { return cfg_; }
    Simulation& sim() noexcept { return sim_; }
    DmaEngine& dma() noexcept { return *dma_; }
    MemoryModel& memory() noexcept { return *mem_; }
    D2DLink* near_link() noexcept { return near_; }
    D2DLink* far_link() noexcept { return far_; }
    PhyWire& near_to_far() noexcept { return nf_; }
    PhyWire& far_to_near() noexcept { return fn_; }
    const AxiPort& dma_port() const noexcept { return dma_port_; }
    const AxiPort& memory_port() const noexcept { return mem_port_; }

    /// Runs until the DMA has drained its program.
    Snapshot run_until_idle(Cycle cap = kDefaultDeadlockCap) {
        return sim_.run_until([this] { return dma_->idle(); }, sim_.now() + cap);
    }

private:
    TestbenchConfig cfg_;
    Simulation sim_;
    PhyWire nf_;
    PhyWire fn_;
    AxiPort dma_port_;
    AxiPort mem_port_;
    DmaEngine* dma_ = nullptr;
    MemoryModel* mem_ = nullptr;
    D2DLink* near_ = nullptr;
    D2DLink* far_ = nullptr;
};

}  // namespace d2dsim
