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

// Experiment harness: throughput sweep over burst size and credits, the DVFS
// control case study, and the closed-form report.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "d2dsim/phy.hpp"
#include "d2dsim/rt_model.hpp"
#include "d2dsim/testbench.hpp"

namespace d2dsim {

enum class Workload { throughput_sweep, dvfs_case_study };

inline const char* to_string(Workload w) {
    return w == Workload::throughput_sweep ? "throughput_sweep" : "dvfs_case_study";
}

inline const char* to_string(DmaDirection d) { return d == DmaDirection::read ? "read" : "write"; }

struct SweepSpec {
    std::vector<std::uint32_t> burst_bytes{8, 16, 32, 64, 128, 256, 512, 1024, 2048};
    std::vector<std::uint32_t> crd{8, 16, 32, 64, 128};
    std::vector<DmaDirection> directions{DmaDirection::read, DmaDirection::write};
    unsigned repeats = 1;  // back-to-back measurement windows averaged per point
    Cycle warmup_cycles = 5'000;
    Cycle window_cycles = 50'000;
    bool include_baseline = true;

    bool operator==(const SweepSpec&) const = default;
};

/// Two-task DVFS control loop. Defaults assume a 500 MHz controller:
/// 250 us and 3 ms periods.
struct CaseStudySpec {
    std::vector<unsigned> n_cores{9, 36};
    std::vector<Cycle> compute_budget{210'000, 1'185'000};  // aligned with n_cores
    unsigned sensor_regs = 500;
    unsigned sensor_reg_bytes = 8;
    std::uint32_t sensor_base = 0x1000'0000;
    std::uint32_t actuator_base = 0x2000'0000;
    unsigned sensor_ids = 4;  // AXI ids the sensor readout rotates over
    Cycle t_short = 125'000;
    Cycle t_long = 1'500'000;
    Cycle io_cycles = 500;  // off-chip IO of the voltage task
    std::vector<std::uint32_t> crd{8, 128};
    bool fastirq = true;
    DmaProgrammingConfig dma_prog;
    InterruptTimingConfig irq;
    MsgTimingConfig msg;

    bool operator==(const CaseStudySpec&) const = default;
};

struct ScenarioConfig {
    InterfaceKind iface = InterfaceKind::d2d;
    D2DConfig d2d;
    unsigned t_mem_cycles = 1;
    double clock_hz = 200e6;
    Workload workload = Workload::throughput_sweep;
    SweepSpec sweep;
    CaseStudySpec case_study;
    std::uint64_t seed = 1;

    bool operator==(const ScenarioConfig&) const = default;
};

inline void validate(const ScenarioConfig& c) {
    validate(c.d2d);
    if (!(c.clock_hz > 0.0)) throw ConfigError("clock_hz must be positive");
    const auto& s = c.sweep;
    if (s.burst_bytes.empty()) throw ConfigError("sweep.burst_bytes must not be empty");
    for (auto b : s.burst_bytes) {
        if (b > kMaxBurstBytes)
            throw ConfigError("sweep.burst_bytes: " + std::to_string(b) + " exceeds the 2048 B AXI4 burst limit");
        if (b == 0 || b % kBeatBytes != 0) throw ConfigError("sweep.burst_bytes must be positive multiples of 8");
    }
    for (auto k : s.crd)
        if (k < 1) throw ConfigError("sweep.crd entries must be >= 1");
    if (s.directions.empty()) throw ConfigError("sweep.directions must not be empty");
    if (s.repeats < 1) throw ConfigError("sweep.repeats must be >= 1");
    if (s.window_cycles < 1) throw ConfigError("sweep.window_cycles must be >= 1");
    const auto& cs = c.case_study;
    if (cs.n_cores.size() != cs.compute_budget.size())
        throw ConfigError("case_study.compute_budget must have one entry per case_study.n_cores entry");
    if (cs.n_cores.empty()) throw ConfigError("case_study.n_cores must not be empty");
    for (auto n : cs.n_cores)
        if (n == 0) throw ConfigError("case_study.n_cores entries must be positive");
    for (auto k : cs.crd)
        if (k < 1) throw ConfigError("case_study.crd entries must be >= 1");
    if (cs.sensor_regs == 0 || cs.sensor_reg_bytes == 0 || cs.sensor_reg_bytes % kBeatBytes != 0)
        throw ConfigError("case_study sensor map must be a positive number of 8 B multiples");
    if (cs.sensor_ids < 1 || cs.sensor_ids > 16) throw ConfigError("case_study.sensor_ids must be in 1..16");
    if (cs.t_short == 0 || cs.t_long == 0 || cs.t_long % cs.t_short != 0)
        throw ConfigError("case_study.t_long must be a positive multiple of case_study.t_short");
    try {
        validate(cs.irq);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("case_study.irq: ") + e.what());
    }
}

/// One output line. Unset fields are left empty in CSV and null in JSON.
struct ResultRow {
    std::string scenario;
    std::string interface;
    std::optional<unsigned> ch;
    std::optional<unsigned> ln;
    std::optional<std::uint32_t> crd;
    std::string direction;
    std::optional<std::uint32_t> burst_bytes;
    std::optional<double> alpha;
    std::optional<double> throughput_bps;
    std::optional<Cycle> latency_cycles;
    std::optional<Cycle> t_decode;
    std::optional<Cycle> t_comm;
    std::optional<Cycle> t_comp;
    std::optional<Cycle> t_ctrl;
    std::optional<double> slack_frac;

    bool failed() const { return scenario.rfind("FAILED:", 0) == 0; }
    bool operator==(const ResultRow&) const = default;
};

/// Runs `n` independent jobs on up to `workers` threads. Results land at
/// their own index, so the output order never depends on scheduling.
template <typename R>
std::vector<R> parallel_map(std::size_t n, unsigned workers, const std::function<R(std::size_t)>& job) {
    std::vector<R> out(n);
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = job(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        out[i] = job(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                    }
                }
            });
    }
    if (error) std::rethrow_exception(error);
    return out;
}

/// Fills `len` bytes at `addr` with seeded pseudo-random words.
inline void fill_random(SparseMemory& mem, std::uint64_t addr, std::uint64_t len, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::uint64_t off = 0; off < len; off += kBeatBytes) mem.write_word(addr + off, rng());
}

/// Cycles from the AW handshake at the DMA to the AW handshake at the memory
/// for one isolated single-beat write.
inline Cycle measure_beat_latency(TestbenchConfig cfg) {
    cfg.record_phy = false;
    Testbench tb(cfg);
    Trace near, far;
    attach_trace(tb.sim(), tb.dma_port(), near);
    attach_trace(tb.sim(), tb.memory_port(), far);
    DmaDescriptor d;
    d.length_bytes = d.burst_bytes = kBeatBytes;
    tb.dma().enqueue(d);
    tb.run_until_idle();
    auto first_aw = [](const Trace& t) {
        for (const auto& e : t)
            if (e.beat.kind == BeatKind::AW) return e.cycle;
        throw SimError("no AW handshake observed");
    };
    return first_aw(far) - first_aw(near);
}

struct SweepPoint {
    InterfaceKind iface;
    std::uint32_t crd;
    std::uint32_t burst;
    DmaDirection dir;
};

inline std::vector<SweepPoint> sweep_points(const ScenarioConfig& cfg) {
    std::vector<SweepPoint> pts;
    std::vector<InterfaceKind> ifaces;
    if (cfg.iface == InterfaceKind::axi4 || cfg.sweep.include_baseline) ifaces.push_back(InterfaceKind::axi4);
    if (cfg.iface == InterfaceKind::d2d) ifaces.push_back(InterfaceKind::d2d);
    for (auto iface : ifaces) {
        const std::vector<std::uint32_t> crds =
            iface == InterfaceKind::axi4 ? std::vector<std::uint32_t>{0} : cfg.sweep.crd;
        for (auto crd : crds)
            for (auto burst : cfg.sweep.burst_bytes)
                for (auto dir : cfg.sweep.directions) pts.push_back({iface, crd, burst, dir});
    }
    return pts;
}

inline std::string sweep_key(const SweepPoint& p) {
    std::string s = std::string("sweep/") + to_string(p.iface);
    if (p.iface == InterfaceKind::d2d) s += "/crd" + std::to_string(p.crd);
    return s + "/" + std::to_string(p.burst) + "B/" + to_string(p.dir);
}

inline ResultRow run_sweep_point(const ScenarioConfig& cfg, const SweepPoint& p) {
    ResultRow row;
    row.scenario = sweep_key(p);
    row.interface = to_string(p.iface);
    row.direction = to_string(p.dir);
    row.burst_bytes = p.burst;
    TestbenchConfig tc;
    tc.iface = p.iface;
    tc.d2d = cfg.d2d;
    tc.t_mem_cycles = cfg.t_mem_cycles;
    if (p.iface == InterfaceKind::d2d) {
        tc.d2d.crd = p.crd;
        tc.d2d.credit_threshold = std::min(tc.d2d.credit_threshold, p.crd);
        row.ch = tc.d2d.ch;
        row.ln = tc.d2d.ln;
        row.crd = p.crd;
    }
    try {
        row.latency_cycles = measure_beat_latency(tc);
        Testbench tb(tc);
        DmaDescriptor d;
        d.direction = p.dir;
        d.base_addr = 0x1000'0000;
        d.local_addr = 0x0;
        d.length_bytes = d.burst_bytes = p.burst;
        const Cycle total = cfg.sweep.warmup_cycles + cfg.sweep.repeats * cfg.sweep.window_cycles;
        d.repeat = static_cast<std::uint32_t>(std::min<Cycle>(total, 0xFFFF'FFFFu));
        fill_random(tb.dma().local(), d.local_addr, p.burst, cfg.seed);
        fill_random(tb.memory().storage(), d.base_addr, p.burst, cfg.seed + 1);
        tb.dma().enqueue(d);
        const std::string probe = p.dir == DmaDirection::write ? "dma.w" : "dma.r";
        tb.sim().run_until(cfg.sweep.warmup_cycles);
        double alpha_sum = 0.0;
        for (unsigned r = 0; r < cfg.sweep.repeats; ++r) {
            tb.sim().reset_probes();
            const auto snap = tb.sim().run_until(tb.sim().now() + cfg.sweep.window_cycles);
            alpha_sum += utilization(snap.at(probe), kDmaDataWidth);
        }
        const double alpha = alpha_sum / cfg.sweep.repeats;
        row.alpha = alpha;
        const unsigned theta =
            p.iface == InterfaceKind::d2d ? theoretical_bandwidth_bits_per_cycle(tc.d2d) : kDmaDataWidth;
        row.throughput_bps = duplex_throughput_bits_per_s(alpha, cfg.clock_hz, theta);
    } catch (const SimError&) {
        ResultRow failed;
        failed.scenario = "FAILED:" + row.scenario;
        failed.interface = row.interface;
        failed.direction = row.direction;
        return failed;
    }
    return row;
}

inline std::vector<ResultRow> run_throughput_sweep(const ScenarioConfig& cfg, unsigned workers = 1) {
    validate(cfg);
    const auto pts = sweep_points(cfg);
    return parallel_map<ResultRow>(pts.size(), workers, [&](std::size_t i) { return run_sweep_point(cfg, pts[i]); });
}

/// Interface variant of the case study. crd == 0 marks the AXI4 baseline.
struct CaseVariant {
    InterfaceKind iface = InterfaceKind::axi4;
    std::uint32_t crd = 0;

    std::string name() const {
        return iface == InterfaceKind::axi4 ? std::string("axi4") : "d2d_crd" + std::to_string(crd);
    }
};

/// Measured cycles of the communication phases of the control task.
struct CommTimes {
    Cycle sensor_read = 0;
    Cycle actuation = 0;
};

/// Runs one DMA job on a fresh testbench and returns the cycles from the
/// start until the final response is consumed.
inline Cycle measure_transfer(const TestbenchConfig& tc, const DmaDescriptor& d, std::uint64_t seed) {
    Testbench tb(tc);
    if (d.direction == DmaDirection::read)
        fill_random(tb.memory().storage(), d.base_addr, d.length_bytes, seed);
    else
        fill_random(tb.dma().local(), d.local_addr, d.length_bytes, seed);
    tb.dma().enqueue(d);
    tb.run_until_idle();
    return *tb.dma().last_completion_cycle() + 1;
}

inline TestbenchConfig case_testbench(const ScenarioConfig& cfg, const CaseVariant& v) {
    TestbenchConfig tc;
    tc.iface = v.iface;
    tc.d2d = cfg.d2d;
    tc.t_mem_cycles = cfg.t_mem_cycles;
    if (v.iface == InterfaceKind::d2d) {
        tc.d2d.crd = v.crd;
        tc.d2d.credit_threshold = std::min(tc.d2d.credit_threshold, v.crd);
    }
    return tc;
}

inline CommTimes measure_comm(const ScenarioConfig& cfg, const CaseVariant& v, unsigned n_cores) {
    const auto& cs = cfg.case_study;
    auto tc = case_testbench(cfg, v);
    CommTimes t;

    DmaDescriptor sensors;
    sensors.direction = DmaDirection::read;
    sensors.base_addr = cs.sensor_base;
    sensors.length_bytes = cs.sensor_regs * cs.sensor_reg_bytes;
    sensors.burst_bytes = std::min<std::uint32_t>(kMaxBurstBytes, sensors.length_bytes);
    tc.dma = DmaTiming{};
    tc.dma.ids = cs.sensor_ids;
    t.sensor_read = measure_transfer(tc, sensors, cfg.seed);

    // Actuation: one narrow 8 B store per core, posted back to back.
    DmaDescriptor act;
    act.direction = DmaDirection::write;
    act.base_addr = cs.actuator_base;
    act.length_bytes = n_cores * kBeatBytes;
    act.burst_bytes = kBeatBytes;
    tc.dma = DmaTiming{};
    tc.dma.aw_to_w = 1;
    tc.dma.ids = 16;
    t.actuation = measure_transfer(tc, act, cfg.seed + 1);
    return t;
}

/// Task set of the case study with communication phases already resolved.
inline std::vector<TaskSpec> case_study_tasks(const CaseStudySpec& cs, Cycle compute_budget, const CommTimes& comm) {
    TaskSpec voltage{"voltage", cs.t_short, {}};
    voltage.phases.push_back(
        {PhaseKind::dma_program, cs.dma_prog.t_single_prog, cs.dma_prog.mode == DmaProgMode::rt_midend, "io_dma_prog"});
    voltage.phases.push_back({PhaseKind::io, cs.io_cycles, false, "io"});

    TaskSpec control{"control", cs.t_long, {}};
    control.phases.push_back({PhaseKind::msg_decode, msg_decode_time(cs.irq, cs.msg, cs.fastirq), false, "mailbox"});
    control.phases.push_back({PhaseKind::dma_program, cs.dma_prog.t_single_prog, false, "sensor_dma_prog"});
    control.phases.push_back({PhaseKind::dma_transfer, comm.sensor_read, false, "sensor_read"});
    control.phases.push_back({PhaseKind::compute, compute_budget, false, "policy"});
    control.phases.push_back({PhaseKind::core_write, comm.actuation, false, "actuation"});
    return {voltage, control};
}

struct CaseStudyOutcome {
    std::string problem;
    CaseVariant variant;
    CommTimes comm;
    ScheduleResult schedule;
    TimeBreakdown control;
    double slack_frac = 0.0;
    bool deadline_met = true;
};

inline std::vector<CaseStudyOutcome> run_dvfs_case_study_detailed(const ScenarioConfig& cfg, unsigned workers = 1) {
    validate(cfg);
    const auto& cs = cfg.case_study;
    std::vector<CaseVariant> variants{{InterfaceKind::axi4, 0}};
    for (auto crd : cs.crd) variants.push_back({InterfaceKind::d2d, crd});
    struct Job {
        std::size_t problem;
        CaseVariant variant;
    };
    std::vector<Job> jobs;
    for (std::size_t p = 0; p < cs.n_cores.size(); ++p)
        for (const auto& v : variants) jobs.push_back({p, v});
    return parallel_map<CaseStudyOutcome>(jobs.size(), workers, [&](std::size_t i) {
        const auto& job = jobs[i];
        const unsigned n = cs.n_cores[job.problem];
        CaseStudyOutcome o;
        o.problem = "P" + std::to_string(n) + "pe";
        o.variant = job.variant;
        o.comm = measure_comm(cfg, job.variant, n);
        o.schedule = schedule_hyperperiod(case_study_tasks(cs, cs.compute_budget[job.problem], o.comm), cs.irq);
        o.control = o.schedule.per_task[1];
        o.slack_frac = static_cast<double>(slack(cs.t_long, o.control.t_ctrl())) / static_cast<double>(cs.t_long);
        o.deadline_met = o.schedule.misses.empty() && slack(cs.t_long, o.control.t_ctrl()) > 0;
        return o;
    });
}

inline ResultRow to_row(const ScenarioConfig& cfg, const CaseStudyOutcome& o) {
    ResultRow r;
    r.scenario = "case/" + o.problem + "/" + o.variant.name();
    if (!o.deadline_met) r.scenario += "/DEADLINE_MISS";
    r.interface = to_string(o.variant.iface);
    if (o.variant.iface == InterfaceKind::d2d) {
        r.ch = cfg.d2d.ch;
        r.ln = cfg.d2d.ln;
        r.crd = o.variant.crd;
    }
    r.t_decode = o.control.t_decode;
    r.t_comm = o.control.t_comm;
    r.t_comp = o.control.t_comp;
    r.t_ctrl = o.control.t_ctrl();
    r.slack_frac = o.slack_frac;
    return r;
}

inline std::vector<ResultRow> run_dvfs_case_study(const ScenarioConfig& cfg, unsigned workers = 1) {
    std::vector<ResultRow> rows;
    for (const auto& o : run_dvfs_case_study_detailed(cfg, workers)) rows.push_back(to_row(cfg, o));
    return rows;
}

struct AnalyticEntry {
    std::string quantity;
    double value = 0.0;
    std::string unit;
};

/// Every closed-form quantity of one configuration.
inline std::vector<AnalyticEntry> analytic_report(const ScenarioConfig& cfg) {
    const auto& d = cfg.d2d;
    const auto& cs = cfg.case_study;
    auto vanilla = cs.dma_prog;
    vanilla.mode = DmaProgMode::vanilla;
    auto rt = cs.dma_prog;
    rt.mode = DmaProgMode::rt_midend;
    auto num = [](auto v) { return static_cast<double>(v); };
    return {
        {"theta", num(theoretical_bandwidth_bits_per_cycle(d)), "bit/cycle"},
        {"throughput_peak", duplex_throughput_bits_per_s(d, 1.0, cfg.clock_hz), "bit/s"},
        {"wire_count", num(wire_count(d)), "wires"},
        {"packet_width", num(packet_width_bits(d)), "bit"},
        {"credit_field_width", num(credit_field_bits(d.crd)), "bit"},
        {"chunks_per_packet", num(chunks_per_packet(d)), "chunks"},
        {"fifo_depth", num(fifo_depth(d)), "rows"},
        {"beat_latency", num(end_to_end_beat_latency(d)), "cycles"},
        {"msg_decode_fast", num(msg_decode_time(cs.irq, cs.msg, true)), "cycles"},
        {"msg_decode_vanilla", num(msg_decode_time(cs.irq, cs.msg, false)), "cycles"},
        {"clic_to_isr_speedup", clic_to_isr_speedup(cs.irq), "fraction"},
        {"dma_prog_vanilla", num(dma_programming_overhead(vanilla, cs.irq, cs.t_long, cs.t_short)), "cycles"},
        {"dma_prog_rt_midend", num(dma_programming_overhead(rt, cs.irq, cs.t_long, cs.t_short)), "cycles"},
        {"dma_prog_speedup", dma_programming_speedup(cs.dma_prog, cs.irq, cs.t_long, cs.t_short), "fraction"},
    };
}

}  // namespace d2dsim
