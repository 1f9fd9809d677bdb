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

// Timing model of the real-time controller: interrupt entry, mailbox message
// decode, DMA programming cost, and a fixed-priority preemptive scheduler
// that lays out one hyperperiod of periodic tasks.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "d2dsim/sim_core.hpp"

namespace d2dsim {

struct InterruptTimingConfig {
    Cycle clic_to_isr_fast = 13;
    Cycle clic_to_isr_vanilla = 46;
    Cycle raw_irq_latency_fast = 6;
    Cycle ctx_switch = 100;
    Cycle tail_chain = 8;
    Cycle rtos_tick_overhead = 107;

    bool operator==(const InterruptTimingConfig&) const = default;
};

inline void validate(const InterruptTimingConfig& c) {
    if (c.clic_to_isr_fast == 0 || c.clic_to_isr_vanilla == 0 || c.raw_irq_latency_fast == 0 || c.ctx_switch == 0 ||
        c.tail_chain == 0 || c.rtos_tick_overhead == 0)
        throw std::invalid_argument("interrupt timings must be positive");
    if (c.clic_to_isr_fast > c.clic_to_isr_vanilla) throw std::invalid_argument("fast interrupt entry slower than vanilla");
}

inline Cycle clic_to_isr(const InterruptTimingConfig& c, bool fastirq) {
    return fastirq ? c.clic_to_isr_fast : c.clic_to_isr_vanilla;
}

/// Relative reduction of interrupt entry time from the fast path.
inline double clic_to_isr_speedup(const InterruptTimingConfig& c) {
    return 1.0 - static_cast<double>(c.clic_to_isr_fast) / static_cast<double>(c.clic_to_isr_vanilla);
}

struct MsgTimingConfig {
    Cycle t_isr = 60;
    Cycle t_isr_to_dec = 148;

    bool operator==(const MsgTimingConfig&) const = default;
};

/// Interrupt entry, handler, and hand-off to the decoding task.
inline Cycle msg_decode_time(const InterruptTimingConfig& irq, const MsgTimingConfig& msg, bool fastirq) {
    return clic_to_isr(irq, fastirq) + msg.t_isr + msg.t_isr_to_dec;
}

/// `n` equal-priority interrupts arriving back to back. The fast path saves
/// context once and tail-chains the rest; the vanilla path pays full entry each time.
inline Cycle burst_interrupt_cost(unsigned n, const InterruptTimingConfig& irq, bool fastirq, Cycle isr_body = 0) {
    if (n == 0) throw std::invalid_argument("burst needs at least one interrupt");
    if (fastirq) return irq.clic_to_isr_fast + (n - 1) * irq.tail_chain + n * isr_body;
    return n * (irq.clic_to_isr_vanilla + isr_body);
}

enum class DmaProgMode { vanilla, rt_midend };

inline const char* to_string(DmaProgMode m) { return m == DmaProgMode::vanilla ? "vanilla" : "rt_midend"; }

struct DmaProgrammingConfig {
    Cycle t_single_prog = 100;
    DmaProgMode mode = DmaProgMode::rt_midend;

    bool operator==(const DmaProgrammingConfig&) const = default;
};

class PeriodMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// DMA programming cost per hyperperiod for the periodic IO transfer.
/// Vanilla reprograms on every short period and forces a context switch each
/// time; the RT mid-end is programmed once and re-triggers on its own.
inline Cycle dma_programming_overhead(const DmaProgrammingConfig& cfg, const InterruptTimingConfig& irq, Cycle t_long,
                                      Cycle t_short) {
    if (cfg.t_single_prog == 0) throw std::invalid_argument("t_single_prog must be positive");
    if (t_short == 0 || t_long % t_short != 0)
        throw PeriodMismatch("T_long (" + std::to_string(t_long) + ") is not a multiple of T_short (" +
                             std::to_string(t_short) + ")");
    if (cfg.mode == DmaProgMode::rt_midend) return cfg.t_single_prog;
    return (t_long / t_short) * (cfg.t_single_prog + irq.ctx_switch);
}

inline double dma_programming_speedup(const DmaProgrammingConfig& cfg, const InterruptTimingConfig& irq, Cycle t_long,
                                      Cycle t_short) {
    auto v = cfg;
    v.mode = DmaProgMode::vanilla;
    auto r = cfg;
    r.mode = DmaProgMode::rt_midend;
    return 1.0 - static_cast<double>(dma_programming_overhead(r, irq, t_long, t_short)) /
                     static_cast<double>(dma_programming_overhead(v, irq, t_long, t_short));
}

/// T_long - T_ctrl; the deadline holds iff the result is positive.
inline std::int64_t slack(Cycle t_long, Cycle t_ctrl) {
    return static_cast<std::int64_t>(t_long) - static_cast<std::int64_t>(t_ctrl);
}

enum class PhaseKind { compute, msg_decode, dma_program, dma_transfer, core_write, io };

inline const char* to_string(PhaseKind k) {
    switch (k) {
        case PhaseKind::compute: return "compute";
        case PhaseKind::msg_decode: return "msg_decode";
        case PhaseKind::dma_program: return "dma_program";
        case PhaseKind::dma_transfer: return "dma_transfer";
        case PhaseKind::core_write: return "core_write";
        case PhaseKind::io: return "io";
    }
    return "?";
}

/// One step of a task body. Communication phases are blocking: the core
/// waits for completion, so `cycles` is the end-to-end transfer time.
struct Phase {
    PhaseKind kind = PhaseKind::compute;
    Cycle cycles = 0;
    bool first_activation_only = false;
    std::string label;
};

struct TaskSpec {
    std::string name;
    Cycle period_cycles = 0;
    std::vector<Phase> phases;
};

/// What the core is doing during one stretch of the timeline.
enum class SegmentKind { phase, ctx_switch, rtos_tick, idle };

struct Segment {
    Cycle start = 0;
    Cycle end = 0;
    SegmentKind kind = SegmentKind::idle;
    int task = -1;  // index into the task list, -1 for kernel/idle
    PhaseKind phase = PhaseKind::compute;

    Cycle length() const { return end - start; }
};

/// Time a task spent per category, summed over the hyperperiod.
struct TimeBreakdown {
    Cycle t_decode = 0;
    Cycle t_comm = 0;
    Cycle t_comp = 0;
    Cycle t_io = 0;
    Cycle t_ctx_switch = 0;

    Cycle t_ctrl() const { return t_decode + t_comm + t_comp; }
};

struct DeadlineMiss {
    std::string task;
    Cycle release = 0;
};

struct ScheduleResult {
    Cycle hyperperiod = 0;
    std::vector<Segment> timeline;
    std::vector<TimeBreakdown> per_task;
    std::vector<Cycle> finish_times;  // per task, last activation's completion
    Cycle rtos_tick_total = 0;
    Cycle idle_total = 0;
    std::vector<DeadlineMiss> misses;

    Cycle accounted() const {
        Cycle s = 0;
        for (const auto& seg : timeline) s += seg.length();
        return s;
    }
};

/// Lays out one hyperperiod (the longest period) under fixed-priority
/// preemptive scheduling, shorter period = higher priority. Every release
/// instant costs one RTOS tick; every activation pays one context switch in
/// and one out. A job still running at its next release, or at the end of the
/// hyperperiod, is reported as a deadline miss.
inline ScheduleResult schedule_hyperperiod(const std::vector<TaskSpec>& tasks, const InterruptTimingConfig& irq) {
    if (tasks.empty()) throw std::invalid_argument("no tasks to schedule");
    for (const auto& t : tasks)
        if (t.period_cycles == 0) throw std::invalid_argument("task '" + t.name + "' has a zero period");
    ScheduleResult out;
    for (const auto& t : tasks) out.hyperperiod = std::max(out.hyperperiod, t.period_cycles);
    for (const auto& t : tasks)
        if (out.hyperperiod % t.period_cycles != 0)
            throw PeriodMismatch("period of '" + t.name + "' does not divide the hyperperiod");
    out.per_task.resize(tasks.size());
    out.finish_times.assign(tasks.size(), 0);

    std::vector<std::size_t> prio(tasks.size());
    for (std::size_t i = 0; i < prio.size(); ++i) prio[i] = i;
    std::stable_sort(prio.begin(), prio.end(),
                     [&](std::size_t a, std::size_t b) { return tasks[a].period_cycles < tasks[b].period_cycles; });

    struct Step {
        SegmentKind kind;
        PhaseKind phase;
        Cycle remaining;
    };
    struct Job {
        bool active = false;
        Cycle release = 0;
        std::vector<Step> steps;
        std::size_t at = 0;
    };
    std::vector<Job> jobs(tasks.size());
    std::vector<std::uint64_t> activations(tasks.size(), 0);

    auto release_job = [&](std::size_t i, Cycle now) {
        auto& j = jobs[i];
        if (j.active) out.misses.push_back({tasks[i].name, j.release});
        j = Job{true, now, {}, 0};
        j.steps.push_back({SegmentKind::ctx_switch, PhaseKind::compute, irq.ctx_switch});
        for (const auto& p : tasks[i].phases) {
            if (p.first_activation_only && activations[i] != 0) continue;
            if (p.cycles != 0) j.steps.push_back({SegmentKind::phase, p.kind, p.cycles});
        }
        j.steps.push_back({SegmentKind::ctx_switch, PhaseKind::compute, irq.ctx_switch});
        ++activations[i];
    };

    auto emit = [&](Cycle start, Cycle end, SegmentKind kind, int task, PhaseKind phase) {
        if (end == start) return;
        if (!out.timeline.empty()) {
            auto& last = out.timeline.back();
            if (last.end == start && last.kind == kind && last.task == task && last.phase == phase) {
                last.end = end;
                return;
            }
        }
        out.timeline.push_back({start, end, kind, task, phase});
    };

    Cycle now = 0;
    Cycle tick_left = 0;
    while (now < out.hyperperiod) {
        bool released = false;
        for (std::size_t i = 0; i < tasks.size(); ++i)
            if (now % tasks[i].period_cycles == 0) {
                release_job(i, now);
                released = true;
            }
        if (released) tick_left += irq.rtos_tick_overhead;

        Cycle next_release = out.hyperperiod;
        for (const auto& t : tasks) next_release = std::min(next_release, (now / t.period_cycles + 1) * t.period_cycles);

        while (now < next_release) {
            if (tick_left > 0) {
                const Cycle run = std::min(tick_left, next_release - now);
                emit(now, now + run, SegmentKind::rtos_tick, -1, PhaseKind::compute);
                out.rtos_tick_total += run;
                tick_left -= run;
                now += run;
                continue;
            }
            std::optional<std::size_t> pick;
            for (auto i : prio)
                if (jobs[i].active) {
                    pick = i;
                    break;
                }
            if (!pick) {
                emit(now, next_release, SegmentKind::idle, -1, PhaseKind::compute);
                out.idle_total += next_release - now;
                now = next_release;
                break;
            }
            auto& job = jobs[*pick];
            auto& step = job.steps[job.at];
            const Cycle run = std::min(step.remaining, next_release - now);
            emit(now, now + run, step.kind, static_cast<int>(*pick), step.phase);
            auto& bd = out.per_task[*pick];
            if (step.kind == SegmentKind::ctx_switch) {
                bd.t_ctx_switch += run;
            } else {
                switch (step.phase) {
                    case PhaseKind::compute: bd.t_comp += run; break;
                    case PhaseKind::msg_decode: bd.t_decode += run; break;
                    case PhaseKind::dma_program:
                    case PhaseKind::dma_transfer:
                    case PhaseKind::core_write: bd.t_comm += run; break;
                    case PhaseKind::io: bd.t_io += run; break;
                }
            }
            step.remaining -= run;
            now += run;
            if (step.remaining == 0 && ++job.at == job.steps.size()) {
                job.active = false;
                out.finish_times[*pick] = now;
            }
        }
    }
    for (std::size_t i = 0; i < tasks.size(); ++i)
        if (jobs[i].active) out.misses.push_back({tasks[i].name, jobs[i].release});
    return out;
}

}  // namespace d2dsim
