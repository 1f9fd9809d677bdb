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

#include <array>
#include <cmath>
#include <optional>
#include <random>

#include "d2dsim/rt_model.hpp"

using namespace d2dsim;

namespace {

const InterruptTimingConfig kIrq{};
const MsgTimingConfig kMsg{};

// Cycle-by-cycle reference of the same scheduling policy.
struct OracleResult {
    std::vector<TimeBreakdown> per_task;
    std::vector<Cycle> finish;
    Cycle ticks = 0, idle = 0;
    std::size_t misses = 0;
};

OracleResult oracle(const std::vector<TaskSpec>& tasks, const InterruptTimingConfig& irq) {
    Cycle hp = 0;
    for (const auto& t : tasks) hp = std::max(hp, t.period_cycles);
    struct Unit {
        bool ctx;
        PhaseKind kind;
        Cycle left;
    };
    std::vector<std::vector<Unit>> job(tasks.size());
    std::vector<std::size_t> activations(tasks.size(), 0);
    OracleResult r;
    r.per_task.resize(tasks.size());
    r.finish.assign(tasks.size(), 0);
    Cycle tick_left = 0;
    for (Cycle t = 0; t < hp; ++t) {
        bool rel = false;
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            if (t % tasks[i].period_cycles != 0) continue;
            rel = true;
            if (!job[i].empty()) ++r.misses;
            job[i].clear();
            job[i].push_back({true, PhaseKind::compute, irq.ctx_switch});
            for (const auto& p : tasks[i].phases)
                if (p.cycles && !(p.first_activation_only && activations[i])) job[i].push_back({false, p.kind, p.cycles});
            job[i].push_back({true, PhaseKind::compute, irq.ctx_switch});
            ++activations[i];
        }
        if (rel) tick_left += irq.rtos_tick_overhead;
        if (tick_left) {
            --tick_left;
            ++r.ticks;
            continue;
        }
        std::optional<std::size_t> pick;
        for (std::size_t i = 0; i < tasks.size(); ++i)
            if (!job[i].empty() && (!pick || tasks[i].period_cycles < tasks[*pick].period_cycles)) pick = i;
        if (!pick) {
            ++r.idle;
            continue;
        }
        auto& u = job[*pick].front();
        auto& bd = r.per_task[*pick];
        if (u.ctx)
            ++bd.t_ctx_switch;
        else if (u.kind == PhaseKind::compute)
            ++bd.t_comp;
        else if (u.kind == PhaseKind::msg_decode)
            ++bd.t_decode;
        else if (u.kind == PhaseKind::io)
            ++bd.t_io;
        else
            ++bd.t_comm;
        if (--u.left == 0) {
            job[*pick].erase(job[*pick].begin());
            if (job[*pick].empty()) r.finish[*pick] = t + 1;
        }
    }
    for (const auto& j : job)
        if (!j.empty()) ++r.misses;
    return r;
}

TaskSpec task(std::string name, Cycle period, std::vector<Phase> phases) {
    return {std::move(name), period, std::move(phases)};
}

}  // namespace

TEST(InterruptTiming, DefaultsAreConsistent) {
    EXPECT_NO_THROW(validate(kIrq));
    InterruptTimingConfig bad;
    bad.clic_to_isr_fast = 50;
    EXPECT_THROW(validate(bad), std::invalid_argument);
    bad = {};
    bad.ctx_switch = 0;
    EXPECT_THROW(validate(bad), std::invalid_argument);
}

TEST(InterruptTiming, FastEntrySpeedupRoundsTo72Percent) {
    EXPECT_NEAR(clic_to_isr_speedup(kIrq), 1.0 - 13.0 / 46.0, 1e-12);
    EXPECT_EQ(std::lround(clic_to_isr_speedup(kIrq) * 100), 72);
}

TEST(MsgDecode, Examples) {
    EXPECT_EQ(msg_decode_time(kIrq, kMsg, false), 254u);
    EXPECT_EQ(msg_decode_time(kIrq, kMsg, true), 221u);
    EXPECT_EQ(msg_decode_time(kIrq, {0, 0}, true), 13u);
}

TEST(MsgDecode, FastReducesDecodeByThirteenPercent) {
    const double red = 1.0 - 221.0 / 254.0;
    EXPECT_NEAR(1.0 - static_cast<double>(msg_decode_time(kIrq, kMsg, true)) / msg_decode_time(kIrq, kMsg, false), red,
                1e-12);
    EXPECT_EQ(std::lround(red * 100), 13);
}

TEST(MsgDecode, FastNeverSlowerOnRandomConfigs) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) {
        InterruptTimingConfig irq;
        irq.clic_to_isr_fast = 1 + rng() % 100;
        irq.clic_to_isr_vanilla = irq.clic_to_isr_fast + 1 + rng() % 100;
        const MsgTimingConfig msg{1 + rng() % 500, 1 + rng() % 500};
        EXPECT_LT(msg_decode_time(irq, msg, true), msg_decode_time(irq, msg, false));
    }
}

TEST(BurstInterrupt, Examples) {
    EXPECT_EQ(burst_interrupt_cost(1, kIrq, true), 13u);
    EXPECT_EQ(burst_interrupt_cost(4, kIrq, true), 37u);
    EXPECT_EQ(burst_interrupt_cost(4, kIrq, false), 184u);
    EXPECT_EQ(burst_interrupt_cost(4, kIrq, true, 10), 77u);
    EXPECT_THROW(burst_interrupt_cost(0, kIrq, true), std::invalid_argument);
}

TEST(DmaProgramming, PaperParameters) {
    DmaProgrammingConfig v{100, DmaProgMode::vanilla};
    DmaProgrammingConfig rt{100, DmaProgMode::rt_midend};
    EXPECT_EQ(dma_programming_overhead(v, kIrq, 1'500'000, 125'000), 2400u);
    EXPECT_EQ(dma_programming_overhead(rt, kIrq, 1'500'000, 125'000), 100u);
    EXPECT_NEAR(dma_programming_speedup(v, kIrq, 1'500'000, 125'000), 1.0 - 100.0 / 2400.0, 1e-12);
    EXPECT_NEAR(dma_programming_speedup(v, kIrq, 1'500'000, 125'000), 0.958, 5e-4);
}

TEST(DmaProgramming, EqualPeriods) {
    EXPECT_EQ(dma_programming_overhead({100, DmaProgMode::vanilla}, kIrq, 1000, 1000), 200u);
    EXPECT_EQ(dma_programming_overhead({100, DmaProgMode::rt_midend}, kIrq, 1000, 1000), 100u);
}

TEST(DmaProgramming, NonDivisiblePeriodsRejected) {
    EXPECT_THROW(dma_programming_overhead({}, kIrq, 1000, 300), PeriodMismatch);
    EXPECT_THROW(dma_programming_overhead({}, kIrq, 1000, 0), PeriodMismatch);
}

TEST(DmaProgramming, RtIndependentOfRatioVanillaLinear) {
    for (Cycle k = 1; k <= 40; ++k) {
        EXPECT_EQ(dma_programming_overhead({100, DmaProgMode::rt_midend}, kIrq, 1000 * k, 1000), 100u);
        EXPECT_EQ(dma_programming_overhead({100, DmaProgMode::vanilla}, kIrq, 1000 * k, 1000), 200u * k);
    }
}

TEST(Slack, Examples) {
    EXPECT_EQ(slack(1'500'000, 210'000), 1'290'000);
    EXPECT_NEAR(static_cast<double>(slack(1'500'000, 210'000)) / 1.5e6, 0.86, 1e-12);
    EXPECT_EQ(slack(1'500'000, 1'500'000), 0);
    EXPECT_NEAR(static_cast<double>(slack(1'500'000, 1'185'000)) / 1.5e6, 0.21, 1e-12);
    EXPECT_LT(slack(100, 150), 0);
}

TEST(Schedule, SingleComputeTask) {
    const auto r = schedule_hyperperiod({task("t", 10'000, {{PhaseKind::compute, 3000, false, "c"}})}, kIrq);
    EXPECT_EQ(r.per_task[0].t_comp, 3000u);
    EXPECT_EQ(r.per_task[0].t_ctrl(), 3000u);
    EXPECT_EQ(r.finish_times[0], 107u + 100u + 3000u + 100u);
    EXPECT_EQ(r.accounted(), 10'000u);
    EXPECT_TRUE(r.misses.empty());
}

TEST(Schedule, ShortTaskPreemptsLongTask) {
    // Hand-laid: tick 107, then the short job (ctx 100 + io 500 + ctx 100)
    // runs first; the long job resumes after it and again after each tick.
    const auto r = schedule_hyperperiod({task("short", 2000, {{PhaseKind::io, 500, false, "io"}}),
                                         task("long", 4000, {{PhaseKind::compute, 2000, false, "c"}})},
                                        kIrq);
    EXPECT_EQ(r.per_task[0].t_io, 1000u);
    EXPECT_EQ(r.per_task[1].t_comp, 2000u);
    EXPECT_EQ(r.rtos_tick_total, 214u);
    // long: 107+700 before it starts, 100 ctx, runs to 2000 (1093 compute),
    // then tick+short take 807, remaining 907 compute + 100 ctx.
    EXPECT_EQ(r.finish_times[1], 2000u + 807u + 907u + 100u);
    EXPECT_EQ(r.accounted(), 4000u);
}

TEST(Schedule, FirstActivationOnlyPhase) {
    const auto r = schedule_hyperperiod({task("short", 1000, {{PhaseKind::dma_program, 100, true, "p"},
                                                              {PhaseKind::io, 50, false, "io"}}),
                                         task("long", 4000, {{PhaseKind::compute, 10, false, "c"}})},
                                        kIrq);
    EXPECT_EQ(r.per_task[0].t_comm, 100u);
    EXPECT_EQ(r.per_task[0].t_io, 200u);
}

TEST(Schedule, OverrunIsADeadlineMiss) {
    const auto r = schedule_hyperperiod({task("t", 1000, {{PhaseKind::compute, 5000, false, "c"}})}, kIrq);
    ASSERT_EQ(r.misses.size(), 1u);
    EXPECT_EQ(r.misses[0].task, "t");
}

TEST(Schedule, RejectsBadTaskSets) {
    EXPECT_THROW(schedule_hyperperiod({}, kIrq), std::invalid_argument);
    EXPECT_THROW(schedule_hyperperiod({task("z", 0, {})}, kIrq), std::invalid_argument);
    EXPECT_THROW(schedule_hyperperiod({task("a", 300, {}), task("b", 1000, {})}, kIrq), PeriodMismatch);
}

TEST(ScheduleProperty, MatchesCycleByCycleOracle) {
    std::mt19937_64 rng(2026);
    const std::array kinds{PhaseKind::compute, PhaseKind::msg_decode, PhaseKind::dma_program,
                           PhaseKind::dma_transfer, PhaseKind::core_write, PhaseKind::io};
    for (int trial = 0; trial < 300; ++trial) {
        InterruptTimingConfig irq;
        irq.ctx_switch = 1 + rng() % 20;
        irq.rtos_tick_overhead = 1 + rng() % 30;
        const Cycle base = 200 + rng() % 800;
        std::vector<TaskSpec> tasks;
        const std::size_t n = 1 + rng() % 3;
        for (std::size_t i = 0; i < n; ++i) {
            TaskSpec t{"t" + std::to_string(i), base * (Cycle{1} << (rng() % 3)), {}};
            const std::size_t phases = rng() % 4;
            for (std::size_t k = 0; k < phases; ++k)
                t.phases.push_back({kinds[rng() % kinds.size()], rng() % (t.period_cycles / 2), rng() % 4 == 0, ""});
            tasks.push_back(t);
        }
        const auto r = schedule_hyperperiod(tasks, irq);
        const auto o = oracle(tasks, irq);
        ASSERT_EQ(r.accounted(), r.hyperperiod) << "trial " << trial;
        EXPECT_EQ(r.rtos_tick_total, o.ticks) << "trial " << trial;
        EXPECT_EQ(r.idle_total, o.idle) << "trial " << trial;
        EXPECT_EQ(r.misses.size(), o.misses) << "trial " << trial;
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            EXPECT_EQ(r.per_task[i].t_comp, o.per_task[i].t_comp) << "trial " << trial;
            EXPECT_EQ(r.per_task[i].t_comm, o.per_task[i].t_comm) << "trial " << trial;
            EXPECT_EQ(r.per_task[i].t_decode, o.per_task[i].t_decode) << "trial " << trial;
            EXPECT_EQ(r.per_task[i].t_io, o.per_task[i].t_io) << "trial " << trial;
            EXPECT_EQ(r.per_task[i].t_ctx_switch, o.per_task[i].t_ctx_switch) << "trial " << trial;
            EXPECT_EQ(r.finish_times[i], o.finish[i]) << "trial " << trial;
        }
        Cycle prev = 0;
        for (const auto& s : r.timeline) {
            ASSERT_EQ(s.start, prev) << "gap in timeline";
            prev = s.end;
        }
    }
}
