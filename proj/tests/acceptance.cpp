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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any failed. With a directory argument, the sweep and
// case-study rows are also written there as CSV.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <thread>

#include "d2dsim/results.hpp"
#include "d2dsim/scenarios.hpp"
#include "property_support.hpp"

using namespace d2dsim;
using namespace d2dsim::testing;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
    std::printf("%s  %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string num(double v) {
    std::ostringstream o;
    o.precision(4);
    o << v;
    return o.str();
}

D2DConfig shape(unsigned ch, unsigned ln, std::uint32_t crd) {
    D2DConfig d;
    d.ch = ch;
    d.ln = ln;
    d.crd = crd;
    return d;
}

unsigned workers() {
    return std::max(1u, std::thread::hardware_concurrency());
}

void closed_forms() {
    const auto wide = shape(8, 8, 128);
    const auto narrow = shape(1, 8, 8);
    const bool ok = theoretical_bandwidth_bits_per_cycle(wide) == 128 &&
                    theoretical_bandwidth_bits_per_cycle(shape(7, 8, 128)) == 112 &&
                    duplex_throughput_bits_per_s(wide, 1.0, 200e6) == 51.2e9 && wire_count(1, 8) == 18 &&
                    chunks_per_packet(wide) == 1 && fifo_depth(wide) == 128 && chunks_per_packet(narrow) == 6 &&
                    fifo_depth(narrow) == 48;
    report(ok, "closed-form link quantities",
           "theta " + std::to_string(theoretical_bandwidth_bits_per_cycle(wide)) + "/" +
               std::to_string(theoretical_bandwidth_bits_per_cycle(shape(7, 8, 128))) + ", peak " +
               num(duplex_throughput_bits_per_s(wide, 1.0, 200e6)) + " b/s, wires " +
               std::to_string(wire_count(1, 8)) + ", fifo " + std::to_string(fifo_depth(wide)) + "/" +
               std::to_string(fifo_depth(narrow)));
}

void latency_grid() {
    std::size_t points = 0, bad = 0;
    std::string first_bad;
    for (unsigned ch : {1u, 2u, 4u, 8u})
        for (std::uint32_t crd : {8u, 128u})
            for (unsigned td : {0u, 1u, 50u})
                for (unsigned cdc : {2u, 3u}) {
                    TestbenchConfig tc;
                    tc.iface = InterfaceKind::d2d;
                    tc.d2d = shape(ch, 8, crd);
                    tc.d2d.t_delta_cycles = td;
                    tc.d2d.cdc_latency_cycles = cdc;
                    const auto sim = measure_beat_latency(tc);
                    const auto model = end_to_end_beat_latency(tc.d2d);
                    ++points;
                    if (sim != model) {
                        if (!bad++)
                            first_bad = "CH=" + std::to_string(ch) + " CRD=" + std::to_string(crd) + ": " +
                                        std::to_string(sim) + " vs " + std::to_string(model);
                    }
                }
    report(bad == 0, "beat latency equals closed form",
           std::to_string(points - bad) + "/" + std::to_string(points) + " grid points exact" +
               (bad ? ", first mismatch " + first_bad : ""));
}

void throughput_sweep(const std::string& out_dir) {
    ScenarioConfig cfg;
    cfg.d2d = shape(8, 8, 128);
    const auto rows = run_throughput_sweep(cfg, workers());
    if (!out_dir.empty()) emit_results(rows, OutputFormat::csv, out_dir + "/sweep.csv");

    std::map<std::string, double> alpha;
    std::size_t failed = 0;
    for (const auto& r : rows) {
        if (r.failed()) {
            ++failed;
            continue;
        }
        alpha[r.scenario] = *r.alpha;
    }
    auto a = [&](const std::string& key) {
        auto it = alpha.find(key);
        return it == alpha.end() ? 0.0 : it->second;
    };
    report(failed == 0, "sweep completes", std::to_string(rows.size() - failed) + "/" + std::to_string(rows.size()) +
                                              " points");

    double axi_min = 1.0, d2d_min = 1.0, d2d_max = 0.0, ratio_min = 10.0;
    for (std::string dir : {"read", "write"}) {
        const double ax = a("sweep/axi4/2048B/" + dir);
        const double dd = a("sweep/d2d/crd128/2048B/" + dir);
        axi_min = std::min(axi_min, ax);
        d2d_min = std::min(d2d_min, dd);
        d2d_max = std::max(d2d_max, dd);
        ratio_min = std::min(ratio_min, ax > 0 ? dd / ax : 0.0);
    }
    report(axi_min >= 0.95, "AXI4 utilization at 2048 B >= 0.95", "min alpha " + num(axi_min));
    report(d2d_min >= 0.75 && d2d_max <= 0.95, "D2D CRD=128 utilization at 2048 B in [0.75, 0.95]",
           "alpha " + num(d2d_min) + ".." + num(d2d_max));
    report(ratio_min >= 0.80, "D2D/AXI4 utilization ratio at 2048 B >= 0.80", "min ratio " + num(ratio_min));

    constexpr double tol = 0.01;
    std::size_t checks = 0, violations = 0;
    std::string first;
    auto mono = [&](const std::string& lo, const std::string& hi) {
        ++checks;
        if (a(hi) + tol < a(lo)) {
            if (!violations++) first = hi + " " + num(a(hi)) + " < " + lo + " " + num(a(lo));
        }
    };
    const auto& bursts = cfg.sweep.burst_bytes;
    const auto& crds = cfg.sweep.crd;
    for (std::string dir : {"read", "write"}) {
        for (std::size_t b = 1; b < bursts.size(); ++b) {
            mono("sweep/axi4/" + std::to_string(bursts[b - 1]) + "B/" + dir,
                 "sweep/axi4/" + std::to_string(bursts[b]) + "B/" + dir);
            for (auto k : crds) {
                const std::string p = "sweep/d2d/crd" + std::to_string(k) + "/";
                mono(p + std::to_string(bursts[b - 1]) + "B/" + dir, p + std::to_string(bursts[b]) + "B/" + dir);
            }
        }
        for (auto b : bursts)
            for (std::size_t k = 1; k < crds.size(); ++k)
                mono("sweep/d2d/crd" + std::to_string(crds[k - 1]) + "/" + std::to_string(b) + "B/" + dir,
                     "sweep/d2d/crd" + std::to_string(crds[k]) + "/" + std::to_string(b) + "B/" + dir);
    }
    report(violations == 0, "utilization monotone in CRD and burst size",
           std::to_string(checks - violations) + "/" + std::to_string(checks) + " pairs" +
               (violations ? ", first violation " + first : ""));
}

void rt_timing() {
    const InterruptTimingConfig irq;
    const double s = clic_to_isr_speedup(irq);
    report(std::abs(s - 0.717) < 5e-4 && std::lround(s * 100) == 72, "fast interrupt entry speedup",
           num(s * 100) + "%");
    const auto burst = burst_interrupt_cost(4, irq, true);
    report(burst == 37, "four tail-chained interrupts", std::to_string(burst) + " cycles");
    const Cycle t_long = 1'500'000, t_short = 125'000;  // 3 ms and 250 us at 500 MHz
    const auto v = dma_programming_overhead({100, DmaProgMode::vanilla}, irq, t_long, t_short);
    const auto r = dma_programming_overhead({100, DmaProgMode::rt_midend}, irq, t_long, t_short);
    const double sp = dma_programming_speedup({}, irq, t_long, t_short);
    report(v == 2400 && r == 100 && std::abs(sp - 0.958) < 5e-4, "DMA programming overhead",
           std::to_string(v) + " vs " + std::to_string(r) + " cycles, speedup " + num(sp * 100) + "%");
}

void case_study(const std::string& out_dir) {
    ScenarioConfig cfg;
    cfg.workload = Workload::dvfs_case_study;
    cfg.clock_hz = 500e6;
    cfg.t_mem_cycles = 100;
    cfg.d2d = shape(8, 8, 128);
    cfg.d2d.t_delta_cycles = 50;
    cfg.case_study.n_cores = {9, 36};
    cfg.case_study.compute_budget = {210'000, 1'185'000};
    cfg.case_study.crd = {8, 128};
    const auto out = run_dvfs_case_study_detailed(cfg, workers());
    if (!out_dir.empty()) {
        std::vector<ResultRow> rows;
        for (const auto& o : out) rows.push_back(to_row(cfg, o));
        emit_results(rows, OutputFormat::csv, out_dir + "/case_study.csv");
    }

    std::map<std::string, const CaseStudyOutcome*> by;
    for (const auto& o : out) by[o.problem + "/" + o.variant.name()] = &o;
    const std::map<std::string, double> target{{"P9pe", 0.86}, {"P36pe", 0.21}};
    for (const auto& [p, t] : target) {
        const auto& base = *by.at(p + "/axi4");
        report(std::abs(base.slack_frac - t) <= 0.01, p + " AXI4 baseline slack " + num(t * 100) + "% +- 1%",
               num(base.slack_frac * 100) + "%");
    }
    struct Bound {
        std::uint32_t crd;
        double ratio_lo, ratio_hi, penalty;
    };
    for (const Bound& b : {Bound{8, 2.0, 4.5, 0.009}, Bound{128, 1.0, 1.5, 0.002}}) {
        const std::string v = "d2d_crd" + std::to_string(b.crd);
        for (const auto& [p, t] : target) {
            const auto& base = *by.at(p + "/axi4");
            const auto& d = *by.at(p + "/" + v);
            const double ratio = static_cast<double>(d.control.t_comm) / static_cast<double>(base.control.t_comm);
            report(ratio >= b.ratio_lo && ratio <= b.ratio_hi,
                   p + " t_comm ratio CRD=" + std::to_string(b.crd) + "/AXI4 in [" + num(b.ratio_lo) + ", " +
                       num(b.ratio_hi) + "]",
                   num(ratio) + "x (" + std::to_string(d.control.t_comm) + " vs " +
                       std::to_string(base.control.t_comm) + " cycles)");
            const double pen = static_cast<double>(d.control.t_ctrl()) / static_cast<double>(base.control.t_ctrl()) - 1.0;
            report(pen < b.penalty, p + " t_ctrl penalty CRD=" + std::to_string(b.crd) + " < " + num(b.penalty * 100) + "%",
                   num(pen * 100) + "%");
        }
    }
    for (const auto& o : out) {
        const double share = static_cast<double>(o.control.t_comp) / static_cast<double>(o.control.t_ctrl());
        report(share > 0.99, o.problem + "/" + o.variant.name() + " t_comp share of t_ctrl > 99%",
               num(share * 100) + "%");
    }
}

void properties() {
    constexpr int kPrograms = 1000;
    std::map<CheckFailure, std::size_t> fails;
    std::map<CheckFailure, std::string> first;
    std::size_t runs = 0;
    for (std::uint32_t crd : {1u, 2u, 8u, 128u}) {
        std::mt19937_64 rng(0xD2D0000 + crd);
        for (int i = 0; i < kPrograms; ++i) {
            const auto r = run_and_check(random_program(rng, crd));
            ++runs;
            if (!r.ok && !fails[r.kind]++)
                first[r.kind] = "CRD=" + std::to_string(crd) + " program " + std::to_string(i) + ": " + r.failure;
        }
    }
    auto line = [&](CheckFailure k, const std::string& name) {
        const auto n = fails[k];
        report(n == 0, name, std::to_string(runs - n) + "/" + std::to_string(runs) + " programs" +
                                 (n ? ", first " + first[k] : ""));
    };
    line(CheckFailure::conservation, "credit conservation every cycle");
    line(CheckFailure::fifo, "receive FIFO never overflows");
    line(CheckFailure::integrity, "byte-exact data integrity and ordering");
    line(CheckFailure::other, "random programs run to completion");

    std::mt19937_64 rng(0xBEEF);
    std::size_t bad = 0, total = 0;
    for (std::uint32_t crd : {1u, 2u, 8u, 128u}) {
        D2DConfig c;
        c.crd = crd;
        const auto l = PacketLayout::for_config(c);
        for (int i = 0; i < 2000; ++i) {
            Beat b;
            switch (rng() % 5) {
                case 0: b = Beat::aw(rng() & 0xF, static_cast<std::uint32_t>(rng()), static_cast<std::uint8_t>(rng())); break;
                case 1: b = Beat::w(rng(), static_cast<std::uint8_t>(rng()), rng() & 1); break;
                case 2: b = Beat::b(rng() & 0xF, rng() & 3); break;
                case 3: b = Beat::ar(rng() & 0xF, static_cast<std::uint32_t>(rng()), static_cast<std::uint8_t>(rng())); break;
                default: b = Beat::r(rng() & 0xF, rng(), rng() & 1, rng() & 3); break;
            }
            CreditState cs{1, static_cast<std::uint32_t>(rng() % (crd + 1))};
            const auto p = serialize(b, cs, l);
            ++total;
            if (!p) {
                ++bad;
                continue;
            }
            const auto bits = to_bits(*p, l);
            const auto back = from_bits(bits, l);
            const auto d = deserialize(back);
            if (!(back == *p) || !d.beat || !(*d.beat == b)) ++bad;
        }
    }
    report(bad == 0, "serialize/deserialize round trip", std::to_string(total - bad) + "/" + std::to_string(total));

    bad = total = 0;
    for (unsigned ch = 1; ch <= 8; ++ch)
        for (unsigned ln : {2u, 4u, 8u, 16u})
            for (bool ddr : {true, false})
                for (unsigned width : {84u, 86u, 90u, 200u}) {
                    D2DConfig c = shape(ch, ln, 128);
                    c.ddr = ddr;
                    BitVector v(width);
                    for (std::size_t i = 0; i < width; i += 64)
                        v.set(i, static_cast<unsigned>(std::min<std::size_t>(64, width - i)), rng());
                    ++total;
                    if (!(merge(split_and_route(v, c), width, c) == v)) ++bad;
                }
    report(bad == 0, "split/merge round trip", std::to_string(total - bad) + "/" + std::to_string(total));

    bad = total = 0;
    for (int i = 0; i < 100; ++i) {
        const auto p = random_program(rng, std::array{1u, 2u, 8u, 128u}[i % 4]);
        ++total;
        if (!(record(p) == record(p))) ++bad;
    }
    report(bad == 0, "two runs give identical traces", std::to_string(total - bad) + "/" + std::to_string(total));

    bad = total = 0;
    for (int i = 0; i < 100; ++i) {
        auto p = random_program(rng, std::array{1u, 2u, 8u, 128u}[i % 4]);
        p.tb.d2d.ddr = true;
        p.tb.d2d.ln = std::array{2u, 4u, 8u}[i % 3];
        auto q = p;
        q.tb.d2d.ddr = false;
        q.tb.d2d.ln = 2 * p.tb.d2d.ln;
        const auto a = record(p);
        const auto b = record(q);
        bool same = a.dma == b.dma && a.mem == b.mem;
        for (const auto& [x, y] : {std::pair{&a.near_to_far, &b.near_to_far}, std::pair{&a.far_to_near, &b.far_to_near}}) {
            const auto ra = receive_view(*x, p.tb.d2d);
            const auto rb = receive_view(*y, q.tb.d2d);
            same = same && ra.size() == rb.size();
            for (std::size_t k = 0; same && k < ra.size(); ++k)
                same = ra[k].flits == rb[k].flits && ra[k].ready_cycle == rb[k].ready_cycle;
        }
        ++total;
        if (!same) ++bad;
    }
    report(bad == 0, "DDR(LN) equals SDR(2 LN)", std::to_string(total - bad) + "/" + std::to_string(total));
}

}  // namespace

int main(int argc, char** argv) {
    const std::string out_dir = argc > 1 ? argv[1] : "";
    try {
        closed_forms();
        latency_grid();
        rt_timing();
        throughput_sweep(out_dir);
        case_study(out_dir);
        properties();
    } catch (const std::exception& e) {
        report(false, "acceptance run", std::string("aborted: ") + e.what());
    }
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
