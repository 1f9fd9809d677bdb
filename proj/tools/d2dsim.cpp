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

// d2dsim command line.
//
//   d2dsim sweep           --config F [--output O] [--format csv|json] [-j N] [--seed S]
//   d2dsim case-study      --config F [--output O] [--format csv|json] [-j N] [--seed S] [--strict]
//   d2dsim analytic        [--config F] [--output O] [--format csv|json]
//   d2dsim validate-config --config F
//
// Exit codes: 0 ok, 2 config error, 3 deadline miss (case-study --strict),
// 4 simulation timeout or failed sweep point, 1 anything else.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "d2dsim/config.hpp"
#include "d2dsim/results.hpp"
#include "d2dsim/scenarios.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDeadline = 3;
constexpr int kExitTimeout = 4;

unsigned default_workers() {
    if (const char* env = std::getenv("D2DSIM_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring invalid D2DSIM_WORKERS='" << env << "'\n";
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

struct Options {
    std::string config;
    std::string output;
    std::string format = "csv";
    unsigned workers = 1;
    std::optional<std::uint64_t> seed;
    bool strict = false;
};

d2dsim::OutputFormat format_of(const std::string& s) {
    return s == "json" ? d2dsim::OutputFormat::json : d2dsim::OutputFormat::csv;
}

void write_out(const Options& o, const std::string& text) {
    if (o.output.empty() || o.output == "-")
        std::cout << text;
    else
        d2dsim::write_file(o.output, text);
}

d2dsim::ScenarioConfig load(const Options& o) {
    auto cfg = o.config.empty() ? d2dsim::ScenarioConfig{} : d2dsim::parse_config(o.config);
    if (o.seed) cfg.seed = *o.seed;
    return cfg;
}

int run_sweep(const Options& o) {
    auto cfg = load(o);
    const auto rows = d2dsim::run_throughput_sweep(cfg, o.workers);
    write_out(o, d2dsim::render(rows, format_of(o.format)));
    const auto failed = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.failed(); });
    if (failed > 0) {
        std::cerr << "error: " << failed << " sweep point(s) timed out\n";
        return kExitTimeout;
    }
    return kExitOk;
}

int run_case_study(const Options& o) {
    auto cfg = load(o);
    const auto outcomes = d2dsim::run_dvfs_case_study_detailed(cfg, o.workers);
    std::vector<d2dsim::ResultRow> rows;
    bool miss = false;
    for (const auto& oc : outcomes) {
        rows.push_back(d2dsim::to_row(cfg, oc));
        if (!oc.deadline_met) {
            miss = true;
            std::cerr << "deadline miss: " << oc.problem << "/" << oc.variant.name() << "\n";
        }
    }
    write_out(o, d2dsim::render(rows, format_of(o.format)));
    return miss && o.strict ? kExitDeadline : kExitOk;
}

int run_analytic(const Options& o) {
    const auto entries = d2dsim::analytic_report(load(o));
    write_out(o, format_of(o.format) == d2dsim::OutputFormat::json ? d2dsim::analytic_json(entries)
                                                                    : d2dsim::analytic_csv(entries));
    return kExitOk;
}

int run_validate(const Options& o) {
    write_out(o, d2dsim::to_toml(load(o)));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cycle-level simulator of a die-to-die AXI4 link"};
    app.require_subcommand(1);

    Options opt;
    opt.workers = default_workers();
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* c = sub->add_option("-c,--config", opt.config, "scenario file (TOML)")->check(CLI::ExistingFile);
        if (config_required) c->required();
        sub->add_option("-o,--output", opt.output, "output file, '-' or omitted for stdout");
    };
    auto add_run = [&](CLI::App* sub) {
        sub->add_option("-f,--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("-j,--parallelism", opt.workers, "worker threads (default: $D2DSIM_WORKERS or cores)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "override the scenario seed");
    };

    auto* sweep = app.add_subcommand("sweep", "throughput sweep over burst size and CRD");
    add_common(sweep, true);
    add_run(sweep);

    auto* cs = app.add_subcommand("case-study", "DVFS control case study");
    add_common(cs, true);
    add_run(cs);
    cs->add_flag("--strict", opt.strict, "exit 3 if any variant misses a deadline");

    auto* an = app.add_subcommand("analytic", "closed-form link quantities");
    add_common(an, false);
    an->add_option("-f,--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* vc = app.add_subcommand("validate-config", "parse, validate and echo the normalized config");
    add_common(vc, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    for (auto* sub : {sweep, cs})
        if (sub->parsed() && sub->count("--seed") > 0) opt.seed = seed;

    try {
        if (sweep->parsed()) return run_sweep(opt);
        if (cs->parsed()) return run_case_study(opt);
        if (an->parsed()) return run_analytic(opt);
        return run_validate(opt);
    } catch (const d2dsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const d2dsim::TimeoutExceeded& e) {
        std::cerr << "simulation timeout: " << e.what() << "\n";
        return kExitTimeout;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOther;
    }
}
