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

// Result files. CSV columns are fixed:
//
//   scenario,interface,ch,ln,crd,direction,burst_bytes,alpha,throughput_bps,
//   latency_cycles,t_decode,t_comm,t_comp,t_ctrl,slack_frac
//
// Fields that do not apply to a row are empty in CSV and null in JSON.

#include <array>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "d2dsim/scenarios.hpp"

namespace d2dsim {

class EmptyResult : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

inline constexpr std::array<const char*, 15> kCsvColumns{
    "scenario", "interface", "ch",     "ln",     "crd",    "direction", "burst_bytes", "alpha",
    "throughput_bps", "latency_cycles", "t_decode", "t_comm", "t_comp", "t_ctrl", "slack_frac"};

namespace detail {

/// Shortest representation that reads back to the same double.
inline std::string format_number(double d) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
    return std::string(buf, p);
}

template <typename T>
std::string cell(const std::optional<T>& v) {
    if (!v) return {};
    if constexpr (std::is_floating_point_v<T>)
        return format_number(*v);
    else
        return std::to_string(*v);
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

template <typename T>
nlohmann::json jval(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace detail

inline std::string to_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream o;
    for (std::size_t i = 0; i < kCsvColumns.size(); ++i) o << (i ? "," : "") << kCsvColumns[i];
    o << "\n";
    using detail::cell;
    for (const auto& r : rows) {
        o << detail::csv_escape(r.scenario) << ',' << r.interface << ',' << cell(r.ch) << ',' << cell(r.ln) << ','
          << cell(r.crd) << ',' << r.direction << ',' << cell(r.burst_bytes) << ',' << cell(r.alpha) << ','
          << cell(r.throughput_bps) << ',' << cell(r.latency_cycles) << ',' << cell(r.t_decode) << ','
          << cell(r.t_comm) << ',' << cell(r.t_comp) << ',' << cell(r.t_ctrl) << ',' << cell(r.slack_frac) << "\n";
    }
    return o.str();
}

inline nlohmann::ordered_json to_json(const ResultRow& r) {
    using detail::jval;
    nlohmann::ordered_json j;
    j["scenario"] = r.scenario;
    j["interface"] = r.interface;
    j["ch"] = jval(r.ch);
    j["ln"] = jval(r.ln);
    j["crd"] = jval(r.crd);
    j["direction"] = r.direction.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.direction);
    j["burst_bytes"] = jval(r.burst_bytes);
    j["alpha"] = jval(r.alpha);
    j["throughput_bps"] = jval(r.throughput_bps);
    j["latency_cycles"] = jval(r.latency_cycles);
    j["t_decode"] = jval(r.t_decode);
    j["t_comm"] = jval(r.t_comm);
    j["t_comp"] = jval(r.t_comp);
    j["t_ctrl"] = jval(r.t_ctrl);
    j["slack_frac"] = jval(r.slack_frac);
    return j;
}

inline std::string to_json_text(const std::vector<ResultRow>& rows) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) arr.push_back(to_json(r));
    return arr.dump(2) + "\n";
}

inline std::string render(const std::vector<ResultRow>& rows, OutputFormat fmt) {
    if (rows.empty()) throw EmptyResult("no result rows to write");
    return fmt == OutputFormat::csv ? to_csv(rows) : to_json_text(rows);
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.close();
    if (!out) throw IoError("failed writing '" + path + "'");
}

/// Writes `rows` to `path`. Identical rows give byte-identical files.
inline void emit_results(const std::vector<ResultRow>& rows, OutputFormat fmt, const std::string& path) {
    write_file(path, render(rows, fmt));
}

inline std::string analytic_csv(const std::vector<AnalyticEntry>& entries) {
    std::ostringstream o;
    o << "quantity,value,unit\n";
    for (const auto& e : entries) o << e.quantity << ',' << detail::format_number(e.value) << ',' << e.unit << "\n";
    return o.str();
}

inline std::string analytic_json(const std::vector<AnalyticEntry>& entries) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
        nlohmann::ordered_json j;
        j["quantity"] = e.quantity;
        j["value"] = e.value;
        j["unit"] = e.unit;
        arr.push_back(j);
    }
    return arr.dump(2) + "\n";
}

}  // namespace d2dsim
