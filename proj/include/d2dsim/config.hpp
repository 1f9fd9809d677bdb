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

// Scenario files. The accepted syntax is a subset of TOML: [table] headers,
// dotted keys, integers, floats, booleans, basic strings and flat arrays
// (which may span lines). Every key is flattened to its full dotted path.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "d2dsim/link_config.hpp"
#include "d2dsim/scenarios.hpp"

namespace d2dsim {

using TomlScalar = std::variant<std::int64_t, double, bool, std::string>;
using TomlValue = std::variant<std::int64_t, double, bool, std::string, std::vector<TomlScalar>>;

struct TomlEntry {
    TomlValue value;
    std::size_t line = 0;
};

using TomlTable = std::map<std::string, TomlEntry>;

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline std::string strip_comment(std::string_view line) {
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_str && c == '\\') {
            ++i;
            continue;
        }
        if (c == '"') in_str = !in_str;
        if (c == '#' && !in_str) return std::string(line.substr(0, i));
    }
    return std::string(line);
}

inline bool valid_key(std::string_view k) {
    if (k.empty() || k.front() == '.' || k.back() == '.') return false;
    for (std::size_t i = 0; i < k.size(); ++i) {
        const char c = k[i];
        if (c == '.' && k[i - 1] == '.') return false;
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
    }
    return true;
}

inline std::string normalize_key(std::string_view k) {
    std::string out;
    std::size_t start = 0;
    while (start <= k.size()) {
        const auto dot = k.find('.', start);
        const auto part = trim(k.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
        if (!out.empty() || start != 0) out += '.';
        out += part;
        if (dot == std::string_view::npos) break;
        start = dot + 1;
    }
    return out;
}

class ValueParser {
public:
    ValueParser(std::string_view text, std::size_t line) : s_(text), line_(line) {}

    TomlValue parse_value(const std::string& key) {
        skip_ws();
        if (peek() == '[') return parse_array(key);
        auto v = parse_scalar(key);
        return std::visit([](auto&& x) -> TomlValue { return x; }, v);
    }

    void expect_end(const std::string& key) {
        skip_ws();
        if (pos_ != s_.size()) throw ConfigError("trailing characters after value", key, line_);
    }

private:
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    std::vector<TomlScalar> parse_array(const std::string& key) {
        ++pos_;
        std::vector<TomlScalar> out;
        skip_ws();
        if (peek() == ']') {
            ++pos_;
            return out;
        }
        for (;;) {
            skip_ws();
            if (peek() == '[') throw ConfigError("nested arrays are not supported", key, line_);
            out.push_back(parse_scalar(key));
            skip_ws();
            if (peek() == ',') {
                ++pos_;
                skip_ws();
                if (peek() == ']') {
                    ++pos_;
                    return out;
                }
                continue;
            }
            if (peek() == ']') {
                ++pos_;
                return out;
            }
            throw ConfigError("expected ',' or ']' in array", key, line_);
        }
    }

    TomlScalar parse_scalar(const std::string& key) {
        if (peek() == '"') return parse_string(key);
        std::size_t end = pos_;
        while (end < s_.size() && s_[end] != ',' && s_[end] != ']' && !std::isspace(static_cast<unsigned char>(s_[end])))
            ++end;
        const std::string tok(s_.substr(pos_, end - pos_));
        pos_ = end;
        if (tok.empty()) throw ConfigError("missing value", key, line_);
        if (tok == "true") return true;
        if (tok == "false") return false;
        std::string digits;
        for (char c : tok)
            if (c != '_') digits += c;
        const bool is_float = digits.find_first_of(".eE") != std::string::npos &&
                              !(digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X'));
        if (is_float) {
            double d = 0;
            auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), d);
            if (ec != std::errc{} || p != digits.data() + digits.size())
                throw ConfigError("malformed number '" + tok + "'", key, line_);
            return d;
        }
        std::int64_t v = 0;
        std::string_view body = digits;
        bool neg = false;
        if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
            neg = body[0] == '-';
            body.remove_prefix(1);
        }
        int base = 10;
        if (body.size() > 2 && body[0] == '0' && (body[1] == 'x' || body[1] == 'X')) {
            base = 16;
            body.remove_prefix(2);
        }
        auto [p, ec] = std::from_chars(body.data(), body.data() + body.size(), v, base);
        if (ec != std::errc{} || p != body.data() + body.size() || body.empty())
            throw ConfigError("malformed value '" + tok + "'", key, line_);
        return neg ? -v : v;
    }

    std::string parse_string(const std::string& key) {
        ++pos_;
        std::string out;
        while (pos_ < s_.size()) {
            const char c = s_[pos_++];
            if (c == '"') return out;
            if (c == '\\') {
                if (pos_ >= s_.size()) break;
                const char e = s_[pos_++];
                switch (e) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    default: throw ConfigError(std::string("unsupported escape \\") + e, key, line_);
                }
                continue;
            }
            out += c;
        }
        throw ConfigError("unterminated string", key, line_);
    }

    std::string_view s_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

inline int bracket_balance(std::string_view s) {
    int depth = 0;
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (in_str && c == '\\') {
            ++i;
            continue;
        }
        if (c == '"') in_str = !in_str;
        if (in_str) continue;
        if (c == '[') ++depth;
        if (c == ']') --depth;
    }
    return depth;
}

}  // namespace detail

inline TomlTable parse_toml(std::string_view text) {
    TomlTable out;
    std::string table;
    std::vector<std::string> lines;
    {
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto nl = text.find('\n', start);
            lines.emplace_back(text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start));
            if (nl == std::string_view::npos) break;
            start = nl + 1;
        }
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        std::string raw = detail::strip_comment(lines[i]);
        auto line = detail::trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.size() < 3 || line.back() != ']' || line[1] == '[')
                throw ConfigError("malformed table header", {}, lineno);
            const auto name = detail::trim(line.substr(1, line.size() - 2));
            if (!detail::valid_key(name)) throw ConfigError("invalid table name", std::string(name), lineno);
            table = detail::normalize_key(name);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", {}, lineno);
        const auto raw_key = detail::trim(line.substr(0, eq));
        if (!detail::valid_key(raw_key)) throw ConfigError("invalid key", std::string(raw_key), lineno);
        const std::string key = (table.empty() ? "" : table + ".") + detail::normalize_key(raw_key);
        std::string value(detail::trim(line.substr(eq + 1)));
        // Arrays may continue over several lines.
        while (detail::bracket_balance(value) > 0 && i + 1 < lines.size()) {
            ++i;
            value += ' ';
            value += detail::trim(detail::strip_comment(lines[i]));
        }
        if (detail::bracket_balance(value) != 0) throw ConfigError("unbalanced brackets", key, lineno);
        detail::ValueParser vp(value, lineno);
        auto v = vp.parse_value(key);
        vp.expect_end(key);
        if (out.count(key)) throw ConfigError("duplicate key", key, lineno);
        out.emplace(key, TomlEntry{std::move(v), lineno});
    }
    return out;
}

namespace detail {

inline std::uint64_t to_uint(const TomlScalar& v, const std::string& key, std::size_t line,
                             std::uint64_t max = std::numeric_limits<std::uint32_t>::max()) {
    if (!std::holds_alternative<std::int64_t>(v)) throw ConfigError("expected a non-negative integer", key, line);
    const auto i = std::get<std::int64_t>(v);
    if (i < 0) throw ConfigError("expected a non-negative integer", key, line);
    if (static_cast<std::uint64_t>(i) > max) throw ConfigError("value out of range", key, line);
    return static_cast<std::uint64_t>(i);
}

inline double to_double(const TomlScalar& v, const std::string& key, std::size_t line) {
    if (std::holds_alternative<double>(v)) return std::get<double>(v);
    if (std::holds_alternative<std::int64_t>(v)) return static_cast<double>(std::get<std::int64_t>(v));
    throw ConfigError("expected a number", key, line);
}

inline bool to_bool(const TomlScalar& v, const std::string& key, std::size_t line) {
    if (!std::holds_alternative<bool>(v)) throw ConfigError("expected true or false", key, line);
    return std::get<bool>(v);
}

inline std::string to_str(const TomlScalar& v, const std::string& key, std::size_t line) {
    if (!std::holds_alternative<std::string>(v)) throw ConfigError("expected a string", key, line);
    return std::get<std::string>(v);
}

inline TomlScalar scalar(const TomlEntry& e, const std::string& key) {
    return std::visit(
        [&](auto&& x) -> TomlScalar {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::vector<TomlScalar>>)
                throw ConfigError("expected a single value, not an array", key, e.line);
            else
                return x;
        },
        e.value);
}

inline const std::vector<TomlScalar>& array(const TomlEntry& e, const std::string& key) {
    if (!std::holds_alternative<std::vector<TomlScalar>>(e.value)) throw ConfigError("expected an array", key, e.line);
    return std::get<std::vector<TomlScalar>>(e.value);
}

using Setter = std::function<void(ScenarioConfig&, const TomlEntry&, const std::string&)>;

template <typename F>
Setter uint_ref(F field) {
    return [field](ScenarioConfig& c, const TomlEntry& e, const std::string& k) {
        auto& target = field(c);
        using T = std::decay_t<decltype(target)>;
        target = static_cast<T>(to_uint(scalar(e, k), k, e.line, std::numeric_limits<T>::max()));
    };
}

template <typename F>
Setter bool_ref(F field) {
    return [field](ScenarioConfig& c, const TomlEntry& e, const std::string& k) {
        field(c) = to_bool(scalar(e, k), k, e.line);
    };
}

template <typename F>
Setter uint_list(F field) {
    return [field](ScenarioConfig& c, const TomlEntry& e, const std::string& k) {
        auto& target = field(c);
        using T = typename std::decay_t<decltype(target)>::value_type;
        target.clear();
        for (const auto& v : array(e, k))
            target.push_back(static_cast<T>(to_uint(v, k, e.line, std::numeric_limits<T>::max())));
    };
}

inline const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> m;
        m["interface"] = [](ScenarioConfig& c, const TomlEntry& e, const std::string& k) {
            const auto s = to_str(scalar(e, k), k, e.line);
            if (s == "axi4" || s == "axi4_native")
                c.iface = InterfaceKind::axi4;
            else if (s == "d2d")
                c.iface = InterfaceKind::d2d;
            else
                throw ConfigError("expected \"axi4\" or \"d2d\", got \"" + s + "\"", k, e.line);
        };
        m["workload"] = [](ScenarioConfig& c, const TomlEntry& e, const std::string& k) {
            const auto s = to_str(scalar(e, k), k, e.line);
            if (s == "throughput_sweep")
                c.workload = Workload::throughput_sweep;
            else if (s == "dvfs_case_study")
                c.workload = Workload::dvfs_case_study;
            else
                throw ConfigError("expected \"throughput_sweep\" or \"dvfs_case_study\"", k, e.line);
        };
        m["seed"] = [](ScenarioConfig& c, const TomlEntry& e, const std::string& k) {
            c.seed = to_uint(scalar(e, k), k, e.line, std::numeric_limits<std::int64_t>::max());
        };
        m["clock_hz"] = [](ScenarioConfig& c, const TomlEntry& e, const std::string& k) {
            c.clock_hz = to_double(scalar(e, k), k, e.line);
        };
        m["t_mem_cycles"] = uint_ref([](ScenarioConfig& c) -> auto& { return c.t_mem_cycles; });

        m["d2d.ch"] = uint_ref([](ScenarioConfig& c) -> auto& { return c.d2d.ch; });
        m["d2d.ln"] = uint_ref([](ScenarioConfig& c) -> auto& { return c.d2d.ln; });
        m["d2d.crd"] = uint_ref([](ScenarioConfig& c) -> auto& { return c.d2d.crd; });
        m["d2d.ddr"] = bool_ref([](ScenarioConfig& c) -> auto& { return c.d2d.ddr; });
        m["d2d.t_delta_cycles"] = uint_ref([](ScenarioConfig& c) -> auto& { return c.d2d.t_delta_cycles; });
        m["d2d.cdc_latency_cycles"] = uint_ref([](ScenarioConfig& c) -> auto& { return c.d2d.cdc_latency_cycles; });
        m["d2d.cg_latency_cycles"] = uint_ref([](ScenarioConfig& c) -> auto& { return c.d2d.cg_latency_cycles; });
        m["d2d.phase_shift_deg"] = uint_ref([](ScenarioConfig& c) -> auto& { return c.d2d.phase_shift_deg; });
        m["d2d.credit_threshold"] = uint_ref([](ScenarioConfig& c) -> auto& { return c.d2d.credit_threshold; });

        m["sweep.burst_bytes"] = uint_list([](ScenarioConfig& c) -> auto& { return c.sweep.burst_bytes; });
        m["sweep.crd"] = uint_list([](ScenarioConfig& c) -> auto& { return c.sweep.crd; });
        m["sweep.directions"] = [](ScenarioConfig& c, const TomlEntry& e, const std::string& k) {
            c.sweep.directions.clear();
            for (const auto& v : array(e, k)) {
                const auto s = to_str(v, k, e.line);
                if (s == "read")
                    c.sweep.directions.push_back(DmaDirection::read);
                else if (s == "write")
                    c.sweep.directions.push_back(DmaDirection::write);
                else
                    throw ConfigError("expected \"read\" or \"write\", got \"" + s + "\"", k, e.line);
            }
        };
        m["sweep.repeats"] = uint_ref([](ScenarioConfig& c) -> auto& { return c.sweep.repeats; });
        m["sweep.warmup_cycles"] = uint_ref([](ScenarioConfig& c) -> auto& { return c.sweep.warmup_cycles; });
        m["sweep.window_cycles"] = uint_ref([](ScenarioConfig& c) -> auto& { return c.sweep.window_cycles; });
        m["sweep.include_baseline"] = bool_ref([](ScenarioConfig& c) -> auto& { return c.sweep.include_baseline; });

        m["case_study.n_cores"] = uint_list([](ScenarioConfig& c) -> auto& { return c.case_study.n_cores; });
        m["case_study.compute_budget"] =
            uint_list([](ScenarioConfig& c) -> auto& { return c.case_study.compute_budget; });
        m["case_study.crd"] = uint_list([](ScenarioConfig& c) -> auto& { return c.case_study.crd; });
        m["case_study.sensor_regs"] = uint_ref([](ScenarioConfig& c) -> auto& { return c.case_study.sensor_regs; });
        m["case_study.sensor_reg_bytes"] =
            uint_ref([](ScenarioConfig& c) -> auto& { return c.case_study.sensor_reg_bytes; });
        m["case_study.sensor_base"] = uint_ref([](ScenarioConfig& c) -> auto& { return c.case_study.sensor_base; });
        m["case_study.actuator_base"] =
            uint_ref([](ScenarioConfig& c) -> auto& { return c.case_study.actuator_base; });
        m["case_study.sensor_ids"] = uint_ref([](ScenarioConfig& c) -> auto& { return c.case_study.sensor_ids; });
        m["case_study.t_short"] = uint_ref([](ScenarioConfig& c) -> auto& { return c.case_study.t_short; });
        m["case_study.t_long"] = uint_ref([](ScenarioConfig& c) -> auto& { return c.case_study.t_long; });
        m["case_study.io_cycles"] = uint_ref([](ScenarioConfig& c) -> auto& { return c.case_study.io_cycles; });
        m["case_study.fastirq"] = bool_ref([](ScenarioConfig& c) -> auto& { return c.case_study.fastirq; });
        m["case_study.dma_prog_mode"] = [](ScenarioConfig& c, const TomlEntry& e, const std::string& k) {
            const auto s = to_str(scalar(e, k), k, e.line);
            if (s == "vanilla")
                c.case_study.dma_prog.mode = DmaProgMode::vanilla;
            else if (s == "rt_midend")
                c.case_study.dma_prog.mode = DmaProgMode::rt_midend;
            else
                throw ConfigError("expected \"vanilla\" or \"rt_midend\"", k, e.line);
        };
        m["case_study.t_single_prog"] =
            uint_ref([](ScenarioConfig& c) -> auto& { return c.case_study.dma_prog.t_single_prog; });
        m["case_study.irq.clic_to_isr_fast"] =
            uint_ref([](ScenarioConfig& c) -> auto& { return c.case_study.irq.clic_to_isr_fast; });
        m["case_study.irq.clic_to_isr_vanilla"] =
            uint_ref([](ScenarioConfig& c) -> auto& { return c.case_study.irq.clic_to_isr_vanilla; });
        m["case_study.irq.raw_irq_latency_fast"] =
            uint_ref([](ScenarioConfig& c) -> auto& { return c.case_study.irq.raw_irq_latency_fast; });
        m["case_study.irq.ctx_switch"] =
            uint_ref([](ScenarioConfig& c) -> auto& { return c.case_study.irq.ctx_switch; });
        m["case_study.irq.tail_chain"] =
            uint_ref([](ScenarioConfig& c) -> auto& { return c.case_study.irq.tail_chain; });
        m["case_study.irq.rtos_tick_overhead"] =
            uint_ref([](ScenarioConfig& c) -> auto& { return c.case_study.irq.rtos_tick_overhead; });
        m["case_study.msg.t_isr"] = uint_ref([](ScenarioConfig& c) -> auto& { return c.case_study.msg.t_isr; });
        m["case_study.msg.t_isr_to_dec"] =
            uint_ref([](ScenarioConfig& c) -> auto& { return c.case_study.msg.t_isr_to_dec; });
        return m;
    }();
    return table;
}

}  // namespace detail

/// Builds a validated scenario from parsed entries. Unknown keys are rejected.
inline ScenarioConfig scenario_from_toml(const TomlTable& table) {
    ScenarioConfig cfg;
    const auto& setters = detail::setters();
    for (const auto& [key, entry] : table) {
        auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError("unknown key", key, entry.line);
        it->second(cfg, entry, key);
    }
    validate(cfg);
    return cfg;
}

inline ScenarioConfig parse_config_text(std::string_view text) { return scenario_from_toml(parse_toml(text)); }

inline ScenarioConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

namespace detail {

inline std::string fmt_double(double d) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
    std::string s(buf, p);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

template <typename T>
std::string fmt_list(const std::vector<T>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s + "]";
}

}  // namespace detail

/// Writes every field of `cfg`; parse_config_text(to_toml(cfg)) == cfg.
inline std::string to_toml(const ScenarioConfig& cfg) {
    std::ostringstream o;
    auto b = [](bool v) { return v ? "true" : "false"; };
    o << "interface = \"" << to_string(cfg.iface) << "\"\n";
    o << "workload = \"" << to_string(cfg.workload) << "\"\n";
    o << "seed = " << cfg.seed << "\n";
    o << "clock_hz = " << detail::fmt_double(cfg.clock_hz) << "\n";
    o << "t_mem_cycles = " << cfg.t_mem_cycles << "\n";
    const auto& d = cfg.d2d;
    o << "\n[d2d]\n";
    o << "ch = " << d.ch << "\nln = " << d.ln << "\ncrd = " << d.crd << "\nddr = " << b(d.ddr) << "\n";
    o << "t_delta_cycles = " << d.t_delta_cycles << "\ncdc_latency_cycles = " << d.cdc_latency_cycles << "\n";
    o << "cg_latency_cycles = " << d.cg_latency_cycles << "\nphase_shift_deg = " << d.phase_shift_deg << "\n";
    o << "credit_threshold = " << d.credit_threshold << "\n";
    const auto& s = cfg.sweep;
    o << "\n[sweep]\n";
    o << "burst_bytes = " << detail::fmt_list(s.burst_bytes) << "\n";
    o << "crd = " << detail::fmt_list(s.crd) << "\n";
    o << "directions = [";
    for (std::size_t i = 0; i < s.directions.size(); ++i) o << (i ? ", " : "") << '"' << to_string(s.directions[i]) << '"';
    o << "]\n";
    o << "repeats = " << s.repeats << "\nwarmup_cycles = " << s.warmup_cycles << "\nwindow_cycles = " << s.window_cycles
      << "\ninclude_baseline = " << b(s.include_baseline) << "\n";
    const auto& c = cfg.case_study;
    o << "\n[case_study]\n";
    o << "n_cores = " << detail::fmt_list(c.n_cores) << "\n";
    o << "compute_budget = " << detail::fmt_list(c.compute_budget) << "\n";
    o << "crd = " << detail::fmt_list(c.crd) << "\n";
    o << "sensor_regs = " << c.sensor_regs << "\nsensor_reg_bytes = " << c.sensor_reg_bytes << "\n";
    o << "sensor_base = " << c.sensor_base << "\nactuator_base = " << c.actuator_base << "\n";
    o << "sensor_ids = " << c.sensor_ids << "\nt_short = " << c.t_short << "\nt_long = " << c.t_long << "\n";
    o << "io_cycles = " << c.io_cycles << "\nfastirq = " << b(c.fastirq) << "\n";
    o << "dma_prog_mode = \"" << to_string(c.dma_prog.mode) << "\"\nt_single_prog = " << c.dma_prog.t_single_prog
      << "\n";
    o << "\n[case_study.irq]\n";
    o << "clic_to_isr_fast = " << c.irq.clic_to_isr_fast << "\nclic_to_isr_vanilla = " << c.irq.clic_to_isr_vanilla
      << "\nraw_irq_latency_fast = " << c.irq.raw_irq_latency_fast << "\nctx_switch = " << c.irq.ctx_switch
      << "\ntail_chain = " << c.irq.tail_chain << "\nrtos_tick_overhead = " << c.irq.rtos_tick_overhead << "\n";
    o << "\n[case_study.msg]\n";
    o << "t_isr = " << c.msg.t_isr << "\nt_isr_to_dec = " << c.msg.t_isr_to_dec << "\n";
    return o.str();
}

}  // namespace d2dsim
