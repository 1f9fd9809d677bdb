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

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace d2dsim {

/// Invalid configuration. Carries the offending key and source line when known.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what, std::string key = {}, std::size_t line = 0)
        : std::invalid_argument(describe(what, key, line)), key_(std::move(key)), line_(line) {}

    const std::string& key() const noexcept { return key_; }
    std::size_t line() const noexcept { return line_; }

private:
    static std::string describe(const std::string& what, const std::string& key, std::size_t line) {
        std::string s;
        if (line != 0) s += "line " + std::to_string(line) + ": ";
        if (!key.empty()) s += "key '" + key + "': ";
        return s + what;
    }

    std::string key_;
    std::size_t line_;
};

/// Parametrization of one die-to-die link (both instances share it).
struct D2DConfig {
    unsigned ch = 8;                  // channels
    unsigned ln = 8;                  // data lanes (bits) per channel
    std::uint32_t crd = 128;          // flow-control credits
    bool ddr = true;
    unsigned t_delta_cycles = 0;      // inter-chiplet wire delay
    unsigned cdc_latency_cycles = 3;  // receive-side synchronizer, 2..3
    unsigned cg_latency_cycles = 1;   // transmit clock gate, fixed
    unsigned phase_shift_deg = 270;   // forwarded-clock phase; informational
    /// Owed credits that trigger a credit-only packet when no payload goes out.
    std::uint32_t credit_threshold = 1;

    bool operator==(const D2DConfig&) const = default;
};

inline void validate(const D2DConfig& c) {
    if (c.ch < 1) throw ConfigError("d2d.ch must be >= 1");
    if (c.ln < 1) throw ConfigError("d2d.ln must be >= 1");
    if (c.ln > 32) throw ConfigError("d2d.ln must be <= 32");
    if (c.crd < 1) throw ConfigError("d2d.crd must be >= 1");
    if (c.cdc_latency_cycles < 2 || c.cdc_latency_cycles > 3) throw ConfigError("d2d.cdc_latency_cycles must be 2 or 3");
    if (c.cg_latency_cycles != 1) throw ConfigError("d2d.cg_latency_cycles is fixed at 1");
    if (c.credit_threshold < 1 || c.credit_threshold > c.crd)
        throw ConfigError("d2d.credit_threshold must be within 1..d2d.crd");
}

}  // namespace d2dsim
