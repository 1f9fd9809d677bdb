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

// Cycle-stepped simulation kernel.
//
// Every step runs in two phases. In the evaluate phase each component drives
// its outputs (valid + payload, ready) from state it committed in earlier
// cycles. The kernel then resolves every handshake channel, and in the commit
// phase components update their state from what fired. Since nothing a
// component reads during evaluate was written in the same cycle, the order in
// which components are registered never changes the result.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace d2dsim {

using Cycle = std::uint64_t;

inline constexpr Cycle kDefaultDeadlockCap = 10'000'000;

class SimError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TimeoutExceeded : public SimError {
public:
    explicit TimeoutExceeded(Cycle at)
        : SimError("simulation did not complete within " + std::to_string(at) + " cycles"), cycle_(at) {}
    Cycle cycle() const noexcept { return cycle_; }

private:
    Cycle cycle_;
};

class HandshakeViolation : public SimError {
public:
    using SimError::SimError;
};

class DivisionByZero : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct ClockDomain {
    std::string name;
    double frequency_hz = 0.0;
};

/// Per-interface counters. Utilization and throughput derive from these.
struct SimStats {
    std::uint64_t busy_cycles = 0;
    std::uint64_t total_cycles = 0;
    std::uint64_t payload_bits = 0;

    bool operator==(const SimStats&) const = default;
};

/// Fraction of the interface's bit capacity that carried payload.
inline double utilization(const SimStats& stats, unsigned width_bits) {
    if (stats.total_cycles == 0) throw DivisionByZero("utilization over zero cycles");
    if (width_bits == 0) throw std::invalid_argument("interface width must be positive");
    const double capacity = static_cast<double>(width_bits) * static_cast<double>(stats.total_cycles);
    const double alpha = static_cast<double>(stats.payload_bits) / capacity;
    if (alpha > 1.0) throw std::logic_error("payload exceeds interface capacity");
    return alpha;
}

class ChannelBase {
public:
    explicit ChannelBase(std::string name) : name_(std::move(name)) {}
    virtual ~ChannelBase() = default;
    ChannelBase(const ChannelBase&) = delete;
    ChannelBase& operator=(const ChannelBase&) = delete;

    const std::string& name() const noexcept { return name_; }

    virtual void begin_cycle() = 0;
    virtual void resolve(Cycle now) = 0;

private:
    std::string name_;
};

/// Valid/ready pair carrying one payload per transfer.
///
/// A payload transfers in the cycle where valid and ready are both high.
/// Once a payload has been offered without being accepted, the producer must
/// offer the identical payload again in the next cycle; resolve() throws
/// HandshakeViolation otherwise.
template <typename P>
class HandshakeChannel final : public ChannelBase {
public:
    using ChannelBase::ChannelBase;

    void drive(P payload) { payload_ = std::move(payload); }
    void set_ready(bool ready) { ready_ = ready; }

    bool valid() const noexcept { return payload_.has_value(); }
    bool ready() const noexcept { return ready_; }
    const P& payload() const { return *payload_; }
    const std::optional<P>& offered() const noexcept { return payload_; }

    /// True after resolve() when the payload transferred this cycle.
    bool fired() const noexcept { return fired_; }

    void begin_cycle() override {
        payload_.reset();
        ready_ = false;
        fired_ = false;
    }

    void resolve(Cycle now) override {
        if (held_) {
            if (!payload_ || !(*payload_ == *held_)) {
                throw HandshakeViolation("channel '" + name() + "' retracted or changed a stalled payload at cycle " +
                                         std::to_string(now));
            }
        }
        fired_ = payload_.has_value() && ready_;
        if (payload_ && !ready_) {
            held_ = payload_;
        } else {
            held_.reset();
        }
    }

private:
    std::optional<P> payload_;
    std::optional<P> held_;
    bool ready_ = false;
    bool fired_ = false;
};

class Component {
public:
    virtual ~Component() = default;
    virtual void evaluate(Cycle now) = 0;
    virtual void commit(Cycle now) = 0;
};

/// Counts handshakes on one channel. The width function reports how many
/// payload bits a fired transfer delivered.
class Probe {
public:
    virtual ~Probe() = default;
    virtual void sample() = 0;
    const SimStats& stats() const noexcept { return stats_; }
    void reset() noexcept { stats_ = {}; }

protected:
    SimStats stats_;
};

template <typename P>
class ChannelProbe final : public Probe {
public:
    ChannelProbe(const HandshakeChannel<P>& channel, std::function<unsigned(const P&)> bits)
        : channel_(channel), bits_(std::move(bits)) {}

    void sample() override {
        ++stats_.total_cycles;
        if (channel_.fired()) {
            ++stats_.busy_cycles;
            stats_.payload_bits += bits_(channel_.payload());
        }
    }

private:
    const HandshakeChannel<P>& channel_;
    std::function<unsigned(const P&)> bits_;
};

struct Snapshot {
    Cycle cycle = 0;
    std::map<std::string, SimStats> probes;

    const SimStats& at(const std::string& name) const { return probes.at(name); }
};

/// Owns components, channels and probes of one simulation instance.
///
/// Components belong to a clock domain. The kernel advances a base tick whose
/// frequency is the least common multiple of all registered domain
/// frequencies; a component with frequency f is stepped every base/f ticks.
/// Frequencies must be integral in Hz so the ratios stay exact.
class Simulation {
public:
    using DomainId = std::size_t;

    Simulation() { domains_.push_back({"base", 1.0, 1}); }
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    DomainId add_domain(const ClockDomain& domain) {
        if (!(domain.frequency_hz > 0.0)) throw std::invalid_argument("clock frequency must be positive");
        const auto hz = static_cast<std::uint64_t>(domain.frequency_hz);
        if (static_cast<double>(hz) != domain.frequency_hz)
            throw std::invalid_argument("clock frequency must be an integral number of Hz");
        if (now_ != 0) throw std::logic_error("domains must be added before the first step");
        custom_domains_ = true;
        domains_.push_back({domain.name, domain.frequency_hz, 1});
        hz_.push_back(hz);
        std::uint64_t base = 1;
        for (auto f : hz_) base = std::lcm(base, f);
        base_hz_ = base;
        for (std::size_t i = 0; i < hz_.size(); ++i) domains_[i + 1].divider = base / hz_[i];
        return domains_.size() - 1;
    }

    double base_frequency_hz() const noexcept { return custom_domains_ ? static_cast<double>(base_hz_) : 1.0; }
    std::uint64_t divider(DomainId id) const { return domains_.at(id).divider; }

    template <typename P>
    HandshakeChannel<P>& make_channel(std::string name, DomainId domain = 0) {
        auto ch = std::make_unique<HandshakeChannel<P>>(std::move(name));
        auto& ref = *ch;
        channels_.push_back({std::move(ch), domain});
        return ref;
    }

    template <typename C, typename... Args>
    C& add(Args&&... args) {
        return add_in_domain<C>(0, std::forward<Args>(args)...);
    }

    template <typename C, typename... Args>
    C& add_in_domain(DomainId domain, Args&&... args) {
        auto c = std::make_unique<C>(std::forward<Args>(args)...);
        auto& ref = *c;
        components_.push_back({std::move(c), domain});
        return ref;
    }

    template <typename P>
    Probe& probe(const std::string& name, const HandshakeChannel<P>& channel,
                 std::function<unsigned(const P&)> bits) {
        auto p = std::make_unique<ChannelProbe<P>>(channel, std::move(bits));
        auto& ref = *p;
        probes_.emplace(name, std::move(p));
        return ref;
    }

    /// Called after every commit phase; used for invariant checks and tracing.
    void add_observer(std::function<void(Cycle)> observer) { observers_.push_back(std::move(observer)); }

    Cycle now() const noexcept { return now_; }

    Cycle step() {
        const Cycle tick = now_;
        auto active = [&](DomainId d) { return tick % domains_[d].divider == 0; };
        for (auto& [ch, d] : channels_)
            if (active(d)) ch->begin_cycle();
        for (auto& [c, d] : components_)
            if (active(d)) c->evaluate(tick);
        for (auto& [ch, d] : channels_)
            if (active(d)) ch->resolve(tick);
        for (auto& [c, d] : components_)
            if (active(d)) c->commit(tick);
        for (auto& [name, p] : probes_) p->sample();
        for (auto& obs : observers_) obs(tick);
        return ++now_;
    }

    Snapshot snapshot() const {
        Snapshot s;
        s.cycle = now_;
        for (const auto& [name, p] : probes_) s.probes.emplace(name, p->stats());
        return s;
    }

    void reset_probes() {
        for (auto& [name, p] : probes_) p->reset();
    }

    /// Advances until `limit`. Returns immediately when already there.
    Snapshot run_until(Cycle limit) {
        while (now_ < limit) step();
        return snapshot();
    }

    /// Advances until `done()` holds. Throws TimeoutExceeded at `cap`.
    Snapshot run_until(const std::function<bool()>& done, Cycle cap = kDefaultDeadlockCap) {
        while (!done()) {
            if (now_ >= cap) throw TimeoutExceeded(now_);
            step();
        }
        return snapshot();
    }

private:
    struct Domain {
        std::string name;
        double frequency_hz;
        std::uint64_t divider;
    };

    std::vector<Domain> domains_;
    std::vector<std::uint64_t> hz_;
    std::uint64_t base_hz_ = 1;
    bool custom_domains_ = false;
    std::vector<std::pair<std::unique_ptr<ChannelBase>, DomainId>> channels_;
    std::vector<std::pair<std::unique_ptr<Component>, DomainId>> components_;
    std::map<std::string, std::unique_ptr<Probe>> probes_;
    std::vector<std::function<void(Cycle)>> observers_;
    Cycle now_ = 0;
};

}  // namespace d2dsim
