// mcsc - mixed-criticality superposition coding for RIS-assisted THz links
// Copyright (C) 2026 The mcsc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#ifndef MCSC_QUEUE_SIM_HPP
#define MCSC_QUEUE_SIM_HPP

#include "mcsc/link_model.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace mcsc {

/// Fluid queue lengths in packets, after the arrivals of slot `slot`.
struct QueueState
{
    double q_h = 0.0;
    double q_l = 0.0;
    long long slot = 0;
};

struct SlotRecord
{
    long long a_h = 0;
    long long a_l = 0;
    double s_h = 0.0; // offered service, zero in outage
    double s_l = 0.0;
    int beta_d = 1;
    int beta_r = 1;
    double q_h = 0.0;
    double q_l = 0.0;
};

struct QueueTrace
{
    std::vector<SlotRecord> records;
    std::uint64_t seed = 0;
    std::uint64_t scenario_digest = 0;
    double slot_duration = 0.1;
};

struct DelayStats
{
    // Absent when the class receives no traffic.
    std::optional<double> tau_h_slots;
    std::optional<double> tau_h_seconds;
    std::optional<double> tau_l_slots;
    std::optional<double> tau_l_seconds;
    double mean_q_h = 0.0;
    double mean_q_l = 0.0;
    bool stable_h = true;
    bool stable_l = true;

    bool stable() const { return stable_h && stable_l; }
    /// Little's law over the pooled queue, absent when there is no traffic.
    std::optional<double> overall_slots(double arrival) const;
};

/// Per-packet criticality draw: (a_h, a_l) with a_h ~ Binomial(total, alpha).
std::pair<long long, long long> classify_arrivals(long long total, double alpha, Rng &rng);

/// One slot of Q <- max(Q - service, 0) + arrivals for both classes. HC is
/// served only through the RIS path (beta_r), LC only through the LOS path
/// (beta_d). Rates in bit/s, slot duration in s, packet size in bit.
QueueState step_queues(const QueueState &state, std::pair<long long, long long> arrivals, const BlockageState &b,
                       const RatePair &rates, double slot_duration, double packet_size);

/// Poisson(arrival_rate) arrivals classified with scenario.alpha, blockage
/// drawn per slot, queues starting empty. Deterministic in `seed`.
QueueTrace run_simulation(const ScenarioParams &scenario, const RatePair &rates, long long slots,
                          std::uint64_t seed);

/// Little's-law delays over the trace after a 10% warm-up.
///
/// A queue is flagged diverging when the least-squares rise of its length
/// over the second half of the trace exceeds twice the standard deviation of
/// that half.
DelayStats mean_delay(const QueueTrace &trace, double alpha, double arrival);

/// FNV-1a over the shortest round-trip text of every scenario field.
std::uint64_t scenario_digest(const ScenarioParams &scenario);

} // namespace mcsc

#endif
