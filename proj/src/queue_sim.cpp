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


#include "mcsc/queue_sim.hpp"

#include "mcsc/text.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mcsc {

namespace {

constexpr double kWarmupFraction = 0.1;

// Rise of the least-squares line over y[first, last) against twice the
// sample standard deviation of the same window.
bool trending_up(const std::vector<SlotRecord> &records, std::size_t first, double SlotRecord::*field)
{
    const std::size_t n = records.size() - first;
    if (n < 3)
        return false;
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        mean_x += static_cast<double>(i);
        mean_y += records[first + i].*field;
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double dx = static_cast<double>(i) - mean_x;
        const double dy = records[first + i].*field - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    const double rise = sxy / sxx * static_cast<double>(n - 1);
    const double spread = std::sqrt(syy / static_cast<double>(n - 1));
    return rise > 2.0 * spread;
}

} // namespace

std::optional<double> DelayStats::overall_slots(double arrival) const
{
    if (!(arrival > 0.0))
        return std::nullopt;
    return (mean_q_h + mean_q_l) / arrival;
}

std::pair<long long, long long> classify_arrivals(long long total, double alpha, Rng &rng)
{
    if (total < 0 || !(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("classify_arrivals: requires total >= 0 and alpha in [0, 1]");
    std::binomial_distribution<long long> draw(total, alpha);
    const long long a_h = draw(rng);
    return {a_h, total - a_h};
}

QueueState step_queues(const QueueState &state, std::pair<long long, long long> arrivals, const BlockageState &b,
                       const RatePair &rates, double slot_duration, double packet_size)
{
    const double per_bit = slot_duration / packet_size;
    const double s_h = b.beta_r != 0 ? per_bit * rates.hc : 0.0;
    const double s_l = b.beta_d != 0 ? per_bit * rates.lc : 0.0;
    QueueState next;
    next.q_h = std::max(state.q_h - s_h, 0.0) + static_cast<double>(arrivals.first);
    next.q_l = std::max(state.q_l - s_l, 0.0) + static_cast<double>(arrivals.second);
    next.slot = state.slot + 1;
    return next;
}

QueueTrace run_simulation(const ScenarioParams &scenario, const RatePair &rates, long long slots,
                          std::uint64_t seed)
{
    if (slots < 1)
        throw std::invalid_argument("run_simulation: slots must be >= 1");
    scenario.validate();
    if (!(rates.hc >= 0.0 && rates.lc >= 0.0))
        throw std::invalid_argument("run_simulation: rates must be >= 0");

    QueueTrace trace;
    trace.seed = seed;
    trace.scenario_digest = scenario_digest(scenario);
    trace.slot_duration = scenario.slot_duration;
    trace.records.reserve(static_cast<std::size_t>(slots));

    Rng rng(seed);
    std::poisson_distribution<long long> arrivals(scenario.arrival_rate);
    const double per_bit = scenario.slot_duration / scenario.packet_size;
    QueueState state;
    for (long long t = 0; t < slots; ++t)
    {
        const long long total = scenario.arrival_rate > 0.0 ? arrivals(rng) : 0;
        const auto split = classify_arrivals(total, scenario.alpha, rng);
        const BlockageState b = sample_blockage(scenario.q_d, scenario.q_r, rng);
        state = step_queues(state, split, b, rates, scenario.slot_duration, scenario.packet_size);

        SlotRecord r;
        r.a_h = split.first;
        r.a_l = split.second;
        r.s_h = b.beta_r != 0 ? per_bit * rates.hc : 0.0;
        r.s_l = b.beta_d != 0 ? per_bit * rates.lc : 0.0;
        r.beta_d = b.beta_d;
        r.beta_r = b.beta_r;
        r.q_h = state.q_h;
        r.q_l = state.q_l;
        trace.records.push_back(r);
    }
    return trace;
}

DelayStats mean_delay(const QueueTrace &trace, double alpha, double arrival)
{
    if (trace.records.empty())
        throw std::invalid_argument("mean_delay: empty trace");
    const auto &rec = trace.records;
    const auto warmup = static_cast<std::size_t>(kWarmupFraction * static_cast<double>(rec.size()));
    double sum_h = 0.0, sum_l = 0.0;
    for (std::size_t i = warmup; i < rec.size(); ++i)
    {
        sum_h += rec[i].q_h;
        sum_l += rec[i].q_l;
    }
    const auto n = static_cast<double>(rec.size() - warmup);

    DelayStats out;
    out.mean_q_h = sum_h / n;
    out.mean_q_l = sum_l / n;
    const double lambda_h = alpha * arrival;
    const double lambda_l = (1.0 - alpha) * arrival;
    if (lambda_h > 0.0)
    {
        out.tau_h_slots = out.mean_q_h / lambda_h;
        out.tau_h_seconds = *out.tau_h_slots * trace.slot_duration;
    }
    if (lambda_l > 0.0)
    {
        out.tau_l_slots = out.mean_q_l / lambda_l;
        out.tau_l_seconds = *out.tau_l_slots * trace.slot_duration;
    }
    const std::size_t half = rec.size() / 2;
    out.stable_h = !trending_up(rec, half, &SlotRecord::q_h);
    out.stable_l = !trending_up(rec, half, &SlotRecord::q_l);
    return out;
}

std::uint64_t scenario_digest(const ScenarioParams &s)
{
    std::string text;
    for (double v : {s.carrier_frequency, s.bandwidth, s.max_power, s.noise_psd, s.gain_bs, s.gain_ue,
                     static_cast<double>(s.n_bs), static_cast<double>(s.n_ris), s.d_bu, s.d_br, s.d_ru,
                     s.absorption, s.element_length_x, s.element_length_y, s.q_d, s.q_r, s.phi_bu, s.phi_br,
                     s.phi_rb, s.phi_ru, s.alpha, s.packet_size, s.slot_duration, s.arrival_rate})
    {
        text += format_double(v);
        text += ';';
    }
    return fnv1a(text);
}

} // namespace mcsc
