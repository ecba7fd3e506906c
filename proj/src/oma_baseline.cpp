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


#include "mcsc/oma_baseline.hpp"

#include "mcsc/power_allocation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcsc {

namespace {

struct FullSlot
{
    double hc; // bit/s
    double lc;
};

FullSlot full_slot_rates(const ScenarioParams &s, bool lc_ris_assist)
{
    const LinkGains g = link_gains(s);
    const double direct = s.n_bs * g.eta_d * g.eta_d * s.max_power / g.noise;
    const double reflected = static_cast<double>(s.n_bs) * s.n_ris * g.eta_r * g.eta_r * s.max_power / g.noise;
    double lc_snr = direct;
    if (lc_ris_assist)
    {
        const double amp = std::sqrt(direct) + std::sqrt(reflected);
        lc_snr = amp * amp;
    }
    return {s.bandwidth * std::log2(1.0 + reflected), s.bandwidth * std::log2(1.0 + lc_snr)};
}

// Full-slot service in packets per slot, availability weighted.
FullSlot capacities(const ScenarioParams &s, bool lc_ris_assist)
{
    const FullSlot r = full_slot_rates(s, lc_ris_assist);
    const double per_bit = s.slot_duration / s.packet_size;
    return {(1.0 - s.q_r) * per_bit * r.hc, (1.0 - s.q_d) * per_bit * r.lc};
}

OmaResult evaluate(double tau, const ScenarioParams &s, double alpha, double arrival, bool lc_ris_assist)
{
    OmaResult out;
    out.tau = tau;
    out.rates = oma_rates(tau, s, lc_ris_assist);
    const double per_bit = s.slot_duration / s.packet_size;
    out.delta_h = (1.0 - s.q_r) * per_bit * out.rates.hc - alpha * arrival;
    out.delta_l = (1.0 - s.q_d) * per_bit * out.rates.lc - (1.0 - alpha) * arrival;
    out.objective = weighted_gap(alpha, out.delta_h, out.delta_l);
    return out;
}

} // namespace

RatePair oma_rates(double tau, const ScenarioParams &scenario, bool lc_ris_assist)
{
    if (!(tau >= 0.0 && tau <= 1.0))
        throw std::invalid_argument("oma_rates: tau must lie in [0, 1]");
    const FullSlot r = full_slot_rates(scenario, lc_ris_assist);
    return {tau * r.hc, (1.0 - tau) * r.lc};
}

OmaResult oma_optimize(const ScenarioParams &scenario, double alpha, double arrival, bool lc_ris_assist)
{
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("oma_optimize: alpha must lie in [0, 1]");
    if (alpha <= 0.0)
        return evaluate(0.0, scenario, alpha, arrival, lc_ris_assist);
    if (alpha >= 1.0)
        return evaluate(1.0, scenario, alpha, arrival, lc_ris_assist);

    // alpha (c_h tau - alpha A) = (1 - alpha) (c_l (1 - tau) - (1 - alpha) A)
    const FullSlot c = capacities(scenario, lc_ris_assist);
    const double beta = 1.0 - alpha;
    const double denom = alpha * c.hc + beta * c.lc;
    double tau = 0.0;
    if (denom > 0.0)
        tau = std::clamp((beta * c.lc - beta * beta * arrival + alpha * alpha * arrival) / denom, 0.0, 1.0);

    OmaResult best = evaluate(tau, scenario, alpha, arrival, lc_ris_assist);
    for (double end : {0.0, 1.0})
    {
        const OmaResult r = evaluate(end, scenario, alpha, arrival, lc_ris_assist);
        if (r.objective > best.objective)
            best = r;
    }
    return best;
}

OmaArrival oma_max_feasible_arrival(const ScenarioParams &scenario, double alpha, bool lc_ris_assist)
{
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("oma_max_feasible_arrival: alpha must lie in [0, 1]");
    const FullSlot c = capacities(scenario, lc_ris_assist);
    double inverse = 0.0;
    if (alpha > 0.0)
        inverse += c.hc > 0.0 ? alpha / c.hc : HUGE_VAL;
    if (alpha < 1.0)
        inverse += c.lc > 0.0 ? (1.0 - alpha) / c.lc : HUGE_VAL;
    OmaArrival out;
    out.a_star = inverse > 0.0 ? 1.0 / inverse : 0.0;
    out.solution = oma_optimize(scenario, alpha, out.a_star, lc_ris_assist);
    return out;
}

} // namespace mcsc
