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


#ifndef MCSC_OMA_BASELINE_HPP
#define MCSC_OMA_BASELINE_HPP

#include "mcsc/link_model.hpp"

namespace mcsc {

/// Time-sharing baseline: a fraction tau of each slot carries HC data over the
/// RIS beam, the rest carries LC data over the LOS beam, each at full power.
struct OmaResult
{
    double tau = 0.0;
    RatePair rates; // bit/s averaged over the slot
    double delta_h = 0.0;
    double delta_l = 0.0;
    double objective = 0.0;
};

/// With `lc_ris_assist` the LC phase also receives the RIS beam, the two
/// amplitudes adding coherently.
RatePair oma_rates(double tau, const ScenarioParams &scenario, bool lc_ris_assist = false);

/// tau in [0, 1] maximizing min{alpha dh, (1 - alpha) dl}, zero-weight terms
/// dropped. Both gaps are affine in tau, so the optimum is the equalizing
/// point or an endpoint.
OmaResult oma_optimize(const ScenarioParams &scenario, double alpha, double arrival, bool lc_ris_assist = false);

struct OmaArrival
{
    double a_star = 0.0;
    OmaResult solution; // at a_star
};

/// Largest arrival rate with both gaps nonnegative for some tau:
/// 1 / (alpha / c_h + (1 - alpha) / c_l) with c the full-slot capacities in
/// packets per slot.
OmaArrival oma_max_feasible_arrival(const ScenarioParams &scenario, double alpha, bool lc_ris_assist = false);

} // namespace mcsc

#endif
