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

#ifndef MCSC_POWER_ALLOCATION_HPP
#define MCSC_POWER_ALLOCATION_HPP

#include "mcsc/convex_kernel.hpp"
#include "mcsc/link_model.hpp"

#include <functional>
#include <string>
#include <vector>

namespace mcsc {

/// Which coefficient multiplies the LOS-beam powers inside the HC quadratic
/// transform. `consistent` uses N_B eta_d^2, matching the pencil-beam SINR.
/// `literal` uses N_B N_R eta_r^2 there and exists only for comparison runs.
enum class TransformForm
{
    consistent,
    literal,
};

/// Quadratic-transform auxiliaries: HC with the LOS path blocked, HC with the
/// LOS path available, and LC.
struct AuxiliaryMu
{
    double h0 = 0.0;
    double h1 = 0.0;
    double l = 0.0;

    double hc(int beta_d) const { return beta_d != 0 ? h1 : h0; }
};

/// gamma_h - 2 mu sqrt(S_h) + mu^2 (I_h + sigma^2), with S_h, I_h the HC
/// signal and interference powers at the given LOS state and RIS available.
double g_h(const PowerAllocation &p, double gamma_h, double mu, int beta_d, const LinkGains &gains, int n_bs,
           int n_ris, TransformForm form = TransformForm::consistent);

/// gamma_l - 2 mu sqrt(S_l) + mu^2 sigma^2 with both paths available.
double g_l(const PowerAllocation &p, double gamma_l, double mu, const LinkGains &gains, int n_bs, int n_ris);

/// Minimizers of g_h (both LOS states) and g_l over mu for fixed powers.
AuxiliaryMu optimal_mu(const PowerAllocation &p, const LinkGains &gains, int n_bs, int n_ris,
                       TransformForm form = TransformForm::consistent);

/// min{alpha dh, (1 - alpha) dl}, dropping a term whose weight is zero.
double weighted_gap(double alpha, double delta_h, double delta_l);

struct PowerObjective
{
    double r_h = 0.0; // bit/s, decodable with the LOS path blocked
    double r_l = 0.0; // bit/s
    double delta_h = 0.0; // packets/slot
    double delta_l = 0.0;
    double objective = 0.0;
};

/// Closed-form rates, stability gaps and weighted objective for fixed powers.
PowerObjective objective_for_powers(const PowerAllocation &p, const ScenarioParams &scenario, double alpha,
                                    double arrival);

struct ScaOptions
{
    TransformForm form = TransformForm::consistent;
    int max_iterations = 100;
    /// Stop when |f_k+1 - f_k| < tolerance * max(1, |f_k|), f in packets/slot.
    double tolerance = 1e-6;
    kernel::Tolerances kernel{};
};

struct SolveResult
{
    PowerAllocation powers;
    double r_h = 0.0;
    double r_l = 0.0;
    double delta_h = 0.0;
    double delta_l = 0.0;
    double gamma_h = 0.0;
    double gamma_l = 0.0;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    /// Objective of the initial point followed by every accepted iterate.
    std::vector<double> history;
    /// Status of the last subproblem solve.
    kernel::KernelStatus kernel_status = kernel::KernelStatus::converged;
    /// Subproblems that stopped short of the KKT tolerance. Their iterates are
    /// still accepted when they improve the objective.
    int inexact_subproblems = 0;
    /// "ok" or a short description of why the result is not certified.
    std::string status = "ok";
};

/// Alternating quadratic-transform / convex-subproblem power allocation,
/// started from an equal split of the power budget.
///
/// The stability gaps are free inside the subproblem, so an unstable arrival
/// rate shows up as a negative objective rather than an infeasible program.
SolveResult sca_power_allocation(const ScenarioParams &scenario, double alpha, double arrival,
                                 const ScaOptions &options = {});

struct OracleResult
{
    PowerAllocation best;
    double objective = 0.0;
    long long evaluated = 0;
};

/// Exhaustive search of the simplex grid {p : p_i = k_i P/(n-1), sum <= P}.
OracleResult brute_force_oracle(const ScenarioParams &scenario, double alpha, double arrival, int grid_n);

/// Largest arrival in [0, upper] for which `feasible` holds, assuming a
/// feasible prefix. Stops at relative width 1e-4 (absolute 1e-6 upper).
double largest_feasible_arrival(const std::function<bool(double)> &feasible, double upper, int *steps = nullptr);

/// 2 (T/M) B log2(1 + full-power single-stream SNR).
double arrival_upper_bound(const ScenarioParams &scenario);

struct ArrivalSearch
{
    double a_star = 0.0;
    SolveResult solution; // solve at a_star
    int steps = 0;
};

/// Maximum arrival rate for which both queues can be kept mean-stable.
ArrivalSearch max_feasible_arrival(const ScenarioParams &scenario, double alpha, const ScaOptions &options = {});

} // namespace mcsc

#endif
