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

#include "mcsc/power_allocation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mcsc {

namespace {

constexpr double kSqrtFloor = 1e-30;
constexpr double kLn2 = 0.69314718055994530942;

// Received-power coefficients per unit transmit power, in any consistent unit
// system: either physical (W) or normalized to P_max and sigma^2.
struct Coefficients
{
    double direct;    // N_B eta_d^2
    double reflected; // N_B N_R eta_r^2
    double hc_direct; // coefficient of LOS-beam powers inside the HC transform
    double noise;
};

Coefficients physical(const LinkGains &gains, int n_bs, int n_ris, TransformForm form)
{
    const double direct = n_bs * gains.eta_d * gains.eta_d;
    const double reflected = static_cast<double>(n_bs) * n_ris * gains.eta_r * gains.eta_r;
    return {direct, reflected, form == TransformForm::literal ? reflected : direct, gains.noise};
}

Coefficients normalized(const ScenarioParams &scenario, TransformForm form)
{
    const LinkGains gains = link_gains(scenario);
    Coefficients c = physical(gains, scenario.n_bs, scenario.n_ris, form);
    const double s = scenario.max_power / gains.noise;
    return {c.direct * s, c.reflected * s, c.hc_direct * s, 1.0};
}

// Linear forms over (p_h_d, p_h_r, p_l_d, p_l_r).
using Vec4 = std::array<double, 4>;

double dot(const Vec4 &a, const Vec4 &p) { return a[0] * p[0] + a[1] * p[1] + a[2] * p[2] + a[3] * p[3]; }

Vec4 as_vec(const PowerAllocation &p) { return {p.p_h_d, p.p_h_r, p.p_l_d, p.p_l_r}; }

struct Ratio
{
    Vec4 signal;
    Vec4 interference;
    double noise;
};

Ratio hc_ratio(const Coefficients &c, int beta_d)
{
    return {{beta_d * c.hc_direct, c.reflected, 0.0, 0.0}, {0.0, 0.0, beta_d * c.hc_direct, c.reflected}, c.noise};
}

Ratio lc_ratio(const Coefficients &c)
{
    return {{0.0, 0.0, c.direct, c.reflected}, {0.0, 0.0, 0.0, 0.0}, c.noise};
}

double transform(const Ratio &r, const Vec4 &p, double target, double mu)
{
    const double s = std::max(dot(r.signal, p), kSqrtFloor);
    return target - 2.0 * mu * std::sqrt(s) + mu * mu * (dot(r.interference, p) + r.noise);
}

double best_mu(const Ratio &r, const Vec4 &p)
{
    return std::sqrt(std::max(dot(r.signal, p), 0.0)) / (dot(r.interference, p) + r.noise);
}

struct Evaluation
{
    double se_h, se_l; // bit/s/Hz
};

// Pencil-beam rates in bit/s/Hz for normalized powers.
Evaluation spectral_rates(const Coefficients &c, const Vec4 &p)
{
    const double lc_signal = c.direct * p[2] + c.reflected * p[3];
    const double hc_blocked = c.reflected * p[1] / (c.reflected * p[3] + c.noise);
    const double hc_open = (c.direct * p[0] + c.reflected * p[1]) / (lc_signal + c.noise);
    return {std::log2(1.0 + std::min(hc_blocked, hc_open)), std::log2(1.0 + lc_signal / c.noise)};
}

struct Gaps
{
    double delta_h, delta_l, objective;
};

Gaps gaps(const ScenarioParams &s, double alpha, double arrival, const Evaluation &e)
{
    const double kappa = s.packets_per_se();
    const double dh = (1.0 - s.q_r) * kappa * e.se_h - alpha * arrival;
    const double dl = (1.0 - s.q_d) * kappa * e.se_l - (1.0 - alpha) * arrival;
    return {dh, dl, weighted_gap(alpha, dh, dl)};
}

// Subproblem variable layout.
enum Var : int
{
    kDeltaH = 0,
    kDeltaL,
    kPhd,
    kPhr,
    kPld,
    kPlr,
    kRh,
    kRl,
    kGammaH,
    kGammaL,
    kVarCount
};

kernel::SmoothFunction transform_constraint(const Ratio &r, double mu, int gamma_index)
{
    return [r, mu, gamma_index](const Eigen::VectorXd &x) {
        kernel::FunctionEval e;
        const Vec4 p{x(kPhd), x(kPhr), x(kPld), x(kPlr)};
        const double s = std::max(dot(r.signal, p), kSqrtFloor);
        const double root = std::sqrt(s);
        e.value = x(gamma_index) - 2.0 * mu * root + mu * mu * (dot(r.interference, p) + r.noise);
        e.gradient = Eigen::VectorXd::Zero(kVarCount);
        e.hessian = Eigen::MatrixXd::Zero(kVarCount, kVarCount);
        e.gradient(gamma_index) = 1.0;
        const double curvature = 0.5 * mu / (s * root);
        for (int i = 0; i < 4; ++i)
        {
            e.gradient(kPhd + i) = -mu * r.signal[i] / root + mu * mu * r.interference[i];
            for (int j = 0; j < 4; ++j)
                e.hessian(kPhd + i, kPhd + j) = curvature * r.signal[i] * r.signal[j];
        }
        return e;
    };
}

// r - log2(1 + gamma) <= 0
kernel::SmoothFunction rate_constraint(int rate_index, int gamma_index)
{
    return [rate_index, gamma_index](const Eigen::VectorXd &x) {
        kernel::FunctionEval e;
        e.gradient = Eigen::VectorXd::Zero(kVarCount);
        e.hessian = Eigen::MatrixXd::Zero(kVarCount, kVarCount);
        const double arg = 1.0 + x(gamma_index);
        if (!(arg > 0.0))
        {
            e.value = std::numeric_limits<double>::infinity();
            return e;
        }
        e.value = x(rate_index) - std::log2(arg);
        e.gradient(rate_index) = 1.0;
        e.gradient(gamma_index) = -1.0 / (arg * kLn2);
        e.hessian(gamma_index, gamma_index) = 1.0 / (arg * arg * kLn2);
        return e;
    };
}

Eigen::VectorXd unit(int index, double value)
{
    Eigen::VectorXd v = Eigen::VectorXd::Zero(kVarCount);
    v(index) = value;
    return v;
}

} // namespace

double g_h(const PowerAllocation &p, double gamma_h, double mu, int beta_d, const LinkGains &gains, int n_bs,
           int n_ris, TransformForm form)
{
    return transform(hc_ratio(physical(gains, n_bs, n_ris, form), beta_d), as_vec(p), gamma_h, mu);
}

double g_l(const PowerAllocation &p, double gamma_l, double mu, const LinkGains &gains, int n_bs, int n_ris)
{
    return transform(lc_ratio(physical(gains, n_bs, n_ris, TransformForm::consistent)), as_vec(p), gamma_l, mu);
}

AuxiliaryMu optimal_mu(const PowerAllocation &p, const LinkGains &gains, int n_bs, int n_ris, TransformForm form)
{
    const Coefficients c = physical(gains, n_bs, n_ris, form);
    const Vec4 v = as_vec(p);
    return {best_mu(hc_ratio(c, 0), v), best_mu(hc_ratio(c, 1), v), best_mu(lc_ratio(c), v)};
}

double weighted_gap(double alpha, double delta_h, double delta_l)
{
    if (alpha <= 0.0)
        return delta_l;
    if (alpha >= 1.0)
        return delta_h;
    return std::min(alpha * delta_h, (1.0 - alpha) * delta_l);
}

PowerObjective objective_for_powers(const PowerAllocation &p, const ScenarioParams &scenario, double alpha,
                                    double arrival)
{
    const Coefficients c = normalized(scenario, TransformForm::consistent);
    const Evaluation e = spectral_rates(c, as_vec(p.scaled(1.0 / scenario.max_power)));
    const Gaps g = gaps(scenario, alpha, arrival, e);
    return {e.se_h * scenario.bandwidth, e.se_l * scenario.bandwidth, g.delta_h, g.delta_l, g.objective};
}

SolveResult sca_power_allocation(const ScenarioParams &scenario, double alpha, double arrival,
                                 const ScaOptions &options)
{
    scenario.validate();
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("sca_power_allocation: alpha must lie in [0, 1]");
    if (!(arrival >= 0.0))
        throw std::invalid_argument("sca_power_allocation: arrival must be >= 0");

    const Coefficients transform_coeffs = normalized(scenario, options.form);
    const Coefficients rate_coeffs = normalized(scenario, TransformForm::consistent);
    const double kappa = scenario.packets_per_se();
    const double hc_load = alpha * arrival / kappa; // bit/s/Hz
    const double lc_load = (1.0 - alpha) * arrival / kappa;
    const double rate_floor = -1.0;
    const double hc_gap_floor = -hc_load - 2.0;
    const double lc_gap_floor = -lc_load - 2.0;

    Vec4 p{0.25, 0.25, 0.25, 0.25};
    auto true_objective = [&](const Vec4 &q) { return gaps(scenario, alpha, arrival, spectral_rates(rate_coeffs, q)); };

    SolveResult result;
    double current = true_objective(p).objective;
    result.history.push_back(current);
    double last_gamma_h = 0.0, last_gamma_l = 0.0;

    for (int it = 0; it < options.max_iterations; ++it)
    {
        const Ratio h0 = hc_ratio(transform_coeffs, 0);
        const Ratio h1 = hc_ratio(transform_coeffs, 1);
        const Ratio lc = lc_ratio(transform_coeffs);
        const double mu_h0 = best_mu(h0, p), mu_h1 = best_mu(h1, p), mu_l = best_mu(lc, p);

        kernel::MaxMinProblem sub;
        sub.dimension = kVarCount;
        if (alpha > 0.0)
            sub.objective_terms.push_back(kernel::affine(unit(kDeltaH, alpha), 0.0));
        if (alpha < 1.0)
            sub.objective_terms.push_back(kernel::affine(unit(kDeltaL, 1.0 - alpha), 0.0));

        Eigen::VectorXd stab_h = unit(kDeltaH, 1.0);
        stab_h(kRh) = -(1.0 - scenario.q_r);
        Eigen::VectorXd stab_l = unit(kDeltaL, 1.0);
        stab_l(kRl) = -(1.0 - scenario.q_d);
        Eigen::VectorXd budget = Eigen::VectorXd::Zero(kVarCount);
        budget.segment(kPhd, 4).setOnes();

        sub.constraints.push_back(kernel::affine(stab_h, hc_load));
        sub.constraints.push_back(kernel::affine(stab_l, lc_load));
        sub.constraints.push_back(kernel::affine(budget, -1.0));
        sub.constraints.push_back(rate_constraint(kRh, kGammaH));
        sub.constraints.push_back(rate_constraint(kRl, kGammaL));
        sub.constraints.push_back(transform_constraint(h0, mu_h0, kGammaH));
        sub.constraints.push_back(transform_constraint(h1, mu_h1, kGammaH));
        sub.constraints.push_back(transform_constraint(lc, mu_l, kGammaL));
        // Floors keep the free variables bounded; none is active at an optimum.
        sub.constraints.push_back(kernel::affine(unit(kDeltaH, -1.0), hc_gap_floor));
        sub.constraints.push_back(kernel::affine(unit(kDeltaL, -1.0), lc_gap_floor));
        sub.constraints.push_back(kernel::affine(unit(kRh, -1.0), rate_floor));
        sub.constraints.push_back(kernel::affine(unit(kRl, -1.0), rate_floor));

        sub.nonnegative.assign(kVarCount, false);
        for (int i = kPhd; i <= kPlr; ++i)
            sub.nonnegative[static_cast<std::size_t>(i)] = true;

        // Interior start near the current powers; phase I repairs the rest.
        Vec4 ps;
        for (std::size_t i = 0; i < 4; ++i)
            ps[i] = std::max(0.999 * p[i], 1e-12);
        auto bound = [&](const Ratio &r, double mu) { return -transform(r, ps, 0.0, mu); };
        auto inner = [](double b) { return std::max(b - 0.1 * std::abs(b) - 1e-3, -0.4); };
        const double gh = inner(std::min(bound(h0, mu_h0), bound(h1, mu_h1)));
        const double gl = inner(bound(lc, mu_l));
        const double rh = 0.5 * (rate_floor + std::log2(1.0 + gh));
        const double rl = 0.5 * (rate_floor + std::log2(1.0 + gl));
        Eigen::VectorXd start(kVarCount);
        start << 0.5 * (hc_gap_floor + (1.0 - scenario.q_r) * rh - hc_load),
            0.5 * (lc_gap_floor + (1.0 - scenario.q_d) * rl - lc_load), ps[0], ps[1], ps[2], ps[3], rh, rl, gh, gl;
        sub.start = start;

        const kernel::KernelResult kr = kernel::solve_maxmin(sub, options.kernel);
        result.kernel_status = kr.status;
        ++result.iterations;
        if (kr.status == kernel::KernelStatus::max_iterations)
            ++result.inexact_subproblems;
        if (kr.status == kernel::KernelStatus::infeasible_start)
        {
            result.status = "kernel infeasible_start at iteration " + std::to_string(it + 1);
            break;
        }

        Vec4 next{std::max(kr.x(kPhd), 0.0), std::max(kr.x(kPhr), 0.0), std::max(kr.x(kPld), 0.0),
                  std::max(kr.x(kPlr), 0.0)};
        const double total = next[0] + next[1] + next[2] + next[3];
        if (total > 1.0)
            for (double &v : next)
                v /= total;

        const double candidate = true_objective(next).objective;
        if (!(candidate >= current))
        {
            // Barrier suboptimality below the last accepted point: keep it.
            result.converged = true;
            break;
        }
        const double change = candidate - current;
        p = next;
        current = candidate;
        last_gamma_h = kr.x(kGammaH);
        last_gamma_l = kr.x(kGammaL);
        result.history.push_back(current);
        if (change < options.tolerance * std::max(1.0, std::abs(current - change)))
        {
            result.converged = true;
            break;
        }
    }

    const PowerAllocation powers{p[0] * scenario.max_power, p[1] * scenario.max_power, p[2] * scenario.max_power,
                                 p[3] * scenario.max_power};
    const PowerObjective po = objective_for_powers(powers, scenario, alpha, arrival);
    result.powers = powers;
    result.r_h = po.r_h;
    result.r_l = po.r_l;
    result.delta_h = po.delta_h;
    result.delta_l = po.delta_l;
    result.objective = po.objective;
    result.gamma_h = std::max(last_gamma_h, 0.0);
    result.gamma_l = std::max(last_gamma_l, 0.0);
    if (result.status == "ok" && result.kernel_status == kernel::KernelStatus::max_iterations)
        result.status = "kernel max_iterations at iteration " + std::to_string(result.iterations);
    if (!result.converged && result.status == "ok")
        result.status = "sca iteration limit";
    return result;
}

OracleResult brute_force_oracle(const ScenarioParams &scenario, double alpha, double arrival, int grid_n)
{
    if (grid_n < 2)
        throw std::invalid_argument("brute_force_oracle: grid_n must be >= 2");
    scenario.validate();
    const Coefficients c = normalized(scenario, TransformForm::consistent);
    const int steps = grid_n - 1;
    const double h = 1.0 / steps;

    OracleResult out;
    out.objective = -std::numeric_limits<double>::infinity();
    Vec4 best{};
    for (int i = 0; i <= steps; ++i)
        for (int j = 0; i + j <= steps; ++j)
            for (int k = 0; i + j + k <= steps; ++k)
                for (int l = 0; i + j + k + l <= steps; ++l)
                {
                    const Vec4 p{i * h, j * h, k * h, l * h};
                    const double f = gaps(scenario, alpha, arrival, spectral_rates(c, p)).objective;
                    ++out.evaluated;
                    if (f > out.objective)
                    {
                        out.objective = f;
                        best = p;
                    }
                }
    out.best = PowerAllocation{best[0], best[1], best[2], best[3]}.scaled(scenario.max_power);
    return out;
}

double largest_feasible_arrival(const std::function<bool(double)> &feasible, double upper, int *steps)
{
    double lo = 0.0, hi = upper;
    int count = 0;
    if (feasible(hi))
        lo = hi;
    ++count;
    while (hi - lo > std::max(1e-4 * hi, 1e-6 * upper))
    {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid))
            lo = mid;
        else
            hi = mid;
        ++count;
    }
    if (steps)
        *steps = count;
    return lo;
}

double arrival_upper_bound(const ScenarioParams &scenario)
{
    const Coefficients c = normalized(scenario, TransformForm::consistent);
    return 2.0 * scenario.packets_per_se() * std::log2(1.0 + std::max(c.direct, c.reflected));
}

ArrivalSearch max_feasible_arrival(const ScenarioParams &scenario, double alpha, const ScaOptions &options)
{
    ArrivalSearch out;
    bool have = false;
    auto feasible = [&](double arrival) {
        SolveResult r = sca_power_allocation(scenario, alpha, arrival, options);
        if (r.objective >= 0.0)
        {
            if (!have || arrival >= out.a_star)
            {
                out.a_star = arrival;
                out.solution = std::move(r);
                have = true;
            }
            return true;
        }
        return false;
    };
    out.a_star = largest_feasible_arrival(feasible, arrival_upper_bound(scenario), &out.steps);
    if (!have || out.solution.objective < 0.0)
        out.solution = sca_power_allocation(scenario, alpha, out.a_star, options);
    return out;
}

} // namespace mcsc
