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

#include "mcsc/convex_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mcsc::kernel {

using Eigen::MatrixXd;
using Eigen::VectorXd;

SmoothFunction affine(VectorXd coeffs, double constant)
{
    return [coeffs = std::move(coeffs), constant](const VectorXd &x) {
        FunctionEval e;
        e.value = coeffs.dot(x) + constant;
        e.gradient = coeffs;
        e.hessian = MatrixXd::Zero(x.size(), x.size());
        return e;
    };
}

bool MaxMinProblem::in_box(int j) const
{
    return nonnegative.empty() || nonnegative[static_cast<std::size_t>(j)];
}

int MaxMinProblem::box_count() const
{
    if (nonnegative.empty())
        return dimension;
    return static_cast<int>(std::count(nonnegative.begin(), nonnegative.end(), true));
}

std::string_view to_string(KernelStatus status)
{
    switch (status)
    {
    case KernelStatus::converged:
        return "converged";
    case KernelStatus::max_iterations:
        return "max_iterations";
    case KernelStatus::infeasible_start:
        return "infeasible_start";
    }
    return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Inequalities c_i(z) <= 0 over an extended variable z, evaluated together.
struct Evaluated
{
    VectorXd values;
    MatrixXd gradients; // one column per inequality
    std::vector<MatrixXd> hessians; // empty matrix means zero
    bool finite = true;
};

enum class Mode
{
    epigraph, // z = (x, t), inequalities t - f_k(x), g_i(x), -x_j
    phase1,   // z = (x, s), inequalities g_i(x) - s, -x_j
};

class Inequalities
{
public:
    Inequalities(const MaxMinProblem &problem, Mode mode)
        : problem_(problem), mode_(mode), n_(problem.dimension)
    {
        for (int j = 0; j < n_; ++j)
            if (problem.in_box(j))
                box_.push_back(j);
        count_ = static_cast<int>(box_.size() + problem.constraints.size());
        if (mode_ == Mode::epigraph)
            count_ += static_cast<int>(problem.objective_terms.size());
    }

    int count() const { return count_; }
    int size() const { return n_ + 1; }

    Evaluated evaluate(const VectorXd &z, bool with_second_order = true) const
    {
        const int dim = n_ + 1;
        Evaluated out;
        out.values.resize(count_);
        out.gradients = MatrixXd::Zero(dim, count_);
        if (with_second_order)
            out.hessians.resize(static_cast<std::size_t>(count_));
        const VectorXd x = z.head(n_);
        const double extra = z(n_);
        int i = 0;

        auto put = [&](const FunctionEval &e, double sign, double shift, double extra_grad) {
            out.values(i) = sign * e.value + shift;
            out.gradients.col(i).head(n_) = sign * e.gradient;
            out.gradients(n_, i) = extra_grad;
            if (with_second_order && e.hessian.size() > 0 && !e.hessian.isZero(0.0))
            {
                MatrixXd h = MatrixXd::Zero(dim, dim);
                h.topLeftCorner(n_, n_) = sign * e.hessian;
                out.hessians[static_cast<std::size_t>(i)] = std::move(h);
            }
            if (!std::isfinite(out.values(i)) || !out.gradients.col(i).allFinite())
                out.finite = false;
            ++i;
        };

        if (mode_ == Mode::epigraph)
            for (const auto &term : problem_.objective_terms)
                put(term(x), -1.0, extra, 1.0);
        const double shift = mode_ == Mode::phase1 ? -extra : 0.0;
        const double extra_grad = mode_ == Mode::phase1 ? -1.0 : 0.0;
        for (const auto &g : problem_.constraints)
            put(g(x), 1.0, shift, extra_grad);
        // The box stays hard in phase I so constraint callables are only ever
        // evaluated inside their domain.
        for (int j : box_)
        {
            out.values(i) = -x(j);
            out.gradients(j, i) = -1.0;
            ++i;
        }
        return out;
    }

private:
    const MaxMinProblem &problem_;
    Mode mode_;
    int n_;
    std::vector<int> box_;
    int count_ = 0;
};

bool strictly_feasible(const Evaluated &e)
{
    return e.finite && (e.values.array() < 0.0).all();
}

// phi(z) = weight * cost.z - sum log(-c_i(z))
double barrier_value(const Inequalities &ineq, const VectorXd &cost, double weight, const VectorXd &z)
{
    const Evaluated e = ineq.evaluate(z, false);
    if (!strictly_feasible(e))
        return kInf;
    return weight * cost.dot(z) - (-e.values.array()).log().sum();
}

struct CenterOutcome
{
    int iterations = 0;
    bool stop_requested = false;
};

// Damped Newton on phi. `stop` is polled after every accepted step.
template <typename Stop>
CenterOutcome center(const Inequalities &ineq, const VectorXd &cost, double weight, VectorXd &z,
                     const Tolerances &tol, int budget, Stop &&stop)
{
    CenterOutcome outcome;
    const int dim = ineq.size();
    while (outcome.iterations < budget)
    {
        const Evaluated e = ineq.evaluate(z);
        VectorXd grad = weight * cost;
        MatrixXd hess = MatrixXd::Zero(dim, dim);
        for (int i = 0; i < ineq.count(); ++i)
        {
            const double inv = 1.0 / -e.values(i);
            const auto gi = e.gradients.col(i);
            grad += inv * gi;
            hess.noalias() += (inv * inv) * gi * gi.transpose();
            const auto &hi = e.hessians[static_cast<std::size_t>(i)];
            if (hi.size() > 0)
                hess += inv * hi;
        }

        VectorXd step;
        double slope = 0.0;
        double reg = 0.0;
        const double scale = std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
        for (int attempt = 0; attempt < 12; ++attempt)
        {
            MatrixXd h = hess;
            if (reg > 0.0)
                h.diagonal().array() += reg;
            Eigen::LDLT<MatrixXd> ldlt(h);
            step = ldlt.solve(-grad);
            slope = grad.dot(step);
            if (ldlt.info() == Eigen::Success && step.allFinite() && slope < 0.0)
                break;
            reg = reg == 0.0 ? 1e-14 * scale : reg * 100.0;
            slope = 0.0;
        }
        if (!(slope < 0.0))
            break;
        ++outcome.iterations;
        if (-slope / 2.0 <= tol.newton)
            break;

        const double phi0 = weight * cost.dot(z) - (-e.values.array()).log().sum();
        double s = 1.0;
        double phi = barrier_value(ineq, cost, weight, z + s * step);
        while (!(phi <= phi0 + tol.armijo * s * slope) && s > 1e-20)
        {
            s *= tol.backtrack;
            phi = barrier_value(ineq, cost, weight, z + s * step);
        }
        if (!std::isfinite(phi))
            break;
        if (!(phi <= phi0 + tol.armijo * s * slope))
        {
            // Rounding floor of phi; accept only a strictly improving step.
            if (phi < phi0)
                z += s * step;
            break;
        }
        z += s * step;
        if (stop(z))
        {
            outcome.stop_requested = true;
            break;
        }
    }
    return outcome;
}

double min_objective(const MaxMinProblem &problem, const VectorXd &x)
{
    double t = kInf;
    for (const auto &term : problem.objective_terms)
        t = std::min(t, term(x).value);
    return t;
}

// Returns a strictly feasible x or nothing if phase I proves there is none.
bool phase_one(const MaxMinProblem &problem, VectorXd &x, const Tolerances &tol, int &iterations)
{
    const Inequalities ineq(problem, Mode::phase1);
    const int n = problem.dimension;
    VectorXd z(n + 1);
    z.head(n) = x;
    z(n) = 0.0;
    for (int j = 0; j < n; ++j)
        if (problem.in_box(j) && !(z(j) > 0.0))
            z(j) = 1e-6;
    const Evaluated e0 = ineq.evaluate(z, false);
    if (!e0.finite)
        return false;
    const double worst = e0.values.maxCoeff();
    if (worst < 0.0)
    {
        x = z.head(n);
        return true;
    }
    z(n) = worst + std::max(1.0, std::abs(worst));

    VectorXd cost = VectorXd::Zero(n + 1);
    cost(n) = 1.0;
    const int m = ineq.count();
    auto found = [&](const VectorXd &zz) { return zz(n) < 0.0 && strictly_feasible(ineq.evaluate(zz, false)); };

    double weight = tol.barrier_initial;
    while (iterations < tol.max_newton_total)
    {
        const auto outcome = center(ineq, cost, weight, z, tol, tol.max_newton_per_center, found);
        iterations += outcome.iterations;
        if (outcome.stop_requested || found(z))
        {
            // Re-evaluate the original inequalities with s removed.
            const VectorXd candidate = z.head(n);
            VectorXd probe(n + 1);
            probe.head(n) = candidate;
            probe(n) = 0.0;
            if (strictly_feasible(ineq.evaluate(probe, false)))
            {
                x = candidate;
                return true;
            }
        }
        if (m / weight < tol.gap)
            return false;
        weight *= tol.barrier_growth;
    }
    return false;
}

// Least-squares refit of the barrier multipliers on the constraints they mark
// as active. Central-path estimates carry the centering error of the last
// Newton solve, which at large barrier weights is well above the KKT target.
VectorXd refit_multipliers(const Evaluated &e, const VectorXd &barrier, int n, double cutoff)
{
    const double top = barrier.maxCoeff();
    std::vector<int> active;
    for (int i = 0; i < barrier.size(); ++i)
        if (barrier(i) > cutoff * top)
            active.push_back(i);
    MatrixXd g(n + 1, static_cast<int>(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k)
        g.col(static_cast<int>(k)) = e.gradients.col(active[k]);
    VectorXd rhs = VectorXd::Zero(n + 1);
    rhs(n) = 1.0;
    const VectorXd fit = g.colPivHouseholderQr().solve(rhs);
    VectorXd out = VectorXd::Zero(barrier.size());
    for (std::size_t k = 0; k < active.size(); ++k)
        out(active[k]) = std::max(fit(static_cast<int>(k)), 0.0);
    return out;
}

} // namespace

double max_violation(const MaxMinProblem &problem, const VectorXd &x)
{
    double worst = 0.0;
    for (const auto &g : problem.constraints)
    {
        const double v = g(x).value;
        if (!std::isfinite(v))
            return kInf;
        worst = std::max(worst, v);
    }
    for (int j = 0; j < problem.dimension; ++j)
        if (problem.in_box(j))
            worst = std::max(worst, -x(j));
    return worst;
}

double kkt_residual(const MaxMinProblem &problem, const VectorXd &x, const VectorXd &multipliers)
{
    const Inequalities ineq(problem, Mode::epigraph);
    if (multipliers.size() != ineq.count())
        throw std::invalid_argument("kkt_residual: multiplier count does not match the problem");
    const int n = problem.dimension;
    VectorXd z(n + 1);
    z.head(n) = x;
    z(n) = min_objective(problem, x);
    const Evaluated e = ineq.evaluate(z, false);

    VectorXd stationarity = VectorXd::Zero(n + 1);
    stationarity(n) = -1.0;
    stationarity += e.gradients * multipliers;
    const VectorXd complementarity = multipliers.cwiseProduct(e.values);
    return std::sqrt(stationarity.squaredNorm() + complementarity.squaredNorm());
}

KernelResult solve_maxmin(const MaxMinProblem &problem, const Tolerances &tol)
{
    const int n = problem.dimension;
    if (n <= 0 || problem.start.size() != n)
        throw std::invalid_argument("solve_maxmin: start point does not match the dimension");
    if (problem.objective_terms.empty())
        throw std::invalid_argument("solve_maxmin: at least one objective term is required");
    if (!problem.nonnegative.empty() && static_cast<int>(problem.nonnegative.size()) != n)
        throw std::invalid_argument("solve_maxmin: box mask does not match the dimension");

    KernelResult result;
    VectorXd x = problem.start;
    if (!phase_one(problem, x, tol, result.phase1_iterations))
    {
        result.x = x;
        result.status = KernelStatus::infeasible_start;
        result.objective = min_objective(problem, x);
        result.max_violation = max_violation(problem, x);
        result.kkt_residual = kInf;
        return result;
    }

    const Inequalities ineq(problem, Mode::epigraph);
    const int m = ineq.count();
    VectorXd z(n + 1);
    z.head(n) = x;
    const double fmin = min_objective(problem, x);
    z(n) = fmin - std::max(1.0, 0.1 * std::abs(fmin));
    VectorXd cost = VectorXd::Zero(n + 1);
    cost(n) = -1.0;

    double weight = tol.barrier_initial;
    auto never = [](const VectorXd &) { return false; };
    bool exhausted = false;
    for (;;)
    {
        const int budget = std::min(tol.max_newton_per_center, tol.max_newton_total - result.newton_iterations);
        if (budget <= 0)
        {
            exhausted = true;
            break;
        }
        const auto outcome = center(ineq, cost, weight, z, tol, budget, never);
        result.newton_iterations += outcome.iterations;
        ++result.outer_iterations;
        if (m / weight < tol.gap)
            break;
        weight *= tol.barrier_growth;
    }

    const Evaluated e = ineq.evaluate(z, false);
    const VectorXd barrier = (1.0 / (weight * -e.values.array())).matrix();
    result.x = z.head(n);
    result.objective = min_objective(problem, result.x);
    result.max_violation = max_violation(problem, result.x);
    result.multipliers = barrier;
    result.kkt_residual = kkt_residual(problem, result.x, barrier);
    if (e.finite && barrier.allFinite())
        for (double cutoff : {1e-2, 1e-4, 1e-6, 1e-8})
        {
            const VectorXd refit = refit_multipliers(e, barrier, n, cutoff);
            const double r = kkt_residual(problem, result.x, refit);
            if (r < result.kkt_residual)
            {
                result.multipliers = refit;
                result.kkt_residual = r;
            }
        }
    const bool ok = result.max_violation <= tol.feasibility &&
                    result.kkt_residual <= tol.kkt * std::max(1.0, std::abs(result.objective));
    result.status = (ok && !exhausted) ? KernelStatus::converged : KernelStatus::max_iterations;
    return result;
}

} // namespace mcsc::kernel
