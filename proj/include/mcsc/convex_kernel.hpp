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

#ifndef MCSC_CONVEX_KERNEL_HPP
#define MCSC_CONVEX_KERNEL_HPP

#include <Eigen/Dense>

#include <functional>
#include <string_view>
#include <vector>

namespace mcsc::kernel {

/// Value, gradient and Hessian of a twice differentiable function at a point.
struct FunctionEval
{
    double value = 0.0;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
};

using SmoothFunction = std::function<FunctionEval(const Eigen::VectorXd &)>;

/// coeffs . x + constant
SmoothFunction affine(Eigen::VectorXd coeffs, double constant);

/// Dense max-min program
///
///     maximize   min_k f_k(x)
///     subject to g_i(x) <= 0,  x_j >= 0 for every j with nonnegative[j].
///
/// The f_k must be concave and the g_i convex. `nonnegative` may be left
/// empty, which puts every coordinate in the box.
struct MaxMinProblem
{
    int dimension = 0;
    std::vector<SmoothFunction> objective_terms;
    std::vector<SmoothFunction> constraints;
    std::vector<bool> nonnegative;
    Eigen::VectorXd start;

    bool in_box(int j) const;
    int box_count() const;
};

struct Tolerances
{
    double barrier_initial = 1.0;
    double barrier_growth = 10.0;
    double gap = 1e-8;        // stop once m / barrier weight falls below this
    double newton = 1e-10;    // half squared Newton decrement
    double feasibility = 1e-9;
    double kkt = 1e-6;        // relative to max(1, |objective|)
    double armijo = 0.3;
    double backtrack = 0.5;
    int max_newton_per_center = 200;
    int max_newton_total = 5000;
};

enum class KernelStatus
{
    converged,
    max_iterations,
    infeasible_start,
};

std::string_view to_string(KernelStatus status);

struct KernelResult
{
    Eigen::VectorXd x;
    double objective = 0.0;
    double max_violation = 0.0;
    double kkt_residual = 0.0;
    /// Ordered as objective terms, constraints, then box coordinates.
    Eigen::VectorXd multipliers;
    int outer_iterations = 0;
    int newton_iterations = 0;
    int phase1_iterations = 0;
    KernelStatus status = KernelStatus::max_iterations;
};

/// Log-barrier interior-point solve of the epigraph form
/// maximize t s.t. t <= f_k(x), g_i(x) <= 0, box.
///
/// A start that is not strictly feasible is first moved into the interior by
/// a phase-I barrier solve of min s s.t. g_i(x) <= s. Deterministic.
KernelResult solve_maxmin(const MaxMinProblem &problem, const Tolerances &tol = {});

/// Norm of the stationarity and complementary-slackness residuals of the
/// epigraph problem at x, with the epigraph variable set to min_k f_k(x).
///
/// `multipliers` follows the KernelResult ordering.
double kkt_residual(const MaxMinProblem &problem, const Eigen::VectorXd &x, const Eigen::VectorXd &multipliers);

/// Largest of max(g_i(x), 0) and max(-x_j, 0) over the box.
double max_violation(const MaxMinProblem &problem, const Eigen::VectorXd &x);

} // namespace mcsc::kernel

#endif
