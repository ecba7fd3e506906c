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

#include "doctest.h"

#include <cmath>
#include <random>

using namespace mcsc::kernel;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd vec(std::initializer_list<double> v)
{
    VectorXd out(static_cast<int>(v.size()));
    int i = 0;
    for (double x : v)
        out(i++) = x;
    return out;
}

// maximize min{w1 x1, w2 x2} s.t. x1 + x2 <= budget, x >= 0
MaxMinProblem weighted_pair(double w1, double w2, double budget)
{
    MaxMinProblem p;
    p.dimension = 2;
    p.objective_terms = {affine(vec({w1, 0.0}), 0.0), affine(vec({0.0, w2}), 0.0)};
    p.constraints = {affine(vec({1.0, 1.0}), -budget)};
    p.start = vec({0.1, 0.1});
    return p;
}

// sum_i c_i x_i^2 - r <= 0
SmoothFunction weighted_ball(VectorXd c, double r)
{
    return [c = std::move(c), r](const VectorXd &x) {
        FunctionEval e;
        e.value = c.cwiseProduct(x).dot(x) - r;
        e.gradient = 2.0 * c.cwiseProduct(x);
        e.hessian = MatrixXd(2.0 * c.asDiagonal());
        return e;
    };
}

// log(1 + a.x), concave on the positive orthant
SmoothFunction log_utility(VectorXd a)
{
    return [a = std::move(a)](const VectorXd &x) {
        FunctionEval e;
        const double s = 1.0 + a.dot(x);
        e.value = std::log(s);
        e.gradient = a / s;
        e.hessian = -(a * a.transpose()) / (s * s);
        return e;
    };
}

} // namespace

TEST_CASE("symmetric max-min")
{
    const KernelResult r = solve_maxmin(weighted_pair(1.0, 1.0, 2.0));
    CHECK(r.status == KernelStatus::converged);
    CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(r.x(1) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(r.objective == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(r.max_violation <= 1e-9);
}

TEST_CASE("weighted max-min equalizes on the budget line")
{
    const KernelResult r = solve_maxmin(weighted_pair(2.0, 1.0, 3.0));
    CHECK(r.status == KernelStatus::converged);
    CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(r.x(1) == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(r.objective == doctest::Approx(2.0).epsilon(1e-7));

    // 2-D grid oracle
    double best = -1.0;
    const int n = 600;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j)
        {
            const double x1 = 3.0 * i / n, x2 = 3.0 * j / n;
            best = std::max(best, std::min(2.0 * x1, x2));
        }
    CHECK(r.objective >= best - 1e-7);
    CHECK(r.objective - best < 3.0 * 3.0 / n);
}

TEST_CASE("single linear term against a cap")
{
    MaxMinProblem p;
    p.dimension = 1;
    p.objective_terms = {affine(vec({1.0}), 0.0)};
    p.constraints = {affine(vec({1.0}), -5.0)};
    p.start = vec({1.0});
    const KernelResult r = solve_maxmin(p);
    CHECK(r.status == KernelStatus::converged);
    CHECK(r.x(0) == doctest::Approx(5.0).epsilon(1e-8));
}

TEST_CASE("kkt residual at the analytic optimum")
{
    // Epigraph of the symmetric problem at x = (1, 1), t = 1:
    // -1 + l1 + l2 = 0 on t, -l1 + l3 - l4 = 0 on x1, -l2 + l3 - l5 = 0 on x2.
    const MaxMinProblem p = weighted_pair(1.0, 1.0, 2.0);
    const VectorXd lambda = vec({0.5, 0.5, 0.5, 0.0, 0.0});
    CHECK(kkt_residual(p, vec({1.0, 1.0}), lambda) < 1e-8);

    CHECK(kkt_residual(p, vec({0.5, 0.7}), lambda) > 1e-3);

    const double base = kkt_residual(p, vec({1.0, 1.0}), lambda);
    const double moved = kkt_residual(p, vec({1.0 + 1e-9, 1.0 - 1e-9}), lambda);
    CHECK(std::abs(moved - base) < 1e-8);

    CHECK_THROWS_AS(kkt_residual(p, vec({1.0, 1.0}), vec({1.0})), std::invalid_argument);
}

TEST_CASE("reported multipliers certify the solution")
{
    const MaxMinProblem p = weighted_pair(2.0, 1.0, 3.0);
    const KernelResult r = solve_maxmin(p);
    CHECK(r.kkt_residual <= 1e-6);
    CHECK(kkt_residual(p, r.x, r.multipliers) == doctest::Approx(r.kkt_residual));
    CHECK((r.multipliers.array() >= 0.0).all());
}

TEST_CASE("infeasible start is repaired by phase one")
{
    MaxMinProblem p = weighted_pair(1.0, 1.0, 2.0);
    p.start = vec({5.0, 7.0});
    const KernelResult r = solve_maxmin(p);
    CHECK(r.status == KernelStatus::converged);
    CHECK(r.objective == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(r.phase1_iterations > 0);
}

TEST_CASE("empty feasible set reports infeasible start")
{
    MaxMinProblem p = weighted_pair(1.0, 1.0, 2.0);
    p.constraints.push_back(affine(vec({-1.0, -1.0}), 3.0)); // x1 + x2 >= 3
    const KernelResult r = solve_maxmin(p);
    CHECK(r.status == KernelStatus::infeasible_start);
}

TEST_CASE("free coordinates outside the box")
{
    // maximize min{x1, 1 - x2} with x2 free, x1 + x2 <= 0, x2 >= -4
    MaxMinProblem p;
    p.dimension = 2;
    p.objective_terms = {affine(vec({1.0, 0.0}), 0.0), affine(vec({0.0, -1.0}), 1.0)};
    p.constraints = {affine(vec({1.0, 1.0}), 0.0), affine(vec({0.0, -1.0}), -4.0)};
    p.nonnegative = {true, false};
    p.start = vec({0.1, -1.0});
    const KernelResult r = solve_maxmin(p);
    CHECK(r.status == KernelStatus::converged);
    // With x2 = -t the best x1 is t and the value is min{t, 1 + t} = t.
    CHECK(r.x(1) == doctest::Approx(-4.0).epsilon(1e-7));
    CHECK(r.objective == doctest::Approx(4.0).epsilon(1e-7));
}

TEST_CASE("nonlinear problems agree with dense grid search")
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> coef(0.3, 3.0);
    for (int trial = 0; trial < 8; ++trial)
    {
        const int n = 2 + trial % 3; // 2 to 4 variables
        MaxMinProblem p;
        p.dimension = n;
        VectorXd c(n), budget = VectorXd::Ones(n);
        for (int i = 0; i < n; ++i)
        {
            VectorXd a = VectorXd::Zero(n);
            a(i) = coef(rng);
            a((i + 1) % n) = 0.2 * coef(rng);
            p.objective_terms.push_back(log_utility(a));
            c(i) = coef(rng);
        }
        p.constraints = {weighted_ball(c, 1.0), affine(budget, -1.2)};
        p.start = VectorXd::Constant(n, 0.01);
        const KernelResult r = solve_maxmin(p);
        CHECK(r.status == KernelStatus::converged);
        CHECK(r.max_violation <= 1e-9);

        // Grid over the bounding box of the ball.
        const int steps = n == 2 ? 400 : (n == 3 ? 90 : 32);
        VectorXd x(n);
        std::vector<int> idx(static_cast<std::size_t>(n), 0);
        double best = -1e300;
        for (;;)
        {
            for (int i = 0; i < n; ++i)
                x(i) = idx[static_cast<std::size_t>(i)] / (steps * std::sqrt(c(i)));
            bool ok = true;
            for (const auto &g : p.constraints)
                ok = ok && g(x).value <= 0.0;
            if (ok)
            {
                double v = 1e300;
                for (const auto &f : p.objective_terms)
                    v = std::min(v, f(x).value);
                best = std::max(best, v);
            }
            int k = 0;
            while (k < n && ++idx[static_cast<std::size_t>(k)] > steps)
                idx[static_cast<std::size_t>(k++)] = 0;
            if (k == n)
                break;
        }
        CHECK(r.objective >= best - 1e-6);
        // The grid optimum approaches the true one from below.
        CHECK(r.objective - best < 0.1);
    }
}

TEST_CASE("solver is deterministic")
{
    const MaxMinProblem p = weighted_pair(2.0, 1.0, 3.0);
    const KernelResult a = solve_maxmin(p), b = solve_maxmin(p);
    CHECK(a.x == b.x);
    CHECK(a.newton_iterations == b.newton_iterations);
}

TEST_CASE("malformed problems are rejected")
{
    MaxMinProblem p = weighted_pair(1.0, 1.0, 2.0);
    p.start = vec({1.0});
    CHECK_THROWS_AS(solve_maxmin(p), std::invalid_argument);
    p = weighted_pair(1.0, 1.0, 2.0);
    p.objective_terms.clear();
    CHECK_THROWS_AS(solve_maxmin(p), std::invalid_argument);
}
