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

#include "doctest.h"

#include <cmath>
#include <random>

using namespace mcsc;

namespace {

const ScenarioParams kTable{};
// B log2(1 + a) for the full-power LOS and RIS beams, frozen from a scalar
// evaluation of the gains.
constexpr double kDirectRate = 132943258120.09692;
constexpr double kRisRate = 16177747546.193413;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST_CASE("phase rates")
{
    const RatePair lc = oma_rates(0.0, kTable);
    CHECK(lc.hc == 0.0);
    CHECK(rel(lc.lc, kDirectRate) < 1e-12);
    const RatePair hc = oma_rates(1.0, kTable);
    CHECK(rel(hc.hc, kRisRate) < 1e-12);
    CHECK(hc.lc == 0.0);
    const RatePair half = oma_rates(0.5, kTable);
    CHECK(half.hc == 0.5 * hc.hc);
    CHECK(half.lc == 0.5 * lc.lc);
    CHECK_THROWS_AS(oma_rates(1.5, kTable), std::invalid_argument);
}

TEST_CASE("lc ris assist adds the RIS amplitude coherently")
{
    const LinkGains g = link_gains(kTable);
    const double a_d = 64 * g.eta_d * g.eta_d * kTable.max_power / g.noise;
    const double a_r = 64e4 * g.eta_r * g.eta_r * kTable.max_power / g.noise;
    const double snr = std::pow(std::sqrt(a_d) + std::sqrt(a_r), 2);
    CHECK(rel(oma_rates(0.0, kTable, true).lc, kTable.bandwidth * std::log2(1.0 + snr)) < 1e-12);
    CHECK(oma_rates(0.0, kTable, true).lc > oma_rates(0.0, kTable).lc);
}

TEST_CASE("degenerate weights pick an endpoint")
{
    const OmaResult lc = oma_optimize(kTable, 0.0, 700.0);
    CHECK(lc.tau == 0.0);
    // Both schemes reduce to the LOS beam at full power.
    CHECK(lc.objective == doctest::Approx(sca_power_allocation(kTable, 0.0, 700.0).objective).epsilon(1e-6));
    CHECK(oma_optimize(kTable, 1.0, 700.0).tau == 1.0);
}

TEST_CASE("optimal fraction matches a dense grid")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> alpha(0.01, 0.99), arrivals(50.0, 1200.0);
    for (int i = 0; i < 50; ++i)
    {
        const double a = alpha(rng), lambda = arrivals(rng);
        const OmaResult r = oma_optimize(kTable, a, lambda);
        double best = -1e300, best_tau = 0.0;
        for (int k = 0; k <= 1000; ++k)
        {
            const double tau = k / 1000.0;
            const RatePair rp = oma_rates(tau, kTable);
            const double per_bit = kTable.slot_duration / kTable.packet_size;
            const double dh = (1.0 - kTable.q_r) * per_bit * rp.hc - a * lambda;
            const double dl = (1.0 - kTable.q_d) * per_bit * rp.lc - (1.0 - a) * lambda;
            const double f = weighted_gap(a, dh, dl);
            if (f > best)
            {
                best = f;
                best_tau = tau;
            }
        }
        CHECK(r.objective >= best - 1e-9 * std::abs(best));
        CHECK(std::abs(r.tau - best_tau) <= 1e-3 + 1e-12);
    }
}

TEST_CASE("gaps are affine in the fraction")
{
    const double a = 0.2, lambda = 700.0;
    auto gaps = [&](double tau) {
        const RatePair rp = oma_rates(tau, kTable);
        const double per_bit = kTable.slot_duration / kTable.packet_size;
        return std::pair{(1.0 - kTable.q_r) * per_bit * rp.hc - a * lambda,
                         (1.0 - kTable.q_d) * per_bit * rp.lc - (1.0 - a) * lambda};
    };
    const double h = 0.125;
    const auto g0 = gaps(0.25), g1 = gaps(0.25 + h), g2 = gaps(0.25 + 2 * h);
    const double s1 = (g1.first - g0.first) / h, s2 = (g2.first - g1.first) / h;
    CHECK(std::abs(s1 - s2) <= 1e-9 * std::abs(s1));
    const double t1 = (g1.second - g0.second) / h, t2 = (g2.second - g1.second) / h;
    CHECK(std::abs(t1 - t2) <= 1e-9 * std::abs(t1));
}

TEST_CASE("baseline becomes unstable at a small HC share")
{
    // Onset from the two affine constraints: the first alpha at which
    // alpha A / c_h + (1 - alpha) A / c_l exceeds one.
    const double per_bit = kTable.slot_duration / kTable.packet_size;
    const double c_h = 0.9 * per_bit * kRisRate, c_l = 0.7 * per_bit * kDirectRate;
    const double onset = (1.0 / 700.0 - 1.0 / c_l) / (1.0 / c_h - 1.0 / c_l);
    CHECK(onset > 0.05);
    CHECK(onset < 0.07);
    CHECK(oma_optimize(kTable, onset - 1e-3, 700.0).objective > 0.0);
    CHECK(oma_optimize(kTable, onset + 1e-3, 700.0).objective < 0.0);
}

TEST_CASE("maximum arrival matches bisection on the closed form")
{
    for (double a : {0.0, 0.05, 0.15, 0.5, 1.0})
    {
        const OmaArrival closed = oma_max_feasible_arrival(kTable, a);
        const double bisected = largest_feasible_arrival(
            [&](double lambda) { return oma_optimize(kTable, a, lambda).objective >= 0.0; },
            arrival_upper_bound(kTable));
        CHECK(closed.a_star == doctest::Approx(bisected).epsilon(2e-4));
        CHECK(std::abs(closed.solution.objective) <= 1e-9 * closed.a_star);
    }
}

TEST_CASE("superposition is never worse than time sharing")
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> alpha(0.01, 0.99), qd(0.1, 0.6), arrivals(200.0, 900.0);
    for (int i = 0; i < 12; ++i)
    {
        ScenarioParams s;
        s.q_d = qd(rng);
        const double a = alpha(rng), lambda = arrivals(rng);
        CAPTURE(a);
        CHECK(sca_power_allocation(s, a, lambda).objective >= oma_optimize(s, a, lambda).objective - 1e-6);
    }
}
