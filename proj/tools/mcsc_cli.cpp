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


// Command-line front end: single solves, sweeps, oracle checks and queue traces.

#include "mcsc/experiment.hpp"
#include "mcsc/oma_baseline.hpp"
#include "mcsc/power_allocation.hpp"
#include "mcsc/queue_sim.hpp"
#include "mcsc/text.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

using namespace mcsc;
using json = nlohmann::ordered_json;

namespace {

struct Common
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string scheme;
    std::optional<double> alpha;
    std::optional<double> arrival;
};

ExperimentConfig load(const Common &c)
{
    ExperimentConfig cfg = c.config_path.empty() ? parse_config("") : load_config(c.config_path);
    if (c.seed)
        cfg.seed = *c.seed;
    if (!c.out.empty())
        cfg.output = c.out;
    if (c.scheme == "mcsc")
        cfg.scheme = Scheme::mcsc;
    else if (c.scheme == "oma")
        cfg.scheme = Scheme::oma;
    else if (c.scheme == "both")
        cfg.scheme = Scheme::both;
    if (c.alpha)
        cfg.scenario.alpha = *c.alpha;
    if (c.arrival)
        cfg.scenario.arrival_rate = *c.arrival;
    cfg.validate();
    return cfg;
}

void emit(const json &j, const std::string &path)
{
    if (path.empty())
    {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

json powers_json(const PowerAllocation &p)
{
    return json{{"p_h_d", p.p_h_d}, {"p_h_r", p.p_h_r}, {"p_l_d", p.p_l_d}, {"p_l_r", p.p_l_r}};
}

json solve_mcsc(const ExperimentConfig &cfg)
{
    ScaOptions options;
    options.form = cfg.transform_form;
    const auto &s = cfg.scenario;
    const SolveResult r = sca_power_allocation(s, s.alpha, s.arrival_rate, options);
    return json{{"scheme", "mcsc"},
                {"alpha", s.alpha},
                {"arrival", s.arrival_rate},
                {"powers_w", powers_json(r.powers)},
                {"r_h_bps", r.r_h},
                {"r_l_bps", r.r_l},
                {"delta_h", r.delta_h},
                {"delta_l", r.delta_l},
                {"objective", r.objective},
                {"iterations", r.iterations},
                {"converged", r.converged},
                {"status", r.status}};
}

json solve_oma(const ExperimentConfig &cfg)
{
    const auto &s = cfg.scenario;
    const OmaResult r = oma_optimize(s, s.alpha, s.arrival_rate, cfg.oma_lc_ris_assist);
    return json{{"scheme", "oma"},
                {"alpha", s.alpha},
                {"arrival", s.arrival_rate},
                {"tau", r.tau},
                {"r_h_bps", r.rates.hc},
                {"r_l_bps", r.rates.lc},
                {"delta_h", r.delta_h},
                {"delta_l", r.delta_l},
                {"objective", r.objective}};
}

int cmd_solve(const Common &c)
{
    const ExperimentConfig cfg = load(c);
    json out = json::array();
    if (cfg.scheme != Scheme::oma)
        out.push_back(solve_mcsc(cfg));
    if (cfg.scheme != Scheme::mcsc)
        out.push_back(solve_oma(cfg));
    emit(out, c.out);
    return 0;
}

int cmd_sweep(const Common &c, int workers)
{
    ExperimentConfig cfg = load(c);
    if (workers >= 0)
        cfg.workers = workers;
    const auto rows = run_sweep_to_files(cfg);
    int failed = 0;
    for (const auto &r : rows)
        if (r.status.rfind("error", 0) == 0)
            ++failed;
    std::fprintf(stderr, "wrote %zu rows to %s (%d failed points)\n", rows.size(), cfg.output.c_str(), failed);
    return failed == 0 ? 0 : 3;
}

int cmd_oracle(const Common &c, int grid)
{
    const ExperimentConfig cfg = load(c);
    const auto &s = cfg.scenario;
    const auto t0 = std::chrono::steady_clock::now();
    const OracleResult o = brute_force_oracle(s, s.alpha, s.arrival_rate, grid);
    const double oracle_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    ScaOptions options;
    options.form = cfg.transform_form;
    const SolveResult r = sca_power_allocation(s, s.alpha, s.arrival_rate, options);
    const double scale = std::max(1.0, std::abs(o.objective));
    emit(json{{"alpha", s.alpha},
              {"arrival", s.arrival_rate},
              {"grid", grid},
              {"oracle_objective", o.objective},
              {"oracle_powers_w", powers_json(o.best)},
              {"oracle_points", o.evaluated},
              {"oracle_ms", oracle_ms},
              {"sca_objective", r.objective},
              {"sca_powers_w", powers_json(r.powers)},
              {"relative_gap", (r.objective - o.objective) / scale},
              {"sca_status", r.status}},
         c.out);
    return 0;
}

int cmd_simulate(const Common &c, std::optional<long long> slots)
{
    ExperimentConfig cfg = load(c);
    if (slots)
        cfg.slots = *slots;
    if (cfg.slots < 1)
        throw ConfigValidationError("slots must be >= 1");
    if (cfg.scheme == Scheme::both)
        cfg.scheme = Scheme::mcsc;
    const auto &s = cfg.scenario;
    ScaOptions options;
    options.form = cfg.transform_form;
    const SchemeRates sr = scheme_rates(s, s.alpha, s.arrival_rate, cfg.scheme, options, cfg.oma_lc_ris_assist);
    const QueueTrace trace = run_simulation(s, sr.rates, cfg.slots, cfg.seed);
    const DelayStats d = mean_delay(trace, s.alpha, s.arrival_rate);

    auto opt = [](const std::optional<double> &v) { return v ? json(*v) : json(nullptr); };
    char digest[17];
    std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(trace.scenario_digest));
    const json summary{{"scheme", to_string(cfg.scheme)},
                       {"alpha", s.alpha},
                       {"arrival", s.arrival_rate},
                       {"slots", cfg.slots},
                       {"seed", trace.seed},
                       {"scenario_digest", digest},
                       {"r_h_bps", sr.rates.hc},
                       {"r_l_bps", sr.rates.lc},
                       {"mean_q_h", d.mean_q_h},
                       {"mean_q_l", d.mean_q_l},
                       {"tau_h_slots", opt(d.tau_h_slots)},
                       {"tau_l_slots", opt(d.tau_l_slots)},
                       {"tau_h_seconds", opt(d.tau_h_seconds)},
                       {"tau_l_seconds", opt(d.tau_l_seconds)},
                       {"tau_overall_slots", opt(d.overall_slots(s.arrival_rate))},
                       {"stable_h", d.stable_h},
                       {"stable_l", d.stable_l},
                       {"solver_status", sr.status}};
    if (c.out.empty())
    {
        std::cout << summary.dump(2) << '\n';
        return 0;
    }
    std::ofstream out(c.out, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + c.out + "'");
    write_trace_csv(out, trace);
    emit(summary, c.out + ".meta.json");
    std::cout << summary.dump(2) << '\n';
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"MC-SC power allocation, OMA baseline and queue simulation"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", common.config_path, "key=value config file (defaults when omitted)");
        sub->add_option("--seed", common.seed, "RNG seed");
        sub->add_option("--out", common.out, "output path");
        sub->add_option("--scheme", common.scheme, "mcsc | oma | both")
            ->check(CLI::IsMember({"mcsc", "oma", "both"}));
    };
    auto add_point = [&](CLI::App *sub) {
        sub->add_option("--alpha", common.alpha, "HC fraction of the traffic");
        sub->add_option("--arrival", common.arrival, "mean arrivals per slot");
    };

    auto *solve = app.add_subcommand("solve", "solve one operating point");
    add_common(solve);
    add_point(solve);

    int workers = -1;
    auto *sweep = app.add_subcommand("sweep", "run a parameter sweep and write CSV plus metadata");
    add_common(sweep);
    sweep->add_option("--workers", workers, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);

    int grid = 41;
    auto *oracle = app.add_subcommand("oracle", "compare the SCA solution with a simplex grid search");
    add_common(oracle);
    add_point(oracle);
    oracle->add_option("--grid", grid, "grid points per power axis")->check(CLI::Range(2, 1001));

    std::optional<long long> slots;
    auto *simulate = app.add_subcommand("simulate", "simulate the queues and report Little's-law delays");
    add_common(simulate);
    add_point(simulate);
    simulate->add_option("--slots", slots, "slots to simulate");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*solve)
            return cmd_solve(common);
        if (*sweep)
            return cmd_sweep(common, workers);
        if (*oracle)
            return cmd_oracle(common, grid);
        if (*simulate)
            return cmd_simulate(common, slots);
    }
    catch (const ConfigFileError &e)
    {
        std::fprintf(stderr, "config file error: %s\n", e.what());
        return 2;
    }
    catch (const ConfigParseError &e)
    {
        std::fprintf(stderr, "config parse error: %s\n", e.what());
        return 2;
    }
    catch (const ConfigValidationError &e)
    {
        std::fprintf(stderr, "config validation error: %s\n", e.what());
        return 2;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
