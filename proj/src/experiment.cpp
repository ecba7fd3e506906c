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


#include "mcsc/experiment.hpp"

#include "mcsc/oma_baseline.hpp"
#include "mcsc/text.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace mcsc {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double from_db(double db) { return std::pow(10.0, db / 10.0); }
double from_dbm(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

struct LineContext
{
    int line = 0;
    std::string key;

    [[noreturn]] void fail(const std::string &what) const
    {
        throw ConfigParseError("line " + std::to_string(line) + ": " + key + ": " + what);
    }

    double number(std::string_view text) const
    {
        const auto v = parse_double(text);
        if (!v || !std::isfinite(*v))
            fail("expected a finite number, got '" + std::string(text) + "'");
        return *v;
    }

    long long integer(std::string_view text) const
    {
        long long v = 0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
        if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        {
            // Accept integral values written in floating-point form (1e4).
            const double d = number(text);
            if (d != std::floor(d) || std::abs(d) > 9.0e15)
                fail("expected an integer, got '" + std::string(text) + "'");
            return static_cast<long long>(d);
        }
        return v;
    }

    template <typename E>
    E choice(std::string_view text, std::initializer_list<std::pair<std::string_view, E>> options) const
    {
        std::string names;
        for (const auto &[name, value] : options)
        {
            if (text == name)
                return value;
            names += names.empty() ? "" : "|";
            names += name;
        }
        fail("expected one of " + names + ", got '" + std::string(text) + "'");
    }
};

std::vector<double> parse_grid(const LineContext &ctx, std::string_view text)
{
    std::vector<double> out;
    if (text.find(':') != std::string_view::npos)
    {
        std::vector<double> parts;
        std::size_t pos = 0;
        for (;;)
        {
            const auto next = text.find(':', pos);
            parts.push_back(ctx.number(trim(text.substr(pos, next - pos))));
            if (next == std::string_view::npos)
                break;
            pos = next + 1;
        }
        if (parts.size() != 3)
            ctx.fail("range must be start:step:stop");
        const double start = parts[0], step = parts[1], stop = parts[2];
        if (!(step > 0.0) || stop < start)
            ctx.fail("range needs step > 0 and stop >= start");
        const double count = std::floor((stop - start) / step + 1e-9) + 1.0;
        if (count > 1e6)
            ctx.fail("range has too many points");
        for (int i = 0; i < static_cast<int>(count); ++i)
        {
            // Strip accumulated binary noise so 0:0.05:0.25 prints as typed.
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.12g", start + i * step);
            out.push_back(*parse_double(buf));
        }
        return out;
    }
    std::size_t pos = 0;
    for (;;)
    {
        const auto next = text.find(',', pos);
        out.push_back(ctx.number(trim(text.substr(pos, next - pos))));
        if (next == std::string_view::npos)
            break;
        pos = next + 1;
    }
    return out;
}

using Setter = std::function<void(ExperimentConfig &, const LineContext &, std::string_view)>;

const std::map<std::string, Setter, std::less<>> &setters()
{
    auto scalar = [](double ScenarioParams::*field, double (*convert)(double)) -> Setter {
        return [field, convert](ExperimentConfig &c, const LineContext &ctx, std::string_view v) {
            const double x = ctx.number(v);
            c.scenario.*field = convert ? convert(x) : x;
        };
    };
    auto ghz = [](double x) { return x * 1e9; };
    auto count = [](int ScenarioParams::*field) -> Setter {
        return [field](ExperimentConfig &c, const LineContext &ctx, std::string_view v) {
            const long long n = ctx.integer(v);
            if (n < 1 || n > 100000000)
                ctx.fail("must lie in [1, 1e8]");
            c.scenario.*field = static_cast<int>(n);
        };
    };

    static const std::map<std::string, Setter, std::less<>> table = {
        {"carrier_frequency", scalar(&ScenarioParams::carrier_frequency, ghz)},
        {"bandwidth", scalar(&ScenarioParams::bandwidth, ghz)},
        {"max_power", scalar(&ScenarioParams::max_power, from_dbm)},
        {"noise_psd", scalar(&ScenarioParams::noise_psd, from_dbm)},
        {"gain_bs", scalar(&ScenarioParams::gain_bs, from_db)},
        {"gain_ue", scalar(&ScenarioParams::gain_ue, from_db)},
        {"n_bs", count(&ScenarioParams::n_bs)},
        {"n_ris", count(&ScenarioParams::n_ris)},
        {"d_bu", scalar(&ScenarioParams::d_bu, nullptr)},
        {"d_br", scalar(&ScenarioParams::d_br, nullptr)},
        {"d_ru", scalar(&ScenarioParams::d_ru, nullptr)},
        {"absorption", scalar(&ScenarioParams::absorption, nullptr)},
        {"element_length_x", scalar(&ScenarioParams::element_length_x, nullptr)},
        {"element_length_y", scalar(&ScenarioParams::element_length_y, nullptr)},
        {"q_d", scalar(&ScenarioParams::q_d, nullptr)},
        {"q_r", scalar(&ScenarioParams::q_r, nullptr)},
        {"phi_bu", scalar(&ScenarioParams::phi_bu, nullptr)},
        {"phi_br", scalar(&ScenarioParams::phi_br, nullptr)},
        {"phi_rb", scalar(&ScenarioParams::phi_rb, nullptr)},
        {"phi_ru", scalar(&ScenarioParams::phi_ru, nullptr)},
        {"alpha", scalar(&ScenarioParams::alpha, nullptr)},
        {"packet_size", scalar(&ScenarioParams::packet_size, nullptr)},
        {"slot_duration", scalar(&ScenarioParams::slot_duration, nullptr)},
        {"arrival_rate", scalar(&ScenarioParams::arrival_rate, nullptr)},
        {"sweep_axis",
         [](ExperimentConfig &c, const LineContext &ctx, std::string_view v) {
             c.axis = ctx.choice<SweepAxis>(v, {{"alpha", SweepAxis::alpha},
                                                {"q_d", SweepAxis::q_d},
                                                {"n_ris", SweepAxis::n_ris},
                                                {"arrival", SweepAxis::arrival}});
         }},
        {"sweep_values",
         [](ExperimentConfig &c, const LineContext &ctx, std::string_view v) { c.values = parse_grid(ctx, v); }},
        {"scheme",
         [](ExperimentConfig &c, const LineContext &ctx, std::string_view v) {
             c.scheme = ctx.choice<Scheme>(v, {{"mcsc", Scheme::mcsc}, {"oma", Scheme::oma}, {"both", Scheme::both}});
         }},
        {"metrics",
         [](ExperimentConfig &c, const LineContext &ctx, std::string_view v) {
             c.metrics =
                 ctx.choice<Metrics>(v, {{"se", Metrics::se}, {"delay", Metrics::delay}, {"both", Metrics::both}});
         }},
        {"se_definition",
         [](ExperimentConfig &c, const LineContext &ctx, std::string_view v) {
             c.se_definition = ctx.choice<SeDefinition>(
                 v, {{"weighted", SeDefinition::weighted}, {"unweighted", SeDefinition::unweighted}});
         }},
        {"transform_form",
         [](ExperimentConfig &c, const LineContext &ctx, std::string_view v) {
             c.transform_form = ctx.choice<TransformForm>(
                 v, {{"consistent", TransformForm::consistent}, {"literal", TransformForm::literal}});
         }},
        {"oma_lc_ris_assist",
         [](ExperimentConfig &c, const LineContext &ctx, std::string_view v) {
             c.oma_lc_ris_assist = ctx.choice<bool>(v, {{"true", true}, {"false", false}});
         }},
        {"slots", [](ExperimentConfig &c, const LineContext &ctx, std::string_view v) { c.slots = ctx.integer(v); }},
        {"seed",
         [](ExperimentConfig &c, const LineContext &ctx, std::string_view v) {
             std::uint64_t s = 0;
             const auto res = std::from_chars(v.data(), v.data() + v.size(), s);
             if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
                 ctx.fail("expected an unsigned 64-bit integer, got '" + std::string(v) + "'");
             c.seed = s;
         }},
        {"output", [](ExperimentConfig &c, const LineContext &, std::string_view v) { c.output = std::string(v); }},
        {"workers",
         [](ExperimentConfig &c, const LineContext &ctx, std::string_view v) {
             const long long n = ctx.integer(v);
             if (n < 0 || n > 4096)
                 ctx.fail("must lie in [0, 4096]");
             c.workers = static_cast<int>(n);
         }},
    };
    return table;
}

std::string_view to_string(Metrics m)
{
    switch (m)
    {
    case Metrics::se:
        return "se";
    case Metrics::delay:
        return "delay";
    case Metrics::both:
        return "both";
    }
    return "both";
}

bool wants_se(Metrics m) { return m != Metrics::delay; }
bool wants_delay(Metrics m) { return m != Metrics::se; }

double swept_value(const ScenarioParams &s, SweepAxis axis)
{
    switch (axis)
    {
    case SweepAxis::alpha:
        return s.alpha;
    case SweepAxis::q_d:
        return s.q_d;
    case SweepAxis::n_ris:
        return s.n_ris;
    case SweepAxis::arrival:
        return s.arrival_rate;
    }
    return s.alpha;
}

std::string quote_csv(std::string_view field)
{
    if (field.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(field);
    std::string out = "\"";
    for (char c : field)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string optional_cell(const std::optional<double> &v) { return v ? format_double(*v) : std::string(); }

// RFC 4180 records; returns false at end of input.
bool next_record(std::istream &in, std::vector<std::string> &fields)
{
    fields.clear();
    if (in.peek() == std::char_traits<char>::eof())
        return false;
    std::string field;
    bool quoted = false;
    char c = 0;
    while (in.get(c))
    {
        if (quoted)
        {
            if (c == '"')
            {
                if (in.peek() == '"')
                {
                    in.get(c);
                    field += '"';
                }
                else
                    quoted = false;
            }
            else
                field += c;
            continue;
        }
        if (c == '"')
            quoted = true;
        else if (c == ',')
        {
            fields.push_back(std::move(field));
            field.clear();
        }
        else if (c == '\n')
            break;
        else if (c != '\r')
            field += c;
    }
    if (quoted)
        throw std::runtime_error("csv: unterminated quoted field");
    fields.push_back(std::move(field));
    return true;
}

std::optional<double> optional_number(const std::string &cell, const char *column)
{
    if (cell.empty())
        return std::nullopt;
    const auto v = parse_double(cell);
    if (!v)
        throw std::runtime_error(std::string("csv: bad number in column ") + column + ": '" + cell + "'");
    return v;
}

} // namespace

std::string_view to_string(SweepAxis axis)
{
    switch (axis)
    {
    case SweepAxis::alpha:
        return "alpha";
    case SweepAxis::q_d:
        return "q_d";
    case SweepAxis::n_ris:
        return "n_ris";
    case SweepAxis::arrival:
        return "arrival";
    }
    return "alpha";
}

std::string_view to_string(Scheme scheme)
{
    switch (scheme)
    {
    case Scheme::mcsc:
        return "mcsc";
    case Scheme::oma:
        return "oma";
    case Scheme::both:
        return "both";
    }
    return "both";
}

std::vector<double> ExperimentConfig::grid() const
{
    if (!values.empty())
        return values;
    return {swept_value(scenario, axis)};
}

void ExperimentConfig::validate() const
{
    try
    {
        scenario.validate();
        for (double v : grid())
            apply_sweep_value(scenario, axis, v).validate();
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigValidationError(e.what());
    }
    const auto g = grid();
    for (std::size_t i = 1; i < g.size(); ++i)
        if (!(g[i] > g[i - 1]))
            throw ConfigValidationError("sweep_values must be strictly increasing");
    if (slots < 1)
        throw ConfigValidationError("slots must be >= 1");
    if (wants_delay(metrics) && slots < 1000)
        throw ConfigValidationError("slots must be >= 1000 when delays are computed");
    if (workers < 0)
        throw ConfigValidationError("workers must be >= 0");
    if (output.empty())
        throw ConfigValidationError("output must not be empty");
}

std::string ExperimentConfig::canonical_text() const
{
    const ScenarioParams &s = scenario;
    std::ostringstream out;
    auto put = [&](std::string_view key, const std::string &value) { out << key << '=' << value << '\n'; };
    auto num = [&](std::string_view key, double v) { put(key, format_double(v)); };
    num("carrier_frequency", s.carrier_frequency);
    num("bandwidth", s.bandwidth);
    num("max_power", s.max_power);
    num("noise_psd", s.noise_psd);
    num("gain_bs", s.gain_bs);
    num("gain_ue", s.gain_ue);
    num("n_bs", s.n_bs);
    num("n_ris", s.n_ris);
    num("d_bu", s.d_bu);
    num("d_br", s.d_br);
    num("d_ru", s.d_ru);
    num("absorption", s.absorption);
    num("element_length_x", s.element_length_x);
    num("element_length_y", s.element_length_y);
    num("q_d", s.q_d);
    num("q_r", s.q_r);
    num("phi_bu", s.phi_bu);
    num("phi_br", s.phi_br);
    num("phi_rb", s.phi_rb);
    num("phi_ru", s.phi_ru);
    num("alpha", s.alpha);
    num("packet_size", s.packet_size);
    num("slot_duration", s.slot_duration);
    num("arrival_rate", s.arrival_rate);
    put("sweep_axis", std::string(to_string(axis)));
    std::string grid_text;
    for (double v : grid())
        grid_text += (grid_text.empty() ? "" : ",") + format_double(v);
    put("sweep_values", grid_text);
    put("scheme", std::string(to_string(scheme)));
    put("metrics", std::string(to_string(metrics)));
    put("se_definition", se_definition == SeDefinition::weighted ? "weighted" : "unweighted");
    put("transform_form", transform_form == TransformForm::consistent ? "consistent" : "literal");
    put("oma_lc_ris_assist", oma_lc_ris_assist ? "true" : "false");
    put("slots", std::to_string(slots));
    put("seed", std::to_string(seed));
    return out.str();
}

std::uint64_t ExperimentConfig::digest() const { return fnv1a(canonical_text()); }

ExperimentConfig parse_config(std::string_view text)
{
    ExperimentConfig config;
    std::map<std::string, int, std::less<>> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        const auto end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigParseError("line " + std::to_string(line_no) + ": expected key = value");
        LineContext ctx{line_no, std::string(trim(line.substr(0, eq)))};
        const std::string_view value = trim(line.substr(eq + 1));
        if (ctx.key.empty())
            throw ConfigParseError("line " + std::to_string(line_no) + ": missing key");
        const auto it = setters().find(ctx.key);
        if (it == setters().end())
            ctx.fail("unknown key");
        if (const auto prev = seen.find(ctx.key); prev != seen.end())
            ctx.fail("repeats the value from line " + std::to_string(prev->second));
        seen.emplace(ctx.key, line_no);
        if (value.empty())
            ctx.fail("missing value");
        it->second(config, ctx, value);
    }
    config.validate();
    return config;
}

ExperimentConfig load_config(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigFileError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

ScenarioParams apply_sweep_value(const ScenarioParams &base, SweepAxis axis, double value)
{
    ScenarioParams s = base;
    switch (axis)
    {
    case SweepAxis::alpha:
        s.alpha = value;
        break;
    case SweepAxis::q_d:
        s.q_d = value;
        break;
    case SweepAxis::n_ris:
        if (!(value >= 1.0 && value <= 1e8 && value == std::floor(value)))
            throw std::invalid_argument("n_ris sweep values must be integers in [1, 1e8]");
        s.n_ris = static_cast<int>(value);
        break;
    case SweepAxis::arrival:
        s.arrival_rate = value;
        break;
    }
    return s;
}

SpectralEfficiency spectral_efficiency(const ScenarioParams &scenario, double alpha, Scheme scheme,
                                       SeDefinition definition, const ScaOptions &options, bool oma_lc_ris_assist)
{
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("spectral_efficiency: alpha must lie in [0, 1]");
    const bool weighted = definition == SeDefinition::weighted;
    const double w_h = weighted ? 1.0 - scenario.q_r : 1.0;
    const double w_l = weighted ? 1.0 - scenario.q_d : 1.0;

    SpectralEfficiency out;
    RatePair rates;
    if (scheme == Scheme::mcsc)
    {
        const ArrivalSearch search = max_feasible_arrival(scenario, alpha, options);
        rates = {search.solution.r_h, search.solution.r_l};
        out.a_star = search.a_star;
        out.iterations = search.solution.iterations;
        out.status = search.solution.status;
    }
    else if (scheme == Scheme::oma)
    {
        scenario.validate();
        const OmaArrival search = oma_max_feasible_arrival(scenario, alpha, oma_lc_ris_assist);
        rates = search.solution.rates;
        out.a_star = search.a_star;
    }
    else
        throw std::invalid_argument("spectral_efficiency: scheme must be mcsc or oma");
    // A class without traffic delivers nothing, whatever rate its stream has.
    out.se_h = alpha > 0.0 ? w_h * rates.hc / scenario.bandwidth : 0.0;
    out.se_l = alpha < 1.0 ? w_l * rates.lc / scenario.bandwidth : 0.0;
    out.se_sum = out.se_h + out.se_l;
    return out;
}

SchemeRates scheme_rates(const ScenarioParams &scenario, double alpha, double arrival, Scheme scheme,
                         const ScaOptions &options, bool oma_lc_ris_assist)
{
    SchemeRates out;
    if (scheme == Scheme::mcsc)
    {
        const SolveResult r = sca_power_allocation(scenario, alpha, arrival, options);
        out.rates = {r.r_h, r.r_l};
        out.iterations = r.iterations;
        out.status = r.status;
    }
    else if (scheme == Scheme::oma)
    {
        scenario.validate();
        out.rates = oma_optimize(scenario, alpha, arrival, oma_lc_ris_assist).rates;
    }
    else
        throw std::invalid_argument("scheme_rates: scheme must be mcsc or oma");
    return out;
}

std::uint64_t point_seed(std::uint64_t seed, std::size_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[1]) << 32) | words[0];
}

std::vector<SweepRow> run_sweep(const ExperimentConfig &config)
{
    config.validate();
    const std::vector<double> grid = config.grid();
    std::vector<Scheme> schemes;
    if (config.scheme != Scheme::oma)
        schemes.push_back(Scheme::mcsc);
    if (config.scheme != Scheme::mcsc)
        schemes.push_back(Scheme::oma);

    ScaOptions options;
    options.form = config.transform_form;

    const std::size_t tasks = grid.size() * schemes.size();
    std::vector<SweepRow> rows(tasks);
    auto work = [&](std::size_t task) {
        const std::size_t point = task / schemes.size();
        const Scheme scheme = schemes[task % schemes.size()];
        SweepRow &row = rows[task];
        row.sweep_value = grid[point];
        row.scheme = std::string(to_string(scheme));
        try
        {
            const ScenarioParams s = apply_sweep_value(config.scenario, config.axis, grid[point]);
            if (wants_se(config.metrics))
            {
                const SpectralEfficiency se = spectral_efficiency(s, s.alpha, scheme, config.se_definition, options,
                                                                  config.oma_lc_ris_assist);
                row.se_h = se.se_h;
                row.se_l = se.se_l;
                row.se_sum = se.se_sum;
                row.a_star = se.a_star;
                row.iterations = se.iterations;
                row.status = se.status;
            }
            if (wants_delay(config.metrics))
            {
                const SchemeRates sr =
                    scheme_rates(s, s.alpha, s.arrival_rate, scheme, options, config.oma_lc_ris_assist);
                const QueueTrace trace = run_simulation(s, sr.rates, config.slots, point_seed(config.seed, point));
                const DelayStats stats = mean_delay(trace, s.alpha, s.arrival_rate);
                row.stable = stats.stable();
                if (stats.stable_h)
                    row.tau_h_slots = stats.tau_h_slots;
                if (stats.stable_l)
                    row.tau_l_slots = stats.tau_l_slots;
                if (!wants_se(config.metrics))
                    row.iterations = sr.iterations;
                if (row.status == "ok")
                    row.status = sr.status;
            }
        }
        catch (const std::exception &e)
        {
            row = SweepRow{};
            row.sweep_value = grid[point];
            row.scheme = std::string(to_string(scheme));
            row.status = std::string("error: ") + e.what();
        }
    };

    std::size_t workers = config.workers > 0 ? static_cast<std::size_t>(config.workers)
                                             : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, tasks);
    std::atomic<std::size_t> next{0};
    auto loop = [&] {
        for (std::size_t t = next++; t < tasks; t = next++)
            work(t);
    };
    if (workers <= 1)
        loop();
    else
    {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t i = 0; i < workers; ++i)
            pool.emplace_back(loop);
        for (auto &t : pool)
            t.join();
    }
    return rows;
}

std::optional<double> tipping_point(const std::vector<SweepRow> &rows)
{
    std::map<double, std::pair<std::optional<double>, std::optional<double>>> by_value;
    for (const auto &r : rows)
    {
        auto &slot = by_value[r.sweep_value];
        if (r.scheme == "mcsc")
            slot.first = r.se_sum;
        else if (r.scheme == "oma")
            slot.second = r.se_sum;
    }
    std::optional<double> best_value;
    double best_gap = 0.0;
    for (const auto &[value, pair] : by_value)
    {
        if (!pair.first || !pair.second)
            continue;
        const double gap = *pair.first - *pair.second;
        if (!best_value || gap > best_gap)
        {
            best_value = value;
            best_gap = gap;
        }
    }
    return best_value;
}

void write_csv(std::ostream &out, const std::vector<SweepRow> &rows)
{
    out << kCsvHeader << '\n';
    for (const auto &r : rows)
    {
        out << format_double(r.sweep_value) << ',' << quote_csv(r.scheme) << ',' << optional_cell(r.se_h) << ','
            << optional_cell(r.se_l) << ',' << optional_cell(r.se_sum) << ',' << optional_cell(r.a_star) << ','
            << optional_cell(r.tau_h_slots) << ',' << optional_cell(r.tau_l_slots) << ','
            << (r.stable ? (*r.stable ? "true" : "false") : "") << ',' << r.iterations << ','
            << quote_csv(r.status) << '\n';
    }
}

std::vector<SweepRow> read_csv(std::istream &in)
{
    std::vector<std::string> fields;
    if (!next_record(in, fields))
        throw std::runtime_error("csv: empty input");
    std::string header;
    for (const auto &f : fields)
        header += (header.empty() ? "" : ",") + f;
    if (header != kCsvHeader)
        throw std::runtime_error("csv: unexpected header '" + header + "'");

    std::vector<SweepRow> rows;
    while (next_record(in, fields))
    {
        if (fields.size() == 1 && fields[0].empty())
            continue;
        if (fields.size() != 11)
            throw std::runtime_error("csv: expected 11 fields, got " + std::to_string(fields.size()));
        SweepRow r;
        const auto value = parse_double(fields[0]);
        if (!value)
            throw std::runtime_error("csv: bad sweep_value '" + fields[0] + "'");
        r.sweep_value = *value;
        r.scheme = fields[1];
        r.se_h = optional_number(fields[2], "se_h");
        r.se_l = optional_number(fields[3], "se_l");
        r.se_sum = optional_number(fields[4], "se_sum");
        r.a_star = optional_number(fields[5], "a_star");
        r.tau_h_slots = optional_number(fields[6], "tau_h_slots");
        r.tau_l_slots = optional_number(fields[7], "tau_l_slots");
        if (fields[8] == "true")
            r.stable = true;
        else if (fields[8] == "false")
            r.stable = false;
        else if (!fields[8].empty())
            throw std::runtime_error("csv: bad stable cell '" + fields[8] + "'");
        const auto &it = fields[9];
        const auto res = std::from_chars(it.data(), it.data() + it.size(), r.iterations);
        if (res.ec != std::errc{} || res.ptr != it.data() + it.size())
            throw std::runtime_error("csv: bad iterations cell '" + it + "'");
        r.status = fields[10];
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string metadata_json(const ExperimentConfig &config, const std::vector<SweepRow> &rows)
{
    char digest[17];
    std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(config.digest()));
    nlohmann::ordered_json j;
    j["seed"] = config.seed;
    j["config_digest"] = digest;
    j["sweep_axis"] = to_string(config.axis);
    j["scheme"] = to_string(config.scheme);
    j["slots"] = config.slots;
    j["rows"] = rows.size();
    const auto tip = tipping_point(rows);
    j["tipping_point"] = tip ? nlohmann::ordered_json(*tip) : nlohmann::ordered_json(nullptr);
    return j.dump(2) + "\n";
}

void write_trace_csv(std::ostream &out, const QueueTrace &trace)
{
    out << "slot,a_h,a_l,s_h,s_l,beta_d,beta_r,q_h,q_l\n";
    for (std::size_t t = 0; t < trace.records.size(); ++t)
    {
        const SlotRecord &r = trace.records[t];
        out << t << ',' << r.a_h << ',' << r.a_l << ',' << format_double(r.s_h) << ',' << format_double(r.s_l)
            << ',' << r.beta_d << ',' << r.beta_r << ',' << format_double(r.q_h) << ',' << format_double(r.q_l)
            << '\n';
    }
}

std::vector<SweepRow> run_sweep_to_files(const ExperimentConfig &config)
{
    std::vector<SweepRow> rows = run_sweep(config);
    {
        std::ofstream csv(config.output, std::ios::binary);
        if (!csv)
            throw std::runtime_error("cannot write '" + config.output + "'");
        write_csv(csv, rows);
        if (!csv)
            throw std::runtime_error("write failed for '" + config.output + "'");
    }
    const std::string meta_path = config.output + ".meta.json";
    std::ofstream meta(meta_path, std::ios::binary);
    if (!meta)
        throw std::runtime_error("cannot write '" + meta_path + "'");
    meta << metadata_json(config, rows);
    if (!meta)
        throw std::runtime_error("write failed for '" + meta_path + "'");
    return rows;
}

} // namespace mcsc
