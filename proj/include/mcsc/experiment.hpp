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


#ifndef MCSC_EXPERIMENT_HPP
#define MCSC_EXPERIMENT_HPP

#include "mcsc/link_model.hpp"
#include "mcsc/power_allocation.hpp"
#include "mcsc/queue_sim.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mcsc {

class ConfigError : public std::runtime_error
{
    using std::runtime_error::runtime_error;
};

class ConfigFileError : public ConfigError
{
    using ConfigError::ConfigError;
};

/// Malformed line, unknown or repeated key, or a value that is not a number.
class ConfigParseError : public ConfigError
{
    using ConfigError::ConfigError;
};

class ConfigValidationError : public ConfigError
{
    using ConfigError::ConfigError;
};

enum class SweepAxis
{
    alpha,
    q_d,
    n_ris,
    arrival,
};

enum class Scheme
{
    mcsc,
    oma,
    both,
};

enum class Metrics
{
    se,
    delay,
    both,
};

/// se_h = (1 - q_r) R_h / B and se_l = (1 - q_d) R_l / B when weighted,
/// plain R / B otherwise, with the rates taken at the maximum stable arrival.
enum class SeDefinition
{
    weighted,
    unweighted,
};

std::string_view to_string(SweepAxis axis);
std::string_view to_string(Scheme scheme);

struct ExperimentConfig
{
    ScenarioParams scenario;
    SweepAxis axis = SweepAxis::alpha;
    /// Empty means the single current value of the swept parameter.
    std::vector<double> values;
    Scheme scheme = Scheme::both;
    Metrics metrics = Metrics::both;
    SeDefinition se_definition = SeDefinition::weighted;
    TransformForm transform_form = TransformForm::consistent;
    bool oma_lc_ris_assist = false;
    long long slots = 100000;
    std::uint64_t seed = 1;
    std::string output = "sweep.csv";
    int workers = 0; // 0: hardware concurrency

    /// Sweep grid with the default filled in.
    std::vector<double> grid() const;
    /// Throws ConfigValidationError.
    void validate() const;
    /// One `key=value` line per setting in a fixed order, SI units.
    std::string canonical_text() const;
    std::uint64_t digest() const;
};

/// Flat `key = value` text; `#` starts a comment. Powers in dBm, noise PSD in
/// dBm/Hz, antenna gains in dB, frequency and bandwidth in GHz, the rest SI.
/// sweep_values takes a comma list or start:step:stop.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string &path);

/// The scenario with the swept parameter set to `value`.
ScenarioParams apply_sweep_value(const ScenarioParams &base, SweepAxis axis, double value);

struct SpectralEfficiency
{
    double se_h = 0.0; // bit/s/Hz
    double se_l = 0.0;
    double se_sum = 0.0;
    double a_star = 0.0; // packets/slot
    int iterations = 0;
    std::string status = "ok";
};

/// SE at the largest arrival rate both queues can sustain for this alpha.
/// A class that receives no traffic (alpha 0 or 1) reports zero.
/// `scheme` must be mcsc or oma.
SpectralEfficiency spectral_efficiency(const ScenarioParams &scenario, double alpha, Scheme scheme,
                                       SeDefinition definition = SeDefinition::weighted,
                                       const ScaOptions &options = {}, bool oma_lc_ris_assist = false);

/// Service rates of a scheme at a fixed arrival rate.
struct SchemeRates
{
    RatePair rates;
    int iterations = 0;
    std::string status = "ok";
};

SchemeRates scheme_rates(const ScenarioParams &scenario, double alpha, double arrival, Scheme scheme,
                         const ScaOptions &options = {}, bool oma_lc_ris_assist = false);

struct SweepRow
{
    double sweep_value = 0.0;
    std::string scheme;
    std::optional<double> se_h;
    std::optional<double> se_l;
    std::optional<double> se_sum;
    std::optional<double> a_star;
    // Empty when the class has no traffic or its queue diverges.
    std::optional<double> tau_h_slots;
    std::optional<double> tau_l_slots;
    std::optional<bool> stable;
    int iterations = 0;
    std::string status = "ok";

    bool operator==(const SweepRow &) const = default;
};

/// Simulation seed of sweep point `index`, shared by both schemes so they
/// see the same arrivals and blockage.
std::uint64_t point_seed(std::uint64_t seed, std::size_t index);

/// Rows ordered by sweep value, MC-SC before OMA within a value. A point that
/// throws yields a row with only the status filled in.
std::vector<SweepRow> run_sweep(const ExperimentConfig &config);

/// Sweep value maximizing se_sum(mcsc) - se_sum(oma), if both are present.
std::optional<double> tipping_point(const std::vector<SweepRow> &rows);

inline constexpr std::string_view kCsvHeader =
    "sweep_value,scheme,se_h,se_l,se_sum,a_star,tau_h_slots,tau_l_slots,stable,iterations,status";

void write_csv(std::ostream &out, const std::vector<SweepRow> &rows);
/// Throws std::runtime_error on a malformed file.
std::vector<SweepRow> read_csv(std::istream &in);

/// `<csv_path>.meta.json` with the seed, config digest and tipping point.
std::string metadata_json(const ExperimentConfig &config, const std::vector<SweepRow> &rows);

void write_trace_csv(std::ostream &out, const QueueTrace &trace);

/// Runs the sweep and writes the CSV and its sidecar. Throws on I/O failure.
std::vector<SweepRow> run_sweep_to_files(const ExperimentConfig &config);

} // namespace mcsc

#endif
