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

#ifndef MCSC_LINK_MODEL_HPP
#define MCSC_LINK_MODEL_HPP

#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace mcsc {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kPi = 3.14159265358979323846;

using Rng = std::mt19937_64;

struct Angles
{
    double phi_bu, phi_br, phi_rb, phi_ru;
};

/// Physical and traffic configuration of the single-user downlink.
///
/// All members are SI: W, W/Hz, Hz, m, rad, bit, s. Antenna gains are linear.
/// Element lengths of zero mean "half a wavelength at carrier_frequency".
struct ScenarioParams
{
    double carrier_frequency = 300e9;
    double bandwidth = 10e9;
    double max_power = 0.01;
    double noise_psd = 3.981071705534985e-21;
    double gain_bs = 100.0;
    double gain_ue = 100.0;
    int n_bs = 64;
    int n_ris = 10000;
    double d_bu = 10.0;
    double d_br = 8.7;
    double d_ru = 2.0;
    double absorption = 0.0012;
    double element_length_x = 0.0;
    double element_length_y = 0.0;
    double q_d = 0.3;
    double q_r = 0.1;
    // NaN: derive from the default layout (see layout_angles).
    double phi_bu = std::numeric_limits<double>::quiet_NaN();
    double phi_br = std::numeric_limits<double>::quiet_NaN();
    double phi_rb = std::numeric_limits<double>::quiet_NaN();
    double phi_ru = std::numeric_limits<double>::quiet_NaN();
    double alpha = 0.1;
    double packet_size = 10e6;
    double slot_duration = 0.1;
    double arrival_rate = 700.0;

    double wavelength() const { return kSpeedOfLight / carrier_frequency; }
    double element_x() const { return element_length_x > 0.0 ? element_length_x : 0.5 * wavelength(); }
    double element_y() const { return element_length_y > 0.0 ? element_length_y : 0.5 * wavelength(); }

    /// Packets per slot served per bit/s/Hz of rate: (T/M) B.
    double packets_per_se() const { return slot_duration / packet_size * bandwidth; }

    /// Throws std::invalid_argument naming the first violated invariant.
    void validate() const;

    /// Explicit angles where set, layout-derived ones elsewhere.
    Angles resolved_angles() const;
};

/// Angles of departure/arrival for the default planar layout.
///
/// BS at the origin with its array broadside towards the UE at (d_bu, 0); the
/// RIS sits at the upper-half-plane intersection of the circles of radius d_br
/// around the BS and d_ru around the UE, with its broadside facing the BS.
struct LayoutAngles
{
    Angles angles;
    double ris_x, ris_y;
};

/// Throws std::invalid_argument if the three distances violate the triangle
/// inequality.
LayoutAngles layout_angles(double d_bu, double d_br, double d_ru);

struct LinkGains
{
    double eta_d;
    double eta_r;
    double noise;
};

struct BlockageState
{
    int beta_d = 1;
    int beta_r = 1;

    friend bool operator==(const BlockageState &, const BlockageState &) = default;
};

struct PowerAllocation
{
    double p_h_d = 0.0;
    double p_h_r = 0.0;
    double p_l_d = 0.0;
    double p_l_r = 0.0;

    double total() const { return p_h_d + p_h_r + p_l_d + p_l_r; }
    PowerAllocation scaled(double s) const { return {p_h_d * s, p_h_r * s, p_l_d * s, p_l_r * s}; }
};

struct SinrPair
{
    double hc;
    double lc;
};

struct RatePair
{
    double hc; // bit/s
    double lc; // bit/s
};

double noise_power(double n0, double bandwidth);
double direct_gain(const ScenarioParams &params);
double ris_gain(const ScenarioParams &params);
LinkGains link_gains(const ScenarioParams &params);

/// Uniform linear array response, element k = exp(j pi k sin(phi)).
std::vector<std::complex<double>> array_response(int n, double phi);

/// Pencil-beam SINRs: no leakage between the LOS and RIS beams at the BS and
/// power (not amplitude) addition of the two paths at the UE.
SinrPair approx_sinrs(const LinkGains &gains, int n_bs, int n_ris, const PowerAllocation &p,
                      const BlockageState &b);

/// SINRs from the explicit array-response channel model.
///
/// The RIS applies the matched profile exp(j pi k (sin phi_ru - sin phi_rb)),
/// so the cascade sums coherently over all elements. The cascade is scaled by
/// 1/sqrt(n_ris) so that its received power grows as n_ris, the scaling used
/// by approx_sinrs. Every cross term is kept: beam leakage at the BS and the
/// in-phase superposition of the LOS and RIS paths at the UE.
SinrPair exact_sinrs(const ScenarioParams &params, const PowerAllocation &p, const BlockageState &b);

/// Shannon rates B log2(1 + sinr) for both streams.
RatePair rates(const SinrPair &sinr, double bandwidth);

/// Nested Bernoulli blockage from a single uniform draw u: the RIS path is
/// blocked iff u < q_r and the LOS path iff u < q_d.
BlockageState sample_blockage(double q_d, double q_r, Rng &rng);

} // namespace mcsc

#endif
