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

#include "mcsc/link_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mcsc {

namespace {

void require(bool ok, const std::string &what)
{
    if (!ok)
        throw std::invalid_argument("invalid scenario: " + what);
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

} // namespace

void ScenarioParams::validate() const
{
    require(positive(carrier_frequency), "carrier_frequency must be > 0");
    require(positive(bandwidth), "bandwidth must be > 0");
    require(positive(max_power), "max_power must be > 0");
    require(positive(noise_psd), "noise_psd must be > 0");
    require(positive(gain_bs) && positive(gain_ue), "antenna gains must be > 0");
    require(n_bs >= 1, "n_bs must be >= 1");
    require(n_ris >= 1, "n_ris must be >= 1");
    require(positive(d_bu) && positive(d_br) && positive(d_ru), "distances must be > 0");
    require(std::isfinite(absorption) && absorption >= 0.0, "absorption must be >= 0");
    require(std::isfinite(element_length_x) && element_length_x >= 0.0, "element_length_x must be >= 0");
    require(std::isfinite(element_length_y) && element_length_y >= 0.0, "element_length_y must be >= 0");
    require(q_r >= 0.0 && q_r <= q_d && q_d <= 1.0, "blockage probabilities must satisfy 0 <= q_r <= q_d <= 1");
    require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
    require(positive(packet_size), "packet_size must be > 0");
    require(positive(slot_duration), "slot_duration must be > 0");
    require(std::isfinite(arrival_rate) && arrival_rate >= 0.0, "arrival_rate must be >= 0");
    for (double phi : {phi_bu, phi_br, phi_rb, phi_ru})
        require(std::isnan(phi) || std::isfinite(phi), "angles must be finite");
    (void)resolved_angles();
}

Angles ScenarioParams::resolved_angles() const
{
    Angles out{phi_bu, phi_br, phi_rb, phi_ru};
    if (std::isnan(phi_bu) || std::isnan(phi_br) || std::isnan(phi_rb) || std::isnan(phi_ru))
    {
        const Angles layout = layout_angles(d_bu, d_br, d_ru).angles;
        if (std::isnan(out.phi_bu))
            out.phi_bu = layout.phi_bu;
        if (std::isnan(out.phi_br))
            out.phi_br = layout.phi_br;
        if (std::isnan(out.phi_rb))
            out.phi_rb = layout.phi_rb;
        if (std::isnan(out.phi_ru))
            out.phi_ru = layout.phi_ru;
    }
    return out;
}

LayoutAngles layout_angles(double d_bu, double d_br, double d_ru)
{
    if (!(d_bu > 0.0 && d_br > 0.0 && d_ru > 0.0))
        throw std::invalid_argument("layout: distances must be > 0");
    const double x = (d_bu * d_bu + d_br * d_br - d_ru * d_ru) / (2.0 * d_bu);
    const double y2 = d_br * d_br - x * x;
    if (y2 < 0.0)
        throw std::invalid_argument("layout: distances d_bu, d_br, d_ru do not form a triangle; set the angles explicitly");
    const double y = std::sqrt(y2);

    // RIS broadside points back at the BS.
    const double to_bs_x = -x, to_bs_y = -y;
    const double to_ue_x = d_bu - x, to_ue_y = -y;
    const double cross = to_bs_x * to_ue_y - to_bs_y * to_ue_x;
    const double dot = to_bs_x * to_ue_x + to_bs_y * to_ue_y;

    LayoutAngles out{};
    out.angles.phi_bu = 0.0;
    out.angles.phi_br = std::atan2(y, x);
    out.angles.phi_rb = 0.0;
    out.angles.phi_ru = std::atan2(cross, dot);
    out.ris_x = x;
    out.ris_y = y;
    return out;
}

double noise_power(double n0, double bandwidth)
{
    if (!(n0 > 0.0) || !(bandwidth > 0.0))
        throw std::domain_error("noise_power: n0 and bandwidth must be > 0");
    return n0 * bandwidth;
}

double direct_gain(const ScenarioParams &params)
{
    const double f = params.carrier_frequency;
    return std::sqrt(params.gain_bs * params.gain_ue) * kSpeedOfLight / (4.0 * kPi * f * params.d_bu) *
           std::exp(-0.5 * params.absorption * params.d_bu);
}

double ris_gain(const ScenarioParams &params)
{
    const double area = params.element_x() * params.element_y();
    return std::sqrt(params.gain_bs * params.gain_ue) * area / (4.0 * kPi * params.d_br * params.d_ru) *
           std::exp(-0.5 * params.absorption * (params.d_br + params.d_ru));
}

LinkGains link_gains(const ScenarioParams &params)
{
    return {direct_gain(params), ris_gain(params), noise_power(params.noise_psd, params.bandwidth)};
}

std::vector<std::complex<double>> array_response(int n, double phi)
{
    if (n < 1)
        throw std::domain_error("array_response: n must be >= 1");
    std::vector<std::complex<double>> a(static_cast<std::size_t>(n));
    const double step = kPi * std::sin(phi);
    for (int k = 0; k < n; ++k)
        a[static_cast<std::size_t>(k)] = std::polar(1.0, step * k);
    return a;
}

SinrPair approx_sinrs(const LinkGains &gains, int n_bs, int n_ris, const PowerAllocation &p,
                      const BlockageState &b)
{
    const double direct = b.beta_d * n_bs * gains.eta_d * gains.eta_d;
    const double reflected = b.beta_r * static_cast<double>(n_bs) * n_ris * gains.eta_r * gains.eta_r;
    const double lc_signal = direct * p.p_l_d + reflected * p.p_l_r;
    const double hc_signal = direct * p.p_h_d + reflected * p.p_h_r;
    return {hc_signal / (lc_signal + gains.noise), lc_signal / gains.noise};
}

SinrPair exact_sinrs(const ScenarioParams &params, const PowerAllocation &p, const BlockageState &b)
{
    using cd = std::complex<double>;
    const Angles ang = params.resolved_angles();
    const LinkGains gains = link_gains(params);
    const int nb = params.n_bs;
    const int nr = params.n_ris;

    // a_R(phi_ru)^H Phi a_R(phi_rb) with the matched phase profile.
    const auto a_ru = array_response(nr, ang.phi_ru);
    const auto a_rb = array_response(nr, ang.phi_rb);
    const double profile_step = kPi * (std::sin(ang.phi_ru) - std::sin(ang.phi_rb));
    cd cascade{0.0, 0.0};
    for (int k = 0; k < nr; ++k)
    {
        const auto i = static_cast<std::size_t>(k);
        cascade += std::conj(a_ru[i]) * std::polar(1.0, profile_step * k) * a_rb[i];
    }
    cascade /= std::sqrt(static_cast<double>(nr));

    const auto a_bu = array_response(nb, ang.phi_bu);
    const auto a_br = array_response(nb, ang.phi_br);

    // Received amplitude v^H f for a beamformer with per-direction powers.
    const double norm = 1.0 / std::sqrt(static_cast<double>(nb));
    auto received = [&](double p_dir, double p_ris) {
        cd direct_path{0.0, 0.0}, ris_path{0.0, 0.0};
        for (int n = 0; n < nb; ++n)
        {
            const auto i = static_cast<std::size_t>(n);
            const cd f = norm * (std::sqrt(p_dir) * a_bu[i] + std::sqrt(p_ris) * a_br[i]);
            direct_path += std::conj(a_bu[i]) * f;
            ris_path += std::conj(a_br[i]) * f;
        }
        return b.beta_d * gains.eta_d * direct_path + b.beta_r * gains.eta_r * cascade * ris_path;
    };

    const double hc_power = std::norm(received(p.p_h_d, p.p_h_r));
    const double lc_power = std::norm(received(p.p_l_d, p.p_l_r));
    return {hc_power / (lc_power + gains.noise), lc_power / gains.noise};
}

RatePair rates(const SinrPair &sinr, double bandwidth)
{
    return {bandwidth * std::log2(1.0 + sinr.hc), bandwidth * std::log2(1.0 + sinr.lc)};
}

BlockageState sample_blockage(double q_d, double q_r, Rng &rng)
{
    if (!(q_r >= 0.0 && q_r <= q_d && q_d <= 1.0))
        throw std::domain_error("sample_blockage: requires 0 <= q_r <= q_d <= 1");
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double u = uniform(rng);
    return {u < q_d ? 0 : 1, u < q_r ? 0 : 1};
}

} // namespace mcsc
