// SPDX-License-Identifier: Apache-2.0
//
// adropt: design and optimisation of angle-diversity optical wireless receivers
// Copyright (C) 2026 The adropt authors
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

#ifndef ADROPT_LINK_HPP
#define ADROPT_LINK_HPP

#include "adr.hpp"
#include "beam.hpp"
#include "common.hpp"

#include <cmath>
#include <optional>

namespace adropt
{

template <typename Scalar = double>
struct LinkParams
{
    Scalar distance = Scalar(3);           // m
    Scalar responsivity = Scalar(0.6);     // A/W
    Scalar snr_gap = Scalar(2.6);
    Scalar transmit_power_cap = Scalar(16e-3); // W
};

enum class NoiseMode
{
    thermal_only,
    full
};

template <typename Scalar = double>
struct NoiseModel
{
    Scalar boltzmann = Scalar(constants::boltzmann);
    Scalar temperature = Scalar(300);              // K
    Scalar load_resistance = Scalar(1150);         // Ohm
    Scalar noise_figure = Scalar(3.1622776601683795); // linear, 5 dB
    Scalar elementary_charge = Scalar(constants::elementary_charge);
    std::optional<Scalar> rin;                     // 1/Hz
    NoiseMode mode = NoiseMode::thermal_only;
};

template <typename Scalar = double>
struct LinkBudget
{
    Scalar received_power; // W
    Scalar noise_psd;      // A^2/Hz
    Scalar snr;
    Scalar rate;           // bit/s
    bool rin_omitted = false;
};

/// Everything downstream of the receiver design point: propagated beam, link and noise constants.
template <typename Scalar = double>
struct LinkContext
{
    PropagatedBeam<Scalar> beam;
    LinkParams<Scalar> link;
    NoiseModel<Scalar> noise;

    /// Beam radius w'(D) on the receiver plane.
    Scalar spot_radius() const { return beam_radius_at_distance(beam, link.distance); }
};

template <typename Scalar>
void validate(const LinkParams<Scalar> &link)
{
    detail::require_positive(link.distance, "link distance");
    detail::require_positive(link.responsivity, "PD responsivity");
    if (!(link.snr_gap >= Scalar(1)))
        throw DomainError("SNR gap must be >= 1");
    detail::require_non_negative(link.transmit_power_cap, "transmit power cap");
}

template <typename Scalar>
void validate(const NoiseModel<Scalar> &nm)
{
    detail::require_positive(nm.boltzmann, "Boltzmann constant");
    detail::require_positive(nm.temperature, "temperature");
    detail::require_positive(nm.load_resistance, "load resistance");
    detail::require_positive(nm.elementary_charge, "elementary charge");
    if (!(nm.noise_figure >= Scalar(1)))
        throw DomainError("TIA noise figure must be >= 1 (linear)");
    if (nm.rin)
        detail::require_non_negative(*nm.rin, "RIN");
}

template <typename Scalar>
LinkContext<Scalar> make_link_context(const SourceBeam<Scalar> &source, const LensSpec<Scalar> &lens,
                                      const LinkParams<Scalar> &link, const NoiseModel<Scalar> &noise)
{
    validate(source, std::optional<Scalar>(link.transmit_power_cap));
    validate(link);
    validate(noise);
    return {transform_through_lens(source, lens), link, noise};
}

/// Power on the aligned centre element, computed as FF times the power inside the CPC entrance aperture.
template <typename Scalar>
Scalar received_power(const AdrConfig<Scalar> &cfg, Scalar bandwidth, Scalar fov, const LinkContext<Scalar> &ctx)
{
    const auto g = geometry(cfg, bandwidth, fov);
    const Scalar z = ctx.link.distance - ctx.beam.waist_position;
    return cfg.fill_factor * encircled_power(ctx.beam, z, g.entrance_diameter / Scalar(2));
}

/// The same received power written directly in the design variables.
template <typename Scalar>
Scalar received_power_closed_form(const AdrConfig<Scalar> &cfg, Scalar bandwidth, Scalar fov,
                                  const LinkContext<Scalar> &ctx)
{
    validate(cfg);
    const Scalar theta = acceptance_angle(fov, cfg.tiers);
    const Scalar w = ctx.spot_radius();
    const Scalar denom = cfg.pd_constant * bandwidth * std::sin(theta) * w;
    Scalar numer = Scalar(cfg.pds_per_array) * cfg.cpc_index * cfg.cpc_index;
    if (cfg.truncation)
        numer *= cfg.truncation->gain_retention;
    const Scalar exponent = -numer / (Scalar(2) * cfg.fill_factor * denom * denom);
    return -cfg.fill_factor * ctx.beam.power * std::expm1(exponent);
}

/// Thermal term only in thermal_only mode; shot and RIN terms added in full mode.
template <typename Scalar>
Scalar noise_psd(const NoiseModel<Scalar> &nm, int pds_per_array, Scalar received, Scalar responsivity)
{
    if (pds_per_array < 1)
        throw DomainError("PDs per array must be >= 1");
    const Scalar thermal =
        Scalar(4) * nm.boltzmann * nm.temperature / nm.load_resistance * nm.noise_figure * Scalar(pds_per_array);
    if (nm.mode == NoiseMode::thermal_only)
        return thermal;
    const Scalar current = responsivity * received;
    Scalar total = thermal + Scalar(2) * nm.elementary_charge * current;
    if (nm.rin)
        total += *nm.rin * current * current;
    return total;
}

/// True when full mode was requested but no RIN value is available.
template <typename Scalar>
bool rin_omitted(const NoiseModel<Scalar> &nm)
{
    return nm.mode == NoiseMode::full && !nm.rin;
}

template <typename Scalar>
LinkBudget<Scalar> evaluate_link(const AdrConfig<Scalar> &cfg, Scalar bandwidth, Scalar fov,
                                 const LinkContext<Scalar> &ctx)
{
    LinkBudget<Scalar> out;
    out.received_power = received_power_closed_form(cfg, bandwidth, fov, ctx);
    out.noise_psd = noise_psd(ctx.noise, cfg.pds_per_array, out.received_power, ctx.link.responsivity);
    const Scalar current = ctx.link.responsivity * out.received_power;
    out.snr = current * current / (out.noise_psd * bandwidth);
    out.rate = bandwidth * std::log2(Scalar(1) + out.snr / ctx.link.snr_gap);
    out.rin_omitted = rin_omitted(ctx.noise);
    return out;
}

/// R = B log2(1 + SNR / Gamma).
template <typename Scalar>
Scalar achievable_rate(const AdrConfig<Scalar> &cfg, Scalar bandwidth, Scalar fov, const LinkContext<Scalar> &ctx)
{
    return evaluate_link(cfg, bandwidth, fov, ctx).rate;
}

} // namespace adropt

#endif
