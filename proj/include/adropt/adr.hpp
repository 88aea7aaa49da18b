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

#ifndef ADROPT_ADR_HPP
#define ADROPT_ADR_HPP

#include "common.hpp"
#include "optics.hpp"

#include <Eigen/Core>

#include <array>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

namespace adropt
{

/// Junction/transit parameters of a PIN photodiode and its TIA load.
template <typename Scalar = double>
struct PdPhysical
{
    Scalar vacuum_permittivity = Scalar(constants::vacuum_permittivity);
    Scalar relative_permittivity;
    Scalar load_resistance;      // Ohm
    Scalar saturation_velocity;  // m/s
    std::optional<Scalar> depletion_thickness; // m
};

/// A receiver configuration: tier count, PD array and the constants tying bandwidth to PD size.
template <typename Scalar = double>
struct AdrConfig
{
    std::string name = "custom";
    int tiers = 1;
    int pds_per_array = 4;
    Scalar fill_factor = Scalar(0.7);
    Scalar cpc_index = Scalar(1.7);
    Scalar pd_constant = Scalar(1.746e-6); // s/m, B = 1 / (K_PD * D_PD)
    std::optional<TruncationSpec<Scalar>> truncation;
};

template <typename Scalar = double>
struct AdrGeometry
{
    Scalar theta_cpc;
    Eigen::Array<Scalar, Eigen::Dynamic, 1> tilt_angles; // tier i at 2 i theta_cpc, i = 1..N_tier
    Scalar pd_side;
    Scalar exit_diameter;
    Scalar entrance_diameter;
    Scalar height;
    Scalar top_area;
    int element_count;
    Scalar k1; // m Hz
    Scalar k2; // m^2 Hz^2
};

namespace detail
{
inline bool is_perfect_square(int n)
{
    if (n < 1)
        return false;
    int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    return r * r == n;
}
} // namespace detail

template <typename Scalar>
void validate(const AdrConfig<Scalar> &cfg)
{
    if (cfg.tiers < 0)
        throw DomainError("number of tiers must be >= 0");
    if (!detail::is_perfect_square(cfg.pds_per_array))
        throw DomainError("PDs per array must be a perfect square >= 1");
    if (!(cfg.fill_factor > Scalar(0) && cfg.fill_factor <= Scalar(1)))
        throw DomainError("fill factor must lie in (0, 1]");
    if (!(cfg.cpc_index >= Scalar(1)))
        throw DomainError("CPC refractive index must be >= 1");
    detail::require_positive(cfg.pd_constant, "PD constant K_PD");
    if (cfg.truncation)
        validate(*cfg.truncation);
}

/// 1 + sum_{i=1}^{N} 6 i: the centre element plus hexagonal rings.
inline int element_count(int tiers)
{
    if (tiers < 0)
        throw DomainError("number of tiers must be >= 0");
    return 1 + 3 * tiers * (tiers + 1);
}

template <typename Scalar>
int total_pds(const AdrConfig<Scalar> &cfg)
{
    return element_count(cfg.tiers) * cfg.pds_per_array;
}

/// Widest half-angle FOV an ADR with `tiers` tiers can cover.
template <typename Scalar = double>
Scalar max_fov(int tiers)
{
    const Scalar by_cpc = Scalar(2 * tiers + 1) * max_acceptance_angle<Scalar>;
    return std::min(by_cpc, constants::pi<Scalar> / Scalar(2));
}

/// theta_CPC = FOV / (2 N_tier + 1), with the element bound theta_CPC <= pi/6 enforced.
template <typename Scalar>
Scalar acceptance_angle(Scalar fov, int tiers)
{
    if (tiers < 0)
        throw DomainError("number of tiers must be >= 0");
    if (!(fov > Scalar(0)))
        throw DomainError("FOV must be positive");
    const Scalar theta = fov / Scalar(2 * tiers + 1);
    if (theta > max_acceptance_angle<Scalar> * (Scalar(1) + Scalar(8) * std::numeric_limits<Scalar>::epsilon()))
    {
        std::ostringstream msg;
        msg << "CPC acceptance-angle bound violated: FOV " << rad2deg(fov) << " deg with " << tiers
            << " tier(s) needs theta_cpc = " << rad2deg(theta) << " deg > 30 deg (pi/6)";
        throw DomainError(msg.str());
    }
    if (fov > constants::pi<Scalar> / Scalar(2))
        throw DomainError("FOV must not exceed 90 deg");
    return std::min(theta, max_acceptance_angle<Scalar>);
}

template <typename Scalar>
Scalar pd_side_from_bandwidth(Scalar bandwidth, Scalar pd_constant)
{
    detail::require_positive(bandwidth, "bandwidth");
    detail::require_positive(pd_constant, "PD constant K_PD");
    return Scalar(1) / (pd_constant * bandwidth);
}

template <typename Scalar>
Scalar bandwidth_from_pd_side(Scalar pd_side, Scalar pd_constant)
{
    detail::require_positive(pd_side, "PD side length");
    detail::require_positive(pd_constant, "PD constant K_PD");
    return Scalar(1) / (pd_constant * pd_side);
}

/// K_PD = sqrt(4 pi eps0 eps_r R_L / (0.44 v_s)).
template <typename Scalar>
Scalar pd_constant(const PdPhysical<Scalar> &pd)
{
    detail::require_positive(pd.vacuum_permittivity, "vacuum permittivity");
    detail::require_positive(pd.relative_permittivity, "relative permittivity");
    detail::require_positive(pd.load_resistance, "load resistance");
    detail::require_positive(pd.saturation_velocity, "saturation velocity");
    return std::sqrt(Scalar(4) * constants::pi<Scalar> * pd.vacuum_permittivity * pd.relative_permittivity *
                     pd.load_resistance / (Scalar(0.44) * pd.saturation_velocity));
}

/// RC and transit-time limited bandwidth for the given depletion thickness.
template <typename Scalar>
Scalar pd_bandwidth_full(const PdPhysical<Scalar> &pd, Scalar area)
{
    if (!pd.depletion_thickness)
        throw DomainError("depletion thickness is required for the full bandwidth model");
    const Scalar ell = *pd.depletion_thickness;
    detail::require_positive(ell, "depletion thickness");
    detail::require_positive(area, "PD area");
    const Scalar cap = pd.vacuum_permittivity * pd.relative_permittivity * area / ell;
    const Scalar rc = Scalar(2) * constants::pi<Scalar> * pd.load_resistance * cap;
    const Scalar transit = ell / (Scalar(0.44) * pd.saturation_velocity);
    return Scalar(1) / std::sqrt(rc * rc + transit * transit);
}

/// Depletion thickness that balances the RC and transit terms.
template <typename Scalar>
Scalar optimal_depletion_thickness(const PdPhysical<Scalar> &pd, Scalar area)
{
    detail::require_positive(area, "PD area");
    return std::sqrt(Scalar(2) * constants::pi<Scalar> * pd.load_resistance * pd.vacuum_permittivity *
                     pd.relative_permittivity * area * Scalar(0.44) * pd.saturation_velocity);
}

/// Upper bound of the PD bandwidth, attained at the optimal depletion thickness.
template <typename Scalar>
Scalar pd_bandwidth_optimal(const PdPhysical<Scalar> &pd, Scalar area)
{
    detail::require_positive(area, "PD area");
    const Scalar k = pd_constant(pd);
    return Scalar(1) / (k * std::sqrt(area));
}

/// 1 + sum_{i=1}^{N} 6 i cos(2 i theta): projected top area of all elements in units of one entrance aperture.
template <typename Scalar>
Scalar ring_factor(int tiers, Scalar theta_cpc)
{
    Scalar sum = Scalar(1);
    for (int i = 1; i <= tiers; ++i)
        sum += Scalar(6 * i) * std::cos(Scalar(2 * i) * theta_cpc);
    return sum;
}

/// Derivative of ring_factor with respect to theta_cpc.
template <typename Scalar>
Scalar ring_factor_derivative(int tiers, Scalar theta_cpc)
{
    Scalar sum = Scalar(0);
    for (int i = 1; i <= tiers; ++i)
        sum -= Scalar(12 * i * i) * std::sin(Scalar(2 * i) * theta_cpc);
    return sum;
}

template <typename Scalar>
Scalar array_factor(const AdrConfig<Scalar> &cfg)
{
    return std::sqrt(Scalar(cfg.pds_per_array) / cfg.fill_factor);
}

/**
 * Full ADR dimensions at a design point (bandwidth, FOV).
 *
 * Bandwidth fixes the PD side through the area-bandwidth relation, the PD
 * array fixes the CPC exit aperture and the FOV fixes the CPC acceptance
 * angle. The ADR height is taken as the CPC length. With truncation, D1
 * shrinks by sqrt(gamma), the height by tau and the top area by gamma.
 */
template <typename Scalar>
AdrGeometry<Scalar> geometry(const AdrConfig<Scalar> &cfg, Scalar bandwidth, Scalar fov)
{
    validate(cfg);
    detail::require_positive(bandwidth, "bandwidth");
    const Scalar theta = acceptance_angle(fov, cfg.tiers);
    const Scalar s = std::sin(theta);
    const Scalar t = std::tan(theta);
    const Scalar af = array_factor(cfg);

    AdrGeometry<Scalar> g;
    g.theta_cpc = theta;
    g.tilt_angles = Eigen::Array<Scalar, Eigen::Dynamic, 1>::LinSpaced(cfg.tiers, Scalar(1), Scalar(cfg.tiers)) *
                    (Scalar(2) * theta);
    g.element_count = element_count(cfg.tiers);
    g.pd_side = pd_side_from_bandwidth(bandwidth, cfg.pd_constant);
    g.exit_diameter = g.pd_side * af;
    g.entrance_diameter = g.exit_diameter * cfg.cpc_index / s;
    g.k1 = af / (Scalar(2) * cfg.pd_constant);
    g.k2 = constants::pi<Scalar> * Scalar(cfg.pds_per_array) * cfg.cpc_index * cfg.cpc_index /
           (Scalar(4) * cfg.fill_factor * cfg.pd_constant * cfg.pd_constant);
    g.height = g.k1 / bandwidth * (cfg.cpc_index + s) / (s * t);
    g.top_area = g.k2 / (bandwidth * bandwidth * s * s) * ring_factor(cfg.tiers, theta);

    if (cfg.truncation)
    {
        g.entrance_diameter *= std::sqrt(cfg.truncation->gain_retention);
        g.height *= cfg.truncation->length_ratio;
        g.top_area *= cfg.truncation->gain_retention;
    }
    return g;
}

/// Reference receiver layouts: (tiers, PD array side).
inline constexpr std::array<std::array<int, 2>, 6> preset_layouts{{{1, 2}, {1, 4}, {1, 8}, {2, 2}, {2, 4}, {3, 2}}};

/// `config1` ... `config6`; nullopt for unknown names.
inline std::optional<AdrConfig<double>> adr_preset(std::string_view name)
{
    for (std::size_t i = 0; i < preset_layouts.size(); ++i)
    {
        if (name == "config" + std::to_string(i + 1))
        {
            AdrConfig<double> cfg;
            cfg.name = std::string(name);
            cfg.tiers = preset_layouts[i][0];
            cfg.pds_per_array = preset_layouts[i][1] * preset_layouts[i][1];
            return cfg;
        }
    }
    return std::nullopt;
}

inline AdrConfig<double> with_truncation(AdrConfig<double> cfg, TruncationSpec<double> trunc = {})
{
    cfg.truncation = trunc;
    return cfg;
}

} // namespace adropt

#endif
