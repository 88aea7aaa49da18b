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

#ifndef ADROPT_OPTICS_HPP
#define ADROPT_OPTICS_HPP

#include "common.hpp"

#include <cmath>

namespace adropt
{

template <typename Scalar = double>
struct CpcSpec
{
    Scalar acceptance_angle;     // rad, half-angle
    Scalar refractive_index = 1;
    Scalar exit_diameter;        // m
};

template <typename Scalar = double>
struct CpcGeometry
{
    Scalar acceptance_angle;
    Scalar exit_diameter;
    Scalar entrance_diameter;
    Scalar length;
    Scalar gain;
};

/// Length truncation: keep `length_ratio` of the CPC, retain `gain_retention` of its gain.
template <typename Scalar = double>
struct TruncationSpec
{
    Scalar length_ratio = Scalar(0.6);
    Scalar gain_retention = Scalar(0.9);
};

/// Largest acceptance half-angle any ADR element can have (pi/6).
template <typename Scalar = double>
inline constexpr Scalar max_acceptance_angle = constants::pi<Scalar> / Scalar(6);

template <typename Scalar>
void validate(const TruncationSpec<Scalar> &trunc)
{
    if (!(trunc.length_ratio >= Scalar(0.5) && trunc.length_ratio <= Scalar(1)))
        throw DomainError("truncation length ratio must lie in [0.5, 1]; the acceptance angle is not preserved below 0.5");
    if (!(trunc.gain_retention > Scalar(0) && trunc.gain_retention <= Scalar(1)))
        throw DomainError("truncation gain retention must lie in (0, 1]");
}

/// Gain n^2/sin^2(theta), entrance diameter D2 n/sin(theta), length (D1 + D2)/(2 tan theta).
template <typename Scalar>
CpcGeometry<Scalar> cpc_derive(const CpcSpec<Scalar> &spec)
{
    const Scalar theta = spec.acceptance_angle;
    if (!(theta > Scalar(0) && theta <= max_acceptance_angle<Scalar>))
        throw DomainError("CPC acceptance angle must lie in (0, pi/6]");
    if (!(spec.refractive_index >= Scalar(1)))
        throw DomainError("CPC refractive index must be >= 1");
    detail::require_positive(spec.exit_diameter, "CPC exit diameter");

    const Scalar s = std::sin(theta);
    const Scalar d1 = spec.exit_diameter * spec.refractive_index / s;
    const Scalar gain = spec.refractive_index * spec.refractive_index / (s * s);
    const Scalar length = (d1 + spec.exit_diameter) / (Scalar(2) * std::tan(theta));
    return {theta, spec.exit_diameter, d1, length, gain};
}

template <typename Scalar>
Scalar entrance_area(const CpcGeometry<Scalar> &geom)
{
    return constants::pi<Scalar> * geom.entrance_diameter * geom.entrance_diameter / Scalar(4);
}

/// Exit aperture and acceptance angle are unchanged by truncation.
template <typename Scalar>
CpcGeometry<Scalar> apply_truncation(const CpcGeometry<Scalar> &geom, const TruncationSpec<Scalar> &trunc)
{
    validate(trunc);
    CpcGeometry<Scalar> out = geom;
    out.entrance_diameter = std::sqrt(trunc.gain_retention) * geom.entrance_diameter;
    out.length = trunc.length_ratio * geom.length;
    out.gain = trunc.gain_retention * geom.gain;
    return out;
}

} // namespace adropt

#endif
