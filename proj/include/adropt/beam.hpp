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

#ifndef ADROPT_BEAM_HPP
#define ADROPT_BEAM_HPP

#include "common.hpp"

#include <cmath>
#include <optional>

namespace adropt
{

/// Gaussian beam leaving the VCSEL, before the transmitter lens.
template <typename Scalar = double>
struct SourceBeam
{
    Scalar waist_radius;        // m
    Scalar wavelength;          // m
    Scalar medium_index = 1;    //
    Scalar power = 0;           // W
};

/// Thin plano-convex lens; `waist_distance` is the VCSEL waist to lens spacing.
template <typename Scalar = double>
struct LensSpec
{
    Scalar focal_length;        // m
    Scalar waist_distance = 0;  // m
};

/// Gaussian beam after the lens. `waist_position` is measured from the lens.
template <typename Scalar = double>
struct PropagatedBeam
{
    Scalar waist_radius;
    Scalar rayleigh_range;
    Scalar waist_position;
    Scalar power;
};

template <typename Scalar>
void validate(const SourceBeam<Scalar> &beam, std::optional<Scalar> power_cap = std::nullopt)
{
    detail::require_positive(beam.waist_radius, "beam waist radius");
    detail::require_positive(beam.wavelength, "wavelength");
    if (!(beam.medium_index >= Scalar(1)))
        throw DomainError("medium refractive index must be >= 1");
    detail::require_non_negative(beam.power, "transmit power");
    if (power_cap && beam.power > *power_cap)
        throw DomainError("transmit power exceeds the eye-safety cap");
}

template <typename Scalar>
void validate(const LensSpec<Scalar> &lens)
{
    detail::require_positive(lens.focal_length, "lens focal length");
    detail::require_non_negative(lens.waist_distance, "waist-to-lens distance");
}

/// Rayleigh range pi * w0^2 * n / lambda.
template <typename Scalar>
Scalar rayleigh_range(Scalar waist_radius, Scalar wavelength, Scalar medium_index = Scalar(1))
{
    detail::require_positive(waist_radius, "beam waist radius");
    detail::require_positive(wavelength, "wavelength");
    if (!(medium_index >= Scalar(1)))
        throw DomainError("medium refractive index must be >= 1");
    return constants::pi<Scalar> * waist_radius * waist_radius * medium_index / wavelength;
}

/**
 * Thin-lens transformation of a Gaussian beam.
 *
 * With magnification M = f / sqrt((d - f)^2 + zR^2) the output beam has
 * waist M*w0, Rayleigh range M^2*zR and its waist sits at f + M^2 (d - f)
 * behind the lens. The lens is lossless, so power is carried through.
 */
template <typename Scalar>
PropagatedBeam<Scalar> transform_through_lens(const SourceBeam<Scalar> &beam, const LensSpec<Scalar> &lens)
{
    validate(beam);
    validate(lens);
    const Scalar zr = rayleigh_range(beam.waist_radius, beam.wavelength, beam.medium_index);
    const Scalar offset = lens.waist_distance - lens.focal_length;
    const Scalar mag = lens.focal_length / std::sqrt(offset * offset + zr * zr);
    const Scalar mag2 = mag * mag;
    return {mag * beam.waist_radius, mag2 * zr, lens.focal_length + mag2 * offset, beam.power};
}

/// Beam radius w(z) with z measured from the waist.
template <typename Scalar>
Scalar beam_radius(const PropagatedBeam<Scalar> &beam, Scalar z)
{
    const Scalar u = z / beam.rayleigh_range;
    return beam.waist_radius * std::sqrt(Scalar(1) + u * u);
}

/// Beam radius at an axial distance measured from the lens.
template <typename Scalar>
Scalar beam_radius_at_distance(const PropagatedBeam<Scalar> &beam, Scalar distance)
{
    return beam_radius(beam, distance - beam.waist_position);
}

/// Intensity (W/m^2) at radial offset r, axial offset z from the waist.
template <typename Scalar>
Scalar intensity(const PropagatedBeam<Scalar> &beam, Scalar r, Scalar z)
{
    const Scalar w = beam_radius(beam, z);
    return Scalar(2) * beam.power / (constants::pi<Scalar> * w * w) * std::exp(Scalar(-2) * r * r / (w * w));
}

/// Power inside a disc of radius `radius` on the transverse plane at z (from the waist).
template <typename Scalar>
Scalar encircled_power(const PropagatedBeam<Scalar> &beam, Scalar z, Scalar radius)
{
    detail::require_non_negative(radius, "collection radius");
    const Scalar w = beam_radius(beam, z);
    // -expm1 keeps precision when radius << w
    return -beam.power * std::expm1(Scalar(-2) * radius * radius / (w * w));
}

} // namespace adropt

#endif
