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

// Shared fixtures for the unit tests.

#ifndef ADROPT_TESTS_SUPPORT_HPP
#define ADROPT_TESTS_SUPPORT_HPP

#include "adropt/link.hpp"
#include "adropt/optimizer.hpp"

#include <cmath>
#include <random>

namespace testing
{

inline constexpr double deg = adropt::constants::pi<double> / 180.0;

inline adropt::SourceBeam<double> default_source(double power = 10e-3)
{
    return {10e-6, 950e-9, 1.0, power};
}

inline adropt::Context default_context(double power = 10e-3)
{
    return adropt::make_link_context(default_source(power), adropt::LensSpec<double>{33e-3, 0.0},
                                     adropt::LinkParams<double>{}, adropt::NoiseModel<double>{});
}

inline adropt::Config preset(int i)
{
    return *adropt::adr_preset("config" + std::to_string(i));
}

inline double rel(double a, double b)
{
    return std::abs(a - b) / std::abs(b);
}

/// Uniform in log space.
inline double log_uniform(std::mt19937_64 &rng, double lo, double hi)
{
    return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
}

inline double uniform(std::mt19937_64 &rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Share of the beam power that misses the entrance aperture: 1 - P_r / (FF P_t).
inline double uncollected_fraction(const adropt::Config &cfg, double b, double fov, const adropt::Context &ctx)
{
    return 1.0 - adropt::received_power_closed_form(cfg, b, fov, ctx) / (cfg.fill_factor * ctx.beam.power);
}

// Below this share, R(FOV) is flat to double precision and only non-increase can be asserted.
inline constexpr double resolvable_share = 1e-12;
// Above this share, central differences with a 1e-6 rad step resolve dR/dFOV to better than 1e-4.
inline constexpr double differentiable_share = 1e-4;

} // namespace testing

#endif
