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

#ifndef ADROPT_CALIBRATE_HPP
#define ADROPT_CALIBRATE_HPP

#include "optimizer.hpp"

#include <array>

namespace adropt
{

/// Reference values the free constants K_PD and R_L are tuned against.
struct CalibrationAnchors
{
    double bandwidth = 2.1e9;                       // Hz, geometry anchor point (Config 1)
    double fov = 30.0 * constants::pi<double> / 180.0;
    double height = 1.99e-2;                        // m
    double area = 2.12e-4;                          // m^2
    std::array<double, 3> peak_rate{14.00e9, 18.56e9, 24.53e9}; // Configs 1-3 at the same FOV
    std::array<double, 3> peak_bandwidth{2.1e9, 2.7e9, 3.5e9};
};

struct AnchorResiduals
{
    double height;                      // relative
    double area;                        // relative
    std::array<double, 3> rate;         // relative
    std::array<double, 3> bandwidth;    // Hz, signed
    double worst_relative() const;
};

struct CalibrationResult
{
    double pd_constant;      // fitted K_PD
    double load_resistance;  // fitted R_L
    AnchorResiduals fitted;  // residuals with the fitted pair
    AnchorResiduals frozen;  // residuals with the constants passed in
};

AnchorResiduals anchor_residuals(const Config &base, const Context &ctx, const CalibrationAnchors &anchors = {},
                                 const SearchOptions &search = {});

/**
 * Fit K_PD to the geometry pair (log least squares; L scales as 1/K_PD and A
 * as 1/K_PD^2, so the fit is closed form), then R_L to the three peak rates by
 * golden-section search in log R_L.
 */
CalibrationResult calibrate(const Config &base, const Context &ctx, const CalibrationAnchors &anchors = {},
                            const SearchOptions &search = {});

} // namespace adropt

#endif
