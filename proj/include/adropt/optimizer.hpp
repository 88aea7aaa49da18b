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

#ifndef ADROPT_OPTIMIZER_HPP
#define ADROPT_OPTIMIZER_HPP

#include "adr.hpp"
#include "link.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace adropt
{

using Config = AdrConfig<double>;
using Context = LinkContext<double>;

enum class Dimension
{
    height,
    area
};

enum class Constraint
{
    fov,
    height,
    area
};

std::string_view to_string(Constraint c);

/// Minimum FOV plus optional bounds on ADR height (m) and top area (m^2).
struct ConstraintSet
{
    double fov_min;
    std::optional<double> l_max;
    std::optional<double> a_max;
};

void validate(const ConstraintSet &cs);

struct SearchOptions
{
    double b_min = 0.1e9;
    double b_max = 20e9;
    int grid_points = 2000;
    double rel_tol = 1e-6;        // on the optimal bandwidth
    double inversion_tol = 1e-10; // relative residual of boundary inversions
};

struct BoundarySample
{
    double bandwidth;
    double fov;  // NaN where no FOV is feasible
    double rate; // NaN where no FOV is feasible
};

struct OptimumResult
{
    bool feasible = false;
    double b_star = 0;
    double fov_star = 0;
    double rate_star = 0;
    std::vector<Constraint> active_constraints;
    std::vector<BoundarySample> boundary_trace;
    std::string diagnostic;

    bool is_active(Constraint c) const;
};

/// Bandwidth on the L_ADR = bound (height) or A_ADR = bound (area) boundary at the given FOV.
double dimension_boundary(const Config &cfg, Dimension which, double fov, double bound);

struct BoundaryInversion
{
    /// false when the bandwidth is below every boundary value: the bound is violated at every FOV.
    bool in_image;
    double fov;
};

/// Unique FOV on the dimension boundary for bandwidth B, by bisection.
BoundaryInversion invert_dimension_boundary(const Config &cfg, Dimension which, double bandwidth, double bound,
                                            double rel_tol = 1e-10);

struct UnifiedBoundary
{
    bool feasible;
    double fov;            // smallest feasible FOV at this bandwidth
    Constraint dominant;   // the constraint attaining the max (or the one that makes B infeasible)
};

/// max{FOV_min, height-boundary inverse, area-boundary inverse} at bandwidth B.
UnifiedBoundary unified_boundary(const Config &cfg, const ConstraintSet &cs, double bandwidth,
                                 double rel_tol = 1e-10);

/// Maximise R(B, FOV_min) over B with a log grid and golden-section refinement.
OptimumResult maximize_rate_fov_only(const Config &cfg, const Context &ctx, double fov_min,
                                     const SearchOptions &opts = {});

/// Maximise R(B, f_FOV(B)) over B, skipping bandwidths where the constraint set is infeasible.
OptimumResult maximize_rate_constrained(const Config &cfg, const Context &ctx, const ConstraintSet &cs,
                                        const SearchOptions &opts = {});

/// Closed-form partial derivatives of rate and dimensions.
struct Gradients
{
    double rate_fov;          // dR/dFOV
    double height_fov;        // dL_ADR/dFOV
    double area_fov;          // dA_ADR/dFOV
    double entrance_theta;    // dD1/dtheta_cpc
    double height_bandwidth;  // dL_ADR/dB
    double area_bandwidth;    // dA_ADR/dB
};

Gradients analytic_gradients(const Config &cfg, const Context &ctx, double bandwidth, double fov);

/// Log-spaced bandwidth grid used by the solvers.
std::vector<double> bandwidth_grid(const SearchOptions &opts);

} // namespace adropt

#endif
