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

#ifndef ADROPT_SWEEP_HPP
#define ADROPT_SWEEP_HPP

#include "optimizer.hpp"

#include <Eigen/Core>
#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace adropt
{

enum class Spacing
{
    linear,
    log
};

/// One grid axis. Values are held in `unit`; `si_scale` converts them to SI.
struct Axis
{
    std::string name;
    std::string unit;
    double min;
    double max;
    int count;
    Spacing spacing = Spacing::linear;
    double si_scale = 1.0;

    Eigen::ArrayXd values() const;
    double si_value(int i) const;
};

Axis bandwidth_axis(double min_hz = 0.1e9, double max_hz = 20e9, int count = 200);
Axis fov_axis(double min_deg = 0.5, double max_deg = 90.0, int count = 200);

using GridValues = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Row index runs along `y`, column index along `x`.
struct Grid2D
{
    Axis x;
    Axis y;
    std::string quantity;
    std::string unit;
    GridValues values;
    nlohmann::json metadata;
};

enum class Quantity
{
    rate,
    height,
    area
};

std::string_view to_string(Quantity q);
std::optional<Quantity> parse_quantity(std::string_view name);

enum class Region : std::uint8_t
{
    feasible,
    infeasible_fov,
    infeasible_height,
    infeasible_area,
    design_space,
    insufficient_rate
};

std::string_view to_string(Region r);

using RegionLabels = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct RegionMask
{
    Axis x;
    Axis y;
    RegionLabels labels;
    std::vector<BoundarySample> boundary; // f_FOV(B) sampled on the x axis (rate left NaN)
    nlohmann::json metadata;

    Region at(int row, int col) const { return static_cast<Region>(labels(row, col)); }
    long count(Region r) const;
};

struct SweepOptions
{
    unsigned threads = 1;
    std::optional<std::string> timestamp; // metadata only; null keeps output reproducible
};

/// Evaluate R, L_ADR or A_ADR on a bandwidth (x) by FOV (y) grid; invalid cells hold NaN.
Grid2D grid_sweep(const Config &cfg, const Context &ctx, Quantity quantity, const Axis &bandwidth,
                  const Axis &fov, const SweepOptions &opts = {});

/// Cells with FOV >= FOV_min and R >= R_min.
RegionMask design_space(const Config &cfg, const Context &ctx, double rate_min, double fov_min,
                        const Axis &bandwidth, const Axis &fov, const SweepOptions &opts = {});

/// Per-cell constraint evaluation with precedence height > area > fov, plus the f_FOV(B) polyline.
RegionMask feasible_region(const Config &cfg, const Context &ctx, const ConstraintSet &cs, const Axis &bandwidth,
                           const Axis &fov, const SweepOptions &opts = {});

/// Constraints that set f_FOV(B) somewhere on the bandwidth axis.
std::set<Constraint> dominant_constraints(const Config &cfg, const ConstraintSet &cs, const Axis &bandwidth);

/// Crossings between the three boundary curves FOV_min, height inverse and area inverse on the axis.
int boundary_intersections(const Config &cfg, const ConstraintSet &cs, const Axis &bandwidth);

/// R_max over an A_max (x) by L_max (y) grid for a fixed FOV_min.
Grid2D rmax_surface(const Config &cfg, const Context &ctx, double fov_min, const Axis &l_max, const Axis &a_max,
                    const SearchOptions &search = {}, const SweepOptions &opts = {});

enum class Scenario
{
    ncd,
    mcd,
    scd
};

std::string_view to_string(Scenario s);
std::optional<Scenario> parse_scenario(std::string_view name);

/// Dimension bounds of a regime: none, (2 cm, 4 cm^2) or (0.5 cm, 0.5 cm^2).
ConstraintSet scenario_constraints(Scenario s, double fov_min);

struct RmaxSeries
{
    std::string config;
    bool truncated;
    std::vector<double> rate;
};

struct RmaxTable
{
    Scenario scenario;
    Axis fov_min;
    std::vector<RmaxSeries> series;
    nlohmann::json metadata;
};

/// R_max(FOV_min) for the original and truncated variant of every configuration.
RmaxTable rmax_vs_fovmin(const std::vector<Config> &cfgs, const Context &ctx, Scenario scenario,
                         const Axis &fov_min, const TruncationSpec<double> &trunc = {},
                         const SearchOptions &search = {});

struct ContourSegment
{
    double x0, y0, x1, y1;
};

/// Marching-squares level set of a grid, with linear interpolation along cell edges (axis units).
std::vector<ContourSegment> extract_contour(const Grid2D &grid, double level);

/// Largest y reached by the level set, if any.
std::optional<double> contour_max_y(const Grid2D &grid, double level);

// Snapshot of every constant that feeds a sweep.
nlohmann::json snapshot(const Config &cfg, const Context &ctx);
std::pair<Config, Context> restore_snapshot(const nlohmann::json &snap);

nlohmann::json axis_json(const Axis &axis);

void write_csv(std::ostream &os, const Grid2D &grid);
void write_csv(std::ostream &os, const RegionMask &mask);
void write_csv(std::ostream &os, const RmaxTable &table);
nlohmann::json to_json(const Grid2D &grid);
nlohmann::json to_json(const RegionMask &mask);
nlohmann::json to_json(const RmaxTable &table);

/// Shortest decimal that round-trips to the same double; "nan"/"inf"/"-inf" otherwise.
std::string format_double(double value);

} // namespace adropt

#endif
