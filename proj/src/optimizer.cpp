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

#include "adropt/optimizer.hpp"

#include "adropt/roots.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

namespace adropt
{

namespace
{
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double height_factor(const Config &cfg)
{
    return cfg.truncation ? cfg.truncation->length_ratio : 1.0;
}

double area_factor(const Config &cfg)
{
    return cfg.truncation ? cfg.truncation->gain_retention : 1.0;
}

double rate_at(const Config &cfg, const Context &ctx, double bandwidth, double fov)
{
    return achievable_rate(cfg, bandwidth, fov, ctx);
}

bool close_rel(double a, double b, double tol)
{
    return std::abs(a - b) <= tol * std::abs(b);
}

std::vector<Constraint> active_at(const Config &cfg, const ConstraintSet &cs, double bandwidth, double fov)
{
    constexpr double tol = 1e-6;
    std::vector<Constraint> active;
    if (close_rel(fov, cs.fov_min, tol))
        active.push_back(Constraint::fov);
    const auto g = geometry(cfg, bandwidth, fov);
    if (cs.l_max && close_rel(g.height, *cs.l_max, tol))
        active.push_back(Constraint::height);
    if (cs.a_max && close_rel(g.top_area, *cs.a_max, tol))
        active.push_back(Constraint::area);
    return active;
}

/// Golden-section refinement of the best grid cell, in log B.
template <class Objective>
std::pair<double, double> refine_bandwidth(const Objective &objective, const std::vector<double> &grid,
                                           std::size_t best, double best_value, double rel_tol)
{
    const std::size_t lo = best == 0 ? 0 : best - 1;
    const std::size_t hi = std::min(best + 1, grid.size() - 1);
    const auto [log_b, value] = golden_section_max([&](double lb) { return objective(std::exp(lb)); },
                                                   std::log(grid[lo]), std::log(grid[hi]), rel_tol);
    if (value >= best_value)
        return {std::exp(log_b), value};
    return {grid[best], best_value};
}

} // namespace

std::string_view to_string(Constraint c)
{
    switch (c)
    {
    case Constraint::fov:
        return "fov";
    case Constraint::height:
        return "height";
    case Constraint::area:
        return "area";
    }
    return "unknown";
}

bool OptimumResult::is_active(Constraint c) const
{
    return std::find(active_constraints.begin(), active_constraints.end(), c) != active_constraints.end();
}

void validate(const ConstraintSet &cs)
{
    if (!(cs.fov_min > 0.0 && cs.fov_min <= constants::pi<double> / 2))
        throw DomainError("minimum FOV must lie in (0, 90] deg");
    if (cs.l_max)
        detail::require_positive(*cs.l_max, "height bound L_max");
    if (cs.a_max)
        detail::require_positive(*cs.a_max, "area bound A_max");
}

std::vector<double> bandwidth_grid(const SearchOptions &opts)
{
    detail::require_positive(opts.b_min, "lower bandwidth bound");
    if (!(opts.b_max > opts.b_min))
        throw DomainError("bandwidth search range is empty");
    if (opts.grid_points < 2)
        throw DomainError("bandwidth grid needs at least two points");
    const Eigen::ArrayXd logs =
        Eigen::ArrayXd::LinSpaced(opts.grid_points, std::log(opts.b_min), std::log(opts.b_max));
    std::vector<double> grid(static_cast<std::size_t>(opts.grid_points));
    for (int i = 0; i < opts.grid_points; ++i)
        grid[static_cast<std::size_t>(i)] = std::exp(logs(i));
    grid.front() = opts.b_min;
    grid.back() = opts.b_max;
    return grid;
}

double dimension_boundary(const Config &cfg, Dimension which, double fov, double bound)
{
    validate(cfg);
    detail::require_positive(bound, which == Dimension::height ? "height bound" : "area bound");
    const double theta = acceptance_angle(fov, cfg.tiers);
    const double s = std::sin(theta);
    const double af = array_factor(cfg);
    if (which == Dimension::height)
    {
        const double k1 = af / (2.0 * cfg.pd_constant);
        return height_factor(cfg) * k1 / bound * (cfg.cpc_index + s) / (s * std::tan(theta));
    }
    const double k2 = constants::pi<double> * cfg.pds_per_array * cfg.cpc_index * cfg.cpc_index /
                      (4.0 * cfg.fill_factor * cfg.pd_constant * cfg.pd_constant);
    return std::sqrt(area_factor(cfg) * k2 / bound * ring_factor(cfg.tiers, theta)) / s;
}

BoundaryInversion invert_dimension_boundary(const Config &cfg, Dimension which, double bandwidth, double bound,
                                            double rel_tol)
{
    detail::require_positive(bandwidth, "bandwidth");
    const double cap = max_fov<double>(cfg.tiers);
    const double floor_value = dimension_boundary(cfg, which, cap, bound);
    if (bandwidth <= floor_value)
    {
        if (close_rel(bandwidth, floor_value, rel_tol))
            return {true, cap};
        return {false, kNaN};
    }
    const auto f = [&](double fov) { return dimension_boundary(cfg, which, fov, bound); };
    // f grows without bound as FOV -> 0, so a tiny lower end always brackets.
    double lo = cap * 1e-3;
    while (f(lo) < bandwidth)
        lo *= 1e-3;
    const auto root = bisect_monotone(f, bandwidth, lo, cap, rel_tol);
    return {true, root.value_or(kNaN)};
}

UnifiedBoundary unified_boundary(const Config &cfg, const ConstraintSet &cs, double bandwidth, double rel_tol)
{
    validate(cs);
    const double cap = max_fov<double>(cfg.tiers);
    if (cs.fov_min > cap * (1.0 + 1e-12))
        return {false, kNaN, Constraint::fov};

    UnifiedBoundary out{true, cs.fov_min, Constraint::fov};
    const auto consider = [&](const std::optional<double> &bound, Dimension which, Constraint tag) {
        if (!bound || !out.feasible)
            return;
        const auto inv = invert_dimension_boundary(cfg, which, bandwidth, *bound, rel_tol);
        if (!inv.in_image)
        {
            out = {false, kNaN, tag};
            return;
        }
        if (inv.fov > out.fov)
        {
            out.fov = inv.fov;
            out.dominant = tag;
        }
    };
    consider(cs.l_max, Dimension::height, Constraint::height);
    consider(cs.a_max, Dimension::area, Constraint::area);
    if (out.feasible)
        out.fov = std::min(out.fov, cap);
    return out;
}

OptimumResult maximize_rate_fov_only(const Config &cfg, const Context &ctx, double fov_min,
                                     const SearchOptions &opts)
{
    return maximize_rate_constrained(cfg, ctx, ConstraintSet{fov_min, std::nullopt, std::nullopt}, opts);
}

OptimumResult maximize_rate_constrained(const Config &cfg, const Context &ctx, const ConstraintSet &cs,
                                        const SearchOptions &opts)
{
    validate(cfg);
    validate(cs);
    const auto grid = bandwidth_grid(opts);

    OptimumResult result;
    result.boundary_trace.reserve(grid.size());

    const auto objective = [&](double b) {
        const auto ub = unified_boundary(cfg, cs, b, opts.inversion_tol);
        return ub.feasible ? rate_at(cfg, ctx, b, ub.fov) : kNegInf;
    };

    std::size_t best = 0;
    double best_value = kNegInf;
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        const auto ub = unified_boundary(cfg, cs, grid[i], opts.inversion_tol);
        if (!ub.feasible)
        {
            result.boundary_trace.push_back({grid[i], kNaN, kNaN});
            continue;
        }
        const double r = rate_at(cfg, ctx, grid[i], ub.fov);
        result.boundary_trace.push_back({grid[i], ub.fov, r});
        if (r > best_value)
        {
            best = i;
            best_value = r;
        }
    }

    double b_star = kNaN;
    double rate_star = kNegInf;
    if (best_value > kNegInf)
        std::tie(b_star, rate_star) = refine_bandwidth(objective, grid, best, best_value, opts.rel_tol);

    if (!(rate_star > kNegInf))
    {
        // Dimensions shrink with B, so the widest bandwidth is the most permissive point.
        const auto ub = unified_boundary(cfg, cs, grid.back(), opts.inversion_tol);
        std::ostringstream msg;
        msg << "no feasible bandwidth in [" << opts.b_min << ", " << opts.b_max
            << "] Hz; dominating constraint: " << to_string(ub.dominant);
        result.diagnostic = msg.str();
        return result;
    }

    result.feasible = true;
    result.b_star = b_star;
    result.fov_star = unified_boundary(cfg, cs, b_star, opts.inversion_tol).fov;
    result.rate_star = rate_star;
    result.active_constraints = active_at(cfg, cs, b_star, result.fov_star);
    return result;
}

Gradients analytic_gradients(const Config &cfg, const Context &ctx, double bandwidth, double fov)
{
    validate(cfg);
    detail::require_positive(bandwidth, "bandwidth");
    const double cap = max_fov<double>(cfg.tiers);
    if (!(fov > 0.0 && fov < cap))
        throw DomainError("gradients need an interior FOV in (0, FOV_cap)");

    const double per_tier = 1.0 / (2 * cfg.tiers + 1);
    const auto g = geometry(cfg, bandwidth, fov);
    const double theta = g.theta_cpc;
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double t = std::tan(theta);
    const double n = cfg.cpc_index;
    const double gamma = area_factor(cfg);
    const double tau = height_factor(cfg);

    Gradients out{};
    out.entrance_theta = std::sqrt(gamma) * (2.0 * g.k1 / bandwidth) * (-n * c / (s * s));

    // Rate through the received power on the centre element.
    const double w = ctx.spot_radius();
    const double d1 = g.entrance_diameter;
    const double pr = received_power_closed_form(cfg, bandwidth, fov, ctx);
    const double dpr_dd1 = cfg.fill_factor * ctx.beam.power * std::exp(-d1 * d1 / (2.0 * w * w)) * d1 / (w * w);
    const double dpr_dfov = per_tier * dpr_dd1 * out.entrance_theta;

    const double resp = ctx.link.responsivity;
    const double gap = ctx.link.snr_gap;
    const double n0 = noise_psd(ctx.noise, cfg.pds_per_array, pr, resp);
    double dn0_dpr = 0.0;
    if (ctx.noise.mode == NoiseMode::full)
    {
        dn0_dpr = 2.0 * ctx.noise.elementary_charge * resp;
        if (ctx.noise.rin)
            dn0_dpr += 2.0 * *ctx.noise.rin * resp * resp * pr;
    }
    const double x = resp * resp * pr * pr / (gap * n0 * bandwidth);
    const double dx_dpr = resp * resp * (2.0 * pr * n0 - pr * pr * dn0_dpr) / (gap * bandwidth * n0 * n0);
    out.rate_fov = bandwidth / std::log(2.0) * dx_dpr / (1.0 + x) * dpr_dfov;

    const double num_l = 2.0 * n * s + n * s * t * t + t * t;
    out.height_fov = per_tier * tau * g.k1 / bandwidth * (-num_l / (s * s * t * t));

    const double ring = ring_factor(cfg.tiers, theta);
    out.area_fov = per_tier * gamma * g.k2 / (bandwidth * bandwidth) *
                   (-2.0 * s * c / std::pow(s, 4) * ring + ring_factor_derivative(cfg.tiers, theta) / (s * s));

    out.height_bandwidth = -g.height / bandwidth;
    out.area_bandwidth = -2.0 * g.top_area / bandwidth;
    return out;
}

} // namespace adropt
