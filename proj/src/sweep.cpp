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

#include "adropt/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <thread>

namespace adropt
{

namespace
{
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using nlohmann::json;

json number_or_null(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

/// Runs body(row) for every row, split over `threads` workers. Rows are written independently.
void for_each_row(int rows, unsigned threads, const std::function<void(int)> &body)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max(rows, 1))));
    if (threads == 1)
    {
        for (int r = 0; r < rows; ++r)
            body(r);
        return;
    }
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        workers.emplace_back([&, t] {
            for (int r = static_cast<int>(t); r < rows; r += static_cast<int>(threads))
                body(r);
        });
}

void require_axis(const Axis &axis)
{
    if (axis.count < 1)
        throw DomainError("axis '" + axis.name + "' has no points");
    if (axis.count > 1 && !(axis.max > axis.min))
        throw DomainError("axis '" + axis.name + "' needs max > min");
    if (axis.spacing == Spacing::log && !(axis.min > 0.0))
        throw DomainError("log axis '" + axis.name + "' needs a positive minimum");
}

json base_metadata(const Config &cfg, const Context &ctx, std::string_view quantity, const SweepOptions &opts)
{
    json meta;
    meta["config"] = cfg.name;
    meta["quantity"] = std::string(quantity);
    meta["generated_at"] = opts.timestamp ? json(*opts.timestamp) : json(nullptr);
    meta["constants"] = snapshot(cfg, ctx);
    return meta;
}

double evaluate_cell(const Config &cfg, const Context &ctx, Quantity q, double b, double fov)
{
    try
    {
        switch (q)
        {
        case Quantity::rate:
            return achievable_rate(cfg, b, fov, ctx);
        case Quantity::height:
            return geometry(cfg, b, fov).height;
        case Quantity::area:
            return geometry(cfg, b, fov).top_area;
        }
    }
    catch (const DomainError &)
    {
    }
    return kNaN;
}

std::string axis_header(const Axis &axis)
{
    return axis.name + "[" + axis.unit + "]";
}

} // namespace

Eigen::ArrayXd Axis::values() const
{
    require_axis(*this);
    if (count == 1)
        return Eigen::ArrayXd::Constant(1, min);
    Eigen::ArrayXd v = spacing == Spacing::log
                           ? Eigen::ArrayXd::LinSpaced(count, std::log(min), std::log(max)).exp().eval()
                           : Eigen::ArrayXd::LinSpaced(count, min, max);
    v(0) = min;
    v(count - 1) = max;
    return v;
}

double Axis::si_value(int i) const
{
    return values()(i) * si_scale;
}

Axis bandwidth_axis(double min_hz, double max_hz, int count)
{
    return {"bandwidth", "Hz", min_hz, max_hz, count, Spacing::log, 1.0};
}

Axis fov_axis(double min_deg, double max_deg, int count)
{
    return {"fov", "deg", min_deg, max_deg, count, Spacing::linear, constants::pi<double> / 180.0};
}

std::string_view to_string(Quantity q)
{
    switch (q)
    {
    case Quantity::rate:
        return "rate";
    case Quantity::height:
        return "height";
    case Quantity::area:
        return "area";
    }
    return "unknown";
}

std::optional<Quantity> parse_quantity(std::string_view name)
{
    for (Quantity q : {Quantity::rate, Quantity::height, Quantity::area})
        if (to_string(q) == name)
            return q;
    return std::nullopt;
}

std::string_view to_string(Region r)
{
    switch (r)
    {
    case Region::feasible:
        return "feasible";
    case Region::infeasible_fov:
        return "infeasible_fov";
    case Region::infeasible_height:
        return "infeasible_height";
    case Region::infeasible_area:
        return "infeasible_area";
    case Region::design_space:
        return "design_space";
    case Region::insufficient_rate:
        return "insufficient_rate";
    }
    return "unknown";
}

long RegionMask::count(Region r) const
{
    return (labels == static_cast<std::uint8_t>(r)).count();
}

std::string_view to_string(Scenario s)
{
    switch (s)
    {
    case Scenario::ncd:
        return "ncd";
    case Scenario::mcd:
        return "mcd";
    case Scenario::scd:
        return "scd";
    }
    return "unknown";
}

std::optional<Scenario> parse_scenario(std::string_view name)
{
    for (Scenario s : {Scenario::ncd, Scenario::mcd, Scenario::scd})
        if (to_string(s) == name)
            return s;
    return std::nullopt;
}

ConstraintSet scenario_constraints(Scenario s, double fov_min)
{
    switch (s)
    {
    case Scenario::ncd:
        return {fov_min, std::nullopt, std::nullopt};
    case Scenario::mcd:
        return {fov_min, 0.02, 4e-4};
    case Scenario::scd:
        return {fov_min, 0.005, 0.5e-4};
    }
    throw DomainError("unknown scenario");
}

Grid2D grid_sweep(const Config &cfg, const Context &ctx, Quantity quantity, const Axis &bandwidth, const Axis &fov,
                  const SweepOptions &opts)
{
    validate(cfg);
    require_axis(bandwidth);
    require_axis(fov);
    const Eigen::ArrayXd bs = bandwidth.values() * bandwidth.si_scale;
    const Eigen::ArrayXd fs = fov.values() * fov.si_scale;

    Grid2D grid{bandwidth, fov, std::string(to_string(quantity)), "", GridValues(fov.count, bandwidth.count), {}};
    grid.unit = quantity == Quantity::rate ? "bit/s" : quantity == Quantity::height ? "m" : "m2";
    for_each_row(fov.count, opts.threads, [&](int r) {
        for (int c = 0; c < bandwidth.count; ++c)
            grid.values(r, c) = evaluate_cell(cfg, ctx, quantity, bs(c), fs(r));
    });
    grid.metadata = base_metadata(cfg, ctx, grid.quantity, opts);
    return grid;
}

RegionMask design_space(const Config &cfg, const Context &ctx, double rate_min, double fov_min,
                        const Axis &bandwidth, const Axis &fov, const SweepOptions &opts)
{
    validate(cfg);
    require_axis(bandwidth);
    require_axis(fov);
    const Eigen::ArrayXd bs = bandwidth.values() * bandwidth.si_scale;
    const Eigen::ArrayXd fs = fov.values() * fov.si_scale;

    RegionMask mask{bandwidth, fov, RegionLabels(fov.count, bandwidth.count), {}, {}};
    for_each_row(fov.count, opts.threads, [&](int r) {
        for (int c = 0; c < bandwidth.count; ++c)
        {
            Region label;
            const double rate = evaluate_cell(cfg, ctx, Quantity::rate, bs(c), fs(r));
            if (fs(r) < fov_min || std::isnan(rate))
                label = Region::infeasible_fov;
            else if (rate >= rate_min)
                label = Region::design_space;
            else
                label = Region::insufficient_rate;
            mask.labels(r, c) = static_cast<std::uint8_t>(label);
        }
    });
    mask.metadata = base_metadata(cfg, ctx, "design_space", opts);
    mask.metadata["rate_min"] = rate_min;
    mask.metadata["fov_min"] = fov_min;
    return mask;
}

RegionMask feasible_region(const Config &cfg, const Context &ctx, const ConstraintSet &cs, const Axis &bandwidth,
                           const Axis &fov, const SweepOptions &opts)
{
    validate(cfg);
    validate(cs);
    require_axis(bandwidth);
    require_axis(fov);
    const Eigen::ArrayXd bs = bandwidth.values() * bandwidth.si_scale;
    const Eigen::ArrayXd fs = fov.values() * fov.si_scale;

    RegionMask mask{bandwidth, fov, RegionLabels(fov.count, bandwidth.count), {}, {}};
    for_each_row(fov.count, opts.threads, [&](int r) {
        for (int c = 0; c < bandwidth.count; ++c)
        {
            Region label = Region::feasible;
            try
            {
                const auto g = geometry(cfg, bs(c), fs(r));
                if (cs.l_max && g.height > *cs.l_max)
                    label = Region::infeasible_height;
                else if (cs.a_max && g.top_area > *cs.a_max)
                    label = Region::infeasible_area;
                else if (fs(r) < cs.fov_min)
                    label = Region::infeasible_fov;
            }
            catch (const DomainError &)
            {
                label = Region::infeasible_fov;
            }
            mask.labels(r, c) = static_cast<std::uint8_t>(label);
        }
    });

    mask.boundary.reserve(static_cast<std::size_t>(bandwidth.count));
    for (int c = 0; c < bandwidth.count; ++c)
    {
        const auto ub = unified_boundary(cfg, cs, bs(c));
        mask.boundary.push_back({bs(c), ub.feasible ? ub.fov : kNaN, kNaN});
    }

    mask.metadata = base_metadata(cfg, ctx, "feasible_region", opts);
    mask.metadata["fov_min"] = cs.fov_min;
    mask.metadata["l_max"] = cs.l_max ? json(*cs.l_max) : json(nullptr);
    mask.metadata["a_max"] = cs.a_max ? json(*cs.a_max) : json(nullptr);
    return mask;
}

std::set<Constraint> dominant_constraints(const Config &cfg, const ConstraintSet &cs, const Axis &bandwidth)
{
    require_axis(bandwidth);
    const Eigen::ArrayXd bs = bandwidth.values() * bandwidth.si_scale;
    std::set<Constraint> out;
    for (int c = 0; c < bandwidth.count; ++c)
    {
        const auto ub = unified_boundary(cfg, cs, bs(c));
        if (ub.feasible)
            out.insert(ub.dominant);
    }
    return out;
}

int boundary_intersections(const Config &cfg, const ConstraintSet &cs, const Axis &bandwidth)
{
    require_axis(bandwidth);
    const Eigen::ArrayXd bs = bandwidth.values() * bandwidth.si_scale;
    const auto n = bandwidth.count;
    // Curves as FOV(B); NaN where the bound cannot be met at any FOV.
    Eigen::ArrayXXd curves = Eigen::ArrayXXd::Constant(3, n, kNaN);
    for (int c = 0; c < n; ++c)
    {
        curves(0, c) = cs.fov_min;
        if (cs.l_max)
        {
            const auto inv = invert_dimension_boundary(cfg, Dimension::height, bs(c), *cs.l_max);
            curves(1, c) = inv.in_image ? inv.fov : kNaN;
        }
        if (cs.a_max)
        {
            const auto inv = invert_dimension_boundary(cfg, Dimension::area, bs(c), *cs.a_max);
            curves(2, c) = inv.in_image ? inv.fov : kNaN;
        }
    }
    int crossings = 0;
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
        {
            double prev = kNaN;
            for (int c = 0; c < n; ++c)
            {
                const double diff = curves(a, c) - curves(b, c);
                if (std::isnan(diff))
                {
                    prev = kNaN;
                    continue;
                }
                if (!std::isnan(prev) && ((prev < 0) != (diff < 0)))
                    ++crossings;
                prev = diff;
            }
        }
    return crossings;
}

Grid2D rmax_surface(const Config &cfg, const Context &ctx, double fov_min, const Axis &l_max, const Axis &a_max,
                    const SearchOptions &search, const SweepOptions &opts)
{
    validate(cfg);
    require_axis(l_max);
    require_axis(a_max);
    const Eigen::ArrayXd ls = l_max.values() * l_max.si_scale;
    const Eigen::ArrayXd as = a_max.values() * a_max.si_scale;

    Grid2D grid{a_max, l_max, "rate_max", "bit/s", GridValues(l_max.count, a_max.count), {}};
    for_each_row(l_max.count, opts.threads, [&](int r) {
        for (int c = 0; c < a_max.count; ++c)
        {
            const auto opt = maximize_rate_constrained(cfg, ctx, {fov_min, ls(r), as(c)}, search);
            grid.values(r, c) = opt.feasible ? opt.rate_star : kNaN;
        }
    });
    grid.metadata = base_metadata(cfg, ctx, grid.quantity, opts);
    grid.metadata["fov_min"] = fov_min;
    return grid;
}

RmaxTable rmax_vs_fovmin(const std::vector<Config> &cfgs, const Context &ctx, Scenario scenario,
                         const Axis &fov_min, const TruncationSpec<double> &trunc, const SearchOptions &search)
{
    require_axis(fov_min);
    const Eigen::ArrayXd fs = fov_min.values() * fov_min.si_scale;
    RmaxTable table{scenario, fov_min, {}, {}};
    json configs = json::array();
    for (const auto &base : cfgs)
    {
        for (bool truncated : {false, true})
        {
            Config cfg = base;
            cfg.truncation = truncated ? std::optional(trunc) : std::nullopt;
            RmaxSeries series{cfg.name, truncated, std::vector<double>(static_cast<std::size_t>(fov_min.count))};
            for (int i = 0; i < fov_min.count; ++i)
            {
                const auto opt = maximize_rate_constrained(cfg, ctx, scenario_constraints(scenario, fs(i)), search);
                series.rate[static_cast<std::size_t>(i)] = opt.feasible ? opt.rate_star : kNaN;
            }
            table.series.push_back(std::move(series));
            configs.push_back(snapshot(cfg, ctx));
        }
    }
    table.metadata["scenario"] = std::string(to_string(scenario));
    table.metadata["constants"] = configs;
    return table;
}

std::vector<ContourSegment> extract_contour(const Grid2D &grid, double level)
{
    const Eigen::ArrayXd xs = grid.x.values();
    const Eigen::ArrayXd ys = grid.y.values();
    std::vector<ContourSegment> segments;

    struct Point
    {
        double x, y;
    };
    const auto lerp = [&](double a, double b, double va, double vb) { return a + (level - va) / (vb - va) * (b - a); };

    for (Eigen::Index r = 0; r + 1 < grid.values.rows(); ++r)
        for (Eigen::Index c = 0; c + 1 < grid.values.cols(); ++c)
        {
            const double v00 = grid.values(r, c), v01 = grid.values(r, c + 1);
            const double v10 = grid.values(r + 1, c), v11 = grid.values(r + 1, c + 1);
            if (std::isnan(v00) || std::isnan(v01) || std::isnan(v10) || std::isnan(v11))
                continue;
            const double x0 = xs(c), x1 = xs(c + 1), y0 = ys(r), y1 = ys(r + 1);

            // Edges in cyclic order: bottom, right, top, left.
            Point pts[4];
            int n = 0;
            const auto edge = [&](double va, double vb, auto where) {
                if ((va >= level) != (vb >= level))
                    pts[n++] = where(va, vb);
            };
            edge(v00, v01, [&](double a, double b) { return Point{lerp(x0, x1, a, b), y0}; });
            edge(v01, v11, [&](double a, double b) { return Point{x1, lerp(y0, y1, a, b)}; });
            edge(v11, v10, [&](double a, double b) { return Point{lerp(x1, x0, a, b), y1}; });
            edge(v10, v00, [&](double a, double b) { return Point{x0, lerp(y1, y0, a, b)}; });

            if (n == 2)
                segments.push_back({pts[0].x, pts[0].y, pts[1].x, pts[1].y});
            else if (n == 4)
            {
                // Saddle: connect according to the cell-centre value.
                const bool centre_high = (v00 + v01 + v10 + v11) / 4.0 >= level;
                if (centre_high == (v00 >= level))
                {
                    segments.push_back({pts[0].x, pts[0].y, pts[3].x, pts[3].y});
                    segments.push_back({pts[1].x, pts[1].y, pts[2].x, pts[2].y});
                }
                else
                {
                    segments.push_back({pts[0].x, pts[0].y, pts[1].x, pts[1].y});
                    segments.push_back({pts[2].x, pts[2].y, pts[3].x, pts[3].y});
                }
            }
        }
    return segments;
}

std::optional<double> contour_max_y(const Grid2D &grid, double level)
{
    const auto segments = extract_contour(grid, level);
    if (segments.empty())
        return std::nullopt;
    double top = -std::numeric_limits<double>::infinity();
    for (const auto &s : segments)
        top = std::max({top, s.y0, s.y1});
    return top;
}

json snapshot(const Config &cfg, const Context &ctx)
{
    json adr{{"name", cfg.name},
             {"tiers", cfg.tiers},
             {"pds_per_array", cfg.pds_per_array},
             {"fill_factor", cfg.fill_factor},
             {"cpc_index", cfg.cpc_index},
             {"pd_constant", cfg.pd_constant},
             {"truncation", nullptr}};
    if (cfg.truncation)
        adr["truncation"] = {{"tau", cfg.truncation->length_ratio}, {"gamma", cfg.truncation->gain_retention}};
    return {
        {"adr", adr},
        {"beam",
         {{"waist_radius", ctx.beam.waist_radius},
          {"rayleigh_range", ctx.beam.rayleigh_range},
          {"waist_position", ctx.beam.waist_position},
          {"power", ctx.beam.power}}},
        {"link",
         {{"distance", ctx.link.distance},
          {"responsivity", ctx.link.responsivity},
          {"snr_gap", ctx.link.snr_gap},
          {"transmit_power_cap", ctx.link.transmit_power_cap}}},
        {"noise",
         {{"boltzmann", ctx.noise.boltzmann},
          {"temperature", ctx.noise.temperature},
          {"load_resistance", ctx.noise.load_resistance},
          {"noise_figure", ctx.noise.noise_figure},
          {"elementary_charge", ctx.noise.elementary_charge},
          {"rin", ctx.noise.rin ? json(*ctx.noise.rin) : json(nullptr)},
          {"mode", ctx.noise.mode == NoiseMode::full ? "full" : "thermal_only"}}},
    };
}

std::pair<Config, Context> restore_snapshot(const json &snap)
{
    Config cfg;
    const auto &a = snap.at("adr");
    cfg.name = a.at("name").get<std::string>();
    cfg.tiers = a.at("tiers").get<int>();
    cfg.pds_per_array = a.at("pds_per_array").get<int>();
    cfg.fill_factor = a.at("fill_factor").get<double>();
    cfg.cpc_index = a.at("cpc_index").get<double>();
    cfg.pd_constant = a.at("pd_constant").get<double>();
    if (!a.at("truncation").is_null())
        cfg.truncation =
            TruncationSpec<double>{a["truncation"].at("tau").get<double>(), a["truncation"].at("gamma").get<double>()};

    Context ctx;
    const auto &b = snap.at("beam");
    ctx.beam = {b.at("waist_radius").get<double>(), b.at("rayleigh_range").get<double>(),
                b.at("waist_position").get<double>(), b.at("power").get<double>()};
    const auto &l = snap.at("link");
    ctx.link = {l.at("distance").get<double>(), l.at("responsivity").get<double>(), l.at("snr_gap").get<double>(),
                l.at("transmit_power_cap").get<double>()};
    const auto &n = snap.at("noise");
    ctx.noise.boltzmann = n.at("boltzmann").get<double>();
    ctx.noise.temperature = n.at("temperature").get<double>();
    ctx.noise.load_resistance = n.at("load_resistance").get<double>();
    ctx.noise.noise_figure = n.at("noise_figure").get<double>();
    ctx.noise.elementary_charge = n.at("elementary_charge").get<double>();
    if (!n.at("rin").is_null())
        ctx.noise.rin = n["rin"].get<double>();
    ctx.noise.mode = n.at("mode").get<std::string>() == "full" ? NoiseMode::full : NoiseMode::thermal_only;
    validate(cfg);
    return {cfg, ctx};
}

json axis_json(const Axis &axis)
{
    return {{"name", axis.name},
            {"unit", axis.unit},
            {"min", axis.min},
            {"max", axis.max},
            {"count", axis.count},
            {"spacing", axis.spacing == Spacing::log ? "log" : "linear"},
            {"si_scale", axis.si_scale}};
}

std::string format_double(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream &os, const Grid2D &grid)
{
    const Eigen::ArrayXd xs = grid.x.values();
    const Eigen::ArrayXd ys = grid.y.values();
    os << axis_header(grid.y) << ',' << axis_header(grid.x) << ',' << grid.quantity << '[' << grid.unit << "]\n";
    for (Eigen::Index r = 0; r < grid.values.rows(); ++r)
        for (Eigen::Index c = 0; c < grid.values.cols(); ++c)
            os << format_double(ys(r)) << ',' << format_double(xs(c)) << ',' << format_double(grid.values(r, c))
               << '\n';
}

void write_csv(std::ostream &os, const RegionMask &mask)
{
    const Eigen::ArrayXd xs = mask.x.values();
    const Eigen::ArrayXd ys = mask.y.values();
    os << axis_header(mask.y) << ',' << axis_header(mask.x) << ",label\n";
    for (Eigen::Index r = 0; r < mask.labels.rows(); ++r)
        for (Eigen::Index c = 0; c < mask.labels.cols(); ++c)
            os << format_double(ys(r)) << ',' << format_double(xs(c)) << ','
               << to_string(mask.at(static_cast<int>(r), static_cast<int>(c))) << '\n';
}

void write_csv(std::ostream &os, const RmaxTable &table)
{
    const Eigen::ArrayXd fs = table.fov_min.values();
    os << "fov_min[" << table.fov_min.unit << "]";
    for (const auto &s : table.series)
        os << ',' << s.config << (s.truncated ? "_truncated" : "_original") << "[bit/s]";
    os << '\n';
    for (int i = 0; i < table.fov_min.count; ++i)
    {
        os << format_double(fs(i));
        for (const auto &s : table.series)
            os << ',' << format_double(s.rate[static_cast<std::size_t>(i)]);
        os << '\n';
    }
}

json to_json(const Grid2D &grid)
{
    json values = json::array();
    for (Eigen::Index r = 0; r < grid.values.rows(); ++r)
        for (Eigen::Index c = 0; c < grid.values.cols(); ++c)
            values.push_back(number_or_null(grid.values(r, c)));
    return {{"x", axis_json(grid.x)},   {"y", axis_json(grid.y)},    {"quantity", grid.quantity},
            {"unit", grid.unit},        {"values", std::move(values)}, {"metadata", grid.metadata}};
}

json to_json(const RegionMask &mask)
{
    json labels = json::array();
    for (Eigen::Index r = 0; r < mask.labels.rows(); ++r)
        for (Eigen::Index c = 0; c < mask.labels.cols(); ++c)
            labels.push_back(std::string(to_string(mask.at(static_cast<int>(r), static_cast<int>(c)))));
    json boundary = json::array();
    for (const auto &s : mask.boundary)
        boundary.push_back({{"bandwidth", s.bandwidth}, {"fov", number_or_null(s.fov)}});
    return {{"x", axis_json(mask.x)},
            {"y", axis_json(mask.y)},
            {"labels", std::move(labels)},
            {"boundary", std::move(boundary)},
            {"metadata", mask.metadata}};
}

json to_json(const RmaxTable &table)
{
    json series = json::array();
    for (const auto &s : table.series)
    {
        json rates = json::array();
        for (double r : s.rate)
            rates.push_back(number_or_null(r));
        series.push_back({{"config", s.config}, {"truncated", s.truncated}, {"rate", std::move(rates)}});
    }
    return {{"fov_min", axis_json(table.fov_min)}, {"series", std::move(series)}, {"metadata", table.metadata}};
}

} // namespace adropt
