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

// Command-line front end: point evaluation, optimisation, sweeps, truncation
// comparison and calibration.

#include "adropt/calibrate.hpp"
#include "adropt/config.hpp"
#include "adropt/sweep.hpp"
#include "adropt/units.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace
{

using namespace adropt;
using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kDeg = constants::pi<double> / 180.0;

enum ExitCode
{
    ok = 0,
    usage_error = 1,
    domain_error = 2,
    infeasible = 3
};

struct Common
{
    std::string config_path;
    std::string preset;
    std::string pt;
    bool truncated = false;
    unsigned threads = 1;
    std::string timestamp;
};

struct Constraints
{
    std::string fov_min = "30deg";
    std::string l_max;
    std::string a_max;
};

RunConfig effective_config(const Common &c)
{
    RunConfig rc = c.config_path.empty() ? RunConfig{} : load_config(c.config_path);
    if (!c.preset.empty())
    {
        auto p = adr_preset(c.preset);
        if (!p)
            throw ConfigError("--preset: unknown preset '" + c.preset + "' (config1..config6)");
        p->truncation = rc.adr.truncation;
        p->pd_constant = rc.adr.pd_constant;
        p->fill_factor = rc.adr.fill_factor;
        p->cpc_index = rc.adr.cpc_index;
        rc.adr = *p;
    }
    if (!c.pt.empty())
    {
        rc.beam.power = parse_with_unit(c.pt, Dim::power, "mW");
        if (rc.beam.power > rc.link.transmit_power_cap)
            throw ConfigError("--pt: transmit power exceeds the eye-safety cap of " +
                              format_double(rc.link.transmit_power_cap * 1e3) + " mW");
    }
    if (c.truncated)
        rc.adr.truncation = rc.truncation;
    return rc;
}

ConstraintSet to_constraints(const Constraints &c)
{
    ConstraintSet cs{parse_with_unit(c.fov_min, Dim::angle, "deg"), std::nullopt, std::nullopt};
    if (!c.l_max.empty())
        cs.l_max = parse_with_unit(c.l_max, Dim::length, "cm");
    if (!c.a_max.empty())
        cs.a_max = parse_with_unit(c.a_max, Dim::area, "cm2");
    validate(cs);
    return cs;
}

json constraints_json(const ConstraintSet &cs)
{
    return {{"fov_min_deg", cs.fov_min / kDeg},
            {"l_max_cm", cs.l_max ? json(*cs.l_max * 1e2) : json(nullptr)},
            {"a_max_cm2", cs.a_max ? json(*cs.a_max * 1e4) : json(nullptr)}};
}

fs::path output_dir()
{
    const char *env = std::getenv("ADROPT_OUTPUT_DIR");
    fs::path dir = env && *env ? fs::path(env) : fs::path(".");
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

/// Writes `<stem>.csv` and `<stem>.json`; returns both paths.
template <typename Artifact>
json write_artifact(const std::string &stem, const Artifact &artifact)
{
    const auto dir = output_dir();
    std::ostringstream csv;
    write_csv(csv, artifact);
    write_text(dir / (stem + ".csv"), csv.str());
    write_text(dir / (stem + ".json"), to_json(artifact).dump(1) + "\n");
    return {{"csv", (dir / (stem + ".csv")).string()}, {"json", (dir / (stem + ".json")).string()}};
}

std::string fixed(double v, int digits)
{
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v;
    return os.str();
}

json optimum_json(const OptimumResult &r)
{
    json active = json::array();
    for (auto c : r.active_constraints)
        active.push_back(std::string(to_string(c)));
    json out{{"feasible", r.feasible}, {"active_constraints", active}};
    if (r.feasible)
    {
        out["b_star_ghz"] = r.b_star / 1e9;
        out["fov_star_deg"] = r.fov_star / kDeg;
        out["rate_star_gbps"] = r.rate_star / 1e9;
    }
    else
        out["diagnostic"] = r.diagnostic;
    return out;
}

void print_optimum(const std::string &label, const OptimumResult &r)
{
    if (!r.feasible)
    {
        std::cout << label << ": infeasible (" << r.diagnostic << ")\n";
        return;
    }
    std::cout << label << ": R_max = " << fixed(r.rate_star / 1e9, 3) << " Gb/s at B = " << fixed(r.b_star / 1e9, 3)
              << " GHz, FOV = " << fixed(r.fov_star / kDeg, 2) << " deg; active:";
    if (r.active_constraints.empty())
        std::cout << " none";
    for (auto c : r.active_constraints)
        std::cout << ' ' << to_string(c);
    std::cout << '\n';
}

void emit(const json &summary)
{
    std::cout << summary.dump() << '\n';
}

int cmd_design(const Common &common, const std::string &b_text, const std::string &fov_text)
{
    const RunConfig rc = effective_config(common);
    const double b = parse_with_unit(b_text, Dim::frequency, "GHz");
    const double fov = parse_with_unit(fov_text, Dim::angle, "deg");
    const auto ctx = rc.context();
    const auto g = geometry(rc.adr, b, fov);
    const auto lb = evaluate_link(rc.adr, b, fov, ctx);

    std::cout << "design point " << rc.adr.name << " at B = " << fixed(b / 1e9, 3) << " GHz, FOV = "
              << fixed(fov / kDeg, 2) << " deg\n"
              << "  theta_CPC  " << fixed(g.theta_cpc / kDeg, 4) << " deg\n"
              << "  D_PD       " << fixed(g.pd_side * 1e6, 3) << " um\n"
              << "  D2         " << fixed(g.exit_diameter * 1e3, 4) << " mm\n"
              << "  D1         " << fixed(g.entrance_diameter * 1e3, 4) << " mm\n"
              << "  L_ADR      " << fixed(g.height * 1e2, 4) << " cm\n"
              << "  A_ADR      " << fixed(g.top_area * 1e4, 4) << " cm2\n"
              << "  N_ADR      " << g.element_count << " elements\n"
              << "  PDs        " << total_pds(rc.adr) << " total\n"
              << "  P_r        " << fixed(lb.received_power * 1e6, 4) << " uW\n"
              << "  SNR        " << fixed(10 * std::log10(lb.snr), 3) << " dB\n"
              << "  R          " << fixed(lb.rate / 1e9, 4) << " Gb/s\n";
    if (lb.rin_omitted)
        std::cout << "  note: full noise mode without a RIN value; RIN term omitted\n";

    json tilts = json::array();
    for (Eigen::Index i = 0; i < g.tilt_angles.size(); ++i)
        tilts.push_back(g.tilt_angles(i) / kDeg);
    emit({{"command", "design"},
          {"config", to_json(rc)},
          {"bandwidth_ghz", b / 1e9},
          {"fov_deg", fov / kDeg},
          {"geometry",
           {{"theta_cpc_deg", g.theta_cpc / kDeg},
            {"tilt_angles_deg", tilts},
            {"pd_side_um", g.pd_side * 1e6},
            {"exit_diameter_mm", g.exit_diameter * 1e3},
            {"entrance_diameter_mm", g.entrance_diameter * 1e3},
            {"height_cm", g.height * 1e2},
            {"area_cm2", g.top_area * 1e4},
            {"element_count", g.element_count},
            {"total_pds", total_pds(rc.adr)}}},
          {"link",
           {{"received_power_uw", lb.received_power * 1e6},
            {"noise_psd_a2_per_hz", lb.noise_psd},
            {"snr", lb.snr},
            {"rate_gbps", lb.rate / 1e9},
            {"rin_omitted", lb.rin_omitted}}}});
    return ok;
}

int cmd_optimize(const Common &common, const Constraints &constraints)
{
    const RunConfig rc = effective_config(common);
    const auto cs = to_constraints(constraints);
    const auto r = maximize_rate_constrained(rc.adr, rc.context(), cs, rc.solver);
    print_optimum(rc.adr.name + (rc.adr.truncation ? " (truncated)" : ""), r);

    const auto dir = output_dir();
    std::ostringstream csv;
    csv << "bandwidth[Hz],fov[deg],rate[bit/s]\n";
    for (const auto &s : r.boundary_trace)
        csv << format_double(s.bandwidth) << ',' << format_double(s.fov / kDeg) << ',' << format_double(s.rate)
            << '\n';
    const auto trace_path = dir / ("optimize_" + rc.adr.name + "_trace.csv");
    write_text(trace_path, csv.str());
    emit({{"command", "optimize"},
          {"config", to_json(rc)},
          {"constraints", constraints_json(cs)},
          {"result", optimum_json(r)},
          {"files", {{"trace_csv", trace_path.string()}}}});
    return r.feasible ? ok : infeasible;
}

int cmd_compare(const Common &common, const Constraints &constraints)
{
    RunConfig rc = effective_config(common);
    const auto cs = to_constraints(constraints);
    const auto ctx = rc.context();
    Config original = rc.adr;
    original.truncation.reset();
    const Config truncated = with_truncation(original, rc.truncation);
    const auto a = maximize_rate_constrained(original, ctx, cs, rc.solver);
    const auto b = maximize_rate_constrained(truncated, ctx, cs, rc.solver);
    print_optimum("original ", a);
    print_optimum("truncated", b);
    json summary{{"command", "compare-truncation"},
                 {"config", to_json(rc)},
                 {"constraints", constraints_json(cs)},
                 {"original", optimum_json(a)},
                 {"truncated", optimum_json(b)}};
    if (a.feasible && b.feasible)
    {
        const double delta = b.rate_star - a.rate_star;
        std::cout << "delta (truncated - original): " << fixed(delta / 1e9, 3) << " Gb/s ("
                  << fixed(100 * delta / a.rate_star, 2) << " %)\n";
        summary["delta_gbps"] = delta / 1e9;
        summary["delta_relative"] = delta / a.rate_star;
    }
    else
        summary["delta_gbps"] = nullptr;
    emit(summary);
    return a.feasible || b.feasible ? ok : infeasible;
}

/// "min:max:count" with units on the endpoints.
Axis parse_range(const std::string &text, const std::string &name, Dim dim, const std::string &unit, double si_scale)
{
    const auto p1 = text.find(':');
    const auto p2 = text.find(':', p1 == std::string::npos ? p1 : p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
        throw DomainError("range '" + text + "' must look like min:max:count");
    const double lo = parse_with_unit(text.substr(0, p1), dim, unit) / si_scale;
    const double hi = parse_with_unit(text.substr(p1 + 1, p2 - p1 - 1), dim, unit) / si_scale;
    const int count = std::stoi(text.substr(p2 + 1));
    Axis axis{name, unit, lo, hi, count, Spacing::linear, si_scale};
    (void)axis.values();
    return axis;
}

struct SweepArgs
{
    std::string kind;
    std::string b_range = "0.1GHz:20GHz";
    std::string fov_range = "0.5deg:90deg";
    int points = 0; // 0 -> solver.sweep_points
    double rate_min = 10.0; // Gb/s
    std::string l_range = "0.25cm:5cm:20";
    std::string a_range = "0.25cm2:10cm2:20";
    std::string fov_min_range = "1deg:60deg:60";
    std::string scenario = "ncd";
    std::string configs = "config1,config2,config3";
    Constraints constraints;
};

std::pair<Axis, Axis> plane_axes(const SweepArgs &s, int points)
{
    const auto split = [](const std::string &t) {
        const auto p = t.find(':');
        if (p == std::string::npos)
            throw DomainError("range '" + t + "' must look like min:max");
        return std::pair{t.substr(0, p), t.substr(p + 1)};
    };
    const auto [b0, b1] = split(s.b_range);
    const auto [f0, f1] = split(s.fov_range);
    const Axis b = bandwidth_axis(parse_with_unit(b0, Dim::frequency, "GHz"), parse_with_unit(b1, Dim::frequency, "GHz"),
                                  points);
    const Axis f = fov_axis(parse_with_unit(f0, Dim::angle, "deg") / kDeg, parse_with_unit(f1, Dim::angle, "deg") / kDeg,
                            points);
    (void)b.values();
    (void)f.values();
    return {b, f};
}

int cmd_sweep(const Common &common, const SweepArgs &s)
{
    const RunConfig rc = effective_config(common);
    const auto ctx = rc.context();
    SweepOptions opts{common.threads, std::nullopt};
    if (!common.timestamp.empty())
        opts.timestamp = common.timestamp;
    const int points = s.points > 0 ? s.points : rc.sweep_points;
    const std::string suffix = rc.adr.name + (rc.adr.truncation ? "_truncated" : "");
    json summary{{"command", "sweep"}, {"kind", s.kind}, {"config", to_json(rc)}};

    const auto stamp = [&](auto &artifact) { artifact.metadata["run_config"] = to_json(rc); };

    if (auto q = parse_quantity(s.kind))
    {
        const auto [b, f] = plane_axes(s, points);
        auto grid = grid_sweep(rc.adr, ctx, *q, b, f, opts);
        stamp(grid);
        summary["files"] = write_artifact("sweep_" + s.kind + "_" + suffix, grid);
        std::cout << "swept " << s.kind << " on " << f.count << " x " << b.count << " (FOV x B) cells\n";
        if (*q == Quantity::rate)
        {
            json reach = json::object();
            for (double level : {10e9, 20e9})
            {
                const auto top = contour_max_y(grid, level);
                std::cout << "  " << fixed(level / 1e9, 0) << " Gb/s contour reaches FOV = "
                          << (top ? fixed(*top, 2) + " deg" : std::string("(absent)")) << '\n';
                reach[format_double(level / 1e9)] = top ? json(*top) : json(nullptr);
            }
            summary["contour_max_fov_deg"] = reach;
        }
    }
    else if (s.kind == "design-space")
    {
        const auto [b, f] = plane_axes(s, points);
        const double r_min = s.rate_min * 1e9;
        const double fov_min = parse_with_unit(s.constraints.fov_min, Dim::angle, "deg");
        auto mask = design_space(rc.adr, ctx, r_min, fov_min, b, f, opts);
        stamp(mask);
        summary["files"] = write_artifact("sweep_design_space_" + suffix, mask);
        summary["design_space_cells"] = mask.count(Region::design_space);
        std::cout << "design space (R >= " << fixed(r_min / 1e9, 2) << " Gb/s, FOV >= " << fixed(fov_min / kDeg, 2)
                  << " deg): " << mask.count(Region::design_space) << " of " << mask.labels.size() << " cells\n";
    }
    else if (s.kind == "feasible")
    {
        const auto [b, f] = plane_axes(s, points);
        const auto cs = to_constraints(s.constraints);
        auto mask = feasible_region(rc.adr, ctx, cs, b, f, opts);
        stamp(mask);
        summary["files"] = write_artifact("sweep_feasible_" + suffix, mask);
        json dom = json::array();
        for (auto c : dominant_constraints(rc.adr, cs, b))
            dom.push_back(std::string(to_string(c)));
        const int crossings = boundary_intersections(rc.adr, cs, b);
        summary["constraints"] = constraints_json(cs);
        summary["dominant_constraints"] = dom;
        summary["boundary_intersections"] = crossings;
        summary["feasible_cells"] = mask.count(Region::feasible);
        std::cout << "feasible cells: " << mask.count(Region::feasible) << " of " << mask.labels.size()
                  << "; dominant constraints: " << dom.dump() << "; boundary intersections: " << crossings << '\n';
    }
    else if (s.kind == "rmax")
    {
        const double fov_min = parse_with_unit(s.constraints.fov_min, Dim::angle, "deg");
        const Axis l = parse_range(s.l_range, "l_max", Dim::length, "cm", 1e-2);
        const Axis a = parse_range(s.a_range, "a_max", Dim::area, "cm2", 1e-4);
        auto grid = rmax_surface(rc.adr, ctx, fov_min, l, a, rc.solver, opts);
        stamp(grid);
        summary["files"] = write_artifact("sweep_rmax_" + suffix, grid);
        summary["rate_max_gbps"] = grid.values.isNaN().all() ? json(nullptr)
                                                              : json(grid.values.isNaN().select(0, grid.values).maxCoeff() / 1e9);
        std::cout << "R_max surface on " << l.count << " x " << a.count << " (L_max x A_max) cells\n";
    }
    else if (s.kind == "rmax-fovmin")
    {
        const auto scenario = parse_scenario(s.scenario);
        if (!scenario)
            throw DomainError("--scenario must be ncd, mcd or scd");
        std::vector<Config> cfgs;
        std::stringstream list(s.configs);
        for (std::string name; std::getline(list, name, ',');)
        {
            auto p = adr_preset(name);
            if (!p)
                throw DomainError("--configs: unknown preset '" + name + "'");
            p->pd_constant = rc.adr.pd_constant;
            p->fill_factor = rc.adr.fill_factor;
            p->cpc_index = rc.adr.cpc_index;
            cfgs.push_back(*p);
        }
        const Axis fm = parse_range(s.fov_min_range, "fov_min", Dim::angle, "deg", kDeg);
        auto table = rmax_vs_fovmin(cfgs, ctx, *scenario, fm, rc.truncation, rc.solver);
        table.metadata["run_config"] = to_json(rc);
        table.metadata["generated_at"] = opts.timestamp ? json(*opts.timestamp) : json(nullptr);
        summary["files"] = write_artifact("sweep_rmax_fovmin_" + s.scenario, table);
        std::cout << "R_max(FOV_min) for " << table.series.size() << " series, scenario " << s.scenario << '\n';
    }
    else
        throw DomainError("unknown sweep kind '" + s.kind +
                          "' (rate, height, area, design-space, feasible, rmax, rmax-fovmin)");
    emit(summary);
    return ok;
}

int cmd_calibrate(const Common &common)
{
    const RunConfig rc = effective_config(common);
    const auto ctx = rc.context();
    const auto res = calibrate(rc.adr, ctx, {}, rc.solver);
    const auto show = [](const char *label, const AnchorResiduals &r) {
        std::cout << label << ": L " << fixed(100 * r.height, 3) << " %, A " << fixed(100 * r.area, 3)
                  << " %, rates " << fixed(100 * r.rate[0], 3) << " / " << fixed(100 * r.rate[1], 3) << " / "
                  << fixed(100 * r.rate[2], 3) << " %, peak B offsets " << fixed(r.bandwidth[0] / 1e9, 3) << " / "
                  << fixed(r.bandwidth[1] / 1e9, 3) << " / " << fixed(r.bandwidth[2] / 1e9, 3) << " GHz\n";
    };
    std::cout << "fitted K_PD = " << res.pd_constant << " s/m, R_L = " << fixed(res.load_resistance, 2) << " Ohm\n";
    show("residuals, fitted", res.fitted);
    show("residuals, frozen", res.frozen);
    const auto residual_json = [](const AnchorResiduals &r) {
        return json{{"height", r.height},
                    {"area", r.area},
                    {"rate", r.rate},
                    {"peak_bandwidth_offset_hz", r.bandwidth},
                    {"worst_relative", r.worst_relative()}};
    };
    emit({{"command", "calibrate"},
          {"config", to_json(rc)},
          {"fitted", {{"k_pd", res.pd_constant}, {"load_resistance_ohm", res.load_resistance}}},
          {"residuals_fitted", residual_json(res.fitted)},
          {"residuals_frozen", residual_json(res.frozen)}});
    return ok;
}

void add_common(CLI::App *sub, Common &c)
{
    sub->add_option("-c,--config", c.config_path, "INI configuration file");
    sub->add_option("-p,--preset", c.preset, "receiver preset config1..config6");
    sub->add_option("--pt", c.pt, "transmit power (default unit mW)");
    sub->add_flag("--truncated", c.truncated, "apply CPC truncation");
    sub->add_option("--threads", c.threads, "sweep worker threads")->check(CLI::Range(1u, 256u));
    sub->add_option("--timestamp", c.timestamp, "timestamp recorded in artifact metadata");
}

void add_constraints(CLI::App *sub, Constraints &c)
{
    sub->add_option("--fov-min", c.fov_min, "minimum FOV (default unit deg)");
    sub->add_option("--l-max", c.l_max, "maximum ADR height (default unit cm)");
    sub->add_option("--a-max", c.a_max, "maximum ADR top area (default unit cm2)");
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Design and optimisation of angle-diversity optical wireless receivers"};
    app.require_subcommand(1);

    Common common;
    std::string b_text = "2.1GHz", fov_text = "30deg";
    auto *design = app.add_subcommand("design", "evaluate geometry and link budget at one (B, FOV) point");
    add_common(design, common);
    design->add_option("-b,--bandwidth", b_text, "PD bandwidth (default unit GHz)");
    design->add_option("-f,--fov", fov_text, "receiver FOV (default unit deg)");

    Constraints constraints;
    auto *optimize = app.add_subcommand("optimize", "maximise the data rate under FOV and size constraints");
    add_common(optimize, common);
    add_constraints(optimize, constraints);

    auto *compare = app.add_subcommand("compare-truncation", "optimise the original and truncated variants");
    add_common(compare, common);
    add_constraints(compare, constraints);

    SweepArgs sweep_args;
    auto *sweep = app.add_subcommand("sweep", "grid sweeps written as CSV and JSON");
    add_common(sweep, common);
    add_constraints(sweep, sweep_args.constraints);
    sweep->add_option("kind", sweep_args.kind, "rate|height|area|design-space|feasible|rmax|rmax-fovmin")->required();
    sweep->add_option("--b-range", sweep_args.b_range, "bandwidth axis min:max (log spaced)");
    sweep->add_option("--fov-range", sweep_args.fov_range, "FOV axis min:max");
    sweep->add_option("--points", sweep_args.points, "points per plane axis")->check(CLI::Range(2, 5000));
    sweep->add_option("--rate-min", sweep_args.rate_min, "design-space rate threshold in Gb/s");
    sweep->add_option("--l-range", sweep_args.l_range, "L_max axis min:max:count");
    sweep->add_option("--a-range", sweep_args.a_range, "A_max axis min:max:count");
    sweep->add_option("--fov-min-range", sweep_args.fov_min_range, "FOV_min axis min:max:count");
    sweep->add_option("--scenario", sweep_args.scenario, "ncd|mcd|scd");
    sweep->add_option("--configs", sweep_args.configs, "comma-separated presets for rmax-fovmin");

    auto *calib = app.add_subcommand("calibrate", "refit K_PD and R_L to the reference anchors");
    add_common(calib, common);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e);
    }

    try
    {
        if (design->parsed())
            return cmd_design(common, b_text, fov_text);
        if (optimize->parsed())
            return cmd_optimize(common, constraints);
        if (compare->parsed())
            return cmd_compare(common, constraints);
        if (sweep->parsed())
            return cmd_sweep(common, sweep_args);
        if (calib->parsed())
            return cmd_calibrate(common);
    }
    catch (const ConfigError &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        emit({{"error", e.what()}, {"kind", "config"}});
        return usage_error;
    }
    catch (const DomainError &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        emit({{"error", e.what()}, {"kind", "domain"}});
        return domain_error;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        emit({{"error", e.what()}, {"kind", "runtime"}});
        return usage_error;
    }
    return usage_error;
}
