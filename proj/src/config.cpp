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

#include "adropt/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <vector>

namespace adropt
{

namespace
{

using nlohmann::json;

std::string trim_quotes(std::string v)
{
    // The INI reader keeps trailing comments as part of the value.
    for (std::size_t i = 0; i < v.size(); ++i)
        if ((v[i] == ';' || v[i] == '#') && (i == 0 || v[i - 1] == ' ' || v[i - 1] == '\t'))
        {
            v.erase(i);
            break;
        }
    const auto first = v.find_first_not_of(" \t");
    const auto last = v.find_last_not_of(" \t");
    v = first == std::string::npos ? std::string() : v.substr(first, last - first + 1);
    if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front())
        v = v.substr(1, v.size() - 2);
    return v;
}

double to_number(const std::string &key, const std::string &value)
{
    std::size_t used = 0;
    double out = 0;
    try
    {
        out = std::stod(value, &used);
    }
    catch (const std::exception &)
    {
        used = 0;
    }
    if (used == 0 || used != value.size() || !std::isfinite(out))
        throw ConfigError("config key '" + key + "': '" + value + "' is not a finite number");
    return out;
}

int to_int(const std::string &key, const std::string &value)
{
    const double v = to_number(key, value);
    if (v != std::floor(v) || std::abs(v) > 1e9)
        throw ConfigError("config key '" + key + "': '" + value + "' is not an integer");
    return static_cast<int>(v);
}

bool to_bool(const std::string &key, const std::string &value)
{
    if (value == "true" || value == "1" || value == "yes" || value == "on")
        return true;
    if (value == "false" || value == "0" || value == "no" || value == "off")
        return false;
    throw ConfigError("config key '" + key + "': '" + value + "' is not a boolean");
}

void require(bool ok, const std::string &key, const std::string &constraint)
{
    if (!ok)
        throw ConfigError("config key '" + key + "': must satisfy " + constraint);
}

using Setter = std::function<void(RunConfig &, const std::string &key, const std::string &value)>;


/// A numeric key stored as `scale * value` after checking `ok(value)`.
template <typename Target>
Setter scaled(Target target, double scale, std::function<bool(double)> ok, std::string constraint)
{
    return [=](RunConfig &rc, const std::string &key, const std::string &value) {
        const double v = to_number(key, value);
        require(ok(v), key, constraint);
        target(rc) = v * scale;
    };
}

bool positive(double v) { return v > 0; }
bool non_negative(double v) { return v >= 0; }

// Keys applied in this order; the preset goes first so explicit keys override it.
const std::vector<std::pair<std::string, Setter>> &schema()
{
    static const std::vector<std::pair<std::string, Setter>> fields = {
        {"adr.preset",
         [](RunConfig &rc, const std::string &key, const std::string &value) {
             auto preset = adr_preset(value);
             if (!preset)
                 throw ConfigError("config key '" + key + "': unknown preset '" + value + "' (config1..config6)");
             preset->truncation = rc.adr.truncation;
             rc.adr = *preset;
         }},
        {"beam.waist_um", scaled([](RunConfig &rc) -> double & { return rc.beam.waist_radius; }, 1e-6, positive, "> 0")},
        {"beam.wavelength_nm",
         scaled([](RunConfig &rc) -> double & { return rc.beam.wavelength; }, 1e-9, positive, "> 0")},
        {"beam.medium_index",
         scaled([](RunConfig &rc) -> double & { return rc.beam.medium_index; }, 1.0,
                [](double v) { return v >= 1; }, ">= 1")},
        {"beam.pt_mw", scaled([](RunConfig &rc) -> double & { return rc.beam.power; }, 1e-3, non_negative, ">= 0")},
        {"beam.pt_max_mw",
         scaled([](RunConfig &rc) -> double & { return rc.link.transmit_power_cap; }, 1e-3, positive, "> 0")},
        {"beam.focal_length_mm",
         scaled([](RunConfig &rc) -> double & { return rc.lens.focal_length; }, 1e-3, positive, "> 0")},
        {"beam.lens_distance_mm",
         scaled([](RunConfig &rc) -> double & { return rc.lens.waist_distance; }, 1e-3, non_negative, ">= 0")},
        {"link.distance_m", scaled([](RunConfig &rc) -> double & { return rc.link.distance; }, 1.0, positive, "> 0")},
        {"link.responsivity",
         scaled([](RunConfig &rc) -> double & { return rc.link.responsivity; }, 1.0, positive, "> 0")},
        {"link.snr_gap",
         scaled([](RunConfig &rc) -> double & { return rc.link.snr_gap; }, 1.0, positive, "> 0")},
        {"link.ber",
         scaled([](RunConfig &rc) -> double & { return rc.ber; }, 1.0, [](double v) { return v > 0 && v < 0.5; },
                "0 < BER < 0.5")},
        {"noise.temperature_k",
         scaled([](RunConfig &rc) -> double & { return rc.noise.temperature; }, 1.0, positive, "> 0")},
        {"noise.load_resistance_ohm",
         scaled([](RunConfig &rc) -> double & { return rc.noise.load_resistance; }, 1.0, positive, "> 0")},
        {"noise.noise_figure_db",
         [](RunConfig &rc, const std::string &key, const std::string &value) {
             const double db = to_number(key, value);
             require(db >= 0, key, ">= 0 dB");
             rc.noise.noise_figure = std::pow(10.0, db / 10.0);
         }},
        {"noise.mode",
         [](RunConfig &rc, const std::string &key, const std::string &value) {
             if (value == "thermal_only" || value == "thermal")
                 rc.noise.mode = NoiseMode::thermal_only;
             else if (value == "full")
                 rc.noise.mode = NoiseMode::full;
             else
                 throw ConfigError("config key '" + key + "': must be 'thermal_only' or 'full'");
         }},
        {"noise.rin_db_per_hz",
         [](RunConfig &rc, const std::string &key, const std::string &value) {
             rc.noise.rin = std::pow(10.0, to_number(key, value) / 10.0);
         }},
        {"adr.tiers",
         [](RunConfig &rc, const std::string &key, const std::string &value) {
             const int v = to_int(key, value);
             require(v >= 0, key, ">= 0");
             rc.adr.tiers = v;
         }},
        {"adr.array_side",
         [](RunConfig &rc, const std::string &key, const std::string &value) {
             const int v = to_int(key, value);
             require(v >= 1 && v <= 1000, key, "1 <= side <= 1000");
             rc.adr.pds_per_array = v * v;
         }},
        {"adr.pds_per_array",
         [](RunConfig &rc, const std::string &key, const std::string &value) {
             const int v = to_int(key, value);
             require(detail::is_perfect_square(v), key, "a perfect square >= 1");
             rc.adr.pds_per_array = v;
         }},
        {"adr.fill_factor",
         scaled([](RunConfig &rc) -> double & { return rc.adr.fill_factor; }, 1.0,
                [](double v) { return v > 0 && v <= 1; }, "0 < FF <= 1")},
        {"adr.n_cpc",
         scaled([](RunConfig &rc) -> double & { return rc.adr.cpc_index; }, 1.0, [](double v) { return v >= 1; },
                ">= 1")},
        {"adr.k_pd", scaled([](RunConfig &rc) -> double & { return rc.adr.pd_constant; }, 1.0, positive, "> 0")},
        {"truncation.tau",
         scaled([](RunConfig &rc) -> double & { return rc.truncation.length_ratio; }, 1.0,
                [](double v) { return v >= 0.5 && v <= 1; }, "0.5 <= tau <= 1")},
        {"truncation.gamma",
         scaled([](RunConfig &rc) -> double & { return rc.truncation.gain_retention; }, 1.0,
                [](double v) { return v > 0 && v <= 1; }, "0 < gamma <= 1")},
        {"adr.truncated",
         [](RunConfig &rc, const std::string &key, const std::string &value) {
             rc.adr.truncation = to_bool(key, value) ? std::optional(rc.truncation) : std::nullopt;
         }},
        {"solver.b_min_ghz",
         scaled([](RunConfig &rc) -> double & { return rc.solver.b_min; }, 1e9, positive, "> 0")},
        {"solver.b_max_ghz",
         scaled([](RunConfig &rc) -> double & { return rc.solver.b_max; }, 1e9, positive, "> 0")},
        {"solver.grid_points",
         [](RunConfig &rc, const std::string &key, const std::string &value) {
             const int v = to_int(key, value);
             require(v >= 3, key, ">= 3");
             rc.solver.grid_points = v;
         }},
        {"solver.rel_tol",
         scaled([](RunConfig &rc) -> double & { return rc.solver.rel_tol; }, 1.0,
                [](double v) { return v > 0 && v < 0.1; }, "0 < rel_tol < 0.1")},
        {"solver.sweep_points",
         [](RunConfig &rc, const std::string &key, const std::string &value) {
             const int v = to_int(key, value);
             require(v >= 2, key, ">= 2");
             rc.sweep_points = v;
         }},
    };
    return fields;
}

std::string resolve_key(const std::string &section, const std::string &key)
{
    const std::string full = section.empty() ? key : section + "." + key;
    std::vector<std::string> matches;
    for (const auto &[name, setter] : schema())
    {
        if (name == full)
            return name;
        if (section.empty() && name.substr(name.find('.') + 1) == key)
            matches.push_back(name);
    }
    if (matches.size() == 1)
        return matches.front();
    if (matches.size() > 1)
        throw ConfigError("config key '" + full + "' is ambiguous; qualify it with its section");
    throw ConfigError("unknown config key '" + full + "'");
}

} // namespace

Context RunConfig::context() const
{
    return make_link_context(beam, lens, link, noise);
}

RunConfig parse_config(std::istream &in)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try
    {
        pt::read_ini(in, tree);
    }
    catch (const pt::ini_parser_error &e)
    {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    std::map<std::string, std::string> values;
    const auto put = [&](const std::string &section, const std::string &key, const std::string &raw) {
        const auto name = resolve_key(section, key);
        if (!values.emplace(name, trim_quotes(raw)).second)
            throw ConfigError("config key '" + name + "' given more than once");
    };
    for (const auto &[name, node] : tree)
    {
        if (node.empty())
            put("", name, node.data());
        else
            for (const auto &[key, leaf] : node)
                put(name, key, leaf.data());
    }

    RunConfig rc;
    for (const auto &[name, setter] : schema())
        if (auto it = values.find(name); it != values.end())
            setter(rc, name, it->second);

    require(rc.beam.power <= rc.link.transmit_power_cap, "beam.pt_mw",
            "P_t <= beam.pt_max_mw (" + std::to_string(rc.link.transmit_power_cap * 1e3) + " mW)");
    require(rc.solver.b_max > rc.solver.b_min, "solver.b_max_ghz", "> solver.b_min_ghz");
    if (rc.adr.name != "custom" &&
        (values.count("adr.tiers") || values.count("adr.array_side") || values.count("adr.pds_per_array")))
        rc.adr.name += "-modified";

    // Backstop: the module validators must agree with the per-key checks.
    try
    {
        validate(rc.adr);
        (void)rc.context();
    }
    catch (const DomainError &e)
    {
        throw ConfigError(std::string("config validation failed: ") + e.what());
    }
    return rc;
}

RunConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

json to_json(const RunConfig &rc)
{
    json out;
    out["beam"] = {{"waist_um", rc.beam.waist_radius * 1e6},
                   {"wavelength_nm", rc.beam.wavelength * 1e9},
                   {"medium_index", rc.beam.medium_index},
                   {"pt_mw", rc.beam.power * 1e3},
                   {"pt_max_mw", rc.link.transmit_power_cap * 1e3},
                   {"focal_length_mm", rc.lens.focal_length * 1e3},
                   {"lens_distance_mm", rc.lens.waist_distance * 1e3}};
    out["link"] = {{"distance_m", rc.link.distance},
                   {"responsivity", rc.link.responsivity},
                   {"snr_gap", rc.link.snr_gap},
                   {"ber", rc.ber}};
    out["noise"] = {{"temperature_k", rc.noise.temperature},
                    {"load_resistance_ohm", rc.noise.load_resistance},
                    {"noise_figure_db", 10.0 * std::log10(rc.noise.noise_figure)},
                    {"mode", rc.noise.mode == NoiseMode::full ? "full" : "thermal_only"},
                    {"rin_db_per_hz", rc.noise.rin ? json(10.0 * std::log10(*rc.noise.rin)) : json(nullptr)}};
    out["adr"] = {{"preset", rc.adr.name},
                  {"tiers", rc.adr.tiers},
                  {"pds_per_array", rc.adr.pds_per_array},
                  {"fill_factor", rc.adr.fill_factor},
                  {"n_cpc", rc.adr.cpc_index},
                  {"k_pd", rc.adr.pd_constant},
                  {"truncated", rc.adr.truncation.has_value()}};
    out["truncation"] = {{"tau", rc.truncation.length_ratio}, {"gamma", rc.truncation.gain_retention}};
    out["solver"] = {{"b_min_ghz", rc.solver.b_min / 1e9},
                     {"b_max_ghz", rc.solver.b_max / 1e9},
                     {"grid_points", rc.solver.grid_points},
                     {"rel_tol", rc.solver.rel_tol},
                     {"sweep_points", rc.sweep_points}};
    return out;
}

} // namespace adropt
