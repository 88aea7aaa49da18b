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

#ifndef ADROPT_UNITS_HPP
#define ADROPT_UNITS_HPP

#include "common.hpp"

#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>

namespace adropt
{

enum class Dim
{
    frequency,
    angle,
    length,
    area,
    power
};

namespace detail
{
struct UnitEntry
{
    std::string_view suffix;
    Dim dim;
    double to_si;
};

inline constexpr std::array<UnitEntry, 13> unit_table{{
    {"Hz", Dim::frequency, 1.0},
    {"kHz", Dim::frequency, 1e3},
    {"MHz", Dim::frequency, 1e6},
    {"GHz", Dim::frequency, 1e9},
    {"deg", Dim::angle, constants::pi<double> / 180.0},
    {"rad", Dim::angle, 1.0},
    {"m", Dim::length, 1.0},
    {"cm", Dim::length, 1e-2},
    {"mm", Dim::length, 1e-3},
    {"m2", Dim::area, 1.0},
    {"cm2", Dim::area, 1e-4},
    {"mm2", Dim::area, 1e-6},
    {"mW", Dim::power, 1e-3},
}};
} // namespace detail

/**
 * Parse "2.1GHz", "30 deg", "0.5cm2" or a bare number into SI units.
 * A bare number is read in `default_suffix`. "W" is accepted for power.
 */
inline double parse_with_unit(std::string_view text, Dim dim, std::string_view default_suffix)
{
    std::string s(text);
    std::size_t used = 0;
    double value = 0;
    try
    {
        value = std::stod(s, &used);
    }
    catch (const std::exception &)
    {
        throw DomainError("'" + s + "' does not start with a number");
    }
    if (!std::isfinite(value))
        throw DomainError("'" + s + "' is not finite");
    std::string suffix = s.substr(used);
    suffix.erase(0, suffix.find_first_not_of(' '));
    if (suffix.empty())
        suffix = std::string(default_suffix);
    if (dim == Dim::power && suffix == "W")
        return value;
    for (const auto &u : detail::unit_table)
        if (u.suffix == suffix)
        {
            if (u.dim != dim)
                throw DomainError("unit '" + suffix + "' has the wrong dimension in '" + s + "'");
            return value * u.to_si;
        }
    throw DomainError("unknown unit '" + suffix + "' in '" + s + "'");
}

} // namespace adropt

#endif
