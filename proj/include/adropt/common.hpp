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

#ifndef ADROPT_COMMON_HPP
#define ADROPT_COMMON_HPP

#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace adropt
{

/// Raised when an argument lies outside the domain of a model relation.
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

namespace constants
{
template <typename Scalar = double>
inline constexpr Scalar pi = std::numbers::pi_v<Scalar>;

inline constexpr double boltzmann = 1.380649e-23;        // J/K
inline constexpr double elementary_charge = 1.602176634e-19; // C
inline constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m
} // namespace constants

template <typename Scalar>
constexpr Scalar deg2rad(Scalar deg)
{
    return deg * constants::pi<Scalar> / Scalar(180);
}

template <typename Scalar>
constexpr Scalar rad2deg(Scalar rad)
{
    return rad * Scalar(180) / constants::pi<Scalar>;
}

namespace detail
{
template <typename Scalar>
void require_positive(Scalar value, const char *what)
{
    if (!(value > Scalar(0)))
    {
        std::ostringstream msg;
        msg << what << " must be positive (got " << value << ")";
        throw DomainError(msg.str());
    }
}

template <typename Scalar>
void require_non_negative(Scalar value, const char *what)
{
    if (!(value >= Scalar(0)))
    {
        std::ostringstream msg;
        msg << what << " must be non-negative (got " << value << ")";
        throw DomainError(msg.str());
    }
}
} // namespace detail

} // namespace adropt

#endif
