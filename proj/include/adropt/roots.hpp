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

#ifndef ADROPT_ROOTS_HPP
#define ADROPT_ROOTS_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <utility>

namespace adropt
{

/**
 * Solve f(x) == target for monotone f on [lo, hi] by bisection.
 *
 * Returns nullopt when [lo, hi] does not bracket the target. Iteration stops
 * once |f(x) - target| <= rel_tol * |target| or the bracket collapses to
 * adjacent floating-point values.
 */
template <class F, typename Real>
std::optional<Real> bisect_monotone(const F &f, Real target, Real lo, Real hi, Real rel_tol, int max_iter = 400)
{
    Real flo = f(lo) - target;
    Real fhi = f(hi) - target;
    if (flo == Real(0))
        return lo;
    if (fhi == Real(0))
        return hi;
    if ((flo > Real(0)) == (fhi > Real(0)))
        return std::nullopt;

    const Real scale = std::abs(target);
    Real best = lo;
    Real best_res = std::abs(flo);
    for (int it = 0; it < max_iter; ++it)
    {
        const Real mid = lo + (hi - lo) / Real(2);
        if (mid <= lo || mid >= hi)
            break;
        const Real fm = f(mid) - target;
        if (std::abs(fm) < best_res)
        {
            best = mid;
            best_res = std::abs(fm);
        }
        if (std::abs(fm) <= rel_tol * scale)
            return mid;
        if ((fm > Real(0)) == (flo > Real(0)))
        {
            lo = mid;
            flo = fm;
        }
        else
        {
            hi = mid;
        }
    }
    return best;
}

/// Golden-section search for a maximum of f on [a, b]; stops when b - a <= abs_tol.
template <class F, typename Real>
std::pair<Real, Real> golden_section_max(const F &f, Real a, Real b, Real abs_tol, int max_iter = 200)
{
    const Real inv_phi = (std::sqrt(Real(5)) - Real(1)) / Real(2);
    Real c = b - inv_phi * (b - a);
    Real d = a + inv_phi * (b - a);
    Real fc = f(c);
    Real fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > abs_tol; ++it)
    {
        if (fc >= fd)
        {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        }
        else
        {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

} // namespace adropt

#endif
