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

#include "adropt/calibrate.hpp"
#include "adropt/roots.hpp"

#include <algorithm>
#include <cmath>

namespace adropt
{

double AnchorResiduals::worst_relative() const
{
    double worst = std::max(std::abs(height), std::abs(area));
    for (double r : rate)
        worst = std::max(worst, std::abs(r));
    return worst;
}

AnchorResiduals anchor_residuals(const Config &base, const Context &ctx, const CalibrationAnchors &anchors,
                                 const SearchOptions &search)
{
    AnchorResiduals res{};
    Config c1 = *adr_preset("config1");
    c1.pd_constant = base.pd_constant;
    const auto g = geometry(c1, anchors.bandwidth, anchors.fov);
    res.height = g.height / anchors.height - 1.0;
    res.area = g.top_area / anchors.area - 1.0;
    for (int i = 0; i < 3; ++i)
    {
        Config c = *adr_preset("config" + std::to_string(i + 1));
        c.pd_constant = base.pd_constant;
        const auto opt = maximize_rate_fov_only(c, ctx, anchors.fov, search);
        res.rate[static_cast<std::size_t>(i)] = opt.rate_star / anchors.peak_rate[static_cast<std::size_t>(i)] - 1.0;
        res.bandwidth[static_cast<std::size_t>(i)] = opt.b_star - anchors.peak_bandwidth[static_cast<std::size_t>(i)];
    }
    return res;
}

CalibrationResult calibrate(const Config &base, const Context &ctx, const CalibrationAnchors &anchors,
                            const SearchOptions &search)
{
    CalibrationResult out{};
    out.frozen = anchor_residuals(base, ctx, anchors, search);

    // log L = log L0 + x, log A = log A0 + 2x with x = log(K0 / K).
    const double r1 = std::log1p(out.frozen.height);
    const double r2 = std::log1p(out.frozen.area);
    const double x = -(r1 + 2.0 * r2) / 5.0;
    out.pd_constant = base.pd_constant * std::exp(-x);

    Config fitted = base;
    fitted.pd_constant = out.pd_constant;
    const auto misfit = [&](double log_rl) {
        Context c = ctx;
        c.noise.load_resistance = std::exp(log_rl);
        const auto r = anchor_residuals(fitted, c, anchors, search);
        double s = 0;
        for (double v : r.rate)
            s += std::pow(std::log1p(v), 2);
        return -s;
    };
    const auto [log_rl, neg] = golden_section_max(misfit, std::log(50.0), std::log(50000.0), 1e-7);
    (void)neg;
    out.load_resistance = std::exp(log_rl);

    Context fitted_ctx = ctx;
    fitted_ctx.noise.load_resistance = out.load_resistance;
    out.fitted = anchor_residuals(fitted, fitted_ctx, anchors, search);
    return out;
}

} // namespace adropt
