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
#include "support.hpp"

#include <doctest.h>

using namespace adropt;

TEST_CASE("frozen constants sit within 2% of every anchor")
{
    const auto ctx = testing::default_context();
    const auto res = anchor_residuals(testing::preset(1), ctx);
    CHECK(std::abs(res.height) <= 0.02);
    CHECK(std::abs(res.area) <= 0.02);
    for (double r : res.rate)
        CHECK(std::abs(r) <= 0.02);
    for (double b : res.bandwidth)
        CHECK(std::abs(b) <= 0.2e9);
}

TEST_CASE("refit reproduces the frozen constants")
{
    const auto ctx = testing::default_context();
    const auto fit = calibrate(testing::preset(1), ctx);
    CHECK(fit.pd_constant == doctest::Approx(1.746e-6).epsilon(0.01));
    CHECK(fit.load_resistance == doctest::Approx(1150.0).epsilon(0.10));
    CHECK(fit.fitted.worst_relative() <= fit.frozen.worst_relative());
    CHECK(fit.fitted.worst_relative() <= 0.02);

    // A perturbed starting point is pulled back.
    Config off = testing::preset(1);
    off.pd_constant = 2.5e-6;
    auto ctx_off = ctx;
    ctx_off.noise.load_resistance = 500.0;
    const auto again = calibrate(off, ctx_off);
    CHECK(again.pd_constant == doctest::Approx(fit.pd_constant).epsilon(1e-9));
    CHECK(again.load_resistance == doctest::Approx(fit.load_resistance).epsilon(1e-4));
}
