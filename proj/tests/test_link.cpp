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

#include "adropt/link.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace adropt;
using testing::deg;
using testing::rel;

TEST_CASE("received power")
{
    const auto ctx = testing::default_context();
    SUBCASE("closed form equals FF times the encircled power")
    {
        std::mt19937_64 rng(23);
        for (int i = 0; i < 2000; ++i)
        {
            auto cfg = testing::preset(1 + static_cast<int>(rng() % 6));
            if (rng() % 2)
                cfg = with_truncation(cfg, {0.6, 0.9});
            const double b = testing::log_uniform(rng, 0.1e9, 20e9);
            const double fov = testing::uniform(rng, 0.5 * deg, max_fov(cfg.tiers));
            CHECK(rel(received_power_closed_form(cfg, b, fov, ctx), received_power(cfg, b, fov, ctx)) < 1e-12);
        }
    }
    SUBCASE("saturates at FF times the transmit power")
    {
        const auto cfg = testing::preset(3);
        CHECK(rel(received_power_closed_form(cfg, 1e6, 1 * deg, ctx), 0.7 * 10e-3) < 1e-12);
    }
    SUBCASE("Config 3 at 3.5 GHz and 30 deg")
    {
        // P_r = FF P_t (1 - exp(-2 (D1/2)^2 / w^2)) with every factor written out.
        const double pi = 3.14159265358979323846;
        const double zr = pi * 10e-6 * 10e-6 / 950e-9;
        const double m = 33e-3 / std::sqrt(33e-3 * 33e-3 + zr * zr);
        const double z = 3.0 - (33e-3 - m * m * 33e-3);
        const double w = m * 10e-6 * std::sqrt(1 + std::pow(z / (m * m * zr), 2));
        const double d1 = 1.7 * (8.0 / std::sqrt(0.7)) / (1.746e-6 * 3.5e9) / std::sin(10 * deg);
        const double oracle = 0.7 * 10e-3 * (1 - std::exp(-2 * (d1 / 2) * (d1 / 2) / (w * w)));
        const double pr = received_power_closed_form(testing::preset(3), 3.5e9, 30 * deg, ctx);
        CHECK(rel(pr, oracle) < 1e-10);
        CHECK(pr == doctest::Approx(99e-6).epsilon(0.01));
    }
}

TEST_CASE("noise spectral density")
{
    NoiseModel<double> nm;
    const double one = noise_psd(nm, 1, 0.0, 0.6);
    CHECK(rel(one, 4 * 1.380649e-23 * 300 / 1150 * std::pow(10.0, 0.5)) < 1e-14);
    CHECK(one == doctest::Approx(4.56e-23).epsilon(1e-3));
    CHECK(noise_psd(nm, 64, 0.0, 0.6) == 64 * one);
    CHECK(noise_psd(nm, 4, 1e-3, 0.6) == noise_psd(nm, 4, 0.0, 0.6));

    NoiseModel<double> full = nm;
    full.mode = NoiseMode::full;
    CHECK(noise_psd(full, 16, 0.0, 0.6) == noise_psd(nm, 16, 0.0, 0.6));
    CHECK(rin_omitted(full));
    full.rin = 1e-15;
    CHECK(!rin_omitted(full));
    const double p = 1e-4, i = 0.6 * p;
    CHECK(rel(noise_psd(full, 1, p, 0.6), one + 2 * constants::elementary_charge * i + 1e-15 * i * i) < 1e-14);
    CHECK_THROWS_AS(noise_psd(nm, 0, 0.0, 0.6), DomainError);
}

TEST_CASE("achievable rate at the reference design points")
{
    const auto ctx = testing::default_context();
    CHECK(achievable_rate(testing::preset(1), 2.1e9, 30 * deg, ctx) == doctest::Approx(14.0e9).epsilon(0.05));
    CHECK(achievable_rate(testing::preset(3), 3.5e9, 30 * deg, ctx) == doctest::Approx(24.53e9).epsilon(0.05));
    const auto dark = testing::default_context(0.0);
    CHECK(achievable_rate(testing::preset(1), 2.1e9, 30 * deg, dark) == 0.0);
}

TEST_CASE("link context validation")
{
    CHECK_THROWS_AS(testing::default_context(20e-3), DomainError);
    CHECK_NOTHROW(testing::default_context(16e-3));
    LinkParams<double> bad;
    bad.distance = 0;
    CHECK_THROWS_AS(make_link_context(testing::default_source(), LensSpec<double>{33e-3, 0.0}, bad,
                                      NoiseModel<double>{}),
                    DomainError);
}

TEST_CASE("rate monotonicity")
{
    std::mt19937_64 rng(29);
    for (int i = 0; i < 2000; ++i)
    {
        const auto cfg = testing::preset(1 + static_cast<int>(rng() % 6));
        const double b = testing::log_uniform(rng, 0.1e9, 20e9);
        const double f1 = testing::uniform(rng, 0.5 * deg, max_fov(cfg.tiers));
        const double f2 = testing::uniform(rng, 0.5 * deg, max_fov(cfg.tiers));
        const auto ctx = testing::default_context();
        if (f1 < f2)
        {
            if (testing::uncollected_fraction(cfg, b, f1, ctx) > testing::resolvable_share)
                CHECK(achievable_rate(cfg, b, f1, ctx) > achievable_rate(cfg, b, f2, ctx));
            else
                CHECK(achievable_rate(cfg, b, f1, ctx) >= achievable_rate(cfg, b, f2, ctx));
        }
        const double p1 = testing::uniform(rng, 1e-4, 16e-3), p2 = testing::uniform(rng, 1e-4, 16e-3);
        if (p1 < p2)
            CHECK(achievable_rate(cfg, b, f1, testing::default_context(p1)) <
                  achievable_rate(cfg, b, f1, testing::default_context(p2)));
    }
}

TEST_CASE("thermal noise dominates at the operating points")
{
    // Configs 1-3 carry 16 or more PDs, so thermal noise outweighs shot and RIN.
    // Configs 4-6 carry four PDs each and see up to 11% extra noise, yet the peak rate
    // moves by under 1%.
    auto ctx = testing::default_context();
    for (int c = 1; c <= 6; ++c)
    {
        const double bound = c <= 3 ? 0.05 : 0.15;
        const auto cfg = testing::preset(c);
        for (double b = 2e9; b <= 4e9; b += 0.25e9)
        {
            const double pr = received_power_closed_form(cfg, b, 30 * deg, ctx);
            NoiseModel<double> full = ctx.noise;
            full.mode = NoiseMode::full;
            const double excess = noise_psd(full, cfg.pds_per_array, pr, 0.6) /
                                      noise_psd(ctx.noise, cfg.pds_per_array, pr, 0.6) -
                                  1.0;
            CHECK(excess < bound);
        }
        auto full_ctx = ctx;
        full_ctx.noise.mode = NoiseMode::full;
        const double thermal_only = maximize_rate_fov_only(cfg, ctx, 30 * deg).rate_star;
        CHECK(rel(maximize_rate_fov_only(cfg, full_ctx, 30 * deg).rate_star, thermal_only) < 0.01);
    }
}

TEST_CASE("rate has an interior peak between 2 and 4 GHz within the bandwidth tolerance")
{
    const auto ctx = testing::default_context();
    for (int c = 1; c <= 6; ++c)
    {
        const auto cfg = testing::preset(c);
        int sign_changes = 0;
        const double lo = 2.0e9 * 0.98, hi = 4.0e9 * 1.02;
        double prev = achievable_rate(cfg, lo, 30 * deg, ctx);
        double prev_diff = 0;
        for (int k = 1; k <= 400; ++k)
        {
            const double r = achievable_rate(cfg, lo + k * (hi - lo) / 400, 30 * deg, ctx);
            const double diff = r - prev;
            if (k > 1 && prev_diff > 0 && diff < 0)
                ++sign_changes;
            prev_diff = diff;
            prev = r;
        }
        CHECK_MESSAGE(sign_changes == 1, "config", c);
    }
}
