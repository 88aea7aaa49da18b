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
#include "support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace adropt;
using testing::deg;
using testing::rel;

namespace
{

double fd_rate(const Config &cfg, const Context &ctx, double b, double fov, double h)
{
    return (achievable_rate(cfg, b, fov + h, ctx) - achievable_rate(cfg, b, fov - h, ctx)) / (2 * h);
}

ConstraintSet random_constraints(std::mt19937_64 &rng)
{
    ConstraintSet cs{testing::uniform(rng, 5 * deg, 60 * deg), std::nullopt, std::nullopt};
    if (rng() % 4 != 0)
        cs.l_max = testing::log_uniform(rng, 0.3e-2, 6e-2);
    if (rng() % 4 != 0)
        cs.a_max = testing::log_uniform(rng, 0.3e-4, 12e-4);
    return cs;
}

bool satisfies(const Config &cfg, const ConstraintSet &cs, double b, double fov)
{
    if (fov < cs.fov_min)
        return false;
    const auto g = geometry(cfg, b, fov);
    return (!cs.l_max || g.height <= *cs.l_max) && (!cs.a_max || g.top_area <= *cs.a_max);
}

} // namespace

TEST_CASE("dimension boundary identities")
{
    std::mt19937_64 rng(31);
    for (int i = 0; i < 500; ++i)
    {
        auto cfg = testing::preset(1 + static_cast<int>(rng() % 6));
        if (rng() % 2)
            cfg = with_truncation(cfg, {0.6, 0.9});
        const double fov = testing::uniform(rng, 1 * deg, max_fov(cfg.tiers));
        const double l = testing::log_uniform(rng, 1e-3, 1e-1);
        const double a = testing::log_uniform(rng, 1e-5, 1e-2);
        const double bl = dimension_boundary(cfg, Dimension::height, fov, l);
        const double ba = dimension_boundary(cfg, Dimension::area, fov, a);
        CHECK(rel(geometry(cfg, bl, fov).height, l) < 1e-9);
        CHECK(rel(geometry(cfg, ba, fov).top_area, a) < 1e-9);
        CHECK(dimension_boundary(cfg, Dimension::height, fov, 2 * l) == bl / 2);
    }
}

TEST_CASE("boundary inversion")
{
    std::mt19937_64 rng(37);
    SUBCASE("round trips")
    {
        for (int i = 0; i < 500; ++i)
        {
            auto cfg = testing::preset(1 + static_cast<int>(rng() % 6));
            if (rng() % 2)
                cfg = with_truncation(cfg, {0.6, 0.9});
            const double fov = testing::uniform(rng, 1 * deg, max_fov(cfg.tiers));
            for (auto which : {Dimension::height, Dimension::area})
            {
                const double bound = which == Dimension::height ? 1e-2 : 2e-4;
                const double b = dimension_boundary(cfg, which, fov, bound);
                const auto inv = invert_dimension_boundary(cfg, which, b, bound);
                REQUIRE(inv.in_image);
                CHECK(std::abs(inv.fov - fov) < 1e-8);
                CHECK(rel(dimension_boundary(cfg, which, inv.fov, bound), b) < 1e-10);
            }
        }
    }
    SUBCASE("monotone, against a brute-force FOV scan")
    {
        const auto cfg = testing::preset(2);
        const double bound = 1e-2;
        const double cap = max_fov(cfg.tiers);
        std::vector<double> fovs(1000), bs(1000);
        for (int k = 0; k < 1000; ++k)
        {
            fovs[k] = cap * (k + 1) / 1000.0;
            bs[k] = dimension_boundary(cfg, Dimension::height, fovs[k], bound);
        }
        for (int i = 0; i < 300; ++i)
        {
            const double b1 = testing::uniform(rng, bs.back(), bs.front());
            const double b2 = testing::uniform(rng, bs.back(), bs.front());
            const auto i1 = invert_dimension_boundary(cfg, Dimension::height, b1, bound);
            const auto i2 = invert_dimension_boundary(cfg, Dimension::height, b2, bound);
            if (b1 < b2)
                CHECK(i1.fov > i2.fov);
            // The scan brackets the inverse between neighbouring grid FOVs.
            const auto it = std::find_if(bs.begin(), bs.end(), [&](double v) { return v <= b1; });
            const auto k = static_cast<std::size_t>(it - bs.begin());
            CHECK(i1.fov <= fovs[k] + 1e-12);
            if (k > 0)
                CHECK(i1.fov >= fovs[k - 1] - 1e-12);
        }
        const auto below = invert_dimension_boundary(cfg, Dimension::height, 0.5 * bs.back(), bound);
        CHECK(!below.in_image);
    }
}

TEST_CASE("unified boundary")
{
    const auto cfg = testing::preset(2);
    for (double b : {0.2e9, 2e9, 15e9})
    {
        const auto ub = unified_boundary(cfg, {25 * deg, std::nullopt, std::nullopt}, b);
        CHECK(ub.feasible);
        CHECK(ub.fov == 25 * deg);
        CHECK(ub.dominant == Constraint::fov);
    }
    const ConstraintSet tight{20 * deg, 1e-2, 10e-4};
    for (double b : {3e9, 5e9, 8e9})
    {
        const auto ub = unified_boundary(cfg, tight, b);
        REQUIRE(ub.feasible);
        CHECK(ub.dominant == Constraint::height);
        CHECK(ub.fov == invert_dimension_boundary(cfg, Dimension::height, b, 1e-2).fov);
    }
    CHECK(!unified_boundary(cfg, tight, 0.3e9).feasible);

    std::mt19937_64 rng(41);
    for (int i = 0; i < 300; ++i)
    {
        const auto cs = random_constraints(rng);
        const double b = testing::log_uniform(rng, 0.1e9, 20e9);
        const auto ub = unified_boundary(cfg, cs, b);
        if (!ub.feasible)
            continue;
        const auto g = geometry(cfg, b, ub.fov);
        const bool fov_eq = rel(ub.fov, cs.fov_min) < 1e-9;
        const bool l_eq = cs.l_max && rel(g.height, *cs.l_max) < 1e-8;
        const bool a_eq = cs.a_max && rel(g.top_area, *cs.a_max) < 1e-8;
        CHECK((fov_eq || l_eq || a_eq));
        CHECK(ub.fov >= cs.fov_min);
        if (cs.l_max)
            CHECK(g.height <= *cs.l_max * (1 + 1e-8));
        if (cs.a_max)
            CHECK(g.top_area <= *cs.a_max * (1 + 1e-8));
    }
}

TEST_CASE("peak rate under the FOV constraint alone")
{
    const auto ctx = testing::default_context();
    const double rates[] = {14.00e9, 18.56e9, 24.53e9};
    const double bands[] = {2.1e9, 2.7e9, 3.5e9};
    for (int c = 1; c <= 3; ++c)
    {
        const auto r = maximize_rate_fov_only(testing::preset(c), ctx, 30 * deg);
        REQUIRE(r.feasible);
        CHECK(r.fov_star == 30 * deg);
        CHECK(r.rate_star == doctest::Approx(rates[c - 1]).epsilon(0.05));
        CHECK(std::abs(r.b_star - bands[c - 1]) <= 0.2e9);
        CHECK(r.is_active(Constraint::fov));
    }
}

TEST_CASE("FOV at which Config 2 still reaches 10 and 20 Gb/s")
{
    const auto ctx = testing::default_context();
    const auto cfg = testing::preset(2);
    const auto crossing = [&](double level) {
        double prev_fov = 1.0 * deg;
        double prev = maximize_rate_fov_only(cfg, ctx, prev_fov).rate_star;
        for (double f = 1.5; f <= 90.0; f += 0.5)
        {
            const double r = maximize_rate_fov_only(cfg, ctx, f * deg).rate_star;
            if (prev >= level && r < level)
                return (prev_fov + (prev - level) / (prev - r) * (f * deg - prev_fov)) / deg;
            prev = r;
            prev_fov = f * deg;
        }
        return 90.0;
    };
    CHECK(crossing(20e9) == doctest::Approx(28.0).epsilon(3.0 / 28.0));
    CHECK(crossing(10e9) == doctest::Approx(65.0).epsilon(3.0 / 65.0));
}

TEST_CASE("compact receiver designs")
{
    // Dimension-constrained studies use the 16 mW eye-safety cap as transmit power.
    const auto ctx = testing::default_context(16e-3);
    const ConstraintSet compact{30 * deg, 0.5e-2, 0.5e-4};
    const auto trunc = maximize_rate_constrained(with_truncation(testing::preset(1), {0.6, 0.9}), ctx, compact);
    const auto orig = maximize_rate_constrained(testing::preset(1), ctx, compact);
    REQUIRE(trunc.feasible);
    REQUIRE(orig.feasible);
    CHECK(trunc.rate_star == doctest::Approx(12e9).epsilon(0.08));
    CHECK(orig.rate_star == doctest::Approx(9e9).epsilon(0.10));
    CHECK(trunc.rate_star > orig.rate_star);
    CHECK(!orig.active_constraints.empty());
    CHECK(!orig.is_active(Constraint::fov));

    SUBCASE("Fig. 12 pair at L_max = 1 cm, as a set")
    {
        std::vector<double> got;
        for (double f : {15.0, 30.0})
            got.push_back(maximize_rate_constrained(with_truncation(testing::preset(1), {0.6, 0.9}), ctx,
                                                    {f * deg, 1e-2, 2e-4})
                              .rate_star);
        std::sort(got.begin(), got.end());
        CHECK(got[0] == doctest::Approx(17e9).epsilon(0.10));
        CHECK(got[1] == doctest::Approx(19.5e9).epsilon(0.10));
    }
}

TEST_CASE("infeasible constraint sets")
{
    const auto ctx = testing::default_context();
    SearchOptions narrow;
    narrow.b_max = 0.5e9;
    const auto r = maximize_rate_constrained(testing::preset(3), ctx, {30 * deg, 0.1e-2, std::nullopt}, narrow);
    CHECK(!r.feasible);
    CHECK(r.diagnostic.find("height") != std::string::npos);
    SearchOptions empty;
    empty.b_max = empty.b_min;
    CHECK_THROWS_AS(maximize_rate_fov_only(testing::preset(1), ctx, 30 * deg, empty), DomainError);
    CHECK_THROWS_AS(maximize_rate_fov_only(testing::preset(1), ctx, 0.0), DomainError);
}

TEST_CASE("analytic gradients")
{
    std::mt19937_64 rng(43);
    for (int i = 0; i < 100; ++i)
    {
        auto cfg = testing::preset(1 + static_cast<int>(rng() % 6));
        if (rng() % 2)
            cfg = with_truncation(cfg, {0.6, 0.9});
        auto ctx = testing::default_context(testing::uniform(rng, 1e-3, 16e-3));
        if (rng() % 3 == 0)
        {
            ctx.noise.mode = NoiseMode::full;
            if (rng() % 2)
                ctx.noise.rin = 1e-14;
        }
        const double cap = max_fov(cfg.tiers);
        double b = 0, fov = 0;
        do
        {
            b = testing::log_uniform(rng, 0.2e9, 15e9);
            fov = testing::uniform(rng, 2 * deg, cap - 2 * deg);
        } while (testing::uncollected_fraction(cfg, b, fov, ctx) < testing::differentiable_share);
        const double h = 1e-6;
        const auto g = analytic_gradients(cfg, ctx, b, fov);

        CHECK(g.rate_fov < 0);
        CHECK(g.height_fov < 0);
        CHECK(g.area_fov < 0);
        CHECK(g.entrance_theta < 0);

        const auto geo = [&](double bb, double ff) { return geometry(cfg, bb, ff); };
        const double fd_l = (geo(b, fov + h).height - geo(b, fov - h).height) / (2 * h);
        const double fd_a = (geo(b, fov + h).top_area - geo(b, fov - h).top_area) / (2 * h);
        const double per_tier = 1.0 / (2 * cfg.tiers + 1);
        const double fd_d1 =
            (geo(b, fov + h).entrance_diameter - geo(b, fov - h).entrance_diameter) / (2 * h) / per_tier;
        const double hb = b * 1e-6;
        const double fd_lb = (geo(b + hb, fov).height - geo(b - hb, fov).height) / (2 * hb);
        const double fd_ab = (geo(b + hb, fov).top_area - geo(b - hb, fov).top_area) / (2 * hb);

        CHECK(rel(g.rate_fov, fd_rate(cfg, ctx, b, fov, h)) < 1e-4);
        CHECK(rel(g.height_fov, fd_l) < 1e-4);
        CHECK(rel(g.area_fov, fd_a) < 1e-4);
        CHECK(rel(g.entrance_theta, fd_d1) < 1e-4);
        CHECK(rel(g.height_bandwidth, fd_lb) < 1e-4);
        CHECK(rel(g.area_bandwidth, fd_ab) < 1e-4);
    }
    const auto ctx = testing::default_context();
    CHECK_THROWS_AS(analytic_gradients(testing::preset(1), ctx, 2e9, 90 * deg), DomainError);
    CHECK_THROWS_AS(analytic_gradients(testing::preset(1), ctx, 2e9, 0.0), DomainError);
}

TEST_CASE("solver optimum against grid search")
{
    const auto ctx = testing::default_context();
    std::mt19937_64 rng(47);
    SearchOptions opts;
    opts.grid_points = 400;
    for (int trial = 0; trial < 20; ++trial)
    {
        const auto cfg = testing::preset(1 + static_cast<int>(rng() % 3));
        const auto cs = random_constraints(rng);
        const auto r = maximize_rate_constrained(cfg, ctx, cs, opts);
        if (!r.feasible)
            continue;
        // Raising the FOV from the boundary lowers the rate.
        if (r.fov_star + 1e-3 < max_fov(cfg.tiers))
            CHECK(achievable_rate(cfg, r.b_star, r.fov_star + 1e-3, ctx) < r.rate_star);
        const double cap = max_fov(cfg.tiers);
        for (int i = 0; i < 50; ++i)
            for (int j = 0; j < 50; ++j)
            {
                const double b = 0.1e9 * std::pow(200.0, i / 49.0);
                const double fov = cap * (j + 1) / 50.0;
                if (satisfies(cfg, cs, b, fov))
                    CHECK(achievable_rate(cfg, b, fov, ctx) <= r.rate_star * (1 + 1e-9));
            }
    }
}

TEST_CASE("height bound as a FOV bound, cell by cell")
{
    const auto cfg = testing::preset(2);
    const double l_max = 2e-2;
    for (int i = 0; i < 60; ++i)
        for (int j = 0; j < 60; ++j)
        {
            const double b = 0.1e9 * std::pow(200.0, i / 59.0);
            const double fov = 90 * deg * (j + 1) / 60.0;
            const bool by_height = geometry(cfg, b, fov).height <= l_max;
            const auto inv = invert_dimension_boundary(cfg, Dimension::height, b, l_max);
            const bool by_fov = inv.in_image && fov >= inv.fov;
            // Cells within the bisection tolerance of the boundary may go either way.
            if (!inv.in_image || std::abs(fov - inv.fov) > 1e-9)
                CHECK(by_height == by_fov);
        }
}

TEST_CASE("truncation loses when only the area bound binds")
{
    const auto ctx = testing::default_context();
    const auto cfg = testing::preset(1);
    const ConstraintSet cs{20 * deg, std::nullopt, 1e-4};
    const auto orig = maximize_rate_constrained(cfg, ctx, cs);
    const auto trunc = maximize_rate_constrained(with_truncation(cfg, {0.6, 0.9}), ctx, cs);
    REQUIRE(orig.is_active(Constraint::area));
    CHECK_FALSE(orig.is_active(Constraint::height));
    CHECK(trunc.rate_star < orig.rate_star);
}

TEST_CASE("truncation trade-off")
{
    const auto ctx = testing::default_context();
    std::mt19937_64 rng(53);
    SearchOptions opts;
    opts.grid_points = 400;
    for (int trial = 0; trial < 60; ++trial)
    {
        const auto cfg = testing::preset(1 + static_cast<int>(rng() % 3));
        auto cs = random_constraints(rng);
        const auto orig = maximize_rate_constrained(cfg, ctx, cs, opts);
        const auto trunc = maximize_rate_constrained(with_truncation(cfg, {0.6, 0.9}), ctx, cs, opts);
        // Truncation pays off when height binds at an interior FOV. On the area boundary
        // the gain loss cancels the area saving, so truncation can lose there.
        if (orig.feasible && orig.is_active(Constraint::height) && !orig.is_active(Constraint::fov))
            CHECK(trunc.rate_star >= orig.rate_star * (1 - 1e-9));
        cs.l_max.reset();
        cs.a_max.reset();
        const auto o2 = maximize_rate_constrained(cfg, ctx, cs, opts);
        const auto t2 = maximize_rate_constrained(with_truncation(cfg, {0.6, 0.9}), ctx, cs, opts);
        CHECK(t2.rate_star <= o2.rate_star);
    }
}
