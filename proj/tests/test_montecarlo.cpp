#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "geosat/analysis.hpp"
#include "geosat/montecarlo.hpp"
#include "oracles.hpp"

using namespace geosat;

namespace
{
GeometryContext const geo = GeometryContext::geostationary();

double deg(double d)
{
    return deg_to_rad(d);
}
}  // namespace

TEST(Constellation, AzimuthsUniform)
{
    auto rng = substream(77, 0);
    std::vector<long> bins(36, 0);
    for (int draw = 0; draw < 1000; ++draw)
    {
        auto const c = draw_constellation(geo, 100, rng);
        EXPECT_EQ(c.orbit_radius, geo.orbit_radius());
        for (double az : c.azimuths)
        {
            ASSERT_GE(az, 0.0);
            ASSERT_LT(az, constants::two_pi);
            ++bins[static_cast<std::size_t>(az / constants::two_pi * 36)];
        }
    }
    // 35 dof, 0.999 quantile
    EXPECT_LT(oracle::chi_square_uniform(bins), 66.6);
    EXPECT_THROW(draw_constellation(geo, 0, rng), DomainError);
}

TEST(Constellation, VisibleCountMean)
{
    double const phi = deg(37);
    auto const t = TerminalPosition::at(geo, phi, 0.0);
    long const draws = 10000;
    long total = 0;
    std::vector<detail::VisibleSat> vis;
    for (long i = 0; i < draws; ++i)
    {
        auto rng = substream(4, static_cast<std::uint64_t>(i));
        detail::visible_satellites(geo, t, draw_constellation(geo, 391, rng), vis);
        total += static_cast<long>(vis.size());
    }
    double const p = p_vis(geo, phi);
    double const sigma = std::sqrt(391 * p * (1 - p) / draws);
    EXPECT_NEAR(static_cast<double>(total) / draws, 391 * p, 4 * sigma);
}

TEST(Trial, NothingVisibleNearPole)
{
    auto const cfg = reference_network(1, 3.0, 20.0, 1);
    auto const t = TerminalPosition::at(geo, deg(85), 0.0);
    for (std::uint64_t i = 0; i < 100; ++i)
    {
        auto rng = substream(1, i);
        auto const out = run_trial(cfg, geo, t, 1.0, rng);
        EXPECT_EQ(out.visibility, VisibilityCase::none);
        EXPECT_FALSE(out.serving_distance.has_value());
        EXPECT_EQ(out.sinr, 0.0);
        EXPECT_FALSE(out.covered);
    }
}

TEST(Trial, ServingIsNearestVisible)
{
    auto const cfg = reference_network(50, 3.0, 20.0, 2);
    auto const t = TerminalPosition::at(geo, deg(37), deg(137));
    for (std::uint64_t i = 0; i < 500; ++i)
    {
        auto rng = substream(8, i);
        auto const out = run_trial(cfg, geo, t, 1.0, rng);
        if (!out.serving_distance)
            continue;
        EXPECT_LE(*out.serving_distance, geo.r_vis_max() + 1e-9);
        for (double d : out.interferer_distances)
        {
            EXPECT_GE(d, *out.serving_distance);
            EXPECT_LE(d, geo.r_vis_max() + 1e-9);
        }
        EXPECT_EQ(out.visibility,
                  out.interferer_distances.empty() ? VisibilityCase::one : VisibilityCase::many);
        EXPECT_EQ(out.covered, out.sinr >= 1.0);
    }
}

TEST(Trial, TieGoesToLowestIndex)
{
    std::vector<detail::VisibleSat> const vis{{4, 37000}, {2, 36000}, {1, 36000}, {0, 39000}};
    EXPECT_EQ(detail::nearest(vis), 2u);
}

TEST(Estimate, WorkerCountDoesNotChangeResults)
{
    auto const cfg = reference_network(100, 3.0, 20.0, 2);
    auto const t = TerminalPosition::at(geo, deg(37), deg(137));
    auto const a = simulate_sinr(cfg, geo, t, 5000, 99, 1);
    auto const b = simulate_sinr(cfg, geo, t, 5000, 99, 8);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        ASSERT_EQ(a[i], b[i]) << i;
    auto const c = simulate_sinr(cfg, geo, t, 5000, 100, 1);
    EXPECT_NE(a, c);

    auto const e1 = estimate(cfg, geo, t, 1.0, 5000, 99, 1);
    auto const e8 = estimate(cfg, geo, t, 1.0, 5000, 99, 8);
    EXPECT_EQ(e1.covered, e8.covered);
    EXPECT_EQ(e1.result.probability, e8.result.probability);
}

TEST(Estimate, WilsonInterval)
{
    double center = 0;
    double const hw = detail::wilson_half_width(500, 1000, center);
    EXPECT_NEAR(center, 0.5, 1e-12);
    EXPECT_NEAR(hw, 0.0309, 2e-4);
    double const edge = detail::wilson_half_width(0, 1000, center);
    EXPECT_GT(edge, 0.0);
    EXPECT_GT(center, 0.0);
}

TEST(Estimate, ThresholdExtremes)
{
    auto const cfg = reference_network(20, 3.0, 20.0, 1);
    double const phi = deg(37);
    auto const t = TerminalPosition::at(geo, phi, 0.0);
    long const n = 20000;
    auto const sweep = estimate_sweep(cfg, geo, t, {1e-12, 1e12}, n, 5, 1);
    double const visible = 1 - std::pow(1 - p_vis(geo, phi), 20);
    EXPECT_NEAR(sweep[0].result.probability, visible, 4 * oracle::binomial_sigma(visible, n));
    EXPECT_EQ(sweep[1].covered, 0);
    EXPECT_EQ(sweep[1].result.probability, 0.0);
    EXPECT_EQ(sweep[0].result.method, CoverageMethod::monte_carlo);
    EXPECT_EQ(sweep[0].result.config_digest, config_digest(cfg));
    EXPECT_LE(sweep[0].lower, sweep[0].result.probability);
    EXPECT_GE(sweep[0].upper, sweep[0].result.probability);
}

TEST(Estimate, AgreesWithBinomialAnalysis)
{
    auto const t = TerminalPosition::at(geo, deg(37), deg(137));
    for (int m : {1, 2})
    {
        auto const cfg = reference_network(100, 3.0, 20.0, m);
        auto const mc = estimate(cfg, geo, t, 1.0, 100000, 2024 + m, 1);
        double const analytic = coverage_bpp(cfg, geo, t.latitude, 1.0).probability;
        EXPECT_NEAR(mc.result.probability, analytic, 0.01) << m;
        EXPECT_LT(mc.half_width, 0.005);
    }
}

TEST(Cases, FrequenciesMatchBinomial)
{
    for (long n : {2L, 10L, 100L})
    {
        for (double lat : {0.0, 45.0, 75.0})
        {
            long const trials = 100000;
            auto const counts = case_frequencies(geo, deg(lat), n, trials, 17, 1);
            EXPECT_EQ(counts.none + counts.one + counts.many, trials);
            auto const p = case_probabilities(geo, deg(lat), n);
            EXPECT_NEAR(static_cast<double>(counts.none) / trials, p.none,
                        3 * oracle::binomial_sigma(p.none, trials) + 1e-9);
            EXPECT_NEAR(static_cast<double>(counts.one) / trials, p.one,
                        3 * oracle::binomial_sigma(p.one, trials) + 1e-9);
            EXPECT_NEAR(static_cast<double>(counts.many) / trials, p.many,
                        3 * oracle::binomial_sigma(p.many, trials) + 1e-9);
        }
    }
}

TEST(DistanceSamplers, WithinSupport)
{
    double const phi = deg(37);
    for (double r : sample_nearest_distances(geo, phi, 10, 2000, 3))
    {
        EXPECT_GE(r, r_min(geo, phi) - 1e-6);
        EXPECT_LE(r, r_max(geo, phi) + 1e-6);
    }
    for (double r : sample_serving_distances(geo, phi, 10, 2000, 3))
    {
        EXPECT_GE(r, r_min(geo, phi) - 1e-6);
        EXPECT_LE(r, geo.r_vis_max() + 1e-6);
    }
    double const r0 = 37500;
    for (double r : sample_interferer_distances_given_r0(geo, phi, 10, r0, 2000, 3))
    {
        EXPECT_GE(r, r0 * (1 - 1e-3));
        EXPECT_LE(r, geo.r_vis_max() + 1e-6);
    }
}

TEST(LaplaceEstimate, TrivialCases)
{
    auto const cfg = reference_network(10, 3.0, 20.0, 1);
    double const phi = deg(30);
    auto const zero = estimate_interference_laplace(cfg, geo, phi, 37000, 0.0, 1000, 1);
    EXPECT_EQ(zero.mean, 1.0);
    EXPECT_EQ(zero.std_error, 0.0);
}
