#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "geosat/analysis.hpp"
#include "geosat/distance_distributions.hpp"
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

//! s values spanning light to heavy interference relative to the serving power at r0.
std::vector<double> s_grid(NetworkConfig const& cfg, double r0)
{
    std::vector<double> s;
    double const p0 = mean_received_power(cfg, cfg.g_serving, r0);
    for (int k = 0; k < 10; ++k)
        s.push_back(std::pow(10.0, -1.5 + 0.5 * k) / p0);
    return s;
}

double serving_median(double phi, long n)
{
    return quantile(DistanceLaw::serving_bpp(geo, phi, n), 0.5);
}
}  // namespace

//---------------------------------------------------------------------------//
TEST(ArcIntegral, UnitWeight)
{
    for (double lat : {0.0, 30.0, 60.0, 80.0})
    {
        double const phi = deg(lat);
        auto one = [](double) { return 1.0; };
        EXPECT_NEAR(arc_integral(geo, phi, r_min(geo, phi), r_max(geo, phi), one).value, 1.0, 1e-12);
        EXPECT_NEAR(arc_integral(geo, phi, r_min(geo, phi), geo.r_vis_max(), one).value,
                    p_vis(geo, phi),
                    1e-12);
    }
}

TEST(ArcIntegral, PolynomialsInPsi)
{
    double const phi = deg(30);
    for (int k = 0; k <= 6; ++k)
    {
        auto g = [&](double r) {
            return std::pow(psi(geo, std::clamp(r, r_min(geo, phi), r_max(geo, phi)), phi), k)
                   * (k + 1);
        };
        EXPECT_NEAR(arc_integral(geo, phi, r_min(geo, phi), r_max(geo, phi), g).value, 1.0, 1e-10)
            << k;
    }
    // 3 - 2 Psi + 5 Psi^4 over [Psi(a), Psi(b)]
    double const a = 37000, b = 40000;
    double const pa = oracle::arc_fraction_within(a, phi);
    double const pb = oracle::arc_fraction_within(b, phi);
    auto poly = [&](double r) {
        double const f = psi(geo, r, phi);
        return 3 - 2 * f + 5 * std::pow(f, 4);
    };
    auto prim = [](double f) { return 3 * f - f * f + std::pow(f, 5); };
    EXPECT_NEAR(arc_integral(geo, phi, a, b, poly).value, prim(pb) - prim(pa), 1e-10);
}

TEST(ArcIntegral, NearestDensityAgainstTrapezoid)
{
    double const phi = deg(30);
    long const n = 10;
    auto weight = [&](double r) {
        double const f = psi(geo, std::clamp(r, r_min(geo, phi), r_max(geo, phi)), phi);
        return n * std::pow(1 - f, n - 1);
    };
    double const value = arc_integral(geo, phi, r_min(geo, phi), r_max(geo, phi), weight).value;
    EXPECT_NEAR(value, 1.0, 1e-8);

    // trapezoid on a 10^6-point grid of the angle u = pi Psi
    double const sqrt_v1 = std::sqrt(geo.v1(phi));
    int const points = 1000000;
    double sum = 0;
    for (int k = 0; k <= points; ++k)
    {
        double const u = constants::pi * k / points;
        double const r = std::sqrt(geo.v2() - sqrt_v1 * std::cos(u));
        double const f = oracle::arc_fraction_within(r, phi);
        sum += (k == 0 || k == points ? 0.5 : 1.0) * n * std::pow(1 - f, n - 1);
    }
    EXPECT_NEAR(sum / points, value, 1e-8);
}

TEST(ArcIntegral, Errors)
{
    double const phi = deg(10);
    auto one = [](double) { return 1.0; };
    EXPECT_THROW(arc_integral(geo, phi, 40000, 39000, one), DomainError);
    EXPECT_THROW(arc_integral(geo, phi, 20000, 39000, one), DomainError);
    QuadratureSpec starved;
    starved.max_subdivisions = 1;
    starved.rel_tol = 1e-15;
    starved.abs_tol = 1e-300;
    auto rough = [](double r) { return std::abs(std::sin(r / 7.0)); };
    EXPECT_THROW(arc_integral(geo, phi, r_min(geo, phi), r_max(geo, phi), rough, starved),
                 ConvergenceError);
    try
    {
        arc_integral(geo, phi, r_min(geo, phi), r_max(geo, phi), rough, starved);
    }
    catch (ConvergenceError const& e)
    {
        EXPECT_GT(e.estimate(), 0.0);
        EXPECT_GT(e.error(), 0.0);
    }
    QuadratureSpec bad;
    bad.nodes_per_panel = 14;
    EXPECT_THROW(bad.validate(), DomainError);
}

//---------------------------------------------------------------------------//
TEST(LaplaceBpp, OriginAndEmptyArc)
{
    auto const cfg = reference_network(10, 3.0, 20.0, 2);
    double const phi = deg(30);
    double const r0 = serving_median(phi, 10);
    EXPECT_EQ(laplace_interference_bpp(cfg, geo, phi, r0, 0.0), 1.0);
    for (double s : s_grid(cfg, r0))
        EXPECT_NEAR(laplace_interference_bpp(cfg, geo, phi, geo.r_vis_max(), s), 1.0, 1e-15);
    EXPECT_THROW(laplace_interference_bpp(cfg, geo, phi, r0, -1.0), DomainError);
    EXPECT_THROW(laplace_interference_bpp(cfg, geo, phi, 30000, 1.0), DomainError);
}

TEST(LaplaceBpp, MonotoneAndBounded)
{
    for (int m : {1, 2, 3})
    {
        auto const cfg = reference_network(25, 3.0, 20.0, m);
        double const phi = deg(45);
        double const r0 = serving_median(phi, 25);
        double prev = 1.0;
        for (double s : s_grid(cfg, r0))
        {
            double const l = laplace_interference_bpp(cfg, geo, phi, r0, s);
            EXPECT_GT(l, 0.0);
            EXPECT_LE(l, prev);
            prev = l;
        }
    }
}

TEST(LaplaceBpp, CollapsedFormEqualsBinomialSum)
{
    for (long n : {2L, 5L, 10L, 20L, 30L})
    {
        for (int m : {1, 2})
        {
            auto const cfg = reference_network(n, 3.0, 20.0, m);
            for (double lat : {0.0, 30.0, 60.0})
            {
                double const phi = deg(lat);
                double const r0 = serving_median(phi, n);
                for (double s : s_grid(cfg, r0))
                {
                    EXPECT_NEAR(laplace_interference_bpp(cfg, geo, phi, r0, s),
                                laplace_interference_bpp_sum(cfg, geo, phi, r0, s),
                                1e-12)
                        << n << " " << m << " " << lat;
                }
            }
        }
    }
}

TEST(LaplaceBpp, MonteCarloInterference)
{
    double const phi = deg(30);
    for (int m : {1, 2})
    {
        auto const cfg = reference_network(10, 3.0, 20.0, m);
        double const r0 = serving_median(phi, 10);
        // tau = 0 dB: s = tau / mean serving power at r0
        double const s = 1.0 / mean_received_power(cfg, cfg.g_serving, r0);
        auto const mc = estimate_interference_laplace(cfg, geo, phi, r0, s, 200000, 21 + m);
        double const analytic = laplace_interference_bpp(cfg, geo, phi, r0, s);
        EXPECT_NEAR(mc.mean, analytic, 3 * mc.std_error) << m;
    }
}

//---------------------------------------------------------------------------//
TEST(LaplacePpp, OriginAndEmptyArc)
{
    auto const cfg = reference_network(100, 3.0, 20.0, 1);
    double const phi = deg(37);
    double const r0 = serving_median(phi, 100);
    EXPECT_EQ(laplace_interference_ppp(cfg, geo, phi, r0, 0.0), 1.0);
    EXPECT_NEAR(laplace_interference_ppp(cfg, geo, phi, geo.r_vis_max(), 1e-10), 1.0, 1e-15);
    double prev = 1.0;
    for (double s : s_grid(cfg, r0))
    {
        double const l = laplace_interference_ppp(cfg, geo, phi, r0, s);
        EXPECT_GT(l, 0.0);
        EXPECT_LE(l, prev);
        prev = l;
    }
}

TEST(LaplacePpp, OmegaFormAgrees)
{
    for (int m : {1, 2})
    {
        auto const cfg = reference_network(50, 3.7, 30.0, m);
        double const phi = deg(20);
        double const r0 = serving_median(phi, 50);
        // at s = 0 Omega2 reduces to the Omega1 difference
        EXPECT_NEAR(omega2(cfg, geo, phi, 0.0, r0).value,
                    omega1(geo, phi, geo.r_vis_max()) - omega1(geo, phi, r0),
                    1e-12);
        for (double s : s_grid(cfg, r0))
        {
            double const exponent = omega1(geo, phi, geo.r_vis_max()) - omega1(geo, phi, r0)
                                    - omega2(cfg, geo, phi, s, r0).value;
            double const via_omega = std::exp(-2.0 * cfg.n_sats / constants::pi * exponent);
            EXPECT_NEAR(laplace_interference_ppp(cfg, geo, phi, r0, s), via_omega, 1e-9);
        }
    }
}

TEST(LaplacePpp, OmegaOneIsQuarterArcAngle)
{
    double const phi = deg(50);
    for (double r = r_min(geo, phi) + 1; r < r_max(geo, phi); r += 500)
    {
        EXPECT_NEAR(omega1(geo, phi, r),
                    constants::pi / 2 * oracle::arc_fraction_within(r, phi) - constants::pi / 4,
                    1e-12);
    }
}

TEST(LaplacePpp, PoissonLimitOfBpp)
{
    auto const cfg = reference_network(391, 3.0, 20.0, 2);
    double const phi = deg(37);
    double const r0 = serving_median(phi, 391);
    for (double s : s_grid(cfg, r0))
    {
        EXPECT_NEAR(laplace_interference_ppp(cfg, geo, phi, r0, s),
                    laplace_interference_bpp(cfg, geo, phi, r0, s),
                    1e-3);
    }
}

//---------------------------------------------------------------------------//
TEST(Coverage, NoVisibleArc)
{
    auto const cfg = reference_network(100, 3.0, 20.0, 1);
    for (double lat : {81.4, 85.0, 90.0, -88.0})
    {
        for (auto r : {coverage_bpp(cfg, geo, deg(lat), 1.0),
                       coverage_ppp(cfg, geo, deg(lat), 1.0),
                       coverage_rayleigh(cfg, geo, deg(lat), 1.0)})
        {
            EXPECT_EQ(r.probability, 0.0);
            EXPECT_TRUE(r.no_visible_arc);
        }
    }
    EXPECT_TRUE(coverage_bpp(cfg, geo, geo.phi_inv(), 1.0).no_visible_arc);
}

TEST(Coverage, RejectsBadThreshold)
{
    auto const cfg = reference_network(100, 3.0, 20.0, 1);
    EXPECT_THROW(coverage_bpp(cfg, geo, 0, 0.0), DomainError);
    EXPECT_THROW(coverage_ppp(cfg, geo, 0, -1.0), DomainError);
    EXPECT_THROW(coverage_bpp(cfg, geo, 0, INFINITY), DomainError);
    EXPECT_THROW(coverage(CoverageMethod::monte_carlo, cfg, geo, 0, 1.0), DomainError);
}

TEST(Coverage, RayleighClosedFormMatchesGeneralPath)
{
    QuadratureSpec tight;
    tight.rel_tol = 1e-11;
    tight.abs_tol = 1e-12;
    for (long n : {1L, 10L, 100L})
    {
        auto const cfg = reference_network(n, 3.0, 20.0, 1);
        for (double lat : {0.0, 37.0, 70.0})
        {
            for (double tau_db : {-10.0, 0.0, 10.0})
            {
                double const tau = db_to_linear(tau_db);
                double const general = coverage_bpp(cfg, geo, deg(lat), tau, tight).probability;
                double const rayleigh = coverage_rayleigh(cfg, geo, deg(lat), tau, tight).probability;
                EXPECT_NEAR(general, rayleigh, 1e-12) << n << " " << lat << " " << tau_db;
            }
        }
    }
}

TEST(Coverage, SmallThresholdGivesVisibility)
{
    for (long n : {1L, 5L, 100L})
    {
        auto const cfg = reference_network(n, 3.0, 20.0, 1);
        double const phi = deg(37);
        double const visible = 1 - std::pow(1 - p_vis(geo, phi), n);
        EXPECT_NEAR(coverage_rayleigh(cfg, geo, phi, 1e-9).probability, visible, 1e-6);
        EXPECT_NEAR(coverage_bpp(cfg, geo, phi, 1e-9).probability, visible, 1e-6);
    }
}

TEST(Coverage, MonotoneAndBoundedByVisibility)
{
    for (int m : {1, 2})
    {
        auto const cfg = reference_network(100, 3.0, 20.0, m);
        double const phi = deg(37);
        double const visible = 1 - std::pow(1 - p_vis(geo, phi), 100);
        double prev = 1.0;
        for (int k = 0; k <= 60; ++k)
        {
            double const tau = db_to_linear(-20.0 + 0.75 * k);
            auto const r = coverage_bpp(cfg, geo, phi, tau);
            EXPECT_LE(r.probability, prev + 1e-12);
            EXPECT_LE(r.probability, visible + 1e-9);
            EXPECT_GE(r.probability, 0.0);
            EXPECT_GE(r.quadrature_error_estimate, 0.0);
            prev = r.probability;
        }
    }
}

TEST(Coverage, PoissonLimitClose)
{
    auto const cfg = reference_network(391, 3.0, 30.0, 2);
    double const phi = deg(37);
    for (double tau_db = -10; tau_db <= 20; tau_db += 1)
    {
        double const tau = db_to_linear(tau_db);
        EXPECT_NEAR(coverage_ppp(cfg, geo, phi, tau).probability,
                    coverage_bpp(cfg, geo, phi, tau).probability,
                    0.02)
            << tau_db;
    }
}

TEST(Coverage, UnimodalInConstellationSize)
{
    std::vector<double> curve;
    for (long n : {2L, 5L, 10L, 20L, 50L, 100L, 200L})
    {
        auto const cfg = reference_network(n, 3.0, 30.0, 2);
        curve.push_back(coverage_ppp(cfg, geo, deg(37), 1.0).probability);
    }
    auto const peak = std::max_element(curve.begin(), curve.end()) - curve.begin();
    EXPECT_GT(peak, 0);
    EXPECT_LT(peak, static_cast<long>(curve.size()) - 1);
    for (long k = 0; k < peak; ++k)
        EXPECT_LT(curve[k], curve[k + 1]);
    for (long k = peak; k + 1 < static_cast<long>(curve.size()); ++k)
        EXPECT_GT(curve[k], curve[k + 1]);
}

TEST(Coverage, ResultMetadata)
{
    auto const cfg = reference_network(100, 3.0, 20.0, 1);
    auto const r = coverage(CoverageMethod::ppp_analytic, cfg, geo, deg(10), db_to_linear(3.0));
    EXPECT_EQ(r.method, CoverageMethod::ppp_analytic);
    EXPECT_NEAR(r.threshold_db, 3.0, 1e-12);
    EXPECT_EQ(r.config_digest, config_digest(cfg));
    auto other = cfg;
    other.alpha = 3.7;
    EXPECT_NE(config_digest(other), config_digest(cfg));
    EXPECT_EQ(config_digest(reference_network(100, 3.0, 20.0, 1)), config_digest(cfg));
}
