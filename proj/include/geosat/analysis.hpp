#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "channel.hpp"
#include "distance_distributions.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "quadrature.hpp"

namespace geosat
{
//---------------------------------------------------------------------------//
enum class CoverageMethod
{
    bpp_analytic,
    ppp_analytic,
    monte_carlo,
};

inline char const* to_string(CoverageMethod m)
{
    switch (m)
    {
        case CoverageMethod::bpp_analytic: return "bpp";
        case CoverageMethod::ppp_analytic: return "ppp";
        case CoverageMethod::monte_carlo: return "mc";
    }
    return "?";
}

//! FNV-1a digest of every field of a network configuration.
inline std::uint64_t config_digest(NetworkConfig const& cfg)
{
    char buf[512];
    std::snprintf(buf,
                  sizeof buf,
                  "n=%ld;pt=%.17g;fc=%.17g;alpha=%.17g;g0=%.17g;gn=%.17g;w=%.17g;"
                  "n0=%.17g;m=%d;ref=%.17g",
                  cfg.n_sats,
                  cfg.tx_power_w,
                  cfg.carrier_hz,
                  cfg.alpha,
                  cfg.g_serving,
                  cfg.g_interferer,
                  cfg.bandwidth_hz,
                  cfg.noise_density_w_hz,
                  cfg.nakagami_m,
                  cfg.path_loss_reference_km);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char const* p = buf; *p; ++p)
    {
        h ^= static_cast<unsigned char>(*p);
        h *= 0x100000001b3ULL;
    }
    return h;
}

struct CoverageResult
{
    double threshold_db{0};
    double probability{0};
    CoverageMethod method{CoverageMethod::bpp_analytic};
    double quadrature_error_estimate{0};
    std::uint64_t config_digest{0};
    //! Terminal beyond the invisibility latitude; probability is 0.
    bool no_visible_arc{false};
};

//---------------------------------------------------------------------------//
// INTERFERENCE LAPLACE TRANSFORMS
//---------------------------------------------------------------------------//
namespace detail
{
inline void check_serving_distance(GeometryContext const& ctx, double phi, double r0)
{
    if (std::abs(phi) >= ctx.phi_inv())
        throw DomainError("no visible arc at this latitude");
    double const lo = r_min(ctx, phi);
    double const hi = ctx.r_vis_max();
    if (!(r0 >= lo * (1 - support_rtol) && r0 <= hi * (1 + support_rtol)))
        throw DomainError("serving distance outside [r_min, r_vis_max]");
}

/*!
 * Integral of 1 - L_h(s P_n(r)) d Psi over the interference arc
 * [psi0, p_vis], with P_n the mean interferer power at distance r.
 */
inline QuadratureValue interference_deficit(NetworkConfig const& cfg,
                                            GeometryContext const& ctx,
                                            double phi,
                                            double psi0,
                                            double psiv,
                                            double s,
                                            QuadratureSpec const& quad)
{
    if (s == 0 || psi0 >= psiv)
        return {};
    int const m = cfg.nakagami_m;
    auto deficit = [&](double r) {
        return fading_laplace_complement(m, s * mean_received_power(cfg, cfg.g_interferer, r));
    };
    return integrate_arc_fraction(ctx, phi, psi0, psiv, deficit, quad);
}

//! (1 - p_int + p_int J)^(N-1) written through the deficit 1 - J.
inline double bpp_laplace_from_deficit(long n_sats, double psi0, double deficit)
{
    double const frac = deficit / (1 - psi0);
    return std::exp(static_cast<double>(n_sats - 1) * std::log1p(-std::min(frac, 1.0)));
}
}  // namespace detail

/*!
 * Laplace transform of the aggregate interference given the serving
 * satellite at r0, for a binomial constellation.
 *
 * Each of the other N-1 satellites interferes with probability p_int and,
 * when it does, contributes the factor J = E[L_h(s P_n(R_n)) | r0]. The
 * binomial mixture over the interferer count collapses to
 * (1 - p_int + p_int J)^(N-1).
 */
inline double laplace_interference_bpp(NetworkConfig const& cfg,
                                       GeometryContext const& ctx,
                                       double phi,
                                       double r0,
                                       double s,
                                       QuadratureSpec const& quad = {})
{
    if (!(s >= 0))
        throw DomainError("Laplace argument must be non-negative");
    detail::check_serving_distance(ctx, phi, r0);
    double const psi0 = psi(ctx, std::clamp(r0, r_min(ctx, phi), ctx.r_vis_max()), phi);
    double const psiv = p_vis(ctx, phi);
    auto const k = detail::interference_deficit(cfg, ctx, phi, psi0, psiv, s, quad);
    return detail::bpp_laplace_from_deficit(cfg.n_sats, psi0, k.value);
}

/*!
 * Mean per-interferer factor J(s, r0) = E[(m / (m + s P_n(R_n)))^m | r0].
 */
inline double interferer_laplace_mean(NetworkConfig const& cfg,
                                      GeometryContext const& ctx,
                                      double phi,
                                      double r0,
                                      double s,
                                      QuadratureSpec const& quad = {})
{
    detail::check_serving_distance(ctx, phi, r0);
    double const psi0 = psi(ctx, std::clamp(r0, r_min(ctx, phi), ctx.r_vis_max()), phi);
    double const psiv = p_vis(ctx, phi);
    if (psiv <= psi0)
        return 1.0;
    int const m = cfg.nakagami_m;
    auto factor = [&](double r) {
        return fading_laplace(m, s * mean_received_power(cfg, cfg.g_interferer, r));
    };
    return integrate_arc_fraction(ctx, phi, psi0, psiv, factor, quad).value / (psiv - psi0);
}

/*!
 * Uncollapsed binomial sum over the interferer count n_I = 0..N-1.
 *
 * O(N); kept as the reference form of laplace_interference_bpp.
 */
inline double laplace_interference_bpp_sum(NetworkConfig const& cfg,
                                           GeometryContext const& ctx,
                                           double phi,
                                           double r0,
                                           double s,
                                           QuadratureSpec const& quad = {})
{
    double const p = p_int(ctx, r0, phi);
    double const j = interferer_laplace_mean(cfg, ctx, phi, r0, s, quad);
    long const n = cfg.n_sats - 1;
    double total = 0;
    for (long k = 0; k <= n; ++k)
    {
        double const log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0)
                                 - std::lgamma(n - k + 1.0);
        double const weight = std::exp(log_binom) * std::pow(p, k) * std::pow(1 - p, n - k);
        total += weight * std::pow(j, k);
    }
    return total;
}

//! -1/2 atan((v2 - r^2) / sqrt(v1 - (v2 - r^2)^2)); its derivative is the arc kernel r / sqrt(...).
inline double omega1(GeometryContext const& ctx, double phi, double r)
{
    double const gap = ctx.v2() - r * r;
    double const disc = std::max(ctx.v1(phi) - gap * gap, 0.0);
    return -0.5 * std::atan2(gap, std::sqrt(disc));
}

/*!
 * Integral over [r0, r_vis_max] of (s r^-alpha / (m omega) + 1)^-m
 * r dr / sqrt(v1 - (v2 - r^2)^2), i.e. the interferer Laplace factor
 * against the unnormalised arc kernel (pi/2) d Psi.
 */
inline QuadratureValue omega2(NetworkConfig const& cfg,
                              GeometryContext const& ctx,
                              double phi,
                              double s,
                              double r0,
                              QuadratureSpec const& quad = {})
{
    detail::check_serving_distance(ctx, phi, r0);
    int const m = cfg.nakagami_m;
    auto factor = [&](double r) {
        return fading_laplace(m, s * mean_received_power(cfg, cfg.g_interferer, r));
    };
    auto q = arc_integral(
        ctx, phi, std::clamp(r0, r_min(ctx, phi), ctx.r_vis_max()), ctx.r_vis_max(), factor, quad);
    q.value *= constants::pi / 2;
    q.error *= constants::pi / 2;
    return q;
}

/*!
 * Laplace transform of the aggregate interference under the Poisson limit
 * (density N / |orbit|, common sidelobe gain).
 *
 * Campbell's theorem gives exp(-N * integral of (1 - L_h) d Psi) over the
 * interference arc. This equals
 * exp(-(2N/pi)(Omega1(r_vis_max) - Omega1(r0) - Omega2(s, r0))) but avoids
 * the subtraction of two nearly equal terms at small s.
 */
inline double laplace_interference_ppp(NetworkConfig const& cfg,
                                       GeometryContext const& ctx,
                                       double phi,
                                       double r0,
                                       double s,
                                       QuadratureSpec const& quad = {})
{
    if (!(s >= 0))
        throw DomainError("Laplace argument must be non-negative");
    detail::check_serving_distance(ctx, phi, r0);
    double const psi0 = psi(ctx, std::clamp(r0, r_min(ctx, phi), ctx.r_vis_max()), phi);
    double const psiv = p_vis(ctx, phi);
    auto const k = detail::interference_deficit(cfg, ctx, phi, psi0, psiv, s, quad);
    return std::exp(-static_cast<double>(cfg.n_sats) * k.value);
}

//---------------------------------------------------------------------------//
// COVERAGE
//---------------------------------------------------------------------------//
namespace detail
{
inline CoverageResult make_result(NetworkConfig const& cfg, double tau, CoverageMethod method)
{
    if (!(tau > 0) || !std::isfinite(tau))
        throw DomainError("SINR threshold must be positive and finite");
    cfg.validate();
    CoverageResult res;
    res.threshold_db = linear_to_db(tau);
    res.method = method;
    res.config_digest = config_digest(cfg);
    return res;
}

inline double checked_probability(QuadratureValue const& q)
{
    constexpr double excursion = 1e-9;
    if (q.value < -excursion || q.value > 1 + excursion)
    {
        throw ConvergenceError("coverage probability outside [0, 1]: "
                                   + std::to_string(q.value),
                               q.value,
                               q.error);
    }
    return std::clamp(q.value, 0.0, 1.0);
}

//! Alzer weights C(m, i) (-1)^(i+1), i = 1..m.
inline std::vector<double> alzer_weights(int m)
{
    std::vector<double> w(m);
    double binom = 1;
    for (int i = 1; i <= m; ++i)
    {
        binom = binom * (m - i + 1) / i;
        w[i - 1] = (i % 2 == 1) ? binom : -binom;
    }
    return w;
}

/*!
 * Shared Alzer-expanded integrand at serving distance r (arc fraction psi0).
 *
 * laplace(psi0, s) supplies L_{I|r0}(s) for the point-process model.
 */
template<class Laplace>
double alzer_integrand(NetworkConfig const& cfg,
                       std::vector<double> const& weights,
                       double nu,
                       double tau,
                       double r,
                       double psi0,
                       Laplace&& laplace)
{
    double const signal = mean_received_power(cfg, cfg.g_serving, r);
    double const noise = noise_power(cfg);
    double total = 0;
    for (std::size_t k = 0; k < weights.size(); ++k)
    {
        double const s = nu * static_cast<double>(k + 1) * tau / signal;
        total += weights[k] * std::exp(-s * noise) * laplace(psi0, s);
    }
    return total;
}
}  // namespace detail

/*!
 * Coverage probability P[SINR >= tau] for a binomial constellation.
 *
 * Conditions on the serving distance R0 and uses the Alzer approximation of
 * the Nakagami CDF (exact for m = 1). The visibility prefactor times the
 * serving-distance density is d(1 - (1 - Psi)^N). Writing
 * 1 - Psi = e^{-x/N} turns that measure into e^{-x} dx on
 * [0, -N log(1 - p_vis)], which removes both the arc-kernel singularity and
 * the sharp peak of the density near r_min at large N.
 */
inline CoverageResult coverage_bpp(NetworkConfig const& cfg,
                                   GeometryContext const& ctx,
                                   double phi,
                                   double tau,
                                   QuadratureSpec const& quad = {})
{
    CoverageResult res = detail::make_result(cfg, tau, CoverageMethod::bpp_analytic);
    detail::check_latitude(phi);
    if (std::abs(phi) >= ctx.phi_inv())
    {
        res.no_visible_arc = true;
        return res;
    }
    double const n = static_cast<double>(cfg.n_sats);
    double const psiv = p_vis(ctx, phi);
    double const x_max = -n * std::log1p(-psiv);
    auto const weights = detail::alzer_weights(cfg.nakagami_m);
    double const nu = alzer_nu(cfg.nakagami_m);
    QuadratureSpec const inner = quad.inner();

    auto laplace = [&](double psi0, double s) {
        auto const k = detail::interference_deficit(cfg, ctx, phi, psi0, psiv, s, inner);
        return detail::bpp_laplace_from_deficit(cfg.n_sats, psi0, k.value);
    };
    auto integrand = [&](double x) {
        double const psi0 = std::min(-std::expm1(-x / n), psiv);
        double const r = psi_inverse(ctx, psi0, phi);
        return std::exp(-x) * detail::alzer_integrand(cfg, weights, nu, tau, r, psi0, laplace);
    };
    auto const q = integrate(integrand, 0.0, x_max, quad);
    res.probability = detail::checked_probability(q);
    res.quadrature_error_estimate = q.error;
    return res;
}

/*!
 * Exact coverage under Rayleigh fading, coded directly rather than through
 * the Alzer expansion. Ignores cfg.nakagami_m.
 */
inline CoverageResult coverage_rayleigh(NetworkConfig const& cfg,
                                        GeometryContext const& ctx,
                                        double phi,
                                        double tau,
                                        QuadratureSpec const& quad = {})
{
    NetworkConfig rayleigh = cfg;
    rayleigh.nakagami_m = 1;
    CoverageResult res = detail::make_result(rayleigh, tau, CoverageMethod::bpp_analytic);
    detail::check_latitude(phi);
    if (std::abs(phi) >= ctx.phi_inv())
    {
        res.no_visible_arc = true;
        return res;
    }
    double const n = static_cast<double>(cfg.n_sats);
    double const psiv = p_vis(ctx, phi);
    double const gain_ratio = cfg.g_interferer / cfg.g_serving;
    double const sqrt_v1 = std::sqrt(ctx.v1(phi));
    auto radius = [&](double frac) {
        return std::sqrt(ctx.v2() - sqrt_v1 * std::cos(constants::pi * frac));
    };
    QuadratureSpec const inner = quad.inner();

    // t = -log(1 - Psi(r0)), so the serving law N (1 - Psi)^{N-1} dPsi is N e^{-N t} dt
    auto integrand = [&](double t) {
        double const psi0 = std::min(1 - std::exp(-t), psiv);
        double const r0 = radius(psi0);
        double const snr = mean_received_power(cfg, cfg.g_serving, r0) / noise_power(cfg);
        // P[h0 >= tau (I + noise) / signal] for exponential h0 and h_n
        auto blocked = [&](double frac) {
            double const x = tau * gain_ratio * std::pow(r0 / radius(frac), cfg.alpha);
            return x / (1 + x);
        };
        double deficit = 0;
        if (psi0 < psiv)
            deficit = integrate(blocked, psi0, psiv, inner).value;
        double const interference = std::pow(1 - deficit / (1 - psi0), n - 1);
        return n * std::exp(-n * t) * std::exp(-tau / snr) * interference;
    };
    double const t_max = -std::log(1 - psiv);
    auto const q = integrate(integrand, 0.0, t_max, quad);
    res.probability = detail::checked_probability(q);
    res.quadrature_error_estimate = q.error;
    return res;
}

/*!
 * Coverage probability under the Poisson limit of the constellation.
 *
 * Serving distance law 1 - e^{-N Psi}, interference through
 * laplace_interference_ppp. Includes the visibility probability
 * 1 - e^{-N Psi(r_vis_max)}, so the result is an unconditional coverage
 * probability comparable with coverage_bpp.
 */
inline CoverageResult coverage_ppp(NetworkConfig const& cfg,
                                   GeometryContext const& ctx,
                                   double phi,
                                   double tau,
                                   QuadratureSpec const& quad = {})
{
    CoverageResult res = detail::make_result(cfg, tau, CoverageMethod::ppp_analytic);
    detail::check_latitude(phi);
    if (std::abs(phi) >= ctx.phi_inv())
    {
        res.no_visible_arc = true;
        return res;
    }
    double const n = static_cast<double>(cfg.n_sats);
    double const psiv = p_vis(ctx, phi);
    double const x_max = n * psiv;
    auto const weights = detail::alzer_weights(cfg.nakagami_m);
    double const nu = alzer_nu(cfg.nakagami_m);
    QuadratureSpec const inner = quad.inner();

    auto laplace = [&](double psi0, double s) {
        auto const k = detail::interference_deficit(cfg, ctx, phi, psi0, psiv, s, inner);
        return std::exp(-n * k.value);
    };
    // Psi = x / N: the serving law N e^{-N Psi} dPsi becomes e^{-x} dx
    auto integrand = [&](double x) {
        double const psi0 = std::min(x / n, psiv);
        double const r = psi_inverse(ctx, psi0, phi);
        return std::exp(-x) * detail::alzer_integrand(cfg, weights, nu, tau, r, psi0, laplace);
    };
    auto const q = integrate(integrand, 0.0, x_max, quad);
    res.probability = detail::checked_probability(q);
    res.quadrature_error_estimate = q.error;
    return res;
}

inline CoverageResult coverage(CoverageMethod method,
                               NetworkConfig const& cfg,
                               GeometryContext const& ctx,
                               double phi,
                               double tau,
                               QuadratureSpec const& quad = {})
{
    switch (method)
    {
        case CoverageMethod::bpp_analytic: return coverage_bpp(cfg, ctx, phi, tau, quad);
        case CoverageMethod::ppp_analytic: return coverage_ppp(cfg, ctx, phi, tau, quad);
        case CoverageMethod::monte_carlo: break;
    }
    throw DomainError("Monte Carlo coverage lives in the montecarlo module");
}

}  // namespace geosat
