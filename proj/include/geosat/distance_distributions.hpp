#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "errors.hpp"
#include "geometry.hpp"
#include "random.hpp"

namespace geosat
{
//---------------------------------------------------------------------------//
enum class DistanceKind
{
    nearest_bpp,          //!< R: nearest satellite, binomial constellation
    serving_bpp,          //!< R0: nearest visible satellite
    interferer_given_r0,  //!< Rn | R0 = r0
    nearest_ppp,          //!< R under the Poisson limit
    serving_ppp,          //!< R0 under the Poisson limit
};

//---------------------------------------------------------------------------//
/*!
 * Law of one terminal-to-satellite distance.
 *
 * Constructed only through the named factories, which validate the latitude,
 * constellation size and (for interferers) the serving distance.
 */
class DistanceLaw
{
  public:
    static DistanceLaw nearest_bpp(GeometryContext const& ctx, double phi, long n_sats)
    {
        return {DistanceKind::nearest_bpp, ctx, phi, n_sats, std::nullopt};
    }
    static DistanceLaw serving_bpp(GeometryContext const& ctx, double phi, long n_sats)
    {
        return {DistanceKind::serving_bpp, ctx, phi, n_sats, std::nullopt};
    }
    static DistanceLaw
    interferer_given_r0(GeometryContext const& ctx, double phi, long n_sats, double r0)
    {
        return {DistanceKind::interferer_given_r0, ctx, phi, n_sats, r0};
    }
    static DistanceLaw nearest_ppp(GeometryContext const& ctx, double phi, long n_sats)
    {
        return {DistanceKind::nearest_ppp, ctx, phi, n_sats, std::nullopt};
    }
    static DistanceLaw serving_ppp(GeometryContext const& ctx, double phi, long n_sats)
    {
        return {DistanceKind::serving_ppp, ctx, phi, n_sats, std::nullopt};
    }

    DistanceKind kind() const noexcept { return kind_; }
    GeometryContext const& geometry() const noexcept { return ctx_; }
    double latitude() const noexcept { return phi_; }
    long n_sats() const noexcept { return n_sats_; }
    std::optional<double> r0() const noexcept { return r0_; }

    double support_lo() const noexcept { return lo_; }
    double support_hi() const noexcept { return hi_; }

    //! Psi(r0); zero unless the law is conditioned on a serving distance.
    double psi_lo() const noexcept { return psi_lo_; }
    //! Psi at the upper support bound.
    double psi_hi() const noexcept { return psi_hi_; }

  private:
    DistanceLaw(DistanceKind kind,
                GeometryContext const& ctx,
                double phi,
                long n_sats,
                std::optional<double> r0)
        : kind_(kind), ctx_(ctx), phi_(phi), n_sats_(n_sats), r0_(r0)
    {
        detail::check_latitude(phi);
        if (n_sats < 1)
            throw DomainError("distance law needs at least one satellite");
        bool const nearest = kind == DistanceKind::nearest_bpp
                             || kind == DistanceKind::nearest_ppp;
        if (!nearest && std::abs(phi) >= ctx.phi_inv())
            throw DomainError("no visible arc at this latitude");

        lo_ = r_min(ctx, phi);
        hi_ = nearest ? r_max(ctx, phi) : ctx.r_vis_max();
        psi_hi_ = nearest ? 1.0 : p_vis(ctx, phi);
        if (kind == DistanceKind::interferer_given_r0)
        {
            if (!r0 || !(*r0 >= lo_ * (1 - detail::support_rtol)
                         && *r0 <= hi_ * (1 + detail::support_rtol)))
            {
                throw DomainError("serving distance outside [r_min, r_vis_max]");
            }
            r0_ = std::clamp(*r0, lo_, hi_);
            lo_ = *r0_;
            psi_lo_ = psi(ctx, lo_, phi);
        }
    }

    DistanceKind kind_;
    GeometryContext ctx_;
    double phi_;
    long n_sats_;
    std::optional<double> r0_;
    double lo_{0};
    double hi_{0};
    double psi_lo_{0};
    double psi_hi_{1};
};

//---------------------------------------------------------------------------//
namespace detail
{
//! 1 - (1 - p)^n without cancellation for small p.
inline double one_minus_pow_complement(double p, double n)
{
    if (p >= 1)
        return 1.0;
    return -std::expm1(n * std::log1p(-p));
}

//! CDF expressed in terms of the arc fraction Psi(r).
inline double cdf_of_fraction(DistanceLaw const& law, double frac)
{
    double const n = static_cast<double>(law.n_sats());
    switch (law.kind())
    {
        case DistanceKind::nearest_bpp:
            return one_minus_pow_complement(frac, n);
        case DistanceKind::serving_bpp:
            return one_minus_pow_complement(frac, n)
                   / one_minus_pow_complement(law.psi_hi(), n);
        case DistanceKind::interferer_given_r0:
            return (frac - law.psi_lo()) / (law.psi_hi() - law.psi_lo());
        case DistanceKind::nearest_ppp:
            return -std::expm1(-n * frac);
        case DistanceKind::serving_ppp:
            return std::expm1(-n * frac) / std::expm1(-n * law.psi_hi());
    }
    return 0.0;
}

//! Density with respect to Psi (the arc measure), not r.
inline double density_of_fraction(DistanceLaw const& law, double frac)
{
    double const n = static_cast<double>(law.n_sats());
    switch (law.kind())
    {
        case DistanceKind::nearest_bpp:
            return n * std::pow(1 - frac, n - 1);
        case DistanceKind::serving_bpp:
            return n * std::pow(1 - frac, n - 1)
                   / one_minus_pow_complement(law.psi_hi(), n);
        case DistanceKind::interferer_given_r0:
            return 1.0 / (law.psi_hi() - law.psi_lo());
        case DistanceKind::nearest_ppp:
            return n * std::exp(-n * frac);
        case DistanceKind::serving_ppp:
            return n * std::exp(-n * frac) / -std::expm1(-n * law.psi_hi());
    }
    return 0.0;
}
}  // namespace detail

//---------------------------------------------------------------------------//
inline double cdf(DistanceLaw const& law, double r)
{
    if (!std::isfinite(r))
    {
        if (std::isnan(r))
            throw DomainError("distance must not be NaN");
        return r > 0 ? 1.0 : 0.0;
    }
    if (r < law.support_lo())
        return 0.0;
    if (r >= law.support_hi())
        return 1.0;
    // degenerate support: interferer law with r0 == r_vis_max
    if (law.psi_hi() <= law.psi_lo())
        return 1.0;
    double const frac = psi(law.geometry(), r, law.latitude());
    return std::clamp(detail::cdf_of_fraction(law, frac), 0.0, 1.0);
}

/*!
 * Density in 1/km.
 *
 * Returns +infinity where the arc kernel is singular (r_min and r_max);
 * integrate through integrate_arc_fraction rather than sampling those
 * points.
 */
inline double pdf(DistanceLaw const& law, double r)
{
    if (!(r >= law.support_lo() && r <= law.support_hi()))
        return 0.0;
    if (law.psi_hi() <= law.psi_lo())
        return std::numeric_limits<double>::infinity();
    GeometryContext const& ctx = law.geometry();
    double const phi = law.latitude();
    double const lo = r_min(ctx, phi);
    double const hi = r_max(ctx, phi);
    double const disc = (r - lo) * (r + lo) * (hi - r) * (hi + r);
    if (disc <= 0)
        return std::numeric_limits<double>::infinity();
    double const dpsi_dr = 2 * r / (constants::pi * std::sqrt(disc));
    double const frac = psi(ctx, r, phi);
    return detail::density_of_fraction(law, frac) * dpsi_dr;
}

/*!
 * Closed-form inverse CDF, u in [0, 1].
 *
 * Each CDF is a monotone function of Psi, so the quantile inverts that map
 * and then applies psi_inverse.
 */
inline double quantile(DistanceLaw const& law, double u)
{
    if (!(u >= 0 && u <= 1))
        throw DomainError("quantile level outside [0, 1]");
    double const n = static_cast<double>(law.n_sats());
    double frac = 0;
    switch (law.kind())
    {
        case DistanceKind::nearest_bpp:
            frac = -std::expm1(std::log1p(-u) / n);
            break;
        case DistanceKind::serving_bpp: {
            double const w = u * detail::one_minus_pow_complement(law.psi_hi(), n);
            frac = -std::expm1(std::log1p(-w) / n);
            break;
        }
        case DistanceKind::interferer_given_r0:
            frac = law.psi_lo() + u * (law.psi_hi() - law.psi_lo());
            break;
        case DistanceKind::nearest_ppp:
            // atom at r_max carries the void probability e^{-N}
            frac = u >= 1 ? 1.0 : std::min(1.0, -std::log1p(-u) / n);
            break;
        case DistanceKind::serving_ppp: {
            double const w = -u * std::expm1(-n * law.psi_hi());
            frac = -std::log1p(-w) / n;
            break;
        }
    }
    frac = std::clamp(frac, law.psi_lo(), law.psi_hi());
    double const r = psi_inverse(law.geometry(), frac, law.latitude());
    return std::clamp(r, law.support_lo(), law.support_hi());
}

//! Inverse-CDF draw; the caller owns the random stream.
template<class Rng>
double sample(DistanceLaw const& law, Rng& rng)
{
    return quantile(law, uniform01(rng));
}

}  // namespace geosat
