#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"
#include "units.hpp"

namespace geosat
{
//---------------------------------------------------------------------------//
// TYPES
//---------------------------------------------------------------------------//
/*!
 * Spherical-Earth geometry of the geostationary circle.
 *
 * Lengths are kilometres, angles radians. Holds the latitude-independent
 * constants; v1 depends on the terminal latitude and is computed per call.
 */
class GeometryContext
{
  public:
    GeometryContext(double r_earth_km, double altitude_km)
        : r_earth_(r_earth_km), altitude_(altitude_km)
    {
        if (!(r_earth_km > 0) || !std::isfinite(r_earth_km))
            throw DomainError("Earth radius must be positive and finite");
        if (!(altitude_km > 0) || !std::isfinite(altitude_km))
            throw DomainError("orbit altitude must be positive and finite");
        orbit_radius_ = r_earth_ + altitude_;
        phi_inv_ = std::acos(r_earth_ / orbit_radius_);
        r_vis_max_ = std::sqrt(altitude_ * altitude_ + 2 * altitude_ * r_earth_);
        v2_ = orbit_radius_ * orbit_radius_ + r_earth_ * r_earth_;
    }

    //! Reference values: 6378 km Earth radius, 35786 km altitude.
    static GeometryContext geostationary()
    {
        return {constants::earth_radius_km, constants::geo_altitude_km};
    }

    double r_earth() const noexcept { return r_earth_; }
    double altitude() const noexcept { return altitude_; }
    double orbit_radius() const noexcept { return orbit_radius_; }
    double phi_inv() const noexcept { return phi_inv_; }
    double r_vis_max() const noexcept { return r_vis_max_; }
    double v2() const noexcept { return v2_; }

    //! 4 (r_E + a)^2 r_E^2 cos^2(phi)
    double v1(double phi) const noexcept
    {
        double const c = orbit_radius_ * r_earth_ * std::cos(phi);
        return 4 * c * c;
    }

  private:
    double r_earth_;
    double altitude_;
    double orbit_radius_;
    double phi_inv_;
    double r_vis_max_;
    double v2_;
};

struct Vec3
{
    double x{0};
    double y{0};
    double z{0};

    friend Vec3 operator-(Vec3 const& a, Vec3 const& b) noexcept
    {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
};

inline double dot(Vec3 const& a, Vec3 const& b) noexcept
{
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline double norm(Vec3 const& a) noexcept
{
    return std::sqrt(dot(a, a));
}

//---------------------------------------------------------------------------//
namespace detail
{
inline void check_latitude(double phi)
{
    if (!std::isfinite(phi))
        throw DomainError("latitude must be finite");
    if (std::abs(phi) > constants::pi / 2 * (1 + 1e-12))
        throw DomainError("latitude outside [-pi/2, pi/2]: " + std::to_string(phi));
}

//! Clamp an acos/asin argument that strays past +-1 by rounding only.
inline double clamp_unit(double x)
{
    constexpr double tol = 1e-12;
    if (!(x >= -1 - tol && x <= 1 + tol))
        throw DomainError("trigonometric argument outside [-1, 1]: " + std::to_string(x));
    return std::clamp(x, -1.0, 1.0);
}

//! Relative tolerance for distances arriving from trigonometric pipelines.
inline constexpr double support_rtol = 1e-9;
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Terminal on the Earth surface.
 */
struct TerminalPosition
{
    double latitude{0};   //!< [-pi/2, pi/2]
    double longitude{0};  //!< [0, 2 pi)
    Vec3 cartesian;       //!< km, Earth-centred, x toward longitude 0

    static TerminalPosition at(GeometryContext const& ctx, double latitude, double longitude)
    {
        detail::check_latitude(latitude);
        if (!std::isfinite(longitude))
            throw DomainError("longitude must be finite");
        TerminalPosition t;
        t.latitude = std::clamp(latitude, -constants::pi / 2, constants::pi / 2);
        t.longitude = wrap_two_pi(longitude);
        double const re = ctx.r_earth();
        t.cartesian = {re * std::cos(t.latitude) * std::cos(t.longitude),
                       re * std::cos(t.latitude) * std::sin(t.longitude),
                       re * std::sin(t.latitude)};
        return t;
    }
};

//! Point on the geostationary circle at the given azimuth.
inline Vec3 orbit_position(GeometryContext const& ctx, double azimuth) noexcept
{
    double const r = ctx.orbit_radius();
    return {r * std::cos(azimuth), r * std::sin(azimuth), 0.0};
}

//! Elevation >= 0 test: (x - t) . t >= 0.
inline bool above_horizon(TerminalPosition const& terminal, Vec3 const& sat) noexcept
{
    return dot(sat - terminal.cartesian, terminal.cartesian) >= 0;
}

//---------------------------------------------------------------------------//
// VISIBILITY
//---------------------------------------------------------------------------//
//! Latitude beyond which no part of the orbit clears the horizon.
inline double invisibility_latitude(GeometryContext const& ctx) noexcept
{
    return ctx.phi_inv();
}

namespace detail
{
//! Half-angle of the visible arc seen from the Earth centre; 0 if none.
inline double visible_half_angle(GeometryContext const& ctx, double phi)
{
    check_latitude(phi);
    if (std::abs(phi) >= ctx.phi_inv())
        return 0.0;
    double const ratio = ctx.r_earth() / (ctx.orbit_radius() * std::cos(phi));
    return std::asin(std::sqrt(1 - ratio * ratio));
}
}  // namespace detail

/*!
 * Length of the orbit arc above the local horizon (km).
 *
 * Exactly zero for |phi| >= phi_inv.
 */
inline double visible_arc_length(GeometryContext const& ctx, double phi)
{
    return 2 * ctx.orbit_radius() * detail::visible_half_angle(ctx, phi);
}

//! Probability that a uniformly placed satellite is visible.
inline double p_vis(GeometryContext const& ctx, double phi)
{
    return detail::visible_half_angle(ctx, phi) / constants::pi;
}

struct CaseProbabilities
{
    double none;  //!< no visible satellite
    double one;   //!< exactly one, no interference
    double many;  //!< serving plus at least one interferer
};

inline CaseProbabilities
case_probabilities(GeometryContext const& ctx, double phi, long n_sats)
{
    if (n_sats < 1)
        throw DomainError("network needs at least one satellite");
    double const p = p_vis(ctx, phi);
    double const n = static_cast<double>(n_sats);
    CaseProbabilities c;
    c.none = std::pow(1 - p, n);
    c.one = n * p * std::pow(1 - p, n - 1);
    c.many = std::max(0.0, 1 - c.none - c.one);
    return c;
}

//---------------------------------------------------------------------------//
// DISTANCES
//---------------------------------------------------------------------------//
//! Distance to the nearest point of the orbit.
inline double r_min(GeometryContext const& ctx, double phi)
{
    detail::check_latitude(phi);
    double const re = ctx.r_earth();
    double const h = ctx.orbit_radius() - re * std::cos(phi);
    double const z = re * std::sin(phi);
    return std::sqrt(h * h + z * z);
}

//! Distance to the farthest point of the orbit.
inline double r_max(GeometryContext const& ctx, double phi)
{
    detail::check_latitude(phi);
    double const re = ctx.r_earth();
    double const h = ctx.orbit_radius() + re * std::cos(phi);
    double const z = re * std::sin(phi);
    return std::sqrt(h * h + z * z);
}

//! Slant range to the horizon-grazing orbit points; latitude-independent.
inline double r_vis_max(GeometryContext const& ctx) noexcept
{
    return ctx.r_vis_max();
}

/*!
 * Fraction of the orbit circle within distance r of the terminal.
 *
 * Psi(r_min) = 0, Psi(r_max) = 1. Distances within a 1e-9 relative band
 * outside the support are clamped; farther excursions throw.
 */
inline double psi(GeometryContext const& ctx, double r, double phi)
{
    double const lo = r_min(ctx, phi);
    double const hi = r_max(ctx, phi);
    if (!(r >= lo * (1 - detail::support_rtol) && r <= hi * (1 + detail::support_rtol)))
        throw DomainError("distance " + std::to_string(r) + " km outside orbit support");
    if (hi - lo <= 1e-12 * hi)
    {
        // terminal on the pole (up to cos(pi/2) rounding): one common distance
        return 1.0;
    }
    if (r <= lo)
        return 0.0;
    if (r >= hi)
        return 1.0;
    // sin^2(pi Psi / 2) = (r^2 - lo^2) / (hi^2 - lo^2), evaluated from the
    // nearer endpoint so neither tail loses digits to cancellation
    double const below = (r - lo) * (r + lo);
    double const above = (hi - r) * (hi + r);
    double const total = below + above;
    if (below <= above)
        return 2 / constants::pi * std::asin(std::sqrt(below / total));
    return 1 - 2 / constants::pi * std::asin(std::sqrt(above / total));
}

/*!
 * Inverse of psi: the distance bounding an arc fraction in [0, 1].
 */
inline double psi_inverse(GeometryContext const& ctx, double fraction, double phi)
{
    detail::check_latitude(phi);
    if (!(fraction >= 0 && fraction <= 1))
        throw DomainError("arc fraction outside [0, 1]");
    double const lo = r_min(ctx, phi);
    double const hi = r_max(ctx, phi);
    double const span = (hi - lo) * (hi + lo);
    if (fraction <= 0.5)
    {
        double const s = std::sin(constants::half_pi * fraction);
        return std::sqrt(lo * lo + span * s * s);
    }
    double const c = std::sin(constants::half_pi * (1 - fraction));
    return std::sqrt(hi * hi - span * c * c);
}

/*!
 * Probability that one of the other N-1 satellites is an interferer, given
 * the serving satellite at distance r0.
 */
inline double p_int(GeometryContext const& ctx, double r0, double phi)
{
    double const lo = r_min(ctx, phi);
    double const hi = ctx.r_vis_max();
    if (std::abs(phi) >= ctx.phi_inv())
        throw DomainError("no visible arc at this latitude");
    if (!(r0 >= lo * (1 - detail::support_rtol) && r0 <= hi * (1 + detail::support_rtol)))
        throw DomainError("serving distance outside [r_min, r_vis_max]");
    double const psi0 = psi(ctx, std::clamp(r0, lo, hi), phi);
    double const psiv = p_vis(ctx, phi);
    return std::max(0.0, psiv - psi0) / (1 - psi0);
}

}  // namespace geosat
