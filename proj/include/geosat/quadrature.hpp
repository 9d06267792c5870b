#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "errors.hpp"
#include "geometry.hpp"

namespace geosat
{
//---------------------------------------------------------------------------//
/*!
 * Tolerances and budget for adaptive Gauss-Kronrod quadrature.
 *
 * nodes_per_panel selects the Kronrod rule; supported values are 15, 21, 31,
 * 41, 51 and 61. max_subdivisions bounds the number of panels produced by
 * bisection (rounded up to a power of two).
 */
struct QuadratureSpec
{
    double rel_tol{1e-8};
    double abs_tol{1e-12};
    int max_subdivisions{200};
    int nodes_per_panel{15};

    //! Spec for integrals nested inside an outer integrand.
    QuadratureSpec inner() const
    {
        QuadratureSpec s = *this;
        s.rel_tol /= 10;
        s.abs_tol /= 10;
        return s;
    }

    void validate() const
    {
        if (!(rel_tol > 0) || !(abs_tol > 0))
            throw DomainError("quadrature tolerances must be positive");
        if (max_subdivisions < 1)
            throw DomainError("quadrature needs at least one panel");
        switch (nodes_per_panel)
        {
            case 15:
            case 21:
            case 31:
            case 41:
            case 51:
            case 61:
                return;
            default:
                throw DomainError("unsupported Kronrod rule size "
                                  + std::to_string(nodes_per_panel));
        }
    }
};

struct QuadratureValue
{
    double value{0};
    double error{0};
};

namespace detail
{
inline unsigned max_depth(int max_subdivisions)
{
    unsigned depth = 0;
    while ((1 << depth) < max_subdivisions)
        ++depth;
    return depth;
}

template<unsigned Points, class F>
QuadratureValue gauss_kronrod(F&& f, double a, double b, QuadratureSpec const& spec)
{
    QuadratureValue q;
    q.value = boost::math::quadrature::gauss_kronrod<double, Points>::integrate(
        f, a, b, max_depth(spec.max_subdivisions), spec.rel_tol, &q.error);
    return q;
}
}  // namespace detail

/*!
 * Adaptive quadrature of f over [a, b].
 *
 * Throws ConvergenceError when the error estimate exceeds
 * rel_tol * |value| + abs_tol after the subdivision budget is spent.
 */
template<class F>
QuadratureValue integrate(F&& f, double a, double b, QuadratureSpec const& spec)
{
    spec.validate();
    if (a == b)
        return {};
    QuadratureValue q;
    switch (spec.nodes_per_panel)
    {
        case 15: q = detail::gauss_kronrod<15>(f, a, b, spec); break;
        case 21: q = detail::gauss_kronrod<21>(f, a, b, spec); break;
        case 31: q = detail::gauss_kronrod<31>(f, a, b, spec); break;
        case 41: q = detail::gauss_kronrod<41>(f, a, b, spec); break;
        case 51: q = detail::gauss_kronrod<51>(f, a, b, spec); break;
        default: q = detail::gauss_kronrod<61>(f, a, b, spec); break;
    }
    if (!std::isfinite(q.value))
        throw ConvergenceError("non-finite quadrature result", q.value, q.error);
    if (q.error > spec.rel_tol * std::abs(q.value) + spec.abs_tol)
    {
        char msg[96];
        std::snprintf(msg, sizeof msg, "quadrature tolerance not met: error %.3g on value %.10g",
                      q.error, q.value);
        throw ConvergenceError(msg,
                               q.value,
                               q.error);
    }
    return q;
}

//---------------------------------------------------------------------------//
/*!
 * Integrate h(r) against the arc measure d Psi between two arc fractions.
 *
 * With u = pi Psi the distance is r(u) = sqrt(v2 - sqrt(v1) cos u), so the
 * kernel (2r/pi) / sqrt(v1 - (v2 - r^2)^2) dr becomes du / pi and the
 * inverse-square-root endpoint singularities disappear.
 */
template<class H>
QuadratureValue integrate_arc_fraction(GeometryContext const& ctx,
                                       double phi,
                                       double psi_lo,
                                       double psi_hi,
                                       H&& h,
                                       QuadratureSpec const& spec)
{
    auto integrand = [&](double frac) { return h(psi_inverse(ctx, frac, phi)); };
    return integrate(integrand, psi_lo, psi_hi, spec);
}

/*!
 * Integral of g(r) (2r/pi) / sqrt(v1 - (v2 - r^2)^2) dr over [r_lo, r_hi].
 *
 * The weight is d Psi / dr, so g = 1 over the full support gives 1 and over
 * [r_min, r_vis_max] gives p_vis.
 */
template<class G>
QuadratureValue arc_integral(GeometryContext const& ctx,
                             double phi,
                             double r_lo,
                             double r_hi,
                             G&& g,
                             QuadratureSpec const& spec = {})
{
    if (r_hi < r_lo)
        throw DomainError("arc_integral bounds reversed");
    double const lo = psi(ctx, r_lo, phi);
    double const hi = psi(ctx, r_hi, phi);
    return integrate_arc_fraction(ctx, phi, lo, hi, g, spec);
}

}  // namespace geosat
