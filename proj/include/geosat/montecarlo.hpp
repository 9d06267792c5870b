#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "analysis.hpp"
#include "channel.hpp"
#include "distance_distributions.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "random.hpp"

namespace geosat
{
//---------------------------------------------------------------------------//
// TYPES
//---------------------------------------------------------------------------//
//! One realisation of the binomial constellation on the geostationary circle.
struct Constellation
{
    std::vector<double> azimuths;  //!< [0, 2 pi)
    double orbit_radius{0};        //!< km
};

enum class VisibilityCase
{
    none,  //!< no satellite above the horizon
    one,   //!< serving satellite only
    many,  //!< serving satellite plus interferers
};

struct TrialOutcome
{
    VisibilityCase visibility{VisibilityCase::none};
    std::optional<double> serving_distance;
    std::vector<double> interferer_distances;
    double sinr{0};
    bool covered{false};
};

//! Coverage estimate with its Wilson 95% interval.
struct McEstimate
{
    CoverageResult result;
    double half_width{0};
    double lower{0};
    double upper{0};
    long trials{0};
    long covered{0};
};

//---------------------------------------------------------------------------//
template<class Rng>
Constellation draw_constellation(GeometryContext const& ctx, long n_sats, Rng& rng)
{
    if (n_sats < 1)
        throw DomainError("constellation needs at least one satellite");
    Constellation c;
    c.orbit_radius = ctx.orbit_radius();
    c.azimuths.resize(static_cast<std::size_t>(n_sats));
    for (double& az : c.azimuths)
        az = constants::two_pi * uniform01(rng);
    return c;
}

namespace detail
{
struct VisibleSat
{
    std::size_t index;
    double distance;
};

//! Visible satellites by the elevation test, with 3D slant ranges.
inline void visible_satellites(GeometryContext const& ctx,
                               TerminalPosition const& terminal,
                               Constellation const& c,
                               std::vector<VisibleSat>& out)
{
    out.clear();
    for (std::size_t i = 0; i < c.azimuths.size(); ++i)
    {
        Vec3 const sat = orbit_position(ctx, c.azimuths[i]);
        if (above_horizon(terminal, sat))
            out.push_back({i, norm(sat - terminal.cartesian)});
    }
}

//! Position of the nearest entry; ties go to the lowest satellite index.
inline std::size_t nearest(std::vector<VisibleSat> const& vis)
{
    std::size_t best = 0;
    for (std::size_t k = 1; k < vis.size(); ++k)
    {
        if (vis[k].distance < vis[best].distance
            || (vis[k].distance == vis[best].distance && vis[k].index < vis[best].index))
        {
            best = k;
        }
    }
    return best;
}

inline double wilson_half_width(long hits, long n, double& center)
{
    constexpr double z = 1.959963984540054;
    double const nn = static_cast<double>(n);
    double const p = hits / nn;
    double const denom = 1 + z * z / nn;
    center = (p + z * z / (2 * nn)) / denom;
    return z / denom * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn));
}
}  // namespace detail

/*!
 * Draw one constellation and fading realisation and evaluate the link.
 */
template<class Rng>
TrialOutcome run_trial(NetworkConfig const& cfg,
                       GeometryContext const& ctx,
                       TerminalPosition const& terminal,
                       double tau,
                       Rng& rng)
{
    Constellation const c = draw_constellation(ctx, cfg.n_sats, rng);
    std::vector<detail::VisibleSat> vis;
    detail::visible_satellites(ctx, terminal, c, vis);

    TrialOutcome out;
    if (vis.empty())
        return out;
    out.visibility = vis.size() == 1 ? VisibilityCase::one : VisibilityCase::many;

    FadingLaw const fading(cfg.nakagami_m);
    std::size_t const s = detail::nearest(vis);
    Link const serving{sample_fading(fading, rng), vis[s].distance};
    std::vector<Link> interferers;
    interferers.reserve(vis.size() - 1);
    for (std::size_t k = 0; k < vis.size(); ++k)
    {
        if (k == s)
            continue;
        interferers.push_back({sample_fading(fading, rng), vis[k].distance});
        out.interferer_distances.push_back(vis[k].distance);
    }
    out.serving_distance = serving.distance_km;
    out.sinr = sinr(cfg, serving, interferers);
    out.covered = out.sinr >= tau;
    return out;
}

//---------------------------------------------------------------------------//
// COVERAGE ESTIMATION
//---------------------------------------------------------------------------//
/*!
 * SINR of each trial, trial i drawn from substream(seed, i).
 *
 * The result does not depend on the worker count.
 */
inline std::vector<double> simulate_sinr(NetworkConfig const& cfg,
                                         GeometryContext const& ctx,
                                         TerminalPosition const& terminal,
                                         long n_trials,
                                         std::uint64_t seed,
                                         unsigned workers = 1)
{
    if (n_trials < 1)
        throw DomainError("Monte Carlo needs at least one trial");
    cfg.validate();
    std::vector<double> out(static_cast<std::size_t>(n_trials));
    parallel_for(out.size(), workers, [&](std::size_t i) {
        auto rng = substream(seed, i);
        out[i] = run_trial(cfg, ctx, terminal, 0.0, rng).sinr;
    });
    return out;
}

//! Coverage estimates on a threshold grid from one shared set of draws.
inline std::vector<McEstimate> estimate_sweep(NetworkConfig const& cfg,
                                              GeometryContext const& ctx,
                                              TerminalPosition const& terminal,
                                              std::vector<double> const& taus,
                                              long n_trials,
                                              std::uint64_t seed,
                                              unsigned workers = 1)
{
    for (double tau : taus)
    {
        if (!(tau > 0) || !std::isfinite(tau))
            throw DomainError("SINR threshold must be positive and finite");
    }
    auto const draws = simulate_sinr(cfg, ctx, terminal, n_trials, seed, workers);
    std::uint64_t const digest = config_digest(cfg);
    std::vector<McEstimate> out;
    out.reserve(taus.size());
    for (double tau : taus)
    {
        McEstimate e;
        e.trials = n_trials;
        e.covered = std::count_if(
            draws.begin(), draws.end(), [tau](double x) { return x >= tau; });
        e.result.threshold_db = linear_to_db(tau);
        e.result.method = CoverageMethod::monte_carlo;
        e.result.config_digest = digest;
        e.result.probability = static_cast<double>(e.covered) / n_trials;
        e.result.no_visible_arc = std::abs(terminal.latitude) >= ctx.phi_inv();
        double center = 0;
        e.half_width = detail::wilson_half_width(e.covered, n_trials, center);
        // the Wilson interval always contains the point estimate; keep it so after rounding
        e.lower = std::clamp(center - e.half_width, 0.0, e.result.probability);
        e.upper = std::clamp(center + e.half_width, e.result.probability, 1.0);
        out.push_back(e);
    }
    return out;
}

inline McEstimate estimate(NetworkConfig const& cfg,
                           GeometryContext const& ctx,
                           TerminalPosition const& terminal,
                           double tau,
                           long n_trials,
                           std::uint64_t seed,
                           unsigned workers = 1)
{
    return estimate_sweep(cfg, ctx, terminal, {tau}, n_trials, seed, workers).front();
}

//---------------------------------------------------------------------------//
// DISTANCE AND CASE SAMPLERS
//---------------------------------------------------------------------------//
//! Distance to the nearest satellite, visible or not, per constellation draw.
inline std::vector<double> sample_nearest_distances(
    GeometryContext const& ctx, double phi, long n_sats, long n_samples, std::uint64_t seed)
{
    auto const terminal = TerminalPosition::at(ctx, phi, 0.0);
    std::vector<double> out(static_cast<std::size_t>(n_samples));
    for (std::size_t i = 0; i < out.size(); ++i)
    {
        auto rng = substream(seed, i);
        auto const c = draw_constellation(ctx, n_sats, rng);
        double best = std::numeric_limits<double>::infinity();
        for (double az : c.azimuths)
            best = std::min(best, norm(orbit_position(ctx, az) - terminal.cartesian));
        out[i] = best;
    }
    return out;
}

/*!
 * Serving distance from draws with at least one visible satellite.
 *
 * Draws with nothing visible are discarded; the result has n_samples
 * entries.
 */
inline std::vector<double> sample_serving_distances(
    GeometryContext const& ctx, double phi, long n_sats, long n_samples, std::uint64_t seed)
{
    if (std::abs(phi) >= ctx.phi_inv())
        throw DomainError("no visible arc at this latitude");
    auto const terminal = TerminalPosition::at(ctx, phi, 0.0);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_samples));
    std::vector<detail::VisibleSat> vis;
    for (std::uint64_t i = 0; static_cast<long>(out.size()) < n_samples; ++i)
    {
        auto rng = substream(seed, i);
        detail::visible_satellites(ctx, terminal, draw_constellation(ctx, n_sats, rng), vis);
        if (!vis.empty())
            out.push_back(vis[detail::nearest(vis)].distance);
    }
    return out;
}

/*!
 * Interferer distances from draws whose serving satellite lies near r0.
 *
 * A draw is kept when the serving satellite's arc fraction |dlon| / pi is
 * within band_psi of Psi(r0); all its interferer distances are returned.
 * Banding the arc fraction rather than the distance keeps the band narrow
 * near r_min, where the distance is flat in the satellite's position.
 */
inline std::vector<double> sample_interferer_distances_given_r0(GeometryContext const& ctx,
                                                                double phi,
                                                                long n_sats,
                                                                double r0,
                                                                long n_samples,
                                                                std::uint64_t seed,
                                                                double band_psi = 5e-4)
{
    if (n_sats < 2)
        throw DomainError("interferers need at least two satellites");
    if (!(band_psi > 0))
        throw DomainError("rejection band must be positive");
    auto const law = DistanceLaw::interferer_given_r0(ctx, phi, n_sats, r0);
    double const psi0 = law.psi_lo();
    auto const terminal = TerminalPosition::at(ctx, phi, 0.0);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_samples));
    std::vector<detail::VisibleSat> vis;
    for (std::uint64_t i = 0; static_cast<long>(out.size()) < n_samples; ++i)
    {
        auto rng = substream(seed, i);
        auto const c = draw_constellation(ctx, n_sats, rng);
        detail::visible_satellites(ctx, terminal, c, vis);
        if (vis.empty())
            continue;
        std::size_t const s = detail::nearest(vis);
        double az = c.azimuths[vis[s].index];
        double const offset = std::min(az, constants::two_pi - az);
        if (std::abs(offset / constants::pi - psi0) > band_psi)
            continue;
        for (std::size_t k = 0; k < vis.size() && static_cast<long>(out.size()) < n_samples; ++k)
        {
            if (k != s)
                out.push_back(vis[k].distance);
        }
    }
    return out;
}

struct LaplaceEstimate
{
    double mean{0};
    double std_error{0};
};

/*!
 * Monte Carlo E[exp(-s I)] given the serving satellite at distance r0.
 *
 * The serving satellite is placed at r0; each of the other N-1 satellites
 * is redrawn until it falls beyond r0, which is exactly the conditional law
 * given R0 = r0. Interferers are those above the horizon.
 */
inline LaplaceEstimate estimate_interference_laplace(NetworkConfig const& cfg,
                                                     GeometryContext const& ctx,
                                                     double phi,
                                                     double r0,
                                                     double s,
                                                     long n_trials,
                                                     std::uint64_t seed)
{
    if (n_trials < 2)
        throw DomainError("standard error needs at least two trials");
    if (!(s >= 0))
        throw DomainError("Laplace argument must be non-negative");
    (void)DistanceLaw::interferer_given_r0(ctx, phi, cfg.n_sats, r0);
    auto const terminal = TerminalPosition::at(ctx, phi, 0.0);
    FadingLaw const fading(cfg.nakagami_m);

    double sum = 0;
    double sum_sq = 0;
    for (long t = 0; t < n_trials; ++t)
    {
        auto rng = substream(seed, static_cast<std::uint64_t>(t));
        double interference = 0;
        for (long k = 1; k < cfg.n_sats; ++k)
        {
            Vec3 sat;
            double dist = 0;
            do
            {
                sat = orbit_position(ctx, constants::two_pi * uniform01(rng));
                dist = norm(sat - terminal.cartesian);
            } while (dist < r0);
            if (above_horizon(terminal, sat))
            {
                interference += mean_received_power(cfg, cfg.g_interferer, dist)
                                * sample_fading(fading, rng);
            }
        }
        double const x = std::exp(-s * interference);
        sum += x;
        sum_sq += x * x;
    }
    double const n = static_cast<double>(n_trials);
    LaplaceEstimate e;
    e.mean = sum / n;
    double const var = std::max(0.0, (sum_sq - n * e.mean * e.mean) / (n - 1));
    e.std_error = std::sqrt(var / n);
    return e;
}

struct CaseCounts
{
    long none{0};
    long one{0};
    long many{0};
    long trials{0};
};

//! Visibility-case tallies over n_trials constellation draws.
inline CaseCounts case_frequencies(GeometryContext const& ctx,
                                   double phi,
                                   long n_sats,
                                   long n_trials,
                                   std::uint64_t seed,
                                   unsigned workers = 1)
{
    auto const terminal = TerminalPosition::at(ctx, phi, 0.0);
    std::vector<unsigned char> kind(static_cast<std::size_t>(n_trials));
    parallel_for(kind.size(), workers, [&](std::size_t i) {
        auto rng = substream(seed, i);
        long visible = 0;
        for (long k = 0; k < n_sats && visible < 2; ++k)
        {
            if (above_horizon(terminal, orbit_position(ctx, constants::two_pi * uniform01(rng))))
                ++visible;
        }
        kind[i] = static_cast<unsigned char>(visible);
    });
    CaseCounts c;
    c.trials = n_trials;
    for (unsigned char k : kind)
    {
        if (k == 0)
            ++c.none;
        else if (k == 1)
            ++c.one;
        else
            ++c.many;
    }
    return c;
}

}  // namespace geosat
