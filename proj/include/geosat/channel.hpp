#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>

#include "errors.hpp"
#include "random.hpp"
#include "units.hpp"

namespace geosat
{
//---------------------------------------------------------------------------//
/*!
 * Downlink link-budget parameters, all in linear SI units.
 *
 * Distances enter the path loss as (r / path_loss_reference_km)^-alpha. The
 * default reference of 1 km is the convention under which the reference
 * link budget yields usable SINR for alpha = 3; set it to 0.001 to measure
 * distances in metres.
 */
struct NetworkConfig
{
    long n_sats{100};
    double tx_power_w{0};          //!< P_t
    double carrier_hz{2e9};        //!< f_c
    double alpha{3.0};             //!< path-loss exponent
    double g_serving{0};           //!< G_0 = G_t,0 G_r
    double g_interferer{0};        //!< G_n, common to all interferers
    double bandwidth_hz{30e6};     //!< W
    double noise_density_w_hz{0};  //!< N_0
    int nakagami_m{1};
    double path_loss_reference_km{1.0};

    void validate() const
    {
        if (n_sats < 1)
            throw DomainError("n_sats must be >= 1");
        if (!(tx_power_w > 0))
            throw DomainError("transmit power must be positive");
        if (!(carrier_hz > 0))
            throw DomainError("carrier frequency must be positive");
        if (!(alpha >= 2) || !std::isfinite(alpha))
            throw DomainError("path-loss exponent must be >= 2");
        if (!(g_serving > 0) || !(g_interferer > 0))
            throw DomainError("antenna gains must be positive");
        if (g_serving < g_interferer)
            throw DomainError("serving gain must not be below the sidelobe gain");
        if (!(bandwidth_hz > 0))
            throw DomainError("bandwidth must be positive");
        if (!(noise_density_w_hz >= 0))
            throw DomainError("noise density must be non-negative");
        if (nakagami_m < 1)
            throw DomainError("Nakagami m must be a positive integer");
        if (!(path_loss_reference_km > 0))
            throw DomainError("path-loss reference distance must be positive");
    }
};

//---------------------------------------------------------------------------//
/*!
 * Transmit power from an EIRP density P_t G_t,0 / W.
 *
 * P_t [dBW] = EIRP density [dBW/MHz] + 10 log10(W [MHz]) - G_t,0 [dBi].
 */
inline double
pt_from_eirp_density(double eirp_dbw_per_mhz, double g_t0_dbi, double bandwidth_hz)
{
    if (!(bandwidth_hz > 0))
        throw DomainError("bandwidth must be positive");
    double const pt_dbw = eirp_dbw_per_mhz + linear_to_db(bandwidth_hz / 1e6) - g_t0_dbi;
    return db_to_linear(pt_dbw);
}

/*!
 * S-band reference network: 2 GHz, 30 MHz, 51 dBi serving beam, 0 dBi
 * terminal, 59 dBW/MHz EIRP density, -174 dBm/Hz noise.
 */
inline NetworkConfig
reference_network(long n_sats, double alpha, double gain_ratio_db, int nakagami_m)
{
    NetworkConfig cfg;
    cfg.n_sats = n_sats;
    cfg.alpha = alpha;
    cfg.nakagami_m = nakagami_m;
    cfg.carrier_hz = 2e9;
    cfg.bandwidth_hz = 30e6;
    double const g_t0_dbi = 51.0;
    double const g_r_dbi = 0.0;
    cfg.tx_power_w = pt_from_eirp_density(59.0, g_t0_dbi, cfg.bandwidth_hz);
    cfg.g_serving = db_to_linear(g_t0_dbi + g_r_dbi);
    cfg.g_interferer = db_to_linear(g_t0_dbi + g_r_dbi - gain_ratio_db);
    cfg.noise_density_w_hz = dbm_to_watts(-174.0);
    cfg.validate();
    return cfg;
}

//---------------------------------------------------------------------------//
// PATH LOSS
//---------------------------------------------------------------------------//
//! (c / (4 pi f_c))^2 (r / r_ref)^-alpha for r in km.
inline double path_loss(NetworkConfig const& cfg, double r_km)
{
    if (!(r_km > 0))
        throw DomainError("path loss needs a positive distance");
    double const k = constants::speed_of_light / (4 * constants::pi * cfg.carrier_hz);
    return k * k * std::pow(r_km / cfg.path_loss_reference_km, -cfg.alpha);
}

//! Fading-free received power P_t G l(r).
inline double mean_received_power(NetworkConfig const& cfg, double gain, double r_km)
{
    return cfg.tx_power_w * gain * path_loss(cfg, r_km);
}

inline double noise_power(NetworkConfig const& cfg) noexcept
{
    return cfg.noise_density_w_hz * cfg.bandwidth_hz;
}

//---------------------------------------------------------------------------//
// FADING
//---------------------------------------------------------------------------//
//! Unit-mean gamma power gain with integer shape m (Nakagami-m amplitude).
struct FadingLaw
{
    int m{1};

    explicit FadingLaw(int shape) : m(shape)
    {
        if (shape < 1)
            throw DomainError("Nakagami m must be a positive integer");
    }
};

//! Alzer constant m (m!)^(-1/m).
inline double alzer_nu(int m)
{
    return m * std::exp(-std::lgamma(m + 1.0) / m);
}

//! 1 - e^{-mx} sum_{k<m} (mx)^k / k!
inline double nakagami_cdf(FadingLaw const& law, double x)
{
    if (!(x >= 0))
        throw DomainError("fading CDF needs x >= 0");
    if (std::isinf(x))
        return 1.0;
    double const mx = law.m * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < law.m; ++k)
    {
        term *= mx / k;
        sum += term;
    }
    return std::clamp(1.0 - std::exp(-mx) * sum, 0.0, 1.0);
}

/*!
 * Alzer-type approximation (1 - e^{-nu x})^m.
 *
 * Expanding the power gives 1 - sum_i C(m,i) (-1)^{i+1} e^{-nu i x}; the
 * product form avoids that sum's cancellation near x = 0.
 */
inline double nakagami_cdf_approx(FadingLaw const& law, double x)
{
    if (!(x >= 0))
        throw DomainError("fading CDF needs x >= 0");
    return std::pow(-std::expm1(-alzer_nu(law.m) * x), law.m);
}

//! Gamma(m, 1/m) draw as a scaled sum of m unit exponentials.
template<class Rng>
double sample_fading(FadingLaw const& law, Rng& rng)
{
    double sum = 0;
    for (int k = 0; k < law.m; ++k)
        sum += exponential1(rng);
    return sum / law.m;
}

//! Laplace transform E[e^{-s h}] = (1 + s/m)^{-m}.
inline double fading_laplace(int m, double s)
{
    return std::exp(-m * std::log1p(s / m));
}

//! 1 - E[e^{-s h}], accurate for small s.
inline double fading_laplace_complement(int m, double s)
{
    return -std::expm1(-m * std::log1p(s / m));
}

struct NakagamiFromRician
{
    int m;         //!< rounded shape used by the model
    double exact;  //!< (K+1)^2 / (2K+1)
    bool rounded;  //!< true when exact was not already an integer
};

//! Map a Rician K factor (linear) onto the nearest integer Nakagami shape.
inline NakagamiFromRician rician_to_nakagami(double k_factor)
{
    if (!(k_factor >= 0) || !std::isfinite(k_factor))
        throw DomainError("Rician K must be non-negative");
    double const exact = (k_factor + 1) * (k_factor + 1) / (2 * k_factor + 1);
    int const m = std::max(1, static_cast<int>(std::lround(exact)));
    return {m, exact, std::abs(exact - m) > 1e-12};
}

//---------------------------------------------------------------------------//
// SINR
//---------------------------------------------------------------------------//
struct Link
{
    double gain{0};  //!< fading power gain h
    double distance_km{0};
};

/*!
 * SINR at the terminal.
 *
 * Zero without a serving link; with an empty interferer list this is the
 * single-satellite SNR.
 */
inline double sinr(NetworkConfig const& cfg,
                   std::optional<Link> const& serving,
                   std::span<Link const> interferers)
{
    if (!serving)
        return 0.0;
    double const signal
        = mean_received_power(cfg, cfg.g_serving, serving->distance_km) * serving->gain;
    double interference = 0;
    for (Link const& l : interferers)
        interference += mean_received_power(cfg, cfg.g_interferer, l.distance_km) * l.gain;
    return signal / (interference + noise_power(cfg));
}

}  // namespace geosat
