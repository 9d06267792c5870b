#pragma once

#include <cmath>
#include <numbers>

namespace geosat
{
namespace constants
{
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2 * std::numbers::pi;
inline constexpr double half_pi = std::numbers::pi / 2;
//! Rounded value used by the reference link budget.
inline constexpr double speed_of_light = 3e8;  // m/s
inline constexpr double earth_radius_km = 6378.0;
inline constexpr double geo_altitude_km = 35786.0;
//! Mean motion of a geostationary orbit (one sidereal day).
inline constexpr double geo_mean_motion_rev_per_day = 1.00273790935;
}  // namespace constants

inline constexpr double deg_to_rad(double deg) noexcept
{
    return deg * (constants::pi / 180.0);
}

inline constexpr double rad_to_deg(double rad) noexcept
{
    return rad * (180.0 / constants::pi);
}

inline double db_to_linear(double db) noexcept
{
    return std::pow(10.0, db / 10.0);
}

inline double linear_to_db(double x) noexcept
{
    return 10.0 * std::log10(x);
}

inline double dbm_to_watts(double dbm) noexcept
{
    return db_to_linear(dbm - 30.0);
}

inline double watts_to_dbm(double w) noexcept
{
    return linear_to_db(w) + 30.0;
}

//! Wrap an angle into [0, 2*pi).
inline double wrap_two_pi(double rad) noexcept
{
    double w = std::fmod(rad, constants::two_pi);
    if (w < 0)
        w += constants::two_pi;
    // fmod of a tiny negative value can round back up to exactly 2*pi
    return w >= constants::two_pi ? 0.0 : w;
}

}  // namespace geosat
