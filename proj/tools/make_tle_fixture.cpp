// Writes the pinned synthetic GEO element-set fixture used by the tests.
//
// 391 near-geostationary objects (inclination below 1 deg) whose sub-satellite
// longitudes avoid the 180-220 deg band, mixed with inclined geosynchronous
// objects that the inclination filter must drop. Output is deterministic.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "geosat/random.hpp"
#include "geosat/tle.hpp"

int main(int argc, char** argv)
{
    using namespace geosat;
    std::string const path = argc > 1 ? argv[1] : "data/geo_fixture.tle";
    constexpr int n_geo = 391;
    constexpr int n_inclined = 140;

    Xoshiro256pp rng(20231021);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * uniform01(rng); };

    TleRecord base;
    base.epoch_year = 2023;
    base.epoch_day = 294.5;
    double const gmst_deg = rad_to_deg(gmst_rad(base.epoch_jd()));

    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        std::cerr << "cannot write " << path << "\n";
        return 1;
    }

    int geo = 0;
    int inclined = 0;
    int catalog = 20001;
    while (geo < n_geo || inclined < n_inclined)
    {
        // roughly one inclined object per three near-GEO ones
        bool const make_inclined = inclined < n_inclined
                                   && (geo >= n_geo || uniform01(rng) < 0.264);
        TleRecord r = base;
        r.catalog_number = catalog++;
        r.element_set = 999;
        r.raan = std::round(uniform(0, 360) * 1e4) / 1e4;
        r.arg_perigee = std::round(uniform(0, 360) * 1e4) / 1e4;
        r.eccentricity = std::round(uniform(1e-5, 6e-4) * 1e7) / 1e7;
        r.revolution_number = static_cast<int>(uniform(100, 20000));

        double longitude = 0;
        if (make_inclined)
        {
            r.inclination = uniform(1.2, 15.0);
            r.mean_motion = constants::geo_mean_motion_rev_per_day + uniform(-0.002, 0.002);
            longitude = uniform(0, 360);
            char name[32];
            std::snprintf(name, sizeof name, "FIXTURE INCL %03d", ++inclined);
            r.name = name;
        }
        else
        {
            r.inclination = uniform(0.001, 0.95);
            r.mean_motion = constants::geo_mean_motion_rev_per_day + uniform(-3e-4, 3e-4);
            do
            {
                longitude = uniform(0, 360);
            } while (longitude >= 180 && longitude < 220 && uniform01(rng) < 0.9);
            char name[32];
            std::snprintf(name, sizeof name, "FIXTURE GEO %03d", ++geo);
            r.name = name;
        }
        r.inclination = std::round(r.inclination * 1e4) / 1e4;
        r.mean_motion = std::round(r.mean_motion * 1e8) / 1e8;
        double ma = std::fmod(longitude + gmst_deg - r.raan - r.arg_perigee, 360.0);
        if (ma < 0)
            ma += 360;
        r.mean_anomaly = std::round(ma * 1e4) / 1e4;
        if (r.mean_anomaly >= 360)
            r.mean_anomaly = 0;
        out << format_tle(r);
    }
    std::cout << "wrote " << geo << " near-GEO and " << inclined << " inclined records to "
              << path << "\n";
    return 0;
}
