#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "units.hpp"

namespace geosat
{
//---------------------------------------------------------------------------//
/*!
 * Orbital elements of one two-line element set. Angles in degrees.
 */
struct TleRecord
{
    std::string name;
    int catalog_number{0};
    int epoch_year{2000};     //!< four-digit year
    double epoch_day{1};      //!< fractional day of year, 1.0 = Jan 1 00:00
    double inclination{0};    //!< deg
    double raan{0};           //!< deg
    double eccentricity{0};   //!< [0, 1)
    double arg_perigee{0};    //!< deg
    double mean_anomaly{0};   //!< deg
    double mean_motion{0};    //!< rev/day
    int revolution_number{0};
    int element_set{0};

    //! Julian date (UTC treated as UT1).
    double epoch_jd() const;
};

struct TleDiagnostic
{
    std::size_t line{0};
    std::string message;
};

struct TleParseResult
{
    std::vector<TleRecord> records;
    std::vector<TleDiagnostic> diagnostics;  //!< skipped groups (lenient mode)
};

//---------------------------------------------------------------------------//
// TIME
//---------------------------------------------------------------------------//
//! Julian date of 00:00 UTC on January 1 of a Gregorian year.
inline double julian_date_jan1(int year)
{
    // valid 1901-2099
    return 367.0 * year - std::floor(7.0 * year / 4.0) + 31.0 + 1721013.5;
}

inline double TleRecord::epoch_jd() const
{
    return julian_date_jan1(epoch_year) + (epoch_day - 1.0);
}

/*!
 * Greenwich mean sidereal time (IAU 1982) in [0, 2 pi).
 */
inline double gmst_rad(double jd_ut1)
{
    double const t = (jd_ut1 - 2451545.0) / 36525.0;
    double seconds = 67310.54841 + (876600.0 * 3600.0 + 8640184.812866) * t
                     + 0.093104 * t * t - 6.2e-6 * t * t * t;
    seconds = std::fmod(seconds, 86400.0);
    return wrap_two_pi(seconds * constants::two_pi / 86400.0);
}

//---------------------------------------------------------------------------//
// PARSING
//---------------------------------------------------------------------------//
//! Modulo-10 checksum over the first 68 columns: digits plus one per '-'.
inline int tle_checksum(std::string_view line)
{
    int sum = 0;
    for (char c : line.substr(0, 68))
    {
        if (c >= '0' && c <= '9')
            sum += c - '0';
        else if (c == '-')
            sum += 1;
    }
    return sum % 10;
}

namespace detail
{
inline std::string_view trim(std::string_view s)
{
    auto const b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos)
        return {};
    auto const e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

//! Columns [first, last], 1-based inclusive as in the format definition.
inline std::string_view columns(std::string_view line, std::size_t first, std::size_t last)
{
    return line.substr(first - 1, last - first + 1);
}

inline double parse_real(std::string_view field, std::size_t line, char const* what)
{
    auto const s = trim(field);
    double v = 0;
    auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw TleParseError(std::string("bad ") + what + " field '" + std::string(field) + "'",
                            line);
    return v;
}

inline int parse_int(std::string_view field, std::size_t line, char const* what)
{
    auto const s = trim(field);
    int v = 0;
    auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw TleParseError(std::string("bad ") + what + " field '" + std::string(field) + "'",
                            line);
    return v;
}

inline void check_element_line(std::string_view text, char number, std::size_t line)
{
    if (text.size() < 69)
    {
        throw TleParseError("truncated line (" + std::to_string(text.size())
                                + " characters, expected 69)",
                            line);
    }
    if (text.size() > 69)
        throw TleParseError("line longer than 69 characters", line);
    if (text[0] != number || text[1] != ' ')
        throw TleParseError(std::string("expected element line ") + number, line);
    char const c = text[68];
    if (c < '0' || c > '9' || tle_checksum(text) != c - '0')
    {
        throw TleParseError("checksum mismatch (computed " + std::to_string(tle_checksum(text))
                                + ")",
                            line);
    }
}

inline TleRecord parse_group(std::string_view name,
                             std::string_view l1,
                             std::size_t n1,
                             std::string_view l2,
                             std::size_t n2)
{
    check_element_line(l1, '1', n1);
    check_element_line(l2, '2', n2);

    TleRecord r;
    r.name = std::string(trim(name));
    if (r.name.rfind("0 ", 0) == 0)
        r.name = std::string(trim(std::string_view(r.name).substr(2)));
    r.catalog_number = parse_int(columns(l1, 3, 7), n1, "catalog number");
    if (parse_int(columns(l2, 3, 7), n2, "catalog number") != r.catalog_number)
        throw TleParseError("catalog number differs between lines 1 and 2", n2);
    int const yy = parse_int(columns(l1, 19, 20), n1, "epoch year");
    r.epoch_year = yy < 57 ? 2000 + yy : 1900 + yy;
    r.epoch_day = parse_real(columns(l1, 21, 32), n1, "epoch day");
    auto const elset = trim(columns(l1, 65, 68));
    r.element_set = elset.empty() ? 0 : parse_int(elset, n1, "element set");

    r.inclination = parse_real(columns(l2, 9, 16), n2, "inclination");
    r.raan = parse_real(columns(l2, 18, 25), n2, "RAAN");
    auto const ecc = trim(columns(l2, 27, 33));
    r.eccentricity = parse_int(ecc, n2, "eccentricity") / std::pow(10.0, ecc.size());
    r.arg_perigee = parse_real(columns(l2, 35, 42), n2, "argument of perigee");
    r.mean_anomaly = parse_real(columns(l2, 44, 51), n2, "mean anomaly");
    r.mean_motion = parse_real(columns(l2, 53, 63), n2, "mean motion");
    auto const rev = trim(columns(l2, 64, 68));
    r.revolution_number = rev.empty() ? 0 : parse_int(rev, n2, "revolution number");

    if (!(r.inclination >= 0 && r.inclination <= 180))
        throw TleParseError("inclination outside [0, 180]", n2);
    if (!(r.eccentricity >= 0 && r.eccentricity < 1))
        throw TleParseError("eccentricity outside [0, 1)", n2);
    if (!(r.mean_motion > 0))
        throw TleParseError("mean motion must be positive", n2);
    return r;
}
}  // namespace detail

/*!
 * Parse 2-line or 3-line (name + elements) groups.
 *
 * In strict mode the first malformed group throws TleParseError; otherwise
 * it is skipped and reported in the diagnostics with its line number.
 */
inline TleParseResult parse_tle(std::string_view text, bool strict = false)
{
    struct Line
    {
        std::string_view text;
        std::size_t number;
    };
    std::vector<Line> lines;
    std::size_t number = 0;
    while (!text.empty())
    {
        ++number;
        auto const eol = text.find('\n');
        std::string_view l = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        while (!l.empty() && (l.back() == '\r' || l.back() == ' '))
            l.remove_suffix(1);
        if (!l.empty())
            lines.push_back({l, number});
    }

    auto is_element = [](std::string_view l, char c) {
        return l.size() >= 2 && l[0] == c && l[1] == ' ';
    };

    TleParseResult result;
    std::size_t i = 0;
    while (i < lines.size())
    {
        bool const named = !is_element(lines[i].text, '1');
        std::size_t const first = named ? i + 1 : i;
        std::size_t consumed = named ? 3 : 2;
        try
        {
            if (first + 1 >= lines.size())
            {
                consumed = lines.size() - i;
                throw TleParseError("incomplete element set", lines[i].number);
            }
            if (!is_element(lines[first + 1].text, '2'))
            {
                consumed = first + 1 - i;
                throw TleParseError("expected element line 2", lines[first + 1].number);
            }
            result.records.push_back(detail::parse_group(named ? lines[i].text : "",
                                                         lines[first].text,
                                                         lines[first].number,
                                                         lines[first + 1].text,
                                                         lines[first + 1].number));
        }
        catch (TleParseError const& e)
        {
            if (strict)
                throw;
            result.diagnostics.push_back({e.line(), e.what()});
        }
        i += consumed;
    }
    return result;
}

//! Render a record as name line (if any) plus two element lines, LF-terminated.
inline std::string format_tle(TleRecord const& r)
{
    char l1[80];
    char l2[80];
    int const yy = r.epoch_year % 100;
    std::snprintf(l1,
                  sizeof l1,
                  "1 %05dU %-8s %02d%012.8f  .00000000  00000-0  00000-0 0 %4d",
                  r.catalog_number,
                  "",
                  yy,
                  r.epoch_day,
                  r.element_set % 10000);
    auto const ecc = static_cast<long>(std::lround(r.eccentricity * 1e7));
    std::snprintf(l2,
                  sizeof l2,
                  "2 %05d %8.4f %8.4f %07ld %8.4f %8.4f %11.8f%5d",
                  r.catalog_number,
                  r.inclination,
                  r.raan,
                  ecc,
                  r.arg_perigee,
                  r.mean_anomaly,
                  r.mean_motion,
                  r.revolution_number % 100000);
    std::string out;
    if (!r.name.empty())
        out += r.name + "\n";
    for (char const* l : {l1, l2})
    {
        std::string line(l);
        if (line.size() != 68)
            throw DomainError("element value does not fit its TLE column");
        line += static_cast<char>('0' + tle_checksum(line));
        out += line + "\n";
    }
    return out;
}

//---------------------------------------------------------------------------//
// GEOSTATIONARY SNAPSHOT
//---------------------------------------------------------------------------//
inline constexpr double default_inclination_threshold_deg = 1.0;
inline constexpr double geo_mean_motion_tolerance = 0.01;

/*!
 * Earth-fixed longitude (rad, [0, 2 pi)) of a near-geostationary satellite.
 *
 * Treats the orbit as circular and equatorial: the right ascension of the
 * satellite is raan + argp + M, less GMST at the epoch.
 */
inline double subsatellite_longitude(TleRecord const& r,
                                     double inclination_threshold_deg
                                     = default_inclination_threshold_deg)
{
    if (!(r.inclination < inclination_threshold_deg))
        throw DomainError("inclination " + std::to_string(r.inclination)
                          + " deg not below the geostationary threshold");
    if (std::abs(r.mean_motion - constants::geo_mean_motion_rev_per_day)
        > geo_mean_motion_tolerance)
    {
        throw DomainError("mean motion " + std::to_string(r.mean_motion)
                          + " rev/day is not geosynchronous");
    }
    double const ra = deg_to_rad(r.raan + r.arg_perigee + r.mean_anomaly);
    return wrap_two_pi(ra - gmst_rad(r.epoch_jd()));
}

struct GeoSnapshot
{
    std::vector<double> longitudes;  //!< rad
    std::size_t source_count{0};     //!< records before filtering
    double inclination_threshold_deg{default_inclination_threshold_deg};
};

//! Keep near-geostationary records with inclination below the threshold.
inline GeoSnapshot make_geo_snapshot(std::vector<TleRecord> const& records,
                                     double inclination_threshold_deg
                                     = default_inclination_threshold_deg)
{
    GeoSnapshot snap;
    snap.source_count = records.size();
    snap.inclination_threshold_deg = inclination_threshold_deg;
    for (TleRecord const& r : records)
    {
        if (r.inclination >= inclination_threshold_deg
            || std::abs(r.mean_motion - constants::geo_mean_motion_rev_per_day)
                   > geo_mean_motion_tolerance)
        {
            continue;
        }
        snap.longitudes.push_back(subsatellite_longitude(r, inclination_threshold_deg));
    }
    return snap;
}

/*!
 * Mean number of snapshot satellites above the horizon, averaged over
 * terminal longitudes 0, 1, ..., 359 deg at latitude phi.
 */
inline double average_visible_count(GeoSnapshot const& snap,
                                    GeometryContext const& ctx,
                                    double phi,
                                    unsigned workers = 1)
{
    if (snap.longitudes.empty())
        throw DomainError("snapshot has no satellites");
    detail::check_latitude(phi);
    std::vector<Vec3> sats;
    sats.reserve(snap.longitudes.size());
    for (double lon : snap.longitudes)
        sats.push_back(orbit_position(ctx, lon));

    constexpr std::size_t grid = 360;
    std::vector<long> counts(grid, 0);
    parallel_for(grid, workers, [&](std::size_t k) {
        auto const t = TerminalPosition::at(ctx, phi, deg_to_rad(static_cast<double>(k)));
        counts[k] = std::count_if(sats.begin(), sats.end(), [&](Vec3 const& s) {
            return above_horizon(t, s);
        });
    });
    long total = 0;
    for (long c : counts)
        total += c;
    return static_cast<double>(total) / grid;
}

}  // namespace geosat
