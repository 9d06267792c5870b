#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "geosat/random.hpp"
#include "geosat/tle.hpp"
#include "oracles.hpp"

using namespace geosat;

namespace
{
GeometryContext const geo = GeometryContext::geostationary();

char const iss_line1[] = "1 25544U 98067A   08264.51782528 -.00002182  00000-0 -11606-4 0  2927";
char const iss_line2[] = "2 25544  51.6416 247.4627 0006703 130.5360 325.0288 15.72125391563537";

std::string slurp(std::string const& path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

//! Near-GEO record whose sub-satellite point sits at the given longitude.
TleRecord geo_record_at(double longitude_deg)
{
    TleRecord r;
    r.name = "TEST";
    r.catalog_number = 99001;
    r.epoch_year = 2023;
    r.epoch_day = 100.25;
    r.inclination = 0.05;
    r.mean_motion = 1.0027379;
    double const gmst = rad_to_deg(gmst_rad(r.epoch_jd()));
    r.raan = 0;
    r.arg_perigee = 0;
    r.mean_anomaly = std::fmod(gmst + longitude_deg + 720.0, 360.0);
    return r;
}
}  // namespace

TEST(Checksum, KnownElementLines)
{
    EXPECT_EQ(tle_checksum(iss_line1), 7);
    EXPECT_EQ(tle_checksum(iss_line2), 7);
}

TEST(Parse, KnownElementSet)
{
    std::string const text = std::string("ISS (ZARYA)\r\n") + iss_line1 + "\r\n" + iss_line2 + "\r\n";
    auto const parsed = parse_tle(text, true);
    ASSERT_EQ(parsed.records.size(), 1u);
    auto const& r = parsed.records[0];
    EXPECT_EQ(r.name, "ISS (ZARYA)");
    EXPECT_EQ(r.catalog_number, 25544);
    EXPECT_EQ(r.epoch_year, 2008);
    EXPECT_NEAR(r.epoch_day, 264.51782528, 1e-9);
    EXPECT_NEAR(r.inclination, 51.6416, 1e-12);
    EXPECT_NEAR(r.raan, 247.4627, 1e-12);
    EXPECT_NEAR(r.eccentricity, 0.0006703, 1e-15);
    EXPECT_NEAR(r.arg_perigee, 130.5360, 1e-12);
    EXPECT_NEAR(r.mean_anomaly, 325.0288, 1e-12);
    EXPECT_NEAR(r.mean_motion, 15.72125391, 1e-12);
    EXPECT_EQ(r.revolution_number, 56353);

    // two-line form without a name
    auto const bare = parse_tle(std::string(iss_line1) + "\n" + iss_line2 + "\n", true);
    ASSERT_EQ(bare.records.size(), 1u);
    EXPECT_TRUE(bare.records[0].name.empty());
}

TEST(Parse, StrictRejectsCorruption)
{
    std::string bad2 = iss_line2;
    bad2.back() = '8';
    std::string const text = std::string(iss_line1) + "\n" + bad2 + "\n";
    EXPECT_THROW(parse_tle(text, true), TleParseError);
    try
    {
        parse_tle(text, true);
    }
    catch (TleParseError const& e)
    {
        EXPECT_EQ(e.line(), 2u);
    }
    auto const lenient = parse_tle(text, false);
    EXPECT_TRUE(lenient.records.empty());
    ASSERT_EQ(lenient.diagnostics.size(), 1u);
    EXPECT_EQ(lenient.diagnostics[0].line, 2u);
}

TEST(Parse, LenientSkipsOnlyBadGroups)
{
    std::string truncated = iss_line1;
    truncated.resize(40);
    std::string const text = std::string("GOOD\n") + iss_line1 + "\n" + iss_line2 + "\nBROKEN\n"
                             + truncated + "\n" + iss_line2 + "\nGOOD AGAIN\n" + iss_line1
                             + "\n" + iss_line2 + "\n";
    auto const r = parse_tle(text, false);
    ASSERT_EQ(r.records.size(), 2u);
    EXPECT_EQ(r.records[1].name, "GOOD AGAIN");
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_EQ(r.diagnostics[0].line, 5u);
    EXPECT_THROW(parse_tle(text, true), TleParseError);
    EXPECT_THROW(parse_tle(std::string("LONELY\n") + iss_line1 + "\n", true), TleParseError);
}

TEST(Format, RoundTrip)
{
    TleRecord r = geo_record_at(128.0);
    r.eccentricity = 0.0001234;
    r.revolution_number = 4321;
    r.element_set = 999;
    std::string const text = format_tle(r);
    auto const parsed = parse_tle(text, true);
    ASSERT_EQ(parsed.records.size(), 1u);
    auto const& p = parsed.records[0];
    EXPECT_EQ(p.name, r.name);
    EXPECT_EQ(p.catalog_number, r.catalog_number);
    EXPECT_NEAR(p.epoch_day, r.epoch_day, 1e-8);
    EXPECT_NEAR(p.inclination, r.inclination, 5e-5);
    EXPECT_NEAR(p.mean_anomaly, r.mean_anomaly, 5e-5);
    EXPECT_NEAR(p.eccentricity, r.eccentricity, 1e-7);
    EXPECT_NEAR(p.mean_motion, r.mean_motion, 1e-8);
    EXPECT_EQ(p.revolution_number, r.revolution_number);
    EXPECT_EQ(format_tle(p), text);
}

TEST(Time, JulianDate)
{
    EXPECT_DOUBLE_EQ(julian_date_jan1(2000), 2451544.5);
    TleRecord r;
    r.epoch_year = 2000;
    r.epoch_day = 1.5;
    EXPECT_DOUBLE_EQ(r.epoch_jd(), 2451545.0);
}

TEST(Time, SiderealTime)
{
    // 1992-08-20 12:14 UT1 is day 233 of a leap year
    TleRecord r;
    r.epoch_year = 1992;
    r.epoch_day = 233 + (12 + 14 / 60.0) / 24.0;
    EXPECT_NEAR(r.epoch_jd(), 2448855.009722, 1e-6);
    EXPECT_NEAR(rad_to_deg(gmst_rad(r.epoch_jd())), 152.578787810, 1e-5);
    // J2000.0
    EXPECT_NEAR(rad_to_deg(gmst_rad(2451545.0)), 280.46061837, 1e-6);
}

TEST(Longitude, ConstructedPositions)
{
    for (double lon : {0.0, 90.0, 211.5, 359.0})
    {
        double const got = rad_to_deg(subsatellite_longitude(geo_record_at(lon)));
        double diff = std::fmod(got - lon + 540.0, 360.0) - 180.0;
        EXPECT_NEAR(diff, 0.0, 1e-9) << lon;
    }
    TleRecord inclined = geo_record_at(10);
    inclined.inclination = 5;
    EXPECT_THROW(subsatellite_longitude(inclined), DomainError);
    TleRecord leo = geo_record_at(10);
    leo.mean_motion = 15.5;
    EXPECT_THROW(subsatellite_longitude(leo), DomainError);
}

TEST(Snapshot, FixtureContents)
{
    auto const parsed = parse_tle(slurp(GEOSAT_FIXTURE), true);
    EXPECT_EQ(parsed.records.size(), 531u);
    auto const snap = make_geo_snapshot(parsed.records);
    EXPECT_EQ(snap.longitudes.size(), 391u);
    EXPECT_EQ(snap.source_count, 531u);
    long in_gap = 0;
    for (double lon : snap.longitudes)
    {
        double const d = rad_to_deg(lon);
        in_gap += d >= 180 && d < 220;
    }
    // a uniform layout would put about 43 satellites in the 40 deg band
    EXPECT_LT(in_gap, 15);
    EXPECT_EQ(make_geo_snapshot(parsed.records, 20.0).longitudes.size(), 531u);
}

TEST(Snapshot, FixtureIsReproducible)
{
    auto const path = std::filesystem::temp_directory_path() / "geosat_fixture_regen.tle";
    std::string const cmd = std::string("\"") + GEOSAT_FIXTURE_TOOL + "\" \"" + path.string() + "\"";
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    EXPECT_EQ(slurp(path.string()), slurp(GEOSAT_FIXTURE));
    std::filesystem::remove(path);
}

TEST(Snapshot, AverageVisibleCount)
{
    auto const snap = make_geo_snapshot(parse_tle(slurp(GEOSAT_FIXTURE), true).records);
    EXPECT_EQ(average_visible_count(snap, geo, deg_to_rad(85)), 0.0);
    double prev = average_visible_count(snap, geo, 0);
    for (double lat = 5; lat <= 90; lat += 5)
    {
        double const cur = average_visible_count(snap, geo, deg_to_rad(lat));
        EXPECT_LE(cur, prev);
        EXPECT_EQ(cur, average_visible_count(snap, geo, deg_to_rad(-lat)));
        prev = cur;
    }
    // averaging over terminal longitudes removes the gap: mean equals N p_vis up to grid effects
    EXPECT_NEAR(average_visible_count(snap, geo, deg_to_rad(37)) / (391 * p_vis(geo, deg_to_rad(37))),
                1.0,
                0.01);
    EXPECT_EQ(average_visible_count(snap, geo, 0, 1), average_visible_count(snap, geo, 0, 4));
    EXPECT_THROW(average_visible_count(GeoSnapshot{}, geo, 0), DomainError);
}

TEST(Snapshot, UniformSyntheticMatchesBinomialMean)
{
    GeoSnapshot snap;
    auto rng = substream(2718, 0);
    for (int i = 0; i < 10000; ++i)
        snap.longitudes.push_back(constants::two_pi * uniform01(rng));
    for (double lat : {0.0, 37.0, 60.0})
    {
        double const expected = 10000 * p_vis(geo, deg_to_rad(lat));
        EXPECT_NEAR(average_visible_count(snap, geo, deg_to_rad(lat)), expected, 0.02 * expected);
    }
}
