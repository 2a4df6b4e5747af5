#include <doctest.h>

#include <cmath>

#include "s4cast/errors.hpp"
#include "s4cast/geo.hpp"

using namespace s4cast;

namespace {
constexpr double kLat = -77.83;   // McMurdo-like high-latitude receiver
constexpr double kLon = 166.66;
}  // namespace

TEST_CASE("central angle matches the closed form at pinned elevations") {
    // psi(20 deg) and psi(55 deg), h=350 km, Re=6371 km, evaluated in
    // 30-digit arithmetic and frozen here.
    CHECK(pierce_central_angle_deg(20.0) == doctest::Approx(7.031401217927623593).epsilon(1e-12));
    CHECK(pierce_central_angle_deg(55.0) == doctest::Approx(2.0636438423679786719).epsilon(1e-12));
}

TEST_CASE("central angle decreases with elevation and vanishes at zenith") {
    double prev = pierce_central_angle_deg(1.0);
    for (double e = 5.0; e <= 90.0; e += 5.0) {
        const double psi = pierce_central_angle_deg(e);
        CHECK(psi < prev);
        prev = psi;
    }
    CHECK(pierce_central_angle_deg(90.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("central angle rejects degenerate inputs") {
    CHECK_THROWS_AS(pierce_central_angle_deg(0.0), DataError);
    CHECK_THROWS_AS(pierce_central_angle_deg(-5.0), DataError);
    CHECK_THROWS_AS(pierce_central_angle_deg(30.0, ShellModel{0.0, 6371.0}), DataError);
    CHECK_THROWS_AS(pierce_central_angle_deg(30.0, ShellModel{350.0, 0.0}), DataError);
}

TEST_CASE("pierce point matches the high-precision oracle") {
    // Frozen from a 30-digit independent evaluation of the spherical
    // triangle formulas at the receiver above.
    const auto north = compute_ipp(kLat, kLon, 20.0, 0.0);
    CHECK(north.lat_deg == doctest::Approx(-70.798598782072374702).epsilon(1e-12));
    CHECK(north.lon_deg == doctest::Approx(166.66).epsilon(1e-12));

    const auto east = compute_ipp(kLat, kLon, 20.0, 90.0);
    CHECK(east.lat_deg == doctest::Approx(-75.971351235496754104).epsilon(1e-12));
    CHECK(east.lon_deg == doctest::Approx(196.99073496655020853).epsilon(1e-12));

    const auto southwest = compute_ipp(kLat, kLon, 20.0, 225.0);
    CHECK(southwest.lat_deg == doctest::Approx(-81.272985751715518146).epsilon(1e-12));
    CHECK(southwest.lon_deg == doctest::Approx(131.87531708639858055).epsilon(1e-12));

    const auto high = compute_ipp(kLat, kLon, 55.0, 310.0);
    CHECK(high.lat_deg == doctest::Approx(-76.41263771620020169).epsilon(1e-12));
    CHECK(high.lon_deg == doctest::Approx(159.91683826735388693).epsilon(1e-12));
}

TEST_CASE("zenith pierce point sits at the receiver") {
    const auto ipp = compute_ipp(kLat, kLon, 90.0, 123.0);
    CHECK(ipp.lat_deg == doctest::Approx(kLat).epsilon(1e-12));
    CHECK(ipp.lon_deg == doctest::Approx(kLon).epsilon(1e-12));
}

TEST_CASE("due north and due south keep the receiver longitude") {
    for (double e : {10.0, 30.0, 70.0}) {
        CHECK(compute_ipp(10.0, 50.0, e, 0.0).lon_deg == doctest::Approx(50.0).epsilon(1e-12));
        CHECK(compute_ipp(10.0, 50.0, e, 180.0).lon_deg == doctest::Approx(50.0).epsilon(1e-12));
    }
}

TEST_CASE("a 360-degree azimuth wrap changes nothing") {
    const auto a = compute_ipp(kLat, kLon, 25.0, 45.0);
    const auto b = compute_ipp(kLat, kLon, 25.0, 405.0);
    CHECK(a.lat_deg == doctest::Approx(b.lat_deg).epsilon(1e-12));
    CHECK(a.lon_deg == doctest::Approx(b.lon_deg).epsilon(1e-12));
}

TEST_CASE("pierce point displacement equals the central angle on the sphere") {
    // Angular distance between receiver and IPP must equal psi for any
    // azimuth (property of the spherical triangle construction).
    const double deg = 3.14159265358979323846 / 180.0;
    for (double az = 0.0; az < 360.0; az += 30.0) {
        for (double e : {15.0, 40.0, 75.0}) {
            const double psi = pierce_central_angle_deg(e) * deg;
            const auto ipp = compute_ipp(kLat, kLon, e, az);
            const double phi1 = kLat * deg, phi2 = ipp.lat_deg * deg;
            const double dlon = (ipp.lon_deg - kLon) * deg;
            const double cos_dist = std::sin(phi1) * std::sin(phi2) +
                                    std::cos(phi1) * std::cos(phi2) * std::cos(dlon);
            CHECK(std::acos(std::min(1.0, cos_dist)) == doctest::Approx(psi).epsilon(1e-9));
        }
    }
}
