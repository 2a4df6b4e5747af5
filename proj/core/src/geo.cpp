#include "s4cast/geo.hpp"

#include <algorithm>
#include <cmath>

#include "s4cast/csv.hpp"
#include "s4cast/errors.hpp"

namespace s4cast {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double deg2rad(double d) { return d * kPi / 180.0; }
constexpr double rad2deg(double r) { return r * 180.0 / kPi; }
}  // namespace

double pierce_central_angle_deg(double elevation_deg, const ShellModel& shell) {
    if (shell.shell_height_km <= 0.0 || shell.earth_radius_km <= 0.0) {
        throw DataError("shell model requires positive radius and height");
    }
    if (elevation_deg <= 0.0 || elevation_deg > 90.0) {
        throw DataError("elevation " + format_double(elevation_deg) +
                        " outside (0, 90] for pierce-point mapping");
    }
    double e = deg2rad(elevation_deg);
    double ratio = shell.earth_radius_km / (shell.earth_radius_km + shell.shell_height_km);
    double psi = kPi / 2.0 - e - std::asin(ratio * std::cos(e));
    return rad2deg(psi);
}

IppCoordinate compute_ipp(double receiver_lat_deg, double receiver_lon_deg,
                          double elevation_deg, double azimuth_deg,
                          const ShellModel& shell) {
    double psi = deg2rad(pierce_central_angle_deg(elevation_deg, shell));
    double phi = deg2rad(receiver_lat_deg);
    double az = deg2rad(azimuth_deg);

    double sin_lat = std::sin(phi) * std::cos(psi) + std::cos(phi) * std::sin(psi) * std::cos(az);
    sin_lat = std::clamp(sin_lat, -1.0, 1.0);
    double lat = std::asin(sin_lat);

    IppCoordinate ipp;
    ipp.lat_deg = rad2deg(lat);

    double cos_lat = std::cos(lat);
    if (cos_lat == 0.0) {
        ipp.lon_deg = receiver_lon_deg;  // pole convention
        return ipp;
    }
    double sin_dlon = std::clamp(std::sin(psi) * std::sin(az) / cos_lat, -1.0, 1.0);
    ipp.lon_deg = receiver_lon_deg + rad2deg(std::asin(sin_dlon));
    return ipp;
}

}  // namespace s4cast
