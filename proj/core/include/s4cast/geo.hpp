#pragma once

namespace s4cast {

/// Single-layer ionosphere: a spherical shell at fixed altitude above a
/// spherical Earth.
struct ShellModel {
    double shell_height_km = 350.0;
    double earth_radius_km = 6371.0;
};

/// Pierce-point coordinates. Longitude is in the raw convention here (it may
/// be negative or exceed 180); the preprocessing stage folds it into [0, 360).
struct IppCoordinate {
    double lat_deg = 0.0;
    double lon_deg = 0.0;
};

/// Earth-central angle between receiver and pierce point:
///   psi = 90 - E - asin( Re/(Re+h) * cos E )   (degrees).
/// Monotonically decreasing in elevation; zero at zenith.
/// Throws DataError when elevation_deg <= 0 or the shell model is degenerate.
double pierce_central_angle_deg(double elevation_deg, const ShellModel& shell = {});

/// Map a line of sight (elevation/azimuth from a receiver) to the point where
/// it crosses the thin shell:
///   lat = asin( sin(phi) cos(psi) + cos(phi) sin(psi) cos(A) )
///   lon = lambda + asin( sin(psi) sin(A) / cos(lat) )
/// If the pierce point lands exactly on a pole the longitude is defined as the
/// receiver longitude.
IppCoordinate compute_ipp(double receiver_lat_deg, double receiver_lon_deg,
                          double elevation_deg, double azimuth_deg,
                          const ShellModel& shell = {});

}  // namespace s4cast
