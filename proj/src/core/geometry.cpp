#include "core/geometry.hpp"

#include "core/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace dtsim::geometry {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double deg2rad(double deg) { return deg * kDegToRad; }

} // namespace

void OrbitConfig::validate() const {
    require(altitude_km > 0.0, Errc::invalid_argument,
            "orbit: altitude_km must be > 0");
    require(ground_speed_km_s > 0.0, Errc::invalid_argument,
            "orbit: ground_speed_km_s must be > 0");
    require(earth_radius_km > 0.0, Errc::invalid_argument,
            "orbit: earth_radius_km must be > 0");
}

double horizon_angle_deg(const OrbitConfig& orbit) {
    orbit.validate();
    const double sin_rho = orbit.earth_radius_km /
                           (orbit.earth_radius_km + orbit.altitude_km);
    return std::asin(sin_rho) / kDegToRad;
}

LookaheadGeometry lead_time(const OrbitConfig& orbit, double look_angle_deg) {
    orbit.validate();
    require(look_angle_deg >= 0.0 && look_angle_deg < 90.0, Errc::invalid_argument,
            "look_angle_deg must be in [0, 90): got " + std::to_string(look_angle_deg));
    const double horizon = horizon_angle_deg(orbit);
    require(look_angle_deg < horizon - kHorizonMarginDeg, Errc::invalid_argument,
            "look_angle_deg " + std::to_string(look_angle_deg) +
                " is within " + std::to_string(kHorizonMarginDeg) +
                " deg of the horizon (" + std::to_string(horizon) + " deg)");

    const double eta = deg2rad(look_angle_deg);
    const double sin_rho = orbit.earth_radius_km /
                           (orbit.earth_radius_km + orbit.altitude_km);
    const double elevation = std::acos(std::sin(eta) / sin_rho);
    const double lambda = std::numbers::pi / 2.0 - eta - elevation;

    LookaheadGeometry g;
    g.look_angle_deg = look_angle_deg;
    g.central_angle_rad = lambda;
    g.ground_distance_km = orbit.earth_radius_km * lambda;
    g.lead_time_s = g.ground_distance_km / orbit.ground_speed_km_s;
    return g;
}

double flat_earth_lead_time(const OrbitConfig& orbit, double look_angle_deg) {
    orbit.validate();
    require(look_angle_deg >= 0.0 && look_angle_deg < 90.0, Errc::invalid_argument,
            "look_angle_deg must be in [0, 90)");
    return orbit.altitude_km * std::tan(deg2rad(look_angle_deg)) /
           orbit.ground_speed_km_s;
}

GroundFootprint footprint_at(const OrbitConfig& orbit, double along_track_pos_km,
                             double pointing_across_track_deg, double sensor_fov_deg) {
    orbit.validate();
    require(sensor_fov_deg >= 0.0, Errc::invalid_argument, "sensor_fov_deg must be >= 0");
    require(std::abs(pointing_across_track_deg) + sensor_fov_deg / 2.0 < 90.0,
            Errc::invalid_argument,
            "footprint_at: |pointing| + fov/2 must stay below 90 deg");

    const double h = orbit.altitude_km;
    const double p = deg2rad(pointing_across_track_deg);
    const double half = deg2rad(sensor_fov_deg) / 2.0;
    const double slant = h / std::cos(p);

    GroundFootprint fp;
    fp.along_track_center_km = along_track_pos_km;
    fp.across_track_center_km = h * std::tan(p);
    fp.across_track_extent_km = h * (std::tan(p + half) - std::tan(p - half));
    fp.along_track_extent_km = 2.0 * slant * std::tan(half);
    return fp;
}

} // namespace dtsim::geometry
