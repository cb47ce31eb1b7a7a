// Lookahead geometry on a spherical, non-rotating Earth.
//
// Ground speed is an input constant rather than derived from orbital
// mechanics, and the look angle is measured off-nadir at the spacecraft.
#pragma once

namespace dtsim::geometry {

struct OrbitConfig {
    double altitude_km = 500.0;
    double ground_speed_km_s = 7.5;
    double earth_radius_km = 6371.0;

    void validate() const;
};

struct LookaheadGeometry {
    double look_angle_deg = 0.0;
    double central_angle_rad = 0.0; // Earth central angle to the target point
    double ground_distance_km = 0.0; // arc length along the ground track
    double lead_time_s = 0.0;        // time until the target point is at nadir
};

struct GroundFootprint {
    double along_track_center_km = 0.0;
    double across_track_center_km = 0.0;
    double along_track_extent_km = 0.0;
    double across_track_extent_km = 0.0;
};

// Look angles closer than this to the geometric horizon are rejected; the
// spherical triangle becomes ill-conditioned there.
inline constexpr double kHorizonMarginDeg = 0.5;

// Off-nadir angle at which the line of sight grazes the horizon:
// asin(Re / (Re + h)).
double horizon_angle_deg(const OrbitConfig& orbit);

// Spherical-triangle solution. With sin(rho) = Re/(Re+h) the target elevation
// is eps = acos(sin(eta)/sin(rho)), the central angle lambda = 90deg - eta -
// eps, ground distance Re*lambda and lead time distance/v.
LookaheadGeometry lead_time(const OrbitConfig& orbit, double look_angle_deg);

// Flat-Earth cross-check model: (h * tan(eta)) / v.
double flat_earth_lead_time(const OrbitConfig& orbit, double look_angle_deg);

// Flat-Earth projection of a sensor FOV around the boresight ground
// intersection at the given across-track pointing angle.
GroundFootprint footprint_at(const OrbitConfig& orbit, double along_track_pos_km,
                             double pointing_across_track_deg, double sensor_fov_deg);

} // namespace dtsim::geometry
