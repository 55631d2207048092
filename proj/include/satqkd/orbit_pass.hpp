#pragma once

#include <string>
#include <vector>

#include "satqkd/constants.hpp"

namespace satqkd::orbit {

/// Circular orbit over a non-rotating spherical Earth.
///
/// Only altitude, the visibility mask and the time step drive the
/// geometry. The remaining orbital elements are kept so a scenario file can
/// carry the full mission setup; they do not enter any computation.
struct OrbitConfig {
    double altitude_m = 750e3;
    double earth_radius_m = 6371e3;
    double gravitational_parameter = 3.986004418e14;  // [m^3/s^2]
    double min_elevation_rad = deg_to_rad(10.0);
    double max_pass_elevation_rad = deg_to_rad(90.0);  // < 90 deg: off-track pass
    double time_step_s = 10.0;

    // Documentation only.
    double inclination_deg = 98.0;
    double raan_deg = 295.0;
    double eccentricity = 1.21e-16;
    double drag_coefficient = 2.2;
    double reflectivity_coefficient = 1.3;

    double semi_major_axis_m() const { return earth_radius_m + altitude_m; }
    double mean_motion() const;  // [rad/s]

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

struct PassSample {
    double t_s = 0.0;  // 0 at maximum elevation
    double elevation_rad = 0.0;
    double zenith_angle_rad = 0.0;
    double slant_range_m = 0.0;
};

/// Range from ground station to spacecraft at the given elevation.
/// Throws DomainError outside [0, pi/2].
double slant_range(double elevation_rad, const OrbitConfig& cfg);

/// Earth central angle between ground station and sub-satellite point.
double central_angle(double elevation_rad, const OrbitConfig& cfg);

/// Elevation seen from the ground station at time t of the pass.
double elevation_at(double t_s, const OrbitConfig& cfg);

/// Samples every time_step_s, symmetric about t = 0, clipped to the mask.
std::vector<PassSample> generate_pass(const OrbitConfig& cfg);

/// Length of the window around t = 0 with elevation >= threshold.
/// Returns 0 when the threshold is at or above the pass maximum.
double pass_duration_above(const OrbitConfig& cfg, double threshold_rad);

/// CSV with columns t_s, elevation_deg, zenith_deg, slant_range_m.
std::string pass_to_csv(const std::vector<PassSample>& pass);

}  // namespace satqkd::orbit
