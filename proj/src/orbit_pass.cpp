#include "satqkd/orbit_pass.hpp"

#include <algorithm>
#include <cmath>

#include "satqkd/error.hpp"
#include "satqkd/io.hpp"

namespace satqkd::orbit {

double OrbitConfig::mean_motion() const {
    const double a = semi_major_axis_m();
    return std::sqrt(gravitational_parameter / (a * a * a));
}

void OrbitConfig::validate() const {
    if (!(altitude_m > 0.0)) throw ConfigError("orbit.altitude_m", "must be > 0");
    if (!(earth_radius_m > 0.0)) throw ConfigError("orbit.earth_radius_m", "must be > 0");
    if (!(gravitational_parameter > 0.0))
        throw ConfigError("orbit.gravitational_parameter", "must be > 0");
    if (!(min_elevation_rad >= 0.0 && min_elevation_rad < kPi / 2))
        throw ConfigError("orbit.min_elevation_deg", "must lie in [0, 90)");
    if (!(max_pass_elevation_rad > min_elevation_rad && max_pass_elevation_rad <= kPi / 2))
        throw ConfigError("orbit.max_pass_elevation_deg", "must lie in (min_elevation, 90]");
    if (!(time_step_s > 0.0)) throw ConfigError("orbit.time_step_s", "must be > 0");
    if (!(eccentricity >= 0.0 && eccentricity < 1e-6))
        throw ConfigError("orbit.eccentricity", "only circular orbits are modeled");
}

namespace {
void check_elevation(double elevation_rad) {
    if (!(elevation_rad >= 0.0 && elevation_rad <= kPi / 2 + 1e-12))
        throw DomainError("elevation must lie in [0, pi/2], got " + std::to_string(elevation_rad));
}
}  // namespace

double slant_range(double elevation_rad, const OrbitConfig& cfg) {
    check_elevation(elevation_rad);
    const double re = cfg.earth_radius_m;
    const double a = cfg.semi_major_axis_m();
    const double c = re * std::cos(elevation_rad);
    return std::sqrt(a * a - c * c) - re * std::sin(elevation_rad);
}

double central_angle(double elevation_rad, const OrbitConfig& cfg) {
    check_elevation(elevation_rad);
    const double ratio = std::clamp(cfg.earth_radius_m * std::cos(elevation_rad) / cfg.semi_major_axis_m(), -1.0, 1.0);
    return std::acos(ratio) - elevation_rad;
}

double elevation_at(double t_s, const OrbitConfig& cfg) {
    const double beta = central_angle(cfg.max_pass_elevation_rad, cfg);
    const double cos_psi = std::cos(beta) * std::cos(cfg.mean_motion() * t_s);
    const double sin_psi = std::sqrt(std::max(0.0, 1.0 - cos_psi * cos_psi));
    return std::atan2(cos_psi - cfg.earth_radius_m / cfg.semi_major_axis_m(), sin_psi);
}

std::vector<PassSample> generate_pass(const OrbitConfig& cfg) {
    cfg.validate();
    std::vector<PassSample> half;
    for (long k = 0;; ++k) {
        const double t = static_cast<double>(k) * cfg.time_step_s;
        const double el = elevation_at(t, cfg);
        if (el < cfg.min_elevation_rad || cfg.mean_motion() * t > kPi) break;
        half.push_back({t, el, kPi / 2 - el, slant_range(el, cfg)});
    }

    std::vector<PassSample> pass;
    pass.reserve(2 * half.size());
    for (auto it = half.rbegin(); it != half.rend(); ++it) {
        if (it->t_s == 0.0) continue;
        PassSample s = *it;
        s.t_s = -s.t_s;
        pass.push_back(s);
    }
    pass.insert(pass.end(), half.begin(), half.end());
    return pass;
}

double pass_duration_above(const OrbitConfig& cfg, double threshold_rad) {
    cfg.validate();
    if (threshold_rad < cfg.min_elevation_rad)
        throw DomainError("threshold below the visibility mask");
    if (threshold_rad >= cfg.max_pass_elevation_rad) return 0.0;
    const double psi = central_angle(threshold_rad, cfg);
    const double beta = central_angle(cfg.max_pass_elevation_rad, cfg);
    const double phi = std::acos(std::clamp(std::cos(psi) / std::cos(beta), -1.0, 1.0));
    return 2.0 * phi / cfg.mean_motion();
}

std::string pass_to_csv(const std::vector<PassSample>& pass) {
    io::CsvTable table({"t_s", "elevation_deg", "zenith_deg", "slant_range_m"});
    for (const auto& s : pass)
        table.add_row({s.t_s, rad_to_deg(s.elevation_rad), rad_to_deg(s.zenith_angle_rad), s.slant_range_m});
    return table.str();
}

}  // namespace satqkd::orbit
