#pragma once

#include <numbers>

namespace satqkd {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kPlanck = 6.62607015e-34;       // [J s]
inline constexpr double kSpeedOfLight = 299792458.0;    // [m/s]
inline constexpr double kDbPerNeper = 4.342944819032518;  // 10 / ln(10)

constexpr double deg_to_rad(double deg) noexcept { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / kPi; }

/// Fractional power ratio to a positive dB loss.
double loss_db(double fraction);

}  // namespace satqkd
