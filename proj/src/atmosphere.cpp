#include "satqkd/atmosphere.hpp"

#include <algorithm>
#include <cmath>

#include "satqkd/error.hpp"

namespace satqkd::atmosphere {

namespace {
bool is_fraction(double v) { return v > 0.0 && v <= 1.0; }

void check_zenith(double zenith_angle_rad) {
    if (!(zenith_angle_rad >= -1e-12 && zenith_angle_rad <= kPi / 2 + 1e-12))
        throw DomainError("zenith angle must lie in [0, pi/2], got " + std::to_string(zenith_angle_rad));
}
}  // namespace

void AtmosphereModel::validate() const {
    if (!is_fraction(tau_zenith)) throw ConfigError("atmosphere.tau_zenith", "must lie in (0, 1]");
    if (!is_fraction(dop_zenith)) throw ConfigError("atmosphere.dop_zenith", "must lie in (0, 1]");
    if (!is_fraction(dop_horizon)) throw ConfigError("atmosphere.dop_horizon", "must lie in (0, 1]");
    if (!(secant_cap_rad > 0.0 && secant_cap_rad < kPi / 2))
        throw ConfigError("atmosphere.secant_cap_deg", "must lie in (0, 90)");
    if (!(depolarization_exponent > 0.0))
        throw ConfigError("atmosphere.depolarization_exponent", "must be > 0");
    if (dop_interpolation == DopInterpolation::table) {
        if (dop_table.size() < 2) throw ConfigError("atmosphere.dop_table", "needs at least two rows");
        for (std::size_t i = 0; i < dop_table.size(); ++i) {
            const auto& [el, v] = dop_table[i];
            if (!is_fraction(v)) throw ConfigError("atmosphere.dop_table", "DoP values must lie in (0, 1]");
            if (el < 0.0 || el > 90.0) throw ConfigError("atmosphere.dop_table", "elevations must lie in [0, 90]");
            if (i && !(el > dop_table[i - 1].first))
                throw ConfigError("atmosphere.dop_table", "elevations must be strictly ascending");
        }
    }
}

void BackgroundModel::validate() const {
    if (!(natural_brightness >= 0.0)) throw ConfigError("background.natural_brightness", "must be >= 0");
    if (!(artificial_brightness >= 0.0)) throw ConfigError("background.artificial_brightness", "must be >= 0");
    if (radiance_conversion && !(*radiance_conversion > 0.0))
        throw ConfigError("background.radiance_conversion", "must be > 0");
    if (!(zenith_counts_target > 0.0)) throw ConfigError("background.zenith_counts_target", "must be > 0");
    if (!is_fraction(gating_factor)) throw ConfigError("background.gating_factor", "must lie in (0, 1]");
    if (!(airmass_cap_rad > 0.0 && airmass_cap_rad < kPi / 2))
        throw ConfigError("background.airmass_cap_deg", "must lie in (0, 90)");
    if (!(wavelength_m > 0.0)) throw ConfigError("background.wavelength_m", "must be > 0");
    if (!(reference_zenith_rad > 0.0 && reference_zenith_rad <= airmass_cap_rad))
        throw ConfigError("background.reference_zenith_deg", "must lie in (0, airmass cap]");
    if (!(reference_counts > 0.0)) throw ConfigError("background.reference_counts", "must be > 0");
    if (!(elevation_floor_rad >= 0.0 && elevation_floor_rad < kPi / 2))
        throw ConfigError("background.elevation_floor_deg", "must lie in [0, 90)");
    if (!(snr_exponent > 0.0)) throw ConfigError("background.snr_exponent", "must be > 0");
}

double capped_secant(double zenith_angle_rad, double cap_rad) {
    return 1.0 / std::cos(std::min(zenith_angle_rad, cap_rad));
}

double airmass(double zenith_angle_rad, AirmassModel model, double cap_rad) {
    check_zenith(zenith_angle_rad);
    if (model == AirmassModel::secant) return capped_secant(zenith_angle_rad, cap_rad);
    // Kasten & Young (1989), finite at the horizon.
    const double z = std::min(zenith_angle_rad, cap_rad);
    return 1.0 / (std::cos(z) + 0.50572 * std::pow(96.07995 - rad_to_deg(z), -1.6364));
}

double transmissivity(double zenith_angle_rad, const AtmosphereModel& m) {
    check_zenith(zenith_angle_rad);
    return std::pow(m.tau_zenith, capped_secant(zenith_angle_rad, m.secant_cap_rad));
}

double dop(double elevation_rad, const AtmosphereModel& m) {
    if (!(elevation_rad >= -1e-12 && elevation_rad <= kPi / 2 + 1e-12))
        throw DomainError("elevation must lie in [0, pi/2]");
    if (m.dop_interpolation == DopInterpolation::table) {
        const double el = rad_to_deg(elevation_rad);
        const auto& t = m.dop_table;
        if (el <= t.front().first) return t.front().second;
        if (el >= t.back().first) return t.back().second;
        auto hi = std::upper_bound(t.begin(), t.end(), el,
                                   [](double v, const auto& row) { return v < row.first; });
        auto lo = hi - 1;
        const double w = (el - lo->first) / (hi->first - lo->first);
        return lo->second + w * (hi->second - lo->second);
    }
    const double s = capped_secant(kPi / 2 - elevation_rad, m.secant_cap_rad);
    const double s_max = 1.0 / std::cos(m.secant_cap_rad);
    const double w = (s - 1.0) / (s_max - 1.0);
    return m.dop_zenith + w * (m.dop_horizon - m.dop_zenith);
}

double depolarization_loss_db(double dop_value, double exponent) {
    if (!(dop_value > 0.0 && dop_value <= 1.0)) throw DomainError("DoP must lie in (0, 1]");
    return -10.0 * exponent * std::log10(dop_value);
}

namespace {
// Counts per unit radiance conversion, gated.
double counts_per_conversion(const BackgroundModel& b, const beam::ReceiverConfig& rx) {
    const double brightness = b.natural_brightness + b.artificial_brightness;
    const double solid_angle = kPi * rx.field_of_view_rad * rx.field_of_view_rad;
    const double area = 0.25 * kPi * rx.aperture_diameter_m * rx.aperture_diameter_m;
    return b.gating_factor * brightness * solid_angle * rx.quantum_efficiency * area /
           beam::photon_energy(b.wavelength_m);
}
}  // namespace

double radiance_conversion_for(const BackgroundModel& b, const beam::ReceiverConfig& rx,
                               double target_cps) {
    const double per_k = counts_per_conversion(b, rx);
    if (!(per_k > 0.0)) throw DomainError("zero sky brightness cannot be calibrated");
    return target_cps / per_k;
}

double background_counts_zenith(const BackgroundModel& b, const beam::ReceiverConfig& rx) {
    const double k = b.radiance_conversion ? *b.radiance_conversion
                                           : radiance_conversion_for(b, rx, b.zenith_counts_target);
    return k * counts_per_conversion(b, rx);
}

double background_profile_exponent(const BackgroundModel& b, const beam::ReceiverConfig& rx) {
    const double n0 = background_counts_zenith(b, rx);
    if (!(n0 > 0.0)) return 0.0;
    const double x_ref = airmass(b.reference_zenith_rad, b.airmass_model, b.airmass_cap_rad);
    return -std::log(b.reference_counts / n0) / std::log(x_ref);
}

double background_counts(double elevation_rad, const BackgroundModel& b,
                         const beam::ReceiverConfig& rx) {
    if (elevation_rad < b.elevation_floor_rad) {
        warn("background: elevation " + std::to_string(rad_to_deg(elevation_rad)) +
             " deg below the model floor, clamped to " + std::to_string(rad_to_deg(b.elevation_floor_rad)));
        elevation_rad = b.elevation_floor_rad;
    }
    const double n0 = background_counts_zenith(b, rx);
    const double x = airmass(kPi / 2 - std::min(elevation_rad, kPi / 2), b.airmass_model, b.airmass_cap_rad);
    return n0 * std::pow(x, -background_profile_exponent(b, rx));
}

double signal_fraction(double signal_cps, double background_cps) {
    if (signal_cps < 0.0 || background_cps < 0.0) throw DomainError("count rates must be >= 0");
    const double total = signal_cps + background_cps;
    if (!(total > 0.0)) throw DomainError("signal fraction undefined for zero total counts");
    return signal_cps / total;
}

double snr_loss_db(double fraction, double exponent) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw DomainError("signal fraction must lie in (0, 1]");
    return -10.0 * exponent * std::log10(fraction);
}

}  // namespace satqkd::atmosphere
