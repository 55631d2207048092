#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "satqkd/beam_optics.hpp"
#include "satqkd/constants.hpp"

namespace satqkd::atmosphere {

enum class DopInterpolation { linear_in_secant, table };

/// Static atmosphere: zenith transmissivity and the degree-of-polarization
/// endpoints from the radiative-transfer runs, consumed as constants.
struct AtmosphereModel {
    double tau_zenith = 0.851;  // +0.037 / -0.018
    double dop_zenith = 0.968;
    double dop_horizon = 0.961;
    DopInterpolation dop_interpolation = DopInterpolation::linear_in_secant;
    // (elevation_deg, dop) pairs, ascending elevation; used with DopInterpolation::table.
    std::vector<std::pair<double, double>> dop_table;
    double secant_cap_rad = deg_to_rad(85.0);
    double depolarization_exponent = 2.0;  // loss = -10 * exponent * log10(DoP)

    void validate() const;
};

enum class AirmassModel { secant, kasten_young };

/// Night-sky background at the ground station.
///
/// Sky brightness is given photometrically (cd/m^2), which has no meaningful
/// conversion at 850 nm. radiance_conversion is therefore a calibration
/// constant; when unset it is solved so the zenith count equals
/// zenith_counts_target. The elevation profile is airmass^(-beta), with beta
/// solved so the count at reference_zenith_rad equals reference_counts.
/// A reference above the zenith count flips the direction of the profile.
struct BackgroundModel {
    double natural_brightness = 2.22e-4 - 5.10e-5;  // [cd/m^2], total minus artificial
    double artificial_brightness = 5.10e-5;         // [cd/m^2]
    std::optional<double> radiance_conversion;      // [(W m^-2 sr^-1) / (cd m^-2)]
    double zenith_counts_target = 1.1e5;            // [counts/s]
    double gating_factor = 0.1;
    AirmassModel airmass_model = AirmassModel::secant;
    double airmass_cap_rad = deg_to_rad(85.0);
    double wavelength_m = 850e-9;
    double reference_zenith_rad = deg_to_rad(80.0);
    double reference_counts = 3.0e4;
    double elevation_floor_rad = deg_to_rad(5.0);
    double snr_exponent = 2.0;  // loss = -10 * exponent * log10(S_F)

    void validate() const;
};

/// 1/cos(zenith) with the zenith angle capped.
double capped_secant(double zenith_angle_rad, double cap_rad);

double airmass(double zenith_angle_rad, AirmassModel model, double cap_rad);

/// tau_zen^sec(zenith). Zenith angles beyond the cap use the capped secant.
/// Throws DomainError outside [0, pi/2].
double transmissivity(double zenith_angle_rad, const AtmosphereModel& m);

/// Degree of polarization at the given elevation.
double dop(double elevation_rad, const AtmosphereModel& m);

/// -10 * exponent * log10(dop). Throws DomainError for dop outside (0, 1].
double depolarization_loss_db(double dop_value, double exponent = 2.0);

/// Radiance conversion that makes the gated zenith count equal target_cps.
double radiance_conversion_for(const BackgroundModel& b, const beam::ReceiverConfig& rx,
                               double target_cps);

/// Gated background count rate at zenith.
double background_counts_zenith(const BackgroundModel& b, const beam::ReceiverConfig& rx);

/// Exponent beta of the airmass^(-beta) profile.
double background_profile_exponent(const BackgroundModel& b, const beam::ReceiverConfig& rx);

/// Background count rate at the given elevation. Elevations below the floor
/// are clamped to it with a warning.
double background_counts(double elevation_rad, const BackgroundModel& b,
                         const beam::ReceiverConfig& rx);

/// S / (S + B). Throws DomainError for negative inputs or 0/0.
double signal_fraction(double signal_cps, double background_cps);

/// -10 * exponent * log10(S_F). Throws DomainError for S_F outside (0, 1].
double snr_loss_db(double fraction, double exponent = 2.0);

}  // namespace satqkd::atmosphere
