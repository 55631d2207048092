#pragma once

#include <optional>

#include "satqkd/constants.hpp"
#include "satqkd/rng.hpp"

namespace satqkd::turbulence {

/// Hufnagel-Valley 5/7 profile, pointing jitter, and the calibration targets
/// for the turbulence-driven budget channels.
struct TurbulenceProfile {
    double hv_a = 1.7e-14;  // ground-level term [m^-2/3]
    double hv_wind_mps = 21.0;
    double ground_height_m = 0.0;
    double atmosphere_top_m = 20000.0;
    double wavelength_m = 850e-9;
    double pointing_error_rad = 1.0e-6;
    double beam_waist_at_atmosphere_m = 13.17;
    double secant_cap_rad = deg_to_rad(85.0);

    // Upper percentile of the scintillation loss reported in the budget.
    // Phi(2): the two-sigma fade of the log-normal intensity.
    double scintillation_max_percentile = 0.977249868051821;

    // Turbulent scale factor T_A. Unset values are solved from the target
    // spreading losses at zenith and at the secant cap.
    std::optional<double> scale_factor_zenith;
    std::optional<double> scale_factor_horizon;
    double spreading_loss_zenith_db = 0.003;
    double spreading_loss_horizon_db = 0.006;

    // Angular width of the beam seen by the off-pointing PDTC, W = angle * L.
    // Unset: solved so the zenith off-pointing loss equals the target.
    std::optional<double> pointing_beam_divergence_rad;
    double offpointing_zenith_loss_db = 1.861;

    void validate() const;
};

/// C_n^2 at height h [m^-2/3].
double cn2(double height_m, const TurbulenceProfile& p);

/// Integral of C_n^2 over [ground_height, atmosphere_top].
double cn2_integral(const TurbulenceProfile& p);

/// Path-averaged C_n^2 over [ground_height, atmosphere_top].
double path_averaged_cn2(const TurbulenceProfile& p);

/// Weak-fluctuation downlink Rytov variance
/// 2.25 k^(7/6) sec^(11/6)(zenith) * integral C_n^2(h) (h - h0)^(5/6) dh.
/// Throws NumericError when the quadrature does not converge.
double scintillation_index(double zenith_angle_rad, const TurbulenceProfile& p);

/// Log-normal density of intensity with log-variance sigma2 and mean mean_i.
double lognormal_intensity_pdf(double intensity, double sigma2, double mean_i);

/// Draw of I / <I>.
double sample_normalized_intensity(double sigma2, Rng& rng);

/// -10 log10(I / <I>) for one draw, clamped at 0 dB on the gain side.
double sample_scintillation_loss_db(double sigma2, Rng& rng);

/// Percentile q in [0, 1] of the clamped scintillation loss.
double scintillation_loss_quantile_db(double sigma2, double q);

/// E|I/<I> - 1| for the log-normal intensity.
double mean_absolute_intensity_deviation(double sigma2);

/// Slant path through the turbulent layer.
double atmospheric_path_length(double zenith_angle_rad, const TurbulenceProfile& p);

/// Beam-centroid variance 1.919 * Cn2_avg * z^3 * (2 w0)^(-1/3) [m^2].
/// The expression is dimensionally a variance; beam_wander_sigma is its root.
double beam_wander_variance(double path_m, double waist_m, const TurbulenceProfile& p);
double beam_wander_sigma(double path_m, double waist_m, const TurbulenceProfile& p);

/// sqrt((theta_p L)^2 + sigma_w^2).
double pointing_sigma(double range_m, double wander_sigma_m, const TurbulenceProfile& p);

/// Rayleigh (two-parameter Weibull, shape 2) deflection density.
double weibull_pointing_pdf(double r_m, double sigma_m);

double sample_deflection(double sigma_m, Rng& rng);

/// Beam-wandering channel parameters for a circular aperture of radius a and
/// a Gaussian beam of width W whose center is Rayleigh-distributed with
/// scale sigma_r.
struct PdtcParams {
    double t0 = 0.0;        // maximal transmission coefficient
    double shape = 0.0;     // lambda_1
    double scale_m = 0.0;   // R_1
    double sigma_r_m = 0.0;
    double aperture_radius_m = 0.0;
    double beam_width_m = 0.0;
};

/// T0^2 = 1 - exp(-2a^2/W^2); shape and scale from exponentially scaled
/// modified Bessel functions of 4a^2/W^2. Throws DomainError for
/// non-positive inputs and NumericError if the result is not finite.
PdtcParams pdtc_params(double aperture_radius_m, double beam_width_m, double sigma_r_m);

/// T(r) = T0 exp(-(r/R1)^lambda1 / 2).
double transmission(double r_m, const PdtcParams& params);

/// Inverse of transmission on (0, T0].
double deflection_for_transmission(double t, const PdtcParams& params);

/// Density of the transmission coefficient; 0 outside (0, T0).
double pdtc_pdf(double t, const PdtcParams& params);

/// Closed-form CDF of the transmission coefficient.
double pdtc_cdf(double t, const PdtcParams& params);

/// E[r] by quadrature over the normalized deflection density.
double mean_deflection(const PdtcParams& params);

/// -10 log10(T^2(E[r]) / T0^2).
double offpointing_loss_db(const PdtcParams& params);

/// Angular PDTC beam width that yields target_db of off-pointing loss at
/// range_m, with the deflection scale of that range.
double pointing_divergence_for_loss(double target_db, double range_m, double aperture_radius_m,
                                    double sigma_r_m);

namespace detail {
/// exp(-x) I_nu(x) for nu in {0, 1}, finite for any x >= 0.
double scaled_bessel_i(int nu, double x);
}  // namespace detail

}  // namespace satqkd::turbulence
