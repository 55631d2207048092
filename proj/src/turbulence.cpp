#include "satqkd/turbulence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include "satqkd/error.hpp"

namespace satqkd::turbulence {

namespace {
using boost::math::quadrature::gauss_kronrod;

constexpr double kWanderCoefficient = 1.919;
constexpr double kRytovCoefficient = 2.25;

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw DomainError(std::string(what) + " must be > 0");
}

// Adaptive G-K over [a, b], split where the ground layer decays.
template <class F>
double integrate_profile(F f, double a, double b, const char* what) {
    double total = 0.0;
    const double knots[] = {a, std::min(b, a + 1000.0), std::min(b, a + 5000.0), b};
    for (int i = 0; i < 3; ++i) {
        if (!(knots[i + 1] > knots[i])) continue;
        double err = 0.0;
        const double v = gauss_kronrod<double, 61>::integrate(f, knots[i], knots[i + 1], 15, 1e-12, &err);
        if (!std::isfinite(v) || err > 1e-8 * std::abs(v) + 1e-300)
            throw NumericError(std::string(what) + ": quadrature did not converge on [" +
                               std::to_string(knots[i]) + ", " + std::to_string(knots[i + 1]) +
                               "], error estimate " + std::to_string(err));
        total += v;
    }
    return total;
}
}  // namespace

void TurbulenceProfile::validate() const {
    if (!(hv_a > 0.0)) throw ConfigError("turbulence.hv_a", "must be > 0");
    if (!(hv_wind_mps > 0.0)) throw ConfigError("turbulence.hv_wind_mps", "must be > 0");
    if (!(ground_height_m >= 0.0)) throw ConfigError("turbulence.ground_height_m", "must be >= 0");
    if (!(atmosphere_top_m > ground_height_m))
        throw ConfigError("turbulence.atmosphere_top_m", "must exceed ground_height_m");
    if (!(wavelength_m > 0.0)) throw ConfigError("turbulence.wavelength_m", "must be > 0");
    if (!(pointing_error_rad > 0.0)) throw ConfigError("turbulence.pointing_error_urad", "must be > 0");
    if (!(beam_waist_at_atmosphere_m > 0.0))
        throw ConfigError("turbulence.beam_waist_at_atmosphere_m", "must be > 0");
    if (!(secant_cap_rad > 0.0 && secant_cap_rad < kPi / 2))
        throw ConfigError("turbulence.secant_cap_deg", "must lie in (0, 90)");
    if (!(scintillation_max_percentile > 0.0 && scintillation_max_percentile < 1.0))
        throw ConfigError("turbulence.scintillation_max_percentile", "must lie in (0, 1)");
    if (scale_factor_zenith && !(*scale_factor_zenith >= 0.0))
        throw ConfigError("turbulence.scale_factor_zenith", "must be >= 0");
    if (scale_factor_horizon && !(*scale_factor_horizon >= 0.0))
        throw ConfigError("turbulence.scale_factor_horizon", "must be >= 0");
    if (!(spreading_loss_zenith_db >= 0.0))
        throw ConfigError("turbulence.spreading_loss_zenith_db", "must be >= 0");
    if (!(spreading_loss_horizon_db >= 0.0))
        throw ConfigError("turbulence.spreading_loss_horizon_db", "must be >= 0");
    if (pointing_beam_divergence_rad && !(*pointing_beam_divergence_rad > 0.0))
        throw ConfigError("turbulence.pointing_beam_divergence_urad", "must be > 0");
    if (!(offpointing_zenith_loss_db > 0.0))
        throw ConfigError("turbulence.offpointing_zenith_loss_db", "must be > 0");
}

double cn2(double height_m, const TurbulenceProfile& p) {
    if (!(height_m >= 0.0)) throw DomainError("height must be >= 0");
    const double wind = p.hv_wind_mps / 27.0;
    return 0.00594 * wind * wind * std::pow(1e-5 * height_m, 10) * std::exp(-height_m / 1000.0) +
           2.7e-16 * std::exp(-height_m / 1500.0) + p.hv_a * std::exp(-height_m / 100.0);
}

double cn2_integral(const TurbulenceProfile& p) {
    return integrate_profile([&](double h) { return cn2(h, p); }, p.ground_height_m,
                             p.atmosphere_top_m, "C_n^2 integral");
}

double path_averaged_cn2(const TurbulenceProfile& p) {
    return cn2_integral(p) / (p.atmosphere_top_m - p.ground_height_m);
}

double scintillation_index(double zenith_angle_rad, const TurbulenceProfile& p) {
    if (!(zenith_angle_rad >= 0.0 && zenith_angle_rad <= kPi / 2))
        throw DomainError("zenith angle must lie in [0, pi/2]");
    const double h0 = p.ground_height_m;
    const double moment = integrate_profile(
        [&](double h) { return cn2(h, p) * std::pow(h - h0, 5.0 / 6.0); }, h0, p.atmosphere_top_m,
        "Rytov integral");
    const double k = 2.0 * kPi / p.wavelength_m;
    const double sec = 1.0 / std::cos(std::min(zenith_angle_rad, p.secant_cap_rad));
    return kRytovCoefficient * std::pow(k, 7.0 / 6.0) * std::pow(sec, 11.0 / 6.0) * moment;
}

double lognormal_intensity_pdf(double intensity, double sigma2, double mean_i) {
    require_positive(sigma2, "sigma^2");
    require_positive(mean_i, "mean intensity");
    if (!(intensity > 0.0)) return 0.0;
    const double mu = std::log(mean_i) - 0.5 * sigma2;
    const double d = std::log(intensity) - mu;
    return std::exp(-d * d / (2.0 * sigma2)) / (intensity * std::sqrt(2.0 * kPi * sigma2));
}

double sample_normalized_intensity(double sigma2, Rng& rng) {
    if (!(sigma2 >= 0.0)) throw DomainError("sigma^2 must be >= 0");
    if (sigma2 == 0.0) return 1.0;
    boost::random::normal_distribution<double> normal(-0.5 * sigma2, std::sqrt(sigma2));
    return std::exp(normal(rng));
}

double sample_scintillation_loss_db(double sigma2, Rng& rng) {
    return std::max(0.0, -10.0 * std::log10(sample_normalized_intensity(sigma2, rng)));
}

double scintillation_loss_quantile_db(double sigma2, double q) {
    if (!(sigma2 >= 0.0)) throw DomainError("sigma^2 must be >= 0");
    if (!(q >= 0.0 && q < 1.0)) throw DomainError("percentile must lie in [0, 1)");
    if (q == 0.0 || sigma2 == 0.0) return 0.0;
    // Loss in dB is affine in the standard normal driving ln I, with negative slope.
    const double z = boost::math::quantile(boost::math::normal_distribution<double>(), q);
    return std::max(0.0, kDbPerNeper * (0.5 * sigma2 + std::sqrt(sigma2) * z));
}

double mean_absolute_intensity_deviation(double sigma2) {
    if (!(sigma2 >= 0.0)) throw DomainError("sigma^2 must be >= 0");
    const boost::math::normal_distribution<double> n;
    return 2.0 * (2.0 * boost::math::cdf(n, 0.5 * std::sqrt(sigma2)) - 1.0);
}

double atmospheric_path_length(double zenith_angle_rad, const TurbulenceProfile& p) {
    if (!(zenith_angle_rad >= 0.0 && zenith_angle_rad <= kPi / 2))
        throw DomainError("zenith angle must lie in [0, pi/2]");
    return (p.atmosphere_top_m - p.ground_height_m) / std::cos(std::min(zenith_angle_rad, p.secant_cap_rad));
}

double beam_wander_variance(double path_m, double waist_m, const TurbulenceProfile& p) {
    require_positive(path_m, "path length");
    require_positive(waist_m, "beam waist");
    return kWanderCoefficient * path_averaged_cn2(p) * path_m * path_m * path_m *
           std::pow(2.0 * waist_m, -1.0 / 3.0);
}

double beam_wander_sigma(double path_m, double waist_m, const TurbulenceProfile& p) {
    return std::sqrt(beam_wander_variance(path_m, waist_m, p));
}

double pointing_sigma(double range_m, double wander_sigma_m, const TurbulenceProfile& p) {
    require_positive(range_m, "range");
    if (!(wander_sigma_m >= 0.0)) throw DomainError("beam wander sigma must be >= 0");
    return std::hypot(p.pointing_error_rad * range_m, wander_sigma_m);
}

double weibull_pointing_pdf(double r_m, double sigma_m) {
    require_positive(sigma_m, "sigma_r");
    if (r_m < 0.0) return 0.0;
    const double s2 = sigma_m * sigma_m;
    return r_m / s2 * std::exp(-r_m * r_m / (2.0 * s2));
}

double sample_deflection(double sigma_m, Rng& rng) {
    require_positive(sigma_m, "sigma_r");
    boost::random::uniform_01<double> uniform;
    return sigma_m * std::sqrt(-2.0 * std::log1p(-uniform(rng)));
}

namespace detail {

double scaled_bessel_i(int nu, double x) {
    if (nu != 0 && nu != 1) throw DomainError("scaled_bessel_i supports nu in {0, 1}");
    if (!(x >= 0.0)) throw DomainError("Bessel argument must be >= 0");
    if (x <= 700.0) return boost::math::cyl_bessel_i(nu, x) * std::exp(-x);
    // Hankel expansion of e^-x I_nu(x).
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 12; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (k * 8.0 * x);
        sum += term;
    }
    return sum / std::sqrt(2.0 * kPi * x);
}

}  // namespace detail

namespace {
// 1 - e^-x I0(x), accurate for small x.
double one_minus_scaled_i0(double x) {
    if (x >= 1.0) return 1.0 - detail::scaled_bessel_i(0, x);
    double term = 1.0;
    double tail = 0.0;  // I0(x) - 1
    const double q = 0.25 * x * x;
    for (int k = 1; k < 40; ++k) {
        term *= q / (static_cast<double>(k) * k);
        tail += term;
        if (term < 1e-18 * tail) break;
    }
    return -std::expm1(-x) - std::exp(-x) * tail;
}
}  // namespace

PdtcParams pdtc_params(double aperture_radius_m, double beam_width_m, double sigma_r_m) {
    require_positive(aperture_radius_m, "aperture radius");
    require_positive(beam_width_m, "beam width");
    require_positive(sigma_r_m, "sigma_r");

    const double ratio2 = aperture_radius_m * aperture_radius_m / (beam_width_m * beam_width_m);
    const double x = 4.0 * ratio2;
    const double t0_sq = -std::expm1(-2.0 * ratio2);
    const double denom = one_minus_scaled_i0(x);
    const double log_term = std::log1p((2.0 * t0_sq - denom) / denom);
    const double shape = 2.0 * x * detail::scaled_bessel_i(1, x) / denom / log_term;
    const double scale = aperture_radius_m * std::pow(log_term, -1.0 / shape);

    PdtcParams out{std::sqrt(t0_sq), shape, scale, sigma_r_m, aperture_radius_m, beam_width_m};
    if (!std::isfinite(out.t0) || !std::isfinite(shape) || !std::isfinite(scale) || !(shape > 0.0) ||
        !(scale > 0.0))
        throw NumericError("PDTC parameters not finite for a/W = " +
                           std::to_string(std::sqrt(ratio2)));
    return out;
}

double transmission(double r_m, const PdtcParams& params) {
    if (!(r_m >= 0.0)) throw DomainError("deflection must be >= 0");
    return params.t0 * std::exp(-0.5 * std::pow(r_m / params.scale_m, params.shape));
}

double deflection_for_transmission(double t, const PdtcParams& params) {
    if (!(t > 0.0 && t <= params.t0)) throw DomainError("transmission must lie in (0, T0]");
    return params.scale_m * std::pow(2.0 * std::log(params.t0 / t), 1.0 / params.shape);
}

double pdtc_pdf(double t, const PdtcParams& params) {
    if (!(t > 0.0 && t < params.t0)) return 0.0;
    const double u = 2.0 * std::log(params.t0 / t);
    const double s2 = params.sigma_r_m * params.sigma_r_m;
    const double r1sq = params.scale_m * params.scale_m;
    const double u_pow = std::pow(u, 2.0 / params.shape);
    return 2.0 * r1sq / (s2 * params.shape * t) * (u_pow / u) * std::exp(-r1sq * u_pow / (2.0 * s2));
}

double pdtc_cdf(double t, const PdtcParams& params) {
    if (t <= 0.0) return 0.0;
    if (t >= params.t0) return 1.0;
    const double r = deflection_for_transmission(t, params);
    return std::exp(-r * r / (2.0 * params.sigma_r_m * params.sigma_r_m));
}

double mean_deflection(const PdtcParams& params) {
    require_positive(params.sigma_r_m, "sigma_r");
    boost::math::quadrature::exp_sinh<double> integrator;
    const double s = params.sigma_r_m;
    auto density = [s](double r) { return weibull_pointing_pdf(r, s); };
    double err = 0.0;
    const double mass = integrator.integrate(density, 0.0, std::numeric_limits<double>::infinity(), 1e-12, &err);
    const double first = integrator.integrate([&](double r) { return r * density(r); }, 0.0,
                                              std::numeric_limits<double>::infinity(), 1e-12, &err);
    if (!(mass > 0.0) || !std::isfinite(first)) throw NumericError("mean deflection quadrature failed");
    return first / mass;
}

double offpointing_loss_db(const PdtcParams& params) {
    return kDbPerNeper * std::pow(mean_deflection(params) / params.scale_m, params.shape);
}

double pointing_divergence_for_loss(double target_db, double range_m, double aperture_radius_m,
                                    double sigma_r_m) {
    require_positive(target_db, "target loss");
    require_positive(range_m, "range");
    auto loss_at = [&](double log_w) {
        return offpointing_loss_db(pdtc_params(aperture_radius_m, std::exp(log_w), sigma_r_m));
    };

    // The loss peaks near W ~ a; take the root on the wide-beam side.
    const double lo = std::log(0.05 * aperture_radius_m);
    const double hi = std::log(1e4 * aperture_radius_m);
    double peak_x = lo;
    double peak = loss_at(lo);
    constexpr int kGrid = 400;
    for (int i = 1; i <= kGrid; ++i) {
        const double x = lo + (hi - lo) * i / kGrid;
        const double v = loss_at(x);
        if (v > peak) {
            peak = v;
            peak_x = x;
        }
    }
    if (target_db > peak)
        throw NumericError("off-pointing loss " + std::to_string(target_db) +
                           " dB exceeds the attainable maximum " + std::to_string(peak) + " dB");
    if (target_db < loss_at(hi)) throw NumericError("off-pointing loss target below the search range");

    auto f = [&](double x) { return loss_at(x) - target_db; };
    std::uintmax_t iterations = 200;
    auto [a, b] = boost::math::tools::toms748_solve(f, peak_x, hi, boost::math::tools::eps_tolerance<double>(50),
                                                    iterations);
    return std::exp(0.5 * (a + b)) / range_m;
}

}  // namespace satqkd::turbulence
