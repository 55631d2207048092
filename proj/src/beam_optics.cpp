#include "satqkd/beam_optics.hpp"

#include <cmath>
#include <cstdint>

#include <boost/math/tools/roots.hpp>

#include "satqkd/error.hpp"

namespace satqkd::beam {

double TransmitterConfig::rayleigh_range_m() const {
    const double w0 = waist_m();
    return kPi * w0 * w0 / wavelength_m;
}

void TransmitterConfig::validate() const {
    if (!(aperture_diameter_m > 0.0)) throw ConfigError("transmitter.aperture_diameter_m", "must be > 0");
    if (!(wavelength_m > 0.0)) throw ConfigError("transmitter.wavelength_m", "must be > 0");
    if (!(pulse_rate_hz > 0.0)) throw ConfigError("transmitter.pulse_rate_hz", "must be > 0");
    if (!(mean_photon_number > 0.0)) throw ConfigError("transmitter.mean_photon_number", "must be > 0");
    if (!(optical_efficiency > 0.0 && optical_efficiency <= 1.0))
        throw ConfigError("transmitter.optical_efficiency", "must lie in (0, 1]");
    if (divergence_mode == DivergenceMode::fixed_half_angle && !(divergence_half_angle_rad > 0.0))
        throw ConfigError("transmitter.divergence_half_angle_urad", "must be > 0");
    if (mean_photon_number > 1.0)
        warn("transmitter.mean_photon_number = " + std::to_string(mean_photon_number) +
             " leaves the weak-coherent regime");
}

void ReceiverConfig::validate() const {
    if (!(aperture_diameter_m > 0.0)) throw ConfigError("receiver.aperture_diameter_m", "must be > 0");
    if (!(field_of_view_rad > 0.0)) throw ConfigError("receiver.field_of_view_rad", "must be > 0");
    if (!(quantum_efficiency > 0.0 && quantum_efficiency <= 1.0))
        throw ConfigError("receiver.quantum_efficiency", "must lie in (0, 1]");
    if (!(dark_count_probability >= 0.0 && dark_count_probability < 1.0))
        throw ConfigError("receiver.dark_count_probability", "must lie in [0, 1)");
    if (!(basis_misalignment >= 0.0 && basis_misalignment < 0.5))
        throw ConfigError("receiver.basis_misalignment", "must lie in [0, 0.5)");
}

double beam_width(double distance_m, const TransmitterConfig& tx) {
    if (!(distance_m >= 0.0)) throw DomainError("distance must be >= 0");
    if (tx.divergence_mode == DivergenceMode::fixed_half_angle)
        return tx.divergence_half_angle_rad * distance_m;
    const double ratio = distance_m / tx.rayleigh_range_m();
    return tx.waist_m() * std::sqrt(1.0 + ratio * ratio);
}

double collected_fraction_for_width(double width_m, const ReceiverConfig& rx) {
    if (!(width_m > 0.0)) throw DomainError("beam width must be > 0");
    const double d = rx.aperture_diameter_m;
    return -std::expm1(-d * d / (2.0 * width_m * width_m));
}

double collected_fraction(double distance_m, const TransmitterConfig& tx, const ReceiverConfig& rx) {
    return collected_fraction_for_width(beam_width(distance_m, tx), rx);
}

double geometric_loss_db(double distance_m, const TransmitterConfig& tx, const ReceiverConfig& rx) {
    return loss_db(collected_fraction(distance_m, tx, rx));
}

double photon_energy(double wavelength_m) {
    if (!(wavelength_m > 0.0)) throw DomainError("wavelength must be > 0");
    return kPlanck * kSpeedOfLight / wavelength_m;
}

double expected_photons(double distance_m, double interval_s, const TransmitterConfig& tx,
                        const ReceiverConfig& rx) {
    if (!(interval_s >= 0.0)) throw DomainError("interval must be >= 0");
    const double photon_rate = tx.pulse_rate_hz * tx.mean_photon_number;
    return rx.quantum_efficiency * tx.optical_efficiency * interval_s * photon_rate *
           collected_fraction(distance_m, tx, rx);
}

double effective_beam_width(double width_m, double turbulent_scale_factor) {
    if (!(width_m > 0.0)) throw DomainError("beam width must be > 0");
    if (!(turbulent_scale_factor >= 0.0)) throw DomainError("turbulent scale factor must be >= 0");
    return width_m * (1.0 + turbulent_scale_factor);
}

double beam_spreading_loss_db(double distance_m, double turbulent_scale_factor,
                              const TransmitterConfig& tx, const ReceiverConfig& rx) {
    const double w = beam_width(distance_m, tx);
    const double broadened = effective_beam_width(w, turbulent_scale_factor);
    return loss_db(collected_fraction_for_width(broadened, rx)) -
           loss_db(collected_fraction_for_width(w, rx));
}

double scale_factor_for_spreading_loss(double target_db, double distance_m,
                                       const TransmitterConfig& tx, const ReceiverConfig& rx) {
    if (!(target_db >= 0.0)) throw DomainError("target spreading loss must be >= 0");
    if (target_db == 0.0) return 0.0;
    auto f = [&](double ta) { return beam_spreading_loss_db(distance_m, ta, tx, rx) - target_db; };
    double hi = 1e-3;
    while (f(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 1e6) throw NumericError("spreading loss target not reachable");
    }
    std::uintmax_t iterations = 200;
    auto [lo_t, hi_t] = boost::math::tools::toms748_solve(
        f, 0.0, hi, -target_db, f(hi), boost::math::tools::eps_tolerance<double>(50), iterations);
    return 0.5 * (lo_t + hi_t);
}

double divergence_for_geometric_loss(double target_db, double distance_m,
                                     const TransmitterConfig&, const ReceiverConfig& rx) {
    if (!(target_db > 0.0)) throw DomainError("target geometric loss must be > 0");
    if (!(distance_m > 0.0)) throw DomainError("distance must be > 0");
    const double fraction = std::pow(10.0, -target_db / 10.0);
    const double width = rx.aperture_diameter_m / std::sqrt(-2.0 * std::log1p(-fraction));
    return width / distance_m;
}

}  // namespace satqkd::beam
