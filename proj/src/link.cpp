#include "satqkd/link.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "satqkd/error.hpp"

namespace satqkd::link {

void BudgetConfig::validate() const {
    if (!(basis_rotation_shift_db >= 0.0)) throw ConfigError("budget.basis_rotation_shift_db", "must be >= 0");
    if (!(wavefront_aberration_db >= 0.0)) throw ConfigError("budget.wavefront_aberration_db", "must be >= 0");
    if (!(zenith_signal_fraction > 0.0 && zenith_signal_fraction < 1.0))
        throw ConfigError("budget.zenith_signal_fraction", "must lie in (0, 1)");
    if (signal_count_scale_cps && !(*signal_count_scale_cps > 0.0))
        throw ConfigError("budget.signal_count_scale_cps", "must be > 0");
}

LinkConfig pin_calibration(LinkConfig config, const Calibration& cal) {
    config.background.radiance_conversion = cal.radiance_conversion;
    config.budget.signal_count_scale_cps = cal.signal_count_scale_cps;
    config.turbulence.scale_factor_zenith = cal.scale_factor_zenith;
    config.turbulence.scale_factor_horizon = cal.scale_factor_horizon;
    config.turbulence.pointing_beam_divergence_rad = cal.pointing_beam_divergence_rad;
    return config;
}

double LossBudget::at(const std::string& channel) const {
    for (const auto& [name, value] : entries)
        if (name == channel) return value;
    throw std::out_of_range("no budget channel named '" + channel + "'");
}

double LossBudget::transmittance() const { return std::pow(10.0, -total_db / 10.0); }

LossBudget make_budget(double elevation_rad, std::vector<std::pair<std::string, double>> entries) {
    LossBudget b;
    b.elevation_rad = elevation_rad;
    for (const auto& [name, value] : entries) {
        if (!(value >= 0.0) || !std::isfinite(value))
            throw ChannelError(name, "loss must be finite and >= 0, got " + std::to_string(value));
        b.total_db += value;
    }
    b.entries = std::move(entries);
    return b;
}

namespace {
double secant_weight(double zenith_angle_rad, double cap_rad) {
    const double s = atmosphere::capped_secant(zenith_angle_rad, cap_rad);
    return (s - 1.0) / (1.0 / std::cos(cap_rad) - 1.0);
}

double relative_signal(double elevation_rad, const LinkConfig& c) {
    const double range = orbit::slant_range(elevation_rad, c.orbit);
    return beam::collected_fraction(range, c.transmitter, c.receiver) *
           atmosphere::transmissivity(kPi / 2 - elevation_rad, c.atmosphere);
}
}  // namespace

LinkModel::LinkModel(LinkConfig config) : config_(std::move(config)) {
    const auto& c = config_;
    c.orbit.validate();
    c.transmitter.validate();
    c.receiver.validate();
    c.atmosphere.validate();
    c.background.validate();
    c.turbulence.validate();
    c.budget.validate();

    auto& cal = calibration_;
    cal.radiance_conversion =
        c.background.radiance_conversion
            ? *c.background.radiance_conversion
            : atmosphere::radiance_conversion_for(c.background, c.receiver, c.background.zenith_counts_target);
    config_.background.radiance_conversion = cal.radiance_conversion;
    cal.background_exponent = atmosphere::background_profile_exponent(config_.background, c.receiver);

    if (c.budget.signal_count_scale_cps) {
        cal.signal_count_scale_cps = *c.budget.signal_count_scale_cps;
        cal.zenith_signal_cps = cal.signal_count_scale_cps * relative_signal(kPi / 2, c);
    } else {
        const double zenith_background = atmosphere::background_counts_zenith(config_.background, c.receiver);
        const double sf = c.budget.zenith_signal_fraction;
        cal.zenith_signal_cps = zenith_background * sf / (1.0 - sf);
        cal.signal_count_scale_cps = cal.zenith_signal_cps / relative_signal(kPi / 2, c);
    }

    const double zenith_range = orbit::slant_range(kPi / 2, c.orbit);
    const double cap_elevation = kPi / 2 - c.turbulence.secant_cap_rad;
    cal.scale_factor_zenith = c.turbulence.scale_factor_zenith.value_or(
        beam::scale_factor_for_spreading_loss(c.turbulence.spreading_loss_zenith_db, zenith_range,
                                              c.transmitter, c.receiver));
    cal.scale_factor_horizon = c.turbulence.scale_factor_horizon.value_or(
        beam::scale_factor_for_spreading_loss(c.turbulence.spreading_loss_horizon_db,
                                              orbit::slant_range(cap_elevation, c.orbit), c.transmitter,
                                              c.receiver));

    if (c.turbulence.pointing_beam_divergence_rad) {
        cal.pointing_beam_divergence_rad = *c.turbulence.pointing_beam_divergence_rad;
    } else {
        const double wander = turbulence::beam_wander_sigma(
            turbulence::atmospheric_path_length(0.0, c.turbulence), c.turbulence.beam_waist_at_atmosphere_m,
            c.turbulence);
        const double sigma = turbulence::pointing_sigma(zenith_range, wander, c.turbulence);
        cal.pointing_beam_divergence_rad = turbulence::pointing_divergence_for_loss(
            c.turbulence.offpointing_zenith_loss_db, zenith_range, c.receiver.aperture_radius_m(), sigma);
    }
}

ChannelState LinkModel::channel(double elevation_rad) const {
    const auto& c = config_;
    const auto& cal = calibration_;
    ChannelState s;
    s.elevation_rad = elevation_rad;
    s.zenith_angle_rad = kPi / 2 - elevation_rad;
    s.slant_range_m = orbit::slant_range(elevation_rad, c.orbit);
    s.beam_width_m = beam::beam_width(s.slant_range_m, c.transmitter);
    s.geometric_fraction = beam::collected_fraction_for_width(s.beam_width_m, c.receiver);
    s.transmissivity = atmosphere::transmissivity(s.zenith_angle_rad, c.atmosphere);
    s.dop = atmosphere::dop(elevation_rad, c.atmosphere);
    s.background_cps = atmosphere::background_counts(elevation_rad, c.background, c.receiver);
    s.signal_cps = cal.signal_count_scale_cps * s.geometric_fraction * s.transmissivity;
    s.signal_fraction = atmosphere::signal_fraction(s.signal_cps, s.background_cps);

    const double w = secant_weight(s.zenith_angle_rad, c.turbulence.secant_cap_rad);
    s.turbulent_scale_factor = cal.scale_factor_zenith + w * (cal.scale_factor_horizon - cal.scale_factor_zenith);
    s.scintillation_index = turbulence::scintillation_index(s.zenith_angle_rad, c.turbulence);

    const double path = turbulence::atmospheric_path_length(s.zenith_angle_rad, c.turbulence);
    s.wander_variance_m2 = turbulence::beam_wander_variance(path, c.turbulence.beam_waist_at_atmosphere_m, c.turbulence);
    const double wander_sigma = std::sqrt(s.wander_variance_m2);
    s.pointing_sigma_m = turbulence::pointing_sigma(s.slant_range_m, wander_sigma, c.turbulence);

    const double pdtc_width = cal.pointing_beam_divergence_rad * s.slant_range_m;
    const double a = c.receiver.aperture_radius_m();
    s.pointing = turbulence::pdtc_params(a, pdtc_width, s.pointing_sigma_m);
    s.wander = turbulence::pdtc_params(a, pdtc_width, wander_sigma);
    return s;
}

LossBudget LinkModel::budget(double elevation_rad, double scintillation_percentile) const {
    ChannelState s;
    try {
        s = channel(elevation_rad);
    } catch (const ChannelError&) {
        throw;
    } catch (const std::exception& e) {
        throw ChannelError("channel_state", e.what());
    }

    const auto& c = config_;
    std::vector<std::pair<std::string, double>> entries;
    entries.reserve(kChannelCount);
    auto add = [&](const char* name, const std::function<double()>& eval) {
        try {
            entries.emplace_back(name, eval());
        } catch (const std::exception& e) {
            throw ChannelError(name, e.what());
        }
    };

    add("geometric", [&] { return loss_db(s.geometric_fraction); });
    add("atmospheric", [&] { return loss_db(s.transmissivity); });
    add("depolarization", [&] { return atmosphere::depolarization_loss_db(s.dop, c.atmosphere.depolarization_exponent); });
    add("background_snr", [&] { return atmosphere::snr_loss_db(s.signal_fraction, c.background.snr_exponent); });
    add("beam_spreading", [&] {
        return beam::beam_spreading_loss_db(s.slant_range_m, s.turbulent_scale_factor, c.transmitter, c.receiver);
    });
    add("beam_wandering", [&] { return turbulence::offpointing_loss_db(s.wander); });
    add("scintillation", [&] {
        return turbulence::scintillation_loss_quantile_db(s.scintillation_index, scintillation_percentile);
    });
    add("mean_off_pointing", [&] { return turbulence::offpointing_loss_db(s.pointing); });
    add("basis_rotation_shift", [&] { return c.budget.basis_rotation_shift_db; });
    add("wavefront_aberration", [&] { return c.budget.wavefront_aberration_db; });
    return make_budget(elevation_rad, std::move(entries));
}

}  // namespace satqkd::link
