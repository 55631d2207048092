#include "satqkd/bb84.hpp"

#include <cmath>
#include <string>

#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include "satqkd/error.hpp"
#include "satqkd/io.hpp"
#include "satqkd/parallel.hpp"

namespace satqkd::bb84 {

void Bb84Config::validate() const {
    if (!(noise_sigma > 0.0)) throw ConfigError("bb84.noise_sigma", "must be > 0");
    if (n_trials < 10000) throw ConfigError("bb84.n_trials", "must be >= 10000");
    if (!(interval_s > 0.0)) throw ConfigError("bb84.interval_s", "must be > 0");
    if (!(scintillation_percentile >= 0.0 && scintillation_percentile < 1.0))
        throw ConfigError("bb84.scintillation_percentile", "must lie in [0, 1)");
    if (!(qber_threshold > 0.0 && qber_threshold < 0.5))
        throw ConfigError("bb84.qber_threshold", "must lie in (0, 0.5)");
}

namespace {
void check_transmittance(double t) {
    if (!(t > 0.0 && t <= 1.0)) throw DomainError("transmittance must lie in (0, 1]");
}

double efficiency(const beam::TransmitterConfig& tx, const beam::ReceiverConfig& rx, DetectionModel model) {
    return model == DetectionModel::budget ? 1.0 : rx.quantum_efficiency * tx.optical_efficiency;
}
}  // namespace

double detection_probability(double transmittance, const beam::TransmitterConfig& tx,
                             const beam::ReceiverConfig& rx, DetectionModel model) {
    check_transmittance(transmittance);
    if (model == DetectionModel::budget) return transmittance;
    return efficiency(tx, rx, model) * tx.mean_photon_number * transmittance;
}

double qber(double detection_probability, const beam::ReceiverConfig& rx) {
    if (!(detection_probability >= 0.0)) throw DomainError("detection probability must be >= 0");
    const double click = -std::expm1(-detection_probability);
    const double dark = rx.dark_count_probability;
    if (dark + click == 0.0) return 0.5;
    return (0.5 * dark + rx.basis_misalignment * click) / (dark + click);
}

double expected_key_photons(double transmittance, double interval_s, const beam::TransmitterConfig& tx,
                            const beam::ReceiverConfig& rx, DetectionModel model) {
    check_transmittance(transmittance);
    if (!(interval_s > 0.0)) throw DomainError("interval must be > 0");
    return efficiency(tx, rx, model) * tx.pulse_rate_hz * tx.mean_photon_number * transmittance * interval_s;
}

double kernel_expectation(double sigma, KernelMode mode) {
    if (!(sigma > 0.0)) throw DomainError("noise sigma must be > 0");
    return mode == KernelMode::normalized ? 1.0 : 1.0 / (2.0 * sigma * std::sqrt(kPi));
}

double sifted_key_rate(double photons, double interval_s, double sigma, std::size_t n_trials,
                       KernelMode mode, Rng& rng) {
    if (!(photons >= 0.0)) throw DomainError("photon count must be >= 0");
    if (!(interval_s > 0.0)) throw DomainError("interval must be > 0");
    if (!(sigma > 0.0)) throw DomainError("noise sigma must be > 0");
    if (n_trials == 0) throw DomainError("n_trials must be >= 1");

    boost::random::bernoulli_distribution<double> basis_match(0.5);
    boost::random::normal_distribution<double> noise(0.0, sigma);
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * kPi));
    double acc = 0.0;
    for (std::size_t i = 0; i < n_trials; ++i) {
        const bool match = basis_match(rng);
        const double x = noise(rng);
        if (match) acc += norm * std::exp(-x * x / (2.0 * sigma * sigma));
    }
    double mean = acc / static_cast<double>(n_trials);
    if (mode == KernelMode::normalized) mean /= kernel_expectation(sigma, KernelMode::literal);
    return mean * photons / interval_s;
}

Bb84Sample evaluate_sample(const orbit::PassSample& sample, std::size_t index, const link::LinkModel& model,
                           const Bb84Config& cfg, std::uint64_t seed) {
    const auto& lc = model.config();
    const link::LossBudget budget = model.budget(sample.elevation_rad, cfg.scintillation_percentile);
    const double mu = budget.transmittance();
    Rng rng = make_stream(seed, index);
    const double q = expected_key_photons(mu, cfg.interval_s, lc.transmitter, lc.receiver, cfg.detection_model);

    Bb84Sample out;
    out.t_s = sample.t_s;
    out.elevation_rad = sample.elevation_rad;
    out.total_loss_db = budget.total_db;
    out.qber = qber(detection_probability(mu, lc.transmitter, lc.receiver, cfg.detection_model), lc.receiver);
    out.sifted_key_rate_bps = sifted_key_rate(q, cfg.interval_s, cfg.noise_sigma, cfg.n_trials, cfg.kernel, rng);
    return out;
}

Bb84Result simulate_pass(const std::vector<orbit::PassSample>& pass, const link::LinkModel& model,
                         const Bb84Config& cfg, std::uint64_t seed) {
    cfg.validate();
    if (pass.empty()) throw DomainError("pass has no samples");
    Bb84Result result;
    result.samples.resize(pass.size());
    parallel_for(pass.size(), [&](std::size_t i) {
        try {
            result.samples[i] = evaluate_sample(pass[i], i, model, cfg, seed);
        } catch (const ChannelError& e) {
            throw ChannelError(e.channel(), "sample " + std::to_string(i) + ": " + e.detail());
        } catch (const std::exception& e) {
            throw NumericError("sample " + std::to_string(i) + ": " + e.what());
        }
    });
    result.active_time_s = active_time(result, cfg.qber_threshold);
    return result;
}

double active_time(const Bb84Result& result, double qber_threshold) {
    if (!(qber_threshold > 0.0 && qber_threshold <= 0.5)) throw DomainError("QBER threshold must lie in (0, 0.5]");
    const auto& s = result.samples;
    if (s.empty()) return 0.0;
    std::size_t peak = 0;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i].elevation_rad > s[peak].elevation_rad) peak = i;
    if (s[peak].qber > qber_threshold) return 0.0;
    std::size_t lo = peak;
    std::size_t hi = peak;
    while (lo > 0 && s[lo - 1].qber <= qber_threshold) --lo;
    while (hi + 1 < s.size() && s[hi + 1].qber <= qber_threshold) ++hi;
    return s[hi].t_s - s[lo].t_s;
}

std::string to_csv(const Bb84Result& result) {
    io::CsvTable table({"t_s", "elevation_deg", "total_loss_db", "qber", "key_rate_bps"});
    for (const auto& s : result.samples)
        table.add_row({s.t_s, rad_to_deg(s.elevation_rad), s.total_loss_db, s.qber, s.sifted_key_rate_bps});
    return table.str();
}

}  // namespace satqkd::bb84
