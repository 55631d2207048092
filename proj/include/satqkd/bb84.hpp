#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "satqkd/link.hpp"
#include "satqkd/orbit_pass.hpp"
#include "satqkd/rng.hpp"

namespace satqkd::bb84 {

/// How the budget transmittance becomes a per-pulse detection probability.
///
/// budget: the loss budget already carries the link efficiency, so
/// t = 10^(-total/10) and the key photon flux is pulse_rate * MPN * t.
/// explicit_efficiencies: t = eta_q * eta_opt * MPN * 10^(-total/10), with
/// the same efficiencies applied to the photon flux.
enum class DetectionModel { budget, explicit_efficiencies };

/// literal: e^(-x^2/2s^2) / (s sqrt(2 pi)), mean 1/(2 s sqrt(pi)).
/// normalized: the literal kernel divided by its mean, so E = 1.
enum class KernelMode { literal, normalized };

struct Bb84Config {
    DetectionModel detection_model = DetectionModel::budget;
    KernelMode kernel = KernelMode::literal;
    double noise_sigma = 0.1;
    std::size_t n_trials = 100000;
    double interval_s = 1.0;
    double scintillation_percentile = 0.0;
    double qber_threshold = 0.11;

    void validate() const;
};

double detection_probability(double transmittance, const beam::TransmitterConfig& tx,
                             const beam::ReceiverConfig& rx, DetectionModel model);

/// (Y0/2 + e_det (1 - e^-t)) / (Y0 + 1 - e^-t): a dark click is wrong half the
/// time. Throws DomainError for t < 0.
double qber(double detection_probability, const beam::ReceiverConfig& rx);

/// Expected key photons Q within interval_s.
double expected_key_photons(double transmittance, double interval_s,
                            const beam::TransmitterConfig& tx, const beam::ReceiverConfig& rx,
                            DetectionModel model);

/// E[kernel(x)] for x ~ N(0, sigma^2).
double kernel_expectation(double sigma, KernelMode mode);

/// Monte Carlo of the sifted rate: mean over n_trials of
/// delta_i * kernel(x_i), delta ~ Bernoulli(1/2), x ~ N(0, sigma^2),
/// times Q / interval_s.
double sifted_key_rate(double photons, double interval_s, double sigma, std::size_t n_trials,
                       KernelMode mode, Rng& rng);

struct Bb84Sample {
    double t_s = 0.0;
    double elevation_rad = 0.0;
    double total_loss_db = 0.0;
    double qber = 0.0;
    double sifted_key_rate_bps = 0.0;
};

struct Bb84Result {
    std::vector<Bb84Sample> samples;
    double active_time_s = 0.0;
};

/// One sample of the pass. The rng stream for the key-rate draw is
/// derived from (seed, index).
Bb84Sample evaluate_sample(const orbit::PassSample& sample, std::size_t index,
                           const link::LinkModel& model, const Bb84Config& cfg, std::uint64_t seed);

/// Samples are evaluated in parallel; the result is independent of the
/// thread count. A failing sample is rethrown with its index.
Bb84Result simulate_pass(const std::vector<orbit::PassSample>& pass, const link::LinkModel& model,
                         const Bb84Config& cfg, std::uint64_t seed);

/// Span of the contiguous run of samples around maximum elevation with
/// QBER <= threshold; 0 when that sample already exceeds it.
double active_time(const Bb84Result& result, double qber_threshold);

/// t_s, elevation_deg, total_loss_db, qber, key_rate_bps.
std::string to_csv(const Bb84Result& result);

}  // namespace satqkd::bb84
