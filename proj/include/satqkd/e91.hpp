#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "satqkd/constants.hpp"
#include "satqkd/link.hpp"
#include "satqkd/orbit_pass.hpp"
#include "satqkd/rng.hpp"

namespace satqkd::e91 {

using Complex = std::complex<double>;
using Matrix2 = std::array<std::array<Complex, 2>, 2>;
using Matrix4 = std::array<std::array<Complex, 4>, 4>;

/// Amplitudes ordered |00>, |01>, |10>, |11>; qubit 0 is the left factor.
class TwoQubitState {
public:
    TwoQubitState();  // |00>
    explicit TwoQubitState(const std::array<Complex, 4>& amplitudes);

    const std::array<Complex, 4>& amplitudes() const noexcept { return amp_; }
    const Complex& operator[](std::size_t i) const { return amp_.at(i); }
    double norm() const;
    std::array<double, 4> probabilities() const;

private:
    std::array<Complex, 4> amp_;
};

enum class GateKind { h, x, z, cnot, ry };

struct Gate {
    GateKind kind = GateKind::h;
    int target = 0;
    int control = -1;
    double theta = 0.0;

    static Gate H(int target) { return {GateKind::h, target, -1, 0.0}; }
    static Gate X(int target) { return {GateKind::x, target, -1, 0.0}; }
    static Gate Z(int target) { return {GateKind::z, target, -1, 0.0}; }
    static Gate RY(int target, double theta) { return {GateKind::ry, target, -1, theta}; }
    static Gate CNOT(int control, int target) { return {GateKind::cnot, target, control, 0.0}; }
};

/// 2x2 matrix of a single-qubit gate. Throws DomainError for CNOT.
Matrix2 single_qubit_matrix(const Gate& gate);

/// Full 4x4 operator on the two-qubit register.
Matrix4 gate_matrix(const Gate& gate);

/// max |U^dagger U - I| entry.
double unitarity_error(const Matrix4& u);

/// Throws DomainError for qubit indices outside {0, 1} or control == target.
TwoQubitState apply_gate(const TwoQubitState& state, const Gate& gate);

/// X(0) X(1) H(0) CNOT(0, 1) applied to |00>: (|01> - |10>)/sqrt(2).
TwoQubitState prepare_singlet();

/// Outcome probabilities after RY(-2a) on qubit 0 and RY(-2b) on qubit 1.
/// The factor 2 maps polarization angles to Bloch angles.
std::array<double, 4> measurement_probabilities(const TwoQubitState& state, double a_rad,
                                                double b_rad);

/// Born-rule draw of (alice, bob) in {+1, -1}; bit 0 maps to +1.
std::pair<int, int> measure_pair(const TwoQubitState& state, double a_rad, double b_rad, Rng& rng);

struct CoincidenceCounts {
    std::uint64_t pp = 0;
    std::uint64_t mm = 0;
    std::uint64_t pm = 0;
    std::uint64_t mp = 0;

    std::uint64_t total() const noexcept { return pp + mm + pm + mp; }
    void add(int alice, int bob);
};

/// (N++ + N-- - N+- - N-+) / total. Throws DomainError when total == 0.
double correlation(const CoincidenceCounts& counts);

struct ChshAngles {
    double a1 = 0.0;
    double a3 = deg_to_rad(45.0);
    double b1 = deg_to_rad(22.5);
    double b3 = deg_to_rad(67.5);
};

/// Settings in the order (a1,b1), (a1,b3), (a3,b1), (a3,b3).
std::array<std::pair<double, double>, 4> setting_pairs(const ChshAngles& angles);

/// Transmission probabilities of the two virtual detectors on Bob's arm.
/// Each one independently replaces the outcome with a fair +-1 with
/// probability 1 - gamma.
struct VirtualDetectors {
    double gamma_dop = 1.0;
    double gamma_snr = 1.0;
};

struct ChshResult {
    double s = 0.0;
    double std_error = 0.0;
    std::array<CoincidenceCounts, 4> counts;
    std::size_t n_pairs = 0;
};

/// S = E11 - E13 + E31 + E33 with std error sqrt(sum (1 - E^2) / N_j).
ChshResult tally(const std::array<CoincidenceCounts, 4>& counts);

/// Pairs split equally across the four settings, remainder to the first.
std::array<std::size_t, 4> allocate_pairs(std::size_t n_pairs);

/// Throws DomainError for n_pairs < 4 or gamma outside [0, 1].
ChshResult chsh(const TwoQubitState& source, const ChshAngles& angles, std::size_t n_pairs,
                const VirtualDetectors& detectors, Rng& rng);

/// Signal fraction to gamma_snr.
/// linear: gamma = S_F.
/// quadratic_noise: gamma = 1 - (1 - S_F)^2, a background photon corrupts
/// the outcome only when it also displaces the signal in the coincidence gate.
enum class SnrMapping { linear, quadratic_noise };

double gamma_snr(double signal_fraction, SnrMapping mapping);

struct E91Config {
    std::size_t n_pairs_per_step = 10000;
    ChshAngles angles;
    SnrMapping snr_mapping = SnrMapping::quadratic_noise;
    bool apply_dop = true;
    bool apply_snr = true;
    double validity_sigma = 2.0;

    void validate() const;
};

struct E91Sample {
    double t_s = 0.0;
    double elevation_rad = 0.0;
    double gamma_dop = 1.0;
    double gamma_snr = 1.0;
    ChshResult result;
};

struct ValidityWindow {
    bool found = false;
    double t_start_s = 0.0;
    double t_end_s = 0.0;
};

struct E91PassResult {
    std::vector<E91Sample> samples;
    ValidityWindow window;
    double s_min = 0.0;
    double s_max = 0.0;
};

/// Contiguous run around maximum elevation with S + k * std_error < -2.
ValidityWindow validity_window(const std::vector<E91Sample>& samples, double k_sigma);

E91PassResult simulate_chsh_over_pass(const std::vector<orbit::PassSample>& pass,
                                      const link::LinkModel& model, const E91Config& cfg,
                                      std::uint64_t seed);

/// t_s, S, std_error, n_pairs, gamma_dop, gamma_snr.
std::string to_csv(const E91PassResult& result);

}  // namespace satqkd::e91
