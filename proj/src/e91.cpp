#include "satqkd/e91.hpp"

#include <algorithm>
#include <cmath>

#include <boost/random/uniform_01.hpp>

#include "satqkd/error.hpp"
#include "satqkd/io.hpp"
#include "satqkd/parallel.hpp"

namespace satqkd::e91 {

TwoQubitState::TwoQubitState() : amp_{Complex{1.0, 0.0}, Complex{}, Complex{}, Complex{}} {}

TwoQubitState::TwoQubitState(const std::array<Complex, 4>& amplitudes) : amp_(amplitudes) {
    if (std::abs(norm() - 1.0) > 1e-12) throw DomainError("state amplitudes are not normalized");
}

double TwoQubitState::norm() const {
    double n = 0.0;
    for (const auto& a : amp_) n += std::norm(a);
    return n;
}

std::array<double, 4> TwoQubitState::probabilities() const {
    std::array<double, 4> p{};
    for (std::size_t i = 0; i < 4; ++i) p[i] = std::norm(amp_[i]);
    return p;
}

Matrix2 single_qubit_matrix(const Gate& gate) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (gate.kind) {
    case GateKind::h: return {{{r, r}, {r, -r}}};
    case GateKind::x: return {{{0.0, 1.0}, {1.0, 0.0}}};
    case GateKind::z: return {{{1.0, 0.0}, {0.0, -1.0}}};
    case GateKind::ry: {
        const double c = std::cos(0.5 * gate.theta);
        const double s = std::sin(0.5 * gate.theta);
        return {{{c, -s}, {s, c}}};
    }
    case GateKind::cnot: break;
    }
    throw DomainError("CNOT is not a single-qubit gate");
}

namespace {
void check_qubit(int q) {
    if (q != 0 && q != 1) throw DomainError("qubit index must be 0 or 1, got " + std::to_string(q));
}
}  // namespace

Matrix4 gate_matrix(const Gate& gate) {
    check_qubit(gate.target);
    Matrix4 m{};
    if (gate.kind == GateKind::cnot) {
        check_qubit(gate.control);
        if (gate.control == gate.target) throw DomainError("CNOT control equals target");
        for (int i = 0; i < 4; ++i) {
            const int control_bit = (i >> (1 - gate.control)) & 1;
            const int j = control_bit ? i ^ (1 << (1 - gate.target)) : i;
            m[j][i] = 1.0;
        }
        return m;
    }
    const Matrix2 u = single_qubit_matrix(gate);
    const int shift = 1 - gate.target;  // bit position of the target in the basis index
    for (int row = 0; row < 4; ++row)
        for (int col = 0; col < 4; ++col) {
            const int other_row = row & ~(1 << shift);
            const int other_col = col & ~(1 << shift);
            if (other_row != other_col) continue;
            m[row][col] = u[(row >> shift) & 1][(col >> shift) & 1];
        }
    return m;
}

double unitarity_error(const Matrix4& u) {
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Complex acc{};
            for (int k = 0; k < 4; ++k) acc += std::conj(u[k][i]) * u[k][j];
            worst = std::max(worst, std::abs(acc - Complex(i == j ? 1.0 : 0.0)));
        }
    return worst;
}

TwoQubitState apply_gate(const TwoQubitState& state, const Gate& gate) {
    const Matrix4 m = gate_matrix(gate);
    std::array<Complex, 4> out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[i] += m[i][j] * state[j];
    return TwoQubitState(out);
}

TwoQubitState prepare_singlet() {
    TwoQubitState s;
    for (const Gate& g : {Gate::X(0), Gate::X(1), Gate::H(0), Gate::CNOT(0, 1)}) s = apply_gate(s, g);
    return s;
}

std::array<double, 4> measurement_probabilities(const TwoQubitState& state, double a_rad, double b_rad) {
    TwoQubitState rotated = apply_gate(state, Gate::RY(0, -2.0 * a_rad));
    rotated = apply_gate(rotated, Gate::RY(1, -2.0 * b_rad));
    return rotated.probabilities();
}

namespace {
std::pair<int, int> draw_outcome(const std::array<double, 4>& p, double u) {
    std::size_t idx = 3;
    double cumulative = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        cumulative += p[i];
        if (u < cumulative) {
            idx = i;
            break;
        }
    }
    return {(idx >> 1) ? -1 : 1, (idx & 1) ? -1 : 1};
}
}  // namespace

std::pair<int, int> measure_pair(const TwoQubitState& state, double a_rad, double b_rad, Rng& rng) {
    boost::random::uniform_01<double> uniform;
    return draw_outcome(measurement_probabilities(state, a_rad, b_rad), uniform(rng));
}

void CoincidenceCounts::add(int alice, int bob) {
    if (alice > 0) (bob > 0 ? pp : pm)++;
    else (bob > 0 ? mp : mm)++;
}

double correlation(const CoincidenceCounts& c) {
    const auto total = c.total();
    if (total == 0) throw DomainError("correlation undefined for zero coincidences");
    const double same = static_cast<double>(c.pp + c.mm);
    const double diff = static_cast<double>(c.pm + c.mp);
    return (same - diff) / static_cast<double>(total);
}

std::array<std::pair<double, double>, 4> setting_pairs(const ChshAngles& a) {
    return {{{a.a1, a.b1}, {a.a1, a.b3}, {a.a3, a.b1}, {a.a3, a.b3}}};
}

ChshResult tally(const std::array<CoincidenceCounts, 4>& counts) {
    constexpr std::array<double, 4> sign{1.0, -1.0, 1.0, 1.0};
    ChshResult r;
    r.counts = counts;
    double var = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
        const double e = correlation(counts[j]);
        const auto n = static_cast<double>(counts[j].total());
        r.s += sign[j] * e;
        var += (1.0 - e * e) / n;
        r.n_pairs += counts[j].total();
    }
    r.std_error = std::sqrt(var);
    return r;
}

std::array<std::size_t, 4> allocate_pairs(std::size_t n_pairs) {
    std::array<std::size_t, 4> n{};
    for (std::size_t j = 0; j < 4; ++j) n[j] = n_pairs / 4 + (j < n_pairs % 4 ? 1 : 0);
    return n;
}

ChshResult chsh(const TwoQubitState& source, const ChshAngles& angles, std::size_t n_pairs,
                const VirtualDetectors& detectors, Rng& rng) {
    if (n_pairs < 4) throw DomainError("CHSH needs at least 4 pairs");
    for (double g : {detectors.gamma_dop, detectors.gamma_snr})
        if (!(g >= 0.0 && g <= 1.0)) throw DomainError("virtual detector gamma must lie in [0, 1]");

    boost::random::uniform_01<double> uniform;
    const auto allocation = allocate_pairs(n_pairs);
    const auto settings = setting_pairs(angles);
    std::array<CoincidenceCounts, 4> counts{};
    for (std::size_t j = 0; j < 4; ++j) {
        const auto p = measurement_probabilities(source, settings[j].first, settings[j].second);
        for (std::size_t k = 0; k < allocation[j]; ++k) {
            auto [alice, bob] = draw_outcome(p, uniform(rng));
            // Fixed draw count per pair keeps streams aligned for any gamma.
            const double u_dop = uniform(rng);
            const double c_dop = uniform(rng);
            const double u_snr = uniform(rng);
            const double c_snr = uniform(rng);
            if (u_dop >= detectors.gamma_dop) bob = c_dop < 0.5 ? 1 : -1;
            if (u_snr >= detectors.gamma_snr) bob = c_snr < 0.5 ? 1 : -1;
            counts[j].add(alice, bob);
        }
    }
    return tally(counts);
}

double gamma_snr(double signal_fraction, SnrMapping mapping) {
    if (!(signal_fraction >= 0.0 && signal_fraction <= 1.0)) throw DomainError("signal fraction must lie in [0, 1]");
    if (mapping == SnrMapping::linear) return signal_fraction;
    const double noise = 1.0 - signal_fraction;
    return 1.0 - noise * noise;
}

void E91Config::validate() const {
    if (n_pairs_per_step < 1000) throw ConfigError("e91.n_pairs_per_step", "must be >= 1000");
    if (!(validity_sigma > 0.0)) throw ConfigError("e91.validity_sigma", "must be > 0");
}

ValidityWindow validity_window(const std::vector<E91Sample>& samples, double k_sigma) {
    ValidityWindow w;
    if (samples.empty()) return w;
    auto valid = [&](const E91Sample& s) { return s.result.s + k_sigma * s.result.std_error < -2.0; };
    std::size_t peak = 0;
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (samples[i].elevation_rad > samples[peak].elevation_rad) peak = i;
    if (!valid(samples[peak])) return w;
    std::size_t lo = peak;
    std::size_t hi = peak;
    while (lo > 0 && valid(samples[lo - 1])) --lo;
    while (hi + 1 < samples.size() && valid(samples[hi + 1])) ++hi;
    w.found = true;
    w.t_start_s = samples[lo].t_s;
    w.t_end_s = samples[hi].t_s;
    return w;
}

E91PassResult simulate_chsh_over_pass(const std::vector<orbit::PassSample>& pass, const link::LinkModel& model,
                                      const E91Config& cfg, std::uint64_t seed) {
    cfg.validate();
    if (pass.empty()) throw DomainError("pass has no samples");
    const TwoQubitState singlet = prepare_singlet();

    E91PassResult out;
    out.samples.resize(pass.size());
    parallel_for(pass.size(), [&](std::size_t i) {
        const link::ChannelState ch = model.channel(pass[i].elevation_rad);
        E91Sample& s = out.samples[i];
        s.t_s = pass[i].t_s;
        s.elevation_rad = pass[i].elevation_rad;
        s.gamma_dop = cfg.apply_dop ? ch.dop : 1.0;
        s.gamma_snr = cfg.apply_snr ? gamma_snr(ch.signal_fraction, cfg.snr_mapping) : 1.0;
        Rng rng = make_stream(seed, i);
        s.result = chsh(singlet, cfg.angles, cfg.n_pairs_per_step, {s.gamma_dop, s.gamma_snr}, rng);
    });

    out.s_min = out.s_max = out.samples.front().result.s;
    for (const auto& s : out.samples) {
        out.s_min = std::min(out.s_min, s.result.s);
        out.s_max = std::max(out.s_max, s.result.s);
    }
    out.window = validity_window(out.samples, cfg.validity_sigma);
    return out;
}

std::string to_csv(const E91PassResult& result) {
    io::CsvTable table({"t_s", "S", "std_error", "n_pairs", "gamma_dop", "gamma_snr"});
    for (const auto& s : result.samples)
        table.add_row({s.t_s, s.result.s, s.result.std_error, static_cast<double>(s.result.n_pairs),
                       s.gamma_dop, s.gamma_snr});
    return table.str();
}

}  // namespace satqkd::e91
