#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "satqkd/error.hpp"
#include "satqkd/link.hpp"

using namespace satqkd;
using namespace satqkd::link;

namespace {
const LinkModel& default_model() {
    static const LinkModel model{LinkConfig{}};
    return model;
}
}  // namespace

TEST_CASE("calibration constants") {
    const auto& cal = default_model().calibration();
    CHECK(cal.radiance_conversion == doctest::Approx(5.7536e-4).epsilon(1e-4));
    CHECK(cal.background_exponent == doctest::Approx(0.74214).epsilon(1e-4));
    CHECK(cal.zenith_signal_cps == doctest::Approx(1.1e5 * 0.798 / 0.202).epsilon(1e-12));
    CHECK(cal.pointing_beam_divergence_rad == doctest::Approx(2.2702e-6).epsilon(1e-4));
}

TEST_CASE("zenith channel state") {
    const auto s = default_model().channel(kPi / 2);
    CHECK(s.slant_range_m == doctest::Approx(750e3));
    CHECK(s.signal_fraction == doctest::Approx(0.798).epsilon(1e-12));
    CHECK(s.background_cps == doctest::Approx(1.1e5).epsilon(1e-12));
    CHECK(s.wander_variance_m2 == doctest::Approx(oracle::kWanderVarianceZenith).epsilon(1e-9));
    CHECK(s.pointing_sigma_m == doctest::Approx(std::sqrt(0.5625 + oracle::kWanderVarianceZenith)).epsilon(1e-9));
    CHECK(s.scintillation_index == doctest::Approx(oracle::kRytovZenith).epsilon(1e-9));
}

TEST_CASE("budget is ordered, non-negative and sums exactly") {
    const auto b = default_model().budget(kPi / 2, 0.0);
    REQUIRE(b.entries.size() == kChannelCount);
    double sum = 0.0;
    for (std::size_t i = 0; i < kChannelCount; ++i) {
        CHECK(b.entries[i].first == kChannelNames[i]);
        CHECK(b.entries[i].second >= 0.0);
        sum += b.entries[i].second;
    }
    CHECK(b.total_db == sum);
    CHECK(b.at("geometric") == doctest::Approx(oracle::kFixedLossDb).epsilon(1e-12));
    CHECK(b.at("basis_rotation_shift") == 0.265);
    CHECK(b.at("wavefront_aberration") == 0.619);
    CHECK(b.at("mean_off_pointing") == doctest::Approx(1.861).epsilon(1e-9));
    CHECK(b.at("beam_spreading") == doctest::Approx(0.003).epsilon(1e-9));
    CHECK(b.transmittance() == doctest::Approx(std::pow(10.0, -b.total_db / 10.0)));
    CHECK_THROWS_AS(b.at("nope"), std::out_of_range);
}

TEST_CASE("horizon spreading target is met at the secant cap") {
    const auto b = default_model().budget(deg_to_rad(5.0), 0.0);
    CHECK(b.at("beam_spreading") == doctest::Approx(0.006).epsilon(1e-6));
}

TEST_CASE("scintillation percentile moves only the scintillation entry") {
    const auto lo = default_model().budget(kPi / 2, 0.0);
    const auto hi = default_model().budget(kPi / 2, 0.97725);
    for (std::size_t i = 0; i < kChannelCount; ++i)
        if (lo.entries[i].first != "scintillation") CHECK(lo.entries[i].second == hi.entries[i].second);
    CHECK(hi.total_db - lo.total_db == doctest::Approx(hi.at("scintillation")));
}

TEST_CASE("zero budget") {
    std::vector<std::pair<std::string, double>> zeros;
    for (const char* name : kChannelNames) zeros.emplace_back(name, 0.0);
    const auto b = make_budget(kPi / 2, zeros);
    CHECK(b.total_db == 0.0);
    CHECK(b.transmittance() == 1.0);
    zeros[3].second = -1.0;
    try {
        make_budget(kPi / 2, zeros);
        FAIL("expected ChannelError");
    } catch (const ChannelError& e) {
        CHECK(e.channel() == "background_snr");
    }
}

TEST_CASE("channel failures carry the channel name") {
    LinkConfig cfg;
    cfg.atmosphere.dop_horizon = 1.0;
    cfg.atmosphere.dop_zenith = 1.0;
    const LinkModel model(cfg);
    CHECK(model.budget(kPi / 2, 0.0).at("depolarization") == 0.0);
    try {
        model.budget(kPi / 2, 1.0);
        FAIL("expected ChannelError");
    } catch (const ChannelError& e) {
        CHECK(e.channel() == "scintillation");
    }
}

TEST_CASE("pinned calibration reproduces the model") {
    const auto& m = default_model();
    const LinkModel pinned(pin_calibration(m.config(), m.calibration()));
    const auto a = m.budget(deg_to_rad(30.0), 0.5);
    const auto b = pinned.budget(deg_to_rad(30.0), 0.5);
    for (std::size_t i = 0; i < kChannelCount; ++i)
        CHECK(a.entries[i].second == doctest::Approx(b.entries[i].second).epsilon(1e-12));
}

TEST_CASE("invalid section is rejected before any computation") {
    LinkConfig cfg;
    cfg.receiver.quantum_efficiency = 0.0;
    CHECK_THROWS_AS(LinkModel{cfg}, ConfigError);
}
