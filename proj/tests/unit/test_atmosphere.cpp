#include <doctest.h>

#include <cmath>
#include <string>

#include "satqkd/atmosphere.hpp"
#include "satqkd/error.hpp"

using namespace satqkd;
using namespace satqkd::atmosphere;

TEST_CASE("transmissivity follows tau^sec") {
    const AtmosphereModel m;
    CHECK(transmissivity(0.0, m) == 0.851);
    CHECK(transmissivity(deg_to_rad(60.0), m) == doctest::Approx(0.851 * 0.851).epsilon(1e-12));
    CHECK(loss_db(transmissivity(0.0, m)) == doctest::Approx(0.70070).epsilon(1e-4));
    double prev = 1.0;
    for (int d = 0; d <= 85; ++d) {
        const double t = transmissivity(deg_to_rad(d), m);
        CHECK(t < prev);
        prev = t;
    }
    CHECK(transmissivity(deg_to_rad(89.0), m) == transmissivity(deg_to_rad(85.0), m));
}

TEST_CASE("log transmissivity is linear in the secant") {
    const AtmosphereModel m;
    for (double a : {5.0, 30.0, 55.0})
        for (double b : {10.0, 45.0, 80.0}) {
            const double lhs = std::log(transmissivity(deg_to_rad(a), m)) / std::log(transmissivity(deg_to_rad(b), m));
            const double rhs = std::cos(deg_to_rad(b)) / std::cos(deg_to_rad(a));
            CHECK(std::abs(lhs - rhs) < 1e-12);
        }
}

TEST_CASE("DoP endpoints and interpolation bounds") {
    const AtmosphereModel m;
    CHECK(dop(kPi / 2, m) == doctest::Approx(0.968).epsilon(1e-15));
    CHECK(dop(0.0, m) == doctest::Approx(0.961).epsilon(1e-15));
    for (int d = 0; d <= 90; ++d) {
        const double v = dop(deg_to_rad(d), m);
        CHECK(v >= 0.961 - 1e-15);
        CHECK(v <= 0.968 + 1e-15);
    }
}

TEST_CASE("DoP table interpolation") {
    AtmosphereModel m;
    m.dop_interpolation = DopInterpolation::table;
    m.dop_table = {{0.0, 0.9}, {45.0, 0.95}, {90.0, 0.97}};
    m.validate();
    CHECK(dop(deg_to_rad(22.5), m) == doctest::Approx(0.925));
    CHECK(dop(deg_to_rad(90.0), m) == doctest::Approx(0.97));
    m.dop_table = {{10.0, 0.9}};
    CHECK_THROWS_AS(m.validate(), ConfigError);
}

TEST_CASE("depolarization and SNR loss rules") {
    CHECK(depolarization_loss_db(1.0) == 0.0);
    CHECK(depolarization_loss_db(0.968) == doctest::Approx(0.2825).epsilon(1e-3));
    CHECK(depolarization_loss_db(0.961) == doctest::Approx(0.3455).epsilon(1e-3));
    CHECK_THROWS_AS(depolarization_loss_db(0.0), DomainError);
    CHECK(snr_loss_db(1.0) == 0.0);
    CHECK(snr_loss_db(0.795) == doctest::Approx(1.99).epsilon(1e-3));
    CHECK(snr_loss_db(0.102) == doctest::Approx(19.83).epsilon(1e-3));
    CHECK_THROWS_AS(snr_loss_db(0.0), DomainError);
    double prev = snr_loss_db(0.01);
    for (double f = 0.02; f <= 1.0; f += 0.01) {
        CHECK(snr_loss_db(f) < prev);
        prev = snr_loss_db(f);
    }
}

TEST_CASE("background calibration") {
    const BackgroundModel b;
    const beam::ReceiverConfig rx;
    CHECK(background_counts_zenith(b, rx) == doctest::Approx(1.1e5).epsilon(1e-12));
    CHECK(background_counts(kPi / 2, b, rx) == doctest::Approx(1.1e5).epsilon(1e-12));
    CHECK(background_counts(deg_to_rad(10.0), b, rx) == doctest::Approx(3.0e4).epsilon(1e-9));
    CHECK(background_profile_exponent(b, rx) == doctest::Approx(std::log(1.1e5 / 3e4) / std::log(1 / std::cos(deg_to_rad(80.0)))));
    double prev = 0.0;
    for (int d = 5; d <= 90; ++d) {
        const double n = background_counts(deg_to_rad(d), b, rx);
        CHECK(n >= prev);
        prev = n;
    }
}

TEST_CASE("background equation is linear in brightness and gating") {
    const beam::ReceiverConfig rx;
    BackgroundModel b;
    b.radiance_conversion = radiance_conversion_for(b, rx, 1.1e5);
    BackgroundModel open = b;
    open.gating_factor = 1.0;
    CHECK(background_counts_zenith(open, rx) == doctest::Approx(10.0 * background_counts_zenith(b, rx)).epsilon(1e-12));
    BackgroundModel dark = b;
    dark.natural_brightness = dark.artificial_brightness = 0.0;
    CHECK(background_counts_zenith(dark, rx) == 0.0);
}

TEST_CASE("background below the floor is clamped with a warning") {
    const BackgroundModel b;
    const beam::ReceiverConfig rx;
    std::string captured;
    set_warning_handler([&](const std::string& m) { captured = m; });
    const double low = background_counts(deg_to_rad(1.0), b, rx);
    set_warning_handler({});
    CHECK(low == background_counts(b.elevation_floor_rad, b, rx));
    CHECK(captured.find("clamped") != std::string::npos);
}

TEST_CASE("signal fraction") {
    CHECK(signal_fraction(5.0, 0.0) == 1.0);
    CHECK(signal_fraction(1.0, 3.0) == 0.25);
    CHECK(signal_fraction(7.0, 3.0) == doctest::Approx(signal_fraction(70.0, 30.0)).epsilon(1e-15));
    CHECK_THROWS_AS(signal_fraction(0.0, 0.0), DomainError);
    CHECK_THROWS_AS(signal_fraction(-1.0, 1.0), DomainError);
}

TEST_CASE("airmass models") {
    CHECK(airmass(0.0, AirmassModel::secant, deg_to_rad(85.0)) == 1.0);
    CHECK(airmass(0.0, AirmassModel::kasten_young, deg_to_rad(85.0)) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(airmass(deg_to_rad(60.0), AirmassModel::kasten_young, deg_to_rad(85.0)) == doctest::Approx(2.0).epsilon(1e-2));
}
