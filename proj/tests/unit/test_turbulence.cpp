#include <doctest.h>

#include <algorithm>
#include <limits>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "oracles.hpp"
#include "satqkd/error.hpp"
#include "satqkd/turbulence.hpp"

using namespace satqkd;
using namespace satqkd::turbulence;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("Hufnagel-Valley profile") {
    const TurbulenceProfile p;
    CHECK(cn2(0.0, p) == doctest::Approx(oracle::kCn2Ground).epsilon(1e-14));
    CHECK(cn2(10000.0, p) == doctest::Approx(oracle::kCn2At10km).epsilon(1e-12));
    CHECK(cn2(1e6, p) < 1e-30);
    double prev = cn2(10000.0, p);
    for (double h = 11000.0; h <= 30000.0; h += 1000.0) {
        const double v = cn2(h, p);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(path_averaged_cn2(p) == doctest::Approx(oracle::kCn2PathAverage).epsilon(1e-9));
}

TEST_CASE("Rytov variance against the quadrature oracle") {
    const TurbulenceProfile p;
    CHECK(scintillation_index(0.0, p) == doctest::Approx(oracle::kRytovZenith).epsilon(1e-9));
    CHECK(scintillation_index(deg_to_rad(60.0), p) == doctest::Approx(oracle::kRytov60).epsilon(1e-9));
    CHECK(scintillation_index(deg_to_rad(80.0), p) == doctest::Approx(oracle::kRytov80).epsilon(1e-9));
    CHECK(scintillation_index(deg_to_rad(60.0), p) / scintillation_index(0.0, p) ==
          doctest::Approx(std::pow(2.0, 11.0 / 6.0)).epsilon(1e-12));
    CHECK(scintillation_index(0.0, p) < 0.3);
    double prev = 0.0;
    for (int d = 0; d <= 85; d += 5) {
        const double s = scintillation_index(deg_to_rad(d), p);
        CHECK(s > prev);
        prev = s;
    }
}

TEST_CASE("log-normal intensity density") {
    for (double s2 : {0.05, 0.125, 1.0, 3.1}) {
        boost::math::quadrature::exp_sinh<double> integrator;
        const double mass = integrator.integrate([&](double i) { return lognormal_intensity_pdf(i, s2, 1.0); }, 0.0,
                                                 std::numeric_limits<double>::infinity());
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
        const double mean = integrator.integrate([&](double i) { return i * lognormal_intensity_pdf(i, s2, 2.0); }, 0.0,
                                                 std::numeric_limits<double>::infinity());
        CHECK(mean == doctest::Approx(2.0).epsilon(1e-6));
    }
    CHECK(lognormal_intensity_pdf(1.0, 1e-6, 1.0) > 100.0);
}

TEST_CASE("intensity sampler mean and determinism") {
    const double s2 = oracle::kRytovZenith;
    Rng rng = make_stream(11, 0);
    constexpr int n = 1000000;
    double sum = 0.0;
    double sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = sample_normalized_intensity(s2, rng);
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::abs(mean - 1.0) < 3.0 * se);

    Rng a = make_stream(5, 2);
    Rng b = make_stream(5, 2);
    for (int i = 0; i < 100; ++i) CHECK(sample_scintillation_loss_db(s2, a) == sample_scintillation_loss_db(s2, b));
    Rng c = make_stream(5, 2);
    CHECK(sample_scintillation_loss_db(0.0, c) == 0.0);
}

TEST_CASE("scintillation loss quantile agrees with the sampler") {
    const double s2 = oracle::kRytovZenith;
    const double q = TurbulenceProfile{}.scintillation_max_percentile;
    CHECK(scintillation_loss_quantile_db(s2, q) == doctest::Approx(oracle::kScintQuantileZenith).epsilon(1e-9));
    CHECK(scintillation_loss_quantile_db(s2, 0.0) == 0.0);
    CHECK(scintillation_loss_quantile_db(0.0, 0.9) == 0.0);
    CHECK_THROWS_AS(scintillation_loss_quantile_db(s2, 1.0), DomainError);

    Rng rng = make_stream(3, 0);
    std::vector<double> losses(200000);
    for (auto& l : losses) l = sample_scintillation_loss_db(s2, rng);
    std::sort(losses.begin(), losses.end());
    for (double p : {0.6, 0.9, 0.97725}) {
        const double empirical = losses[static_cast<std::size_t>(p * losses.size())];
        CHECK(empirical == doctest::Approx(scintillation_loss_quantile_db(s2, p)).epsilon(0.02));
    }
}

TEST_CASE("mean absolute intensity deviation") {
    CHECK(mean_absolute_intensity_deviation(oracle::kRytovZenith) ==
          doctest::Approx(oracle::kMeanAbsDeviationZenith).epsilon(1e-10));
    CHECK(mean_absolute_intensity_deviation(0.0) == 0.0);
}

TEST_CASE("beam wander") {
    const TurbulenceProfile p;
    const double z = atmospheric_path_length(0.0, p);
    CHECK(z == 20000.0);
    CHECK(beam_wander_variance(z, 13.17, p) == doctest::Approx(oracle::kWanderVarianceZenith).epsilon(1e-9));
    CHECK(beam_wander_variance(z, 8 * 13.17, p) == doctest::Approx(0.5 * beam_wander_variance(z, 13.17, p)).epsilon(1e-12));
    CHECK(beam_wander_variance(2 * z, 13.17, p) == doctest::Approx(8.0 * beam_wander_variance(z, 13.17, p)).epsilon(1e-12));
    CHECK(beam_wander_sigma(z, 13.17, p) == doctest::Approx(std::sqrt(oracle::kWanderVarianceZenith)).epsilon(1e-9));
}

TEST_CASE("pointing sigma") {
    const TurbulenceProfile p;
    const double tl = p.pointing_error_rad * 750e3;
    CHECK(tl * tl == doctest::Approx(0.5625).epsilon(1e-12));
    CHECK(pointing_sigma(750e3, 0.0, p) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(pointing_sigma(750e3, std::sqrt(1e-3), p) == doctest::Approx(std::sqrt(0.5625 + 1e-3)).epsilon(1e-14));
}

TEST_CASE("Rayleigh pointing density") {
    const double s = 0.75;
    boost::math::quadrature::exp_sinh<double> integrator;
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(integrator.integrate([&](double r) { return weibull_pointing_pdf(r, s); }, 0.0, inf) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(integrator.integrate([&](double r) { return r * weibull_pointing_pdf(r, s); }, 0.0, inf) ==
          doctest::Approx(s * std::sqrt(kPi / 2)).epsilon(1e-9));
    double best_r = 0.0;
    double best = 0.0;
    for (double r = 0.0; r < 5.0; r += 1e-4)
        if (weibull_pointing_pdf(r, s) > best) {
            best = weibull_pointing_pdf(r, s);
            best_r = r;
        }
    CHECK(best_r == doctest::Approx(s).epsilon(1e-3));
}

TEST_CASE("PDTC parameters against the high-precision oracle") {
    struct Row {
        double w, t0sq, shape, scale;
    };
    const Row rows[] = {
        {100.0, oracle::kPdtcT0sq_001, oracle::kPdtcShape_001, oracle::kPdtcScale_001},
        {10.0, oracle::kPdtcT0sq_01, oracle::kPdtcShape_01, oracle::kPdtcScale_01},
        {1.0, oracle::kPdtcT0sq_1, oracle::kPdtcShape_1, oracle::kPdtcScale_1},
        {1.0 / 3.0, oracle::kPdtcT0sq_3, oracle::kPdtcShape_3, oracle::kPdtcScale_3},
        {36.4, oracle::kPdtcT0sq_W364, oracle::kPdtcShape_W364, oracle::kPdtcScale_W364},
    };
    for (const auto& row : rows) {
        CAPTURE(row.w);
        const auto p = pdtc_params(1.0, row.w, 0.75);
        CHECK(rel(p.t0 * p.t0, row.t0sq) < 1e-12);
        CHECK(rel(p.shape, row.shape) < 1e-9);
        CHECK(rel(p.scale_m, row.scale) < 1e-9);
    }
    // Small-beam-ratio limits: shape -> 2, scale -> W / sqrt(2).
    const auto wide = pdtc_params(1.0, 1000.0, 1.0);
    CHECK(wide.shape == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(wide.scale_m == doctest::Approx(1000.0 / std::sqrt(2.0)).epsilon(1e-5));
    CHECK(pdtc_params(1.0, 36.4, 1.0).t0 * pdtc_params(1.0, 36.4, 1.0).t0 ==
          doctest::Approx(2.0 / (36.4 * 36.4)).epsilon(1e-3));
    CHECK(pdtc_params(1.0, 0.01, 1.0).t0 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(pdtc_params(0.0, 1.0, 1.0), DomainError);
}

TEST_CASE("PDTC stays finite where unscaled Bessel functions overflow") {
    const auto p = pdtc_params(1.0, 0.02, 0.5);  // 4a^2/W^2 = 1e4
    CHECK(std::isfinite(p.shape));
    CHECK(std::isfinite(p.scale_m));
    CHECK(p.scale_m == doctest::Approx(1.0).epsilon(0.05));
    CHECK(detail::scaled_bessel_i(0, 701.0) == doctest::Approx(detail::scaled_bessel_i(0, 699.0)).epsilon(2e-3));
    CHECK(detail::scaled_bessel_i(1, 2000.0) == doctest::Approx(1.0 / std::sqrt(2 * kPi * 2000.0)).epsilon(1e-3));
}

TEST_CASE("transmission") {
    const auto p = pdtc_params(1.0, 1.7, 0.75);
    CHECK(transmission(0.0, p) == p.t0);
    CHECK(transmission(p.scale_m, p) * transmission(p.scale_m, p) == doctest::Approx(p.t0 * p.t0 / std::exp(1.0)));
    double prev = p.t0;
    for (double r = 0.01; r < 10.0; r += 0.01) {
        const double t = transmission(r, p);
        CHECK(t < prev);
        CHECK(t >= 0.0);
        prev = t;
    }
    CHECK(deflection_for_transmission(transmission(0.8, p), p) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("PDTC density normalizes and matches its CDF") {
    for (double w : {1.7, 36.4}) {
        for (double s : {0.3, 0.75, 2.3}) {
            CAPTURE(w);
            CAPTURE(s);
            const auto p = pdtc_params(1.0, w, s);
            boost::math::quadrature::tanh_sinh<double> integrator;
            const double mass = integrator.integrate([&](double t) { return pdtc_pdf(t, p); }, 0.0, p.t0);
            CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
            const double mid = 0.5 * p.t0;
            const double partial = integrator.integrate([&](double t) { return pdtc_pdf(t, p); }, 0.0, mid);
            CHECK(partial == doctest::Approx(pdtc_cdf(mid, p)).epsilon(1e-6));
        }
    }
    const auto p = pdtc_params(1.0, 1.7, 0.75);
    CHECK(pdtc_pdf(p.t0, p) == 0.0);
    CHECK(pdtc_pdf(1.5 * p.t0, p) == 0.0);
    CHECK(pdtc_cdf(0.0, p) == 0.0);
    CHECK(pdtc_cdf(p.t0, p) == 1.0);
    const auto tight = pdtc_params(1.0, 1.7, 1e-3);
    CHECK(pdtc_cdf(0.99 * tight.t0, tight) < 1e-12);
}

TEST_CASE("mean deflection is the Rayleigh mean and scales with sigma") {
    const auto p = pdtc_params(1.0, 1.7, 0.75);
    CHECK(mean_deflection(p) == doctest::Approx(0.75 * std::sqrt(kPi / 2)).epsilon(1e-9));
    const auto q = pdtc_params(1.0, 1.7, 1.5);
    CHECK(mean_deflection(q) == doctest::Approx(2.0 * mean_deflection(p)).epsilon(1e-9));
}

TEST_CASE("off-pointing loss") {
    const auto p = pdtc_params(1.0, 1.7, 0.75);
    const double r = mean_deflection(p);
    const double t = transmission(r, p);
    CHECK(offpointing_loss_db(p) == doctest::Approx(-10.0 * std::log10(t * t / (p.t0 * p.t0))).epsilon(1e-12));
    const auto tiny = pdtc_params(1.0, 1.7, 1e-9);
    CHECK(offpointing_loss_db(tiny) < 1e-12);

    const double theta = pointing_divergence_for_loss(1.861, 750e3, 1.0, 0.75);
    CHECK(offpointing_loss_db(pdtc_params(1.0, theta * 750e3, 0.75)) == doctest::Approx(1.861).epsilon(1e-9));
    CHECK_THROWS_AS(pointing_divergence_for_loss(50.0, 750e3, 1.0, 0.75), NumericError);
}
