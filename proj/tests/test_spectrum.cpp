#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <heisenspec/spectrum.hpp>

using namespace heisenspec;
using Catch::Approx;

TEST_CASE("spectrum construction and counting") {
    const spectrum sp = make_spectrum({1.0, std::sqrt(2.0), std::sqrt(3.0), 2.0}, {1, 1, 1, 1});
    REQUIRE(counting_function(sp, 0.5) == 0.0);
    REQUIRE(counting_function(sp, 1.0) == 1.0);  // closed inequality
    REQUIRE(counting_function(sp, 1.9) == 3.0);
    REQUIRE(counting_function(sp, 100.0) == 4.0);

    const spectrum wm = make_spectrum({1.0, 2.0}, {3, 2});
    REQUIRE(counting_function(wm, 1.5) == 3.0);
    REQUIRE(counting_function(wm, 2.0) == 5.0);

    REQUIRE_THROWS_AS(make_spectrum({2.0, 1.0}, {1, 1}), range_violation);
    REQUIRE_THROWS_AS(make_spectrum({1.0}, {1, 1}), dimension_mismatch);
    REQUIRE_THROWS_AS(make_spectrum({1.0}, {0}), range_violation);
}

TEST_CASE("synthetic spectrum inverts its own counting law") {
    // lambda_k = ((k+1)/nu0)^(1/a) makes N(lambda_k) = nu0 lambda_k^a exactly
    const double nu0 = 0.37, a = 2.0;
    const spectrum sp = synthetic_spectrum(nu0, a, 50);
    REQUIRE(sp.lambda[0] == Approx(std::pow(1.0 / nu0, 0.5)));
    for (std::size_t k = 0; k < sp.lambda.size(); ++k) {
        REQUIRE(counting_function(sp, sp.lambda[k]) == Approx(static_cast<double>(k + 1)));
        REQUIRE(nu0 * std::pow(sp.lambda[k], a) == Approx(static_cast<double>(k + 1)).epsilon(1e-12));
    }

    const spectrum unit = synthetic_spectrum(1.0, 2.0, 4);
    REQUIRE(unit.lambda[0] == Approx(1.0));
    REQUIRE(unit.lambda[1] == Approx(std::sqrt(2.0)));
    REQUIRE(unit.lambda[2] == Approx(std::sqrt(3.0)));
    REQUIRE(unit.lambda[3] == Approx(2.0));
}

TEST_CASE("heat trace on a two-level spectrum") {
    const spectrum sp = make_spectrum({0.0, std::log(2.0)}, {1, 1});
    REQUIRE(heat_trace(sp, 1.0) == Approx(1.5).epsilon(1e-15));
    REQUIRE(heat_trace(sp, 2.0) == Approx(1.25).epsilon(1e-15));
}

TEST_CASE("heat trace equals the counting-measure transform") {
    // Tr e^{-tP} = t * int_0^inf N(lambda) e^{-t lambda} dlambda on finite spectra
    const spectrum sp = make_spectrum({0.5, 1.0, 1.0, 2.5}, {1, 2, 1, 4});
    const double t = 0.7;
    double stieltjes = 0.0;
    // piecewise-constant N: integrate exactly between jump points
    std::vector<double> jumps = {0.0, 0.5, 1.0, 2.5, 60.0};
    for (std::size_t i = 1; i < jumps.size(); ++i) {
        const double nval = counting_function(sp, 0.5 * (jumps[i - 1] + jumps[i]));
        stieltjes += nval * (std::exp(-t * jumps[i - 1]) - std::exp(-t * jumps[i]));
    }
    REQUIRE(heat_trace(sp, t) == Approx(stieltjes).epsilon(1e-12));
}

TEST_CASE("two-term fit recovers the density on a valid sample window") {
    const spectrum sp = synthetic_spectrum(1.0, 2.0, 1000000);
    std::vector<trace_sample> samples;
    for (double t : {0.05, 0.04, 0.03, 0.02})
        samples.push_back({t, heat_trace(sp, t)});
    const karamata_result fit = karamata_fit(samples, 2, 2);
    REQUIRE(fit.nu0 == Approx(1.0).epsilon(0.02));
    REQUIRE(fit.quality < 1e-2);
}

TEST_CASE("fit rejects malformed sample sets") {
    const std::vector<trace_sample> two = {{0.1, 5.0}, {0.05, 20.0}};
    REQUIRE_THROWS_AS(karamata_fit(two, 3, 2), range_violation);
    const std::vector<trace_sample> dup = {{0.1, 5.0}, {0.1, 5.0}, {0.05, 20.0}};
    REQUIRE_THROWS_AS(karamata_fit(dup, 3, 2), range_violation);
    const std::vector<trace_sample> ok = {{0.1, 5.0}, {0.08, 8.0}, {0.05, 20.0}};
    REQUIRE_THROWS_AS(karamata_fit(ok, 3, 3), range_violation);  // odd order
    REQUIRE_THROWS_AS(karamata_fit(ok, 0, 2), range_violation);
    // strictly decreasing but numerically coincident times: degenerate design
    const double t0 = 0.1;
    const double t1 = std::nextafter(t0, 0.0);
    const double t2 = std::nextafter(t1, 0.0);
    const std::vector<trace_sample> nearly = {{t0, 5.0}, {t1, 5.0}, {t2, 5.0}};
    REQUIRE_THROWS_AS(karamata_fit(nearly, 3, 2), fit_failed);
}

TEST_CASE("prediction modes are mutually consistent") {
    const double d = 3, m = 2, nu0 = 0.25;
    const double lam = 7.0;
    const double n_at = weyl_prediction(3, 2, nu0, predict_mode::counting, lam);
    REQUIRE(n_at == Approx(nu0 * std::pow(lam, (d + 2) / m)));
    const double lam_back = weyl_prediction(3, 2, nu0, predict_mode::eigenvalue, n_at);
    REQUIRE(lam_back == Approx(lam).epsilon(1e-12));
    // heat mode: leading coefficient nu0 * Gamma(a+1) * t^{-a}
    const double t = 0.1;
    const double a = (d + 2) / m;
    REQUIRE(weyl_prediction(3, 2, nu0, predict_mode::heat, t) ==
            Approx(nu0 * std::tgamma(a + 1.0) * std::pow(t, -a)).epsilon(1e-12));
    REQUIRE_THROWS_AS(weyl_prediction(0, 2, nu0, predict_mode::counting, 1.0), range_violation);
    REQUIRE_THROWS_AS(weyl_prediction(3, 2, nu0, predict_mode::eigenvalue, -1.0), range_violation);
}
