#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include <heisenspec/errors.hpp>
#include <heisenspec/quadrature.hpp>

namespace quad = heisenspec::quad;
using Catch::Approx;

TEST_CASE("single panel is exact on polynomials") {
    quad::quad_options opt;
    opt.rel_tol = 1e-12;
    // degree 7: integral of x^7 over [0, 2] = 32
    auto out = quad::integrate([](double x) { return x * x * x * x * x * x * x; }, 0.0, 2.0, opt);
    REQUIRE(out.value == Approx(32.0).epsilon(1e-14));
    REQUIRE(out.panels <= 2);
}

TEST_CASE("oscillator ratio integral hits the closed form") {
    // int_0^infty x/sinh x dx = pi^2/4; the integrand tail beyond 45 is < 1e-17
    quad::quad_options opt;
    opt.rel_tol = 1e-13;
    auto f = [](double x) { return x < 1e-300 ? 1.0 : x / std::sinh(x); };
    auto out = quad::integrate_breaks(f, {0.0, 1.0, 5.0, 15.0, 45.0}, opt);
    REQUIRE(out.value == Approx(M_PI * M_PI / 4.0).epsilon(1e-12));
    REQUIRE(out.err < 1e-10);
}

TEST_CASE("bose integral hits the closed form") {
    // int_0^infty x/(e^x - 1) dx = pi^2/6
    quad::quad_options opt;
    opt.rel_tol = 1e-13;
    auto f = [](double x) { return x / std::expm1(x); };
    auto out = quad::integrate_breaks(f, {0.0, 1.0, 8.0, 50.0}, opt);
    REQUIRE(out.value == Approx(M_PI * M_PI / 6.0).epsilon(1e-12));
}

TEST_CASE("complex integrand") {
    // int_0^pi e^{ix} dx = 2i
    quad::quad_options opt;
    opt.rel_tol = 1e-12;
    auto out = quad::integrate([](double x) { return std::exp(std::complex<double>(0.0, x)); },
                               0.0, M_PI, opt);
    REQUIRE(std::abs(out.value - std::complex<double>(0.0, 2.0)) < 1e-12);
}

TEST_CASE("error estimate is honest on a smooth integrand") {
    quad::quad_options opt;
    opt.rel_tol = 1e-10;
    auto out = quad::integrate([](double x) { return std::exp(-x * x); }, -6.0, 6.0, opt);
    const double truth = std::sqrt(M_PI) * std::erf(6.0);
    REQUIRE(std::abs(out.value - truth) <= std::max(out.err, 1e-14));
}

TEST_CASE("panel budget exhaustion throws") {
    quad::quad_options opt;
    opt.rel_tol = 1e-14;
    opt.max_panels = 10;
    auto f = [](double x) { return 1.0 / std::sqrt(x); };
    REQUIRE_THROWS_AS(quad::integrate(f, 0.0, 1.0, opt), heisenspec::tolerance_not_met);
}

TEST_CASE("runs are deterministic") {
    quad::quad_options opt;
    opt.rel_tol = 1e-11;
    auto f = [](double x) { return std::sin(20.0 * x) / (1.0 + x * x); };
    auto a = quad::integrate(f, 0.0, 10.0, opt);
    auto b = quad::integrate(f, 0.0, 10.0, opt);
    REQUIRE(a.value == b.value);
    REQUIRE(a.err == b.err);
    REQUIRE(a.panels == b.panels);
}

TEST_CASE("breakpoint validation") {
    quad::quad_options opt;
    auto f = [](double x) { return x; };
    REQUIRE_THROWS_AS(quad::integrate_breaks(f, {1.0, 1.0}, opt), heisenspec::range_violation);
    REQUIRE_THROWS_AS(quad::integrate_breaks(f, {2.0, 1.0}, opt), heisenspec::range_violation);
    REQUIRE_THROWS_AS(quad::integrate_breaks(f, {1.0}, opt), heisenspec::range_violation);
    quad::quad_options none;
    none.rel_tol = 0.0;
    none.abs_floor = 0.0;
    REQUIRE_THROWS_AS(quad::integrate(f, 0.0, 1.0, none), heisenspec::range_violation);
}

TEST_CASE("upper incomplete gamma anchors") {
    REQUIRE(quad::upper_gamma_int(0, 1.3) == Approx(std::exp(-1.3)).epsilon(1e-14));
    // Gamma(3, 1) = 5/e
    REQUIRE(quad::upper_gamma_int(2, 1.0) == Approx(5.0 / std::exp(1.0)).epsilon(1e-14));
    // Gamma(n+1, 0) = n!
    REQUIRE(quad::upper_gamma_int(5, 0.0) == Approx(120.0).epsilon(1e-14));
    // decreasing in x
    REQUIRE(quad::upper_gamma_int(3, 2.0) > quad::upper_gamma_int(3, 2.5));
}

TEST_CASE("abs_floor stops refinement of a negligible integral") {
    quad::quad_options opt;
    opt.rel_tol = 1e-12;
    opt.abs_floor = 1e-9;
    opt.max_panels = 50;
    // tiny but wiggly; relative convergence alone would exhaust the budget
    auto f = [](double x) { return 1e-18 * std::sin(500.0 * x); };
    auto out = quad::integrate(f, 0.0, 1.0, opt);
    REQUIRE(std::abs(out.value) < 1e-9);
}
