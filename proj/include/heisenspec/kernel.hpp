#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "group.hpp"
#include "quadrature.hpp"

namespace heisenspec {

struct quad_result {
    double value = 0;
    double est_error = 0;
};

struct kernel_value {
    std::complex<double> value{};
    double est_error = 0;
};

struct heat_query {
    int n = 1;
    double mu = 0;
    double x0 = 0;
    double r2 = 0;  // squared horizontal radius |x'|^2
    double t = 1;
    double rel_tol = 1e-10;
};

namespace detail {

// xi / sinh(xi), accurate through xi = 0.
inline double sinh_ratio(double xi) {
    const double a = std::abs(xi);
    if (a < 1e-4) {
        const double x2 = xi * xi;
        return 1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0;
    }
    if (a > 700.0) return 0.0;
    return xi / std::sinh(xi);
}

// log(xi / sinh(xi)), valid for all xi (even function).
inline double log_sinh_ratio(double xi) {
    const double a = std::abs(xi);
    if (a < 1e-4) {
        const double x2 = xi * xi;
        return std::log(1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0);
    }
    if (a > 30.0) return std::log(2.0 * a) - a - std::log1p(-std::exp(-2.0 * a));
    return std::log(a / std::sinh(a));
}

// xi / tanh(xi) >= 1, accurate through xi = 0.
inline double tanh_ratio(double xi) {
    const double a = std::abs(xi);
    if (a < 1e-4) {
        const double x2 = xi * xi;
        return 1.0 + x2 / 3.0 - x2 * x2 / 45.0;
    }
    if (a > 20.0) {
        const double e = std::exp(-2.0 * a);
        return a * (1.0 + e) / (1.0 - e);
    }
    return a / std::tanh(a);
}

// Bound on the two tails int_{|xi|>R} e^{-mu xi} (xi/sinh xi)^n dxi using
// (xi/sinh xi)^n <= (2 xi)^n e^{-n xi} (1 - e^{-2R})^{-n} on xi > R.
inline double fiber_tail_bound(int n, double mu, double r) {
    const double ap = n + mu, am = n - mu;
    const double damp = std::pow(1.0 - std::exp(-2.0 * r), -n);
    const double twon = std::pow(2.0, n);
    double tail = 0;
    tail += twon * quad::upper_gamma_int(n, ap * r) / std::pow(ap, n + 1);
    tail += twon * quad::upper_gamma_int(n, am * r) / std::pow(am, n + 1);
    return damp * tail;
}

// Geometric breakpoints: unit panels on [-8, 8], doubling panels out to +-R,
// optionally subdivided so no panel spans more than max_width.
inline std::vector<double> fiber_breaks(double r, double max_width) {
    std::vector<double> pos;
    for (double x = 0; x < 8.0 - 0.5; x += 1.0) pos.push_back(x + 1.0);
    double x = 8.0;
    while (x < r) {
        x = std::min(2.0 * x, r);
        pos.push_back(x);
    }
    if (pos.empty() || pos.back() < r) pos.push_back(r);
    std::vector<double> breaks;
    breaks.push_back(-pos.back());
    for (std::size_t i = pos.size(); i-- > 1;) breaks.push_back(-pos[i - 1]);
    breaks.push_back(0.0);
    for (double v : pos) breaks.push_back(v);
    if (max_width > 0) {
        std::vector<double> fine;
        fine.push_back(breaks.front());
        for (std::size_t i = 1; i < breaks.size(); ++i) {
            const double a = breaks[i - 1], b = breaks[i];
            const int parts = std::max(1, static_cast<int>(std::ceil((b - a) / max_width)));
            for (int p = 1; p <= parts; ++p) fine.push_back(a + (b - a) * p / parts);
        }
        return fine;
    }
    return breaks;
}

inline double choose_radius(int n, double mu, double target) {
    double r = 8.0;
    while (fiber_tail_bound(n, mu, r) > target) {
        r *= 2.0;
        if (r > 1e12)
            throw tolerance_not_met("fiber integral tail does not meet target within radius 1e12");
    }
    return r;
}

}  // namespace detail

// Spectral density constant: the value at the origin of the unit-time kernel
// divided by (n+1)!, as a one-dimensional integral
//   nu(mu) = (2 pi)^{-(n+1)} / (n+1)! * int e^{-mu xi} (xi/sinh xi)^n dxi.
// Defined for |mu| < n; even in mu.
inline quad_result nu(int n, double mu, double rel_tol = 1e-10) {
    if (n < 1) throw range_violation("nu: n must be >= 1, got " + std::to_string(n));
    if (!(rel_tol > 0)) throw range_violation("nu: rel_tol must be positive");
    if (!(std::abs(mu) < n))
        throw divergent_integral("nu: integral diverges for |mu| = " + std::to_string(std::abs(mu)) +
                                 " >= n = " + std::to_string(n));
    auto f = [&](double xi) {
        return std::exp(-mu * xi + n * detail::log_sinh_ratio(xi));
    };
    quad::quad_options crude;
    crude.rel_tol = 1e-3;
    crude.max_panels = 2000;
    const double i0 = quad::integrate(f, -8.0, 8.0, crude).value;
    const double r = detail::choose_radius(n, mu, 0.3 * rel_tol * std::max(i0, 1e-300));
    const double tail = detail::fiber_tail_bound(n, mu, r);
    quad::quad_options opt;
    opt.rel_tol = 0.5 * rel_tol;
    opt.max_panels = 40000;
    auto out = quad::integrate_breaks(f, detail::fiber_breaks(r, 0.0), opt);
    const double pref = std::pow(2.0 * M_PI, -(n + 1)) / std::tgamma(n + 2.0);
    quad_result res;
    res.value = pref * out.value;
    res.est_error = pref * (out.err + tail);
    return res;
}

namespace detail {

// Shared worker: kernel value with an absolute error floor (used by the mass
// integrator, where near-zero values must not trigger endless refinement).
inline kernel_value heat_kernel_impl(const heat_query& q, double abs_floor) {
    if (q.n < 1) throw range_violation("heat_kernel: n must be >= 1");
    if (!(q.t > 0)) throw range_violation("heat_kernel: t must be positive");
    if (!(q.r2 >= 0)) throw range_violation("heat_kernel: r2 must be >= 0");
    if (!(q.rel_tol > 0)) throw range_violation("heat_kernel: rel_tol must be positive");
    if (!(std::abs(q.mu) < q.n))
        throw divergent_integral("heat_kernel: integral diverges for |mu| = " +
                                 std::to_string(std::abs(q.mu)) + " >= n = " + std::to_string(q.n));
    const double osc = std::abs(q.x0) / q.t;
    if (osc > 1e4)
        throw tolerance_not_met("heat_kernel: oscillation |x0|/t = " + std::to_string(osc) +
                                " exceeds 1e4; result would lose all significant digits");
    const double rr = q.r2 / (2.0 * q.t);
    auto f = [&](double xi) {
        const double re = -q.mu * xi + q.n * log_sinh_ratio(xi) - tanh_ratio(xi) * rr;
        const double im = osc * (q.x0 >= 0 ? 1.0 : -1.0) * xi;
        return std::exp(std::complex<double>(re, im));
    };
    const double pref = std::pow(2.0 * M_PI * q.t, -(q.n + 1));
    // the r2 factor at |xi| > R >= 8 is at most e^{-rr} since xi/tanh xi >= 1
    const double tail_damp = std::exp(-rr);
    quad::quad_options crude;
    crude.rel_tol = 1e-3;
    crude.abs_floor = 1e-6;
    crude.max_panels = 4000;
    const double width = osc > 4.0 ? M_PI / osc : 0.0;
    double i0mag;
    {
        auto c = quad::integrate_breaks(f, fiber_breaks(8.0, width), crude);
        i0mag = std::abs(c.value);
    }
    double tail_target = 0.3 * q.rel_tol * std::max(i0mag, 1e-300);
    if (abs_floor > 0) tail_target = std::max(tail_target, 0.3 * abs_floor / pref);
    double radius = 8.0;
    while (tail_damp * fiber_tail_bound(q.n, q.mu, radius) > tail_target) {
        radius *= 2.0;
        if (radius > 1e12)
            throw tolerance_not_met("heat_kernel: tail does not meet target within radius 1e12");
    }
    const double tail = tail_damp * fiber_tail_bound(q.n, q.mu, radius);
    quad::quad_options opt;
    opt.rel_tol = 0.5 * q.rel_tol;
    opt.abs_floor = abs_floor > 0 ? 0.5 * abs_floor / pref : 0.0;
    opt.max_panels = 300000;
    auto out = quad::integrate_breaks(f, fiber_breaks(radius, width), opt);
    kernel_value kv;
    kv.value = pref * out.value;
    kv.est_error = pref * (out.err + tail);
    return kv;
}

}  // namespace detail

// Heat kernel of the model operator -(1/2) sum_{j<=2n} X_j^2 - i mu X_0 at
// the point (x0, x') with |x'|^2 = r2, time t:
//   k(x0, r2, t) = (2 pi t)^{-(n+1)} int e^{i x0 xi / t - mu xi}
//                  (xi/sinh xi)^n e^{-(xi/tanh xi) r2/(2t)} dxi.
// Complex in general; real when x0 = 0, and conj k_mu(x0) = k_mu(-x0).
inline kernel_value heat_kernel(const heat_query& q) {
    return detail::heat_kernel_impl(q, 0.0);
}

// Fiber transform of the kernel in the vertical frequency xi0:
// a Gaussian in the horizontal variable with the oscillator profile.
inline double fiber_mehler(int n, double xi0, double r2, double t) {
    if (n < 1) throw range_violation("fiber_mehler: n must be >= 1");
    if (!(t > 0)) throw range_violation("fiber_mehler: t must be positive");
    if (!(r2 >= 0)) throw range_violation("fiber_mehler: r2 must be >= 0");
    const double a = t * xi0;
    const double lg = n * detail::log_sinh_ratio(a) - detail::tanh_ratio(a) * r2 / (2.0 * t);
    return std::pow(2.0 * M_PI * t, -n) * std::exp(lg);
}

// Pointwise PDE residual |d_t k + L_mu k| at an off-origin point, with all
// derivatives taken as centered differences along exact group flows.
// Passing mu_kernel != mu gives a deliberate mismatch whose residual stays
// bounded away from zero, which calibrates the test's sensitivity.
inline double heat_residual(int n, double mu, const point& p, double t, double h,
                            double rel_tol = 1e-13,
                            std::optional<double> mu_kernel = std::nullopt) {
    if (n < 1) throw range_violation("heat_residual: n must be >= 1");
    if (p.dim() != 2 * n)
        throw dimension_mismatch("heat_residual: point must have 2n = " + std::to_string(2 * n) +
                                 " horizontal coordinates");
    if (!(t > 0)) throw range_violation("heat_residual: t must be positive");
    if (!(h > 0) || !(h < 0.5 * t))
        throw range_violation("heat_residual: need 0 < h < t/2");
    const double muk = mu_kernel.value_or(mu);
    const group_spec g = heisenberg_spec(n);
    auto k = [&](const point& y, double tau) {
        double r2 = 0;
        for (double v : y.xp) r2 += v * v;
        heat_query q{n, muk, y.x0, r2, tau, rel_tol};
        return heat_kernel(q).value;
    };
    const std::complex<double> kc = k(p, t);
    std::complex<double> lap{};
    for (int j = 0; j < 2 * n; ++j) {
        const point yp = flow_step(g, p, j, h);
        const point ym = flow_step(g, p, j, -h);
        lap += (k(yp, t) - 2.0 * kc + k(ym, t)) / (h * h);
    }
    point v0p = p, v0m = p;
    v0p.x0 += h;
    v0m.x0 -= h;
    const std::complex<double> x0d = (k(v0p, t) - k(v0m, t)) / (2.0 * h);
    const std::complex<double> td = (k(p, t + h) - k(p, t - h)) / (2.0 * h);
    const std::complex<double> i{0.0, 1.0};
    return std::abs(td - 0.5 * lap - i * mu * x0d);
}

// Integral of the mu = 0 kernel over the cylinder {|x0| <= trunc, |x'| <= trunc}
// in R^{1+2n}; tends to 1 as trunc grows.  Nested adaptive quadrature over
// pointwise kernel evaluations: radial integral per vertical slice, then the
// vertical integral folded by evenness.  est_error combines the quadrature
// estimates with a closed-form radial tail and a vertical boundary estimate,
// so under-truncation is flagged.
inline quad_result total_mass(int n, double t, double trunc, double rel_tol = 1e-6) {
    if (n < 1) throw range_violation("total_mass: n must be >= 1");
    if (!(t > 0)) throw range_violation("total_mass: t must be positive");
    if (!(trunc > 0)) throw range_violation("total_mass: trunc must be positive");
    if (!(rel_tol > 0)) throw range_violation("total_mass: rel_tol must be positive");
    const double big_t = trunc;
    // sphere factor: area of S^{2n-1}
    double omega = 2.0 * std::pow(M_PI, n);
    for (int j = 1; j < n; ++j) omega /= j;
    // error budget: 0.4 outer quadrature, 0.3 radial quadrature, 0.2 kernel
    // evaluations, floors folded in; the tail bounds come on top
    const double volume_weight = 2.0 * big_t * omega * std::pow(big_t, 2 * n) / (2.0 * n);
    const double inner_rel = 0.3 * rel_tol;
    const double inner_abs = 0.05 * rel_tol / (2.0 * big_t);
    const double kernel_rel = 0.2 * rel_tol;
    const double kernel_abs = 0.02 * rel_tol / volume_weight;

    auto panels = [&](double width) {
        std::vector<double> br;
        const int parts = std::max(1, static_cast<int>(std::ceil(big_t / width)));
        for (int i = 0; i <= parts; ++i) br.push_back(big_t * i / parts);
        return br;
    };
    const std::vector<double> rbreaks = panels(2.0), xbreaks = panels(2.0);

    auto column = [&](double x0) {
        auto g = [&](double r) {
            heat_query q{n, 0.0, x0, r * r, t, kernel_rel};
            kernel_value kv = detail::heat_kernel_impl(q, kernel_abs);
            return omega * std::pow(r, 2 * n - 1) * kv.value.real();
        };
        quad::quad_options o;
        o.rel_tol = inner_rel;
        o.abs_floor = inner_abs;
        o.max_panels = 20000;
        return quad::integrate_breaks(g, rbreaks, o);
    };

    quad::quad_options oo;
    oo.rel_tol = 0.4 * rel_tol;
    oo.abs_floor = 0.025 * rel_tol;
    oo.max_panels = 20000;
    auto out = quad::integrate_breaks([&](double x0) { return column(x0).value; }, xbreaks, oo);
    const double value = 2.0 * out.value;

    // radial tail: |kernel| <= (2 pi t)^{-(n+1)} int (xi/sinh xi)^n
    // e^{-(xi/tanh xi) r^2/(2t)} dxi, and the r-integral beyond T is explicit.
    auto radial_tail = [&]() {
        auto f = [&](double xi) {
            const double a = detail::tanh_ratio(xi) / (2.0 * t);
            const double x = a * big_t * big_t;
            // int_T^inf r^{2n-1} e^{-a r^2} dr = (1/2) a^{-n} Gamma(n, a T^2)
            return std::exp(n * detail::log_sinh_ratio(xi)) * 0.5 * std::pow(a, -n) *
                   quad::upper_gamma_int(n - 1, x);
        };
        quad::quad_options o;
        o.rel_tol = 1e-3;
        o.abs_floor = 1e-30;
        o.max_panels = 4000;
        const double radius = detail::choose_radius(n, 0.0, 1e-12);
        auto tl = quad::integrate_breaks(f, detail::fiber_breaks(radius, 0.0), o);
        return 2.0 * big_t * omega * std::pow(2.0 * M_PI * t, -(n + 1)) * tl.value;
    };

    // vertical boundary estimate: the x0-marginal decays on the scale t, so
    // twice the boundary column times t over-counts the missing slab
    const double vert_tail = 2.0 * std::abs(column(big_t).value) * t;
    const double inner_budget = inner_rel * std::abs(value) + 0.05 * rel_tol;
    const double kernel_budget = kernel_rel * std::abs(value) + 0.02 * rel_tol;
    quad_result res;
    res.value = value;
    res.est_error = 2.0 * out.err + inner_budget + kernel_budget + radial_tail() + vert_tail;
    return res;
}

}
