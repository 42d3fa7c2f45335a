#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"

namespace heisenspec {

// Nonnegative eigenvalues in nondecreasing order with positive multiplicities.
struct spectrum {
    std::vector<double> lambda;
    std::vector<std::int64_t> mult;
    std::vector<double> cum;  // cumulative multiplicity, cum[i] = sum mult[0..i]
};

inline spectrum make_spectrum(std::vector<double> lambda, std::vector<std::int64_t> mult) {
    if (lambda.size() != mult.size())
        throw dimension_mismatch("spectrum: eigenvalue and multiplicity counts differ");
    if (lambda.empty()) throw range_violation("spectrum: empty");
    spectrum sp;
    sp.cum.resize(lambda.size());
    double prev = -std::numeric_limits<double>::infinity();
    double run = 0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (!(lambda[i] >= 0)) throw range_violation("spectrum: eigenvalues must be >= 0");
        if (lambda[i] < prev) throw range_violation("spectrum: eigenvalues must be nondecreasing");
        if (mult[i] < 1) throw range_violation("spectrum: multiplicities must be >= 1");
        prev = lambda[i];
        run += static_cast<double>(mult[i]);
        sp.cum[i] = run;
    }
    sp.lambda = std::move(lambda);
    sp.mult = std::move(mult);
    return sp;
}

// Model spectrum realizing a pure power counting law N(lambda) = nu0 lambda^a:
// lambda_k = ((k+1)/nu0)^(1/a), each simple.
inline spectrum synthetic_spectrum(double nu0, double a, std::int64_t count) {
    if (!(nu0 > 0)) throw range_violation("synthetic_spectrum: nu0 must be positive");
    if (!(a > 0)) throw range_violation("synthetic_spectrum: a must be positive");
    if (count < 1) throw range_violation("synthetic_spectrum: count must be >= 1");
    std::vector<double> lam(static_cast<std::size_t>(count));
    std::vector<std::int64_t> mult(static_cast<std::size_t>(count), 1);
    for (std::int64_t k = 0; k < count; ++k)
        lam[static_cast<std::size_t>(k)] = std::pow((k + 1) / nu0, 1.0 / a);
    return make_spectrum(std::move(lam), std::move(mult));
}

// Compensated sum of mult_k e^{-t lambda_k} in index order.
inline double heat_trace(const spectrum& sp, double t) {
    if (!(t > 0)) throw range_violation("heat_trace: t must be positive");
    quad::kahan_sum<double> s;
    for (std::size_t i = 0; i < sp.lambda.size(); ++i)
        s.add(static_cast<double>(sp.mult[i]) * std::exp(-t * sp.lambda[i]));
    return s.value();
}

// Closed counting function: number of eigenvalues <= lambda with multiplicity.
inline double counting_function(const spectrum& sp, double lambda) {
    auto it = std::upper_bound(sp.lambda.begin(), sp.lambda.end(), lambda);
    if (it == sp.lambda.begin()) return 0.0;
    return sp.cum[static_cast<std::size_t>(it - sp.lambda.begin()) - 1];
}

struct karamata_result {
    double nu0 = 0;
    double a0 = 0;       // fitted leading coefficient of trace * t^a
    double a1 = 0;       // fitted first correction coefficient
    double quality = 0;  // residual 2-norm of the fit
};

struct trace_sample {
    double t = 0;
    double trace = 0;
};

// Two-term least squares for the small-time law
//   trace(t) * t^a = A0 + A1 t^{2/m},  a = (d+2)/m,
// inverted to the counting constant nu0 = A0 / Gamma(1+a).
inline karamata_result karamata_fit(const std::vector<trace_sample>& samples, int d, int m) {
    if (d < 1) throw range_violation("karamata_fit: d must be >= 1");
    if (m < 2 || m % 2 != 0)
        throw range_violation("karamata_fit: m must be a positive even order");
    if (samples.size() < 3)
        throw range_violation("karamata_fit: need at least 3 samples, got " +
                              std::to_string(samples.size()));
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
        if (!(s.t > 0)) throw range_violation("karamata_fit: sample times must be positive");
        if (!(s.t < prev))
            throw range_violation("karamata_fit: sample times must decrease strictly");
        prev = s.t;
    }
    const double a = static_cast<double>(d + 2) / m;
    const std::size_t n = samples.size();
    double sx = 0, sy = 0;
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = std::pow(samples[i].t, 2.0 / m);
        ys[i] = samples[i].trace * std::pow(samples[i].t, a);
        sx += xs[i];
        sy += ys[i];
    }
    const double xbar = sx / n, ybar = sy / n;
    double sxx = 0, sxy = 0, sxx_raw = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - xbar) * (xs[i] - xbar);
        sxy += (xs[i] - xbar) * (ys[i] - ybar);
        sxx_raw += xs[i] * xs[i];
    }
    if (!(sxx > 1e-24 * std::max(1.0, sxx_raw)))
        throw fit_failed("karamata_fit: design is degenerate, sample times too close");
    karamata_result res;
    res.a1 = sxy / sxx;
    res.a0 = ybar - res.a1 * xbar;
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (res.a0 + res.a1 * xs[i]);
        rss += r * r;
    }
    res.quality = std::sqrt(rss);
    res.nu0 = res.a0 / std::tgamma(1.0 + a);
    return res;
}

enum class predict_mode { counting, eigenvalue, heat };

// Leading-order spectral predictions for an order-m operator on a
// (d+2)-homogeneous-dimensional geometry with counting constant nu0:
//   counting:   N(lambda) ~ nu0 lambda^{(d+2)/m}
//   eigenvalue: lambda_k ~ (k / nu0)^{m/(d+2)}
//   heat:       trace(t) ~ Gamma(1 + (d+2)/m) nu0 t^{-(d+2)/m}
inline double weyl_prediction(int d, int m, double nu0, predict_mode mode, double arg) {
    if (d < 1) throw range_violation("weyl_prediction: d must be >= 1");
    if (m < 2 || m % 2 != 0)
        throw range_violation("weyl_prediction: m must be a positive even order");
    if (!(nu0 > 0)) throw range_violation("weyl_prediction: nu0 must be positive");
    const double a = static_cast<double>(d + 2) / m;
    switch (mode) {
        case predict_mode::counting:
            if (!(arg >= 0)) throw range_violation("weyl_prediction: lambda must be >= 0");
            return nu0 * std::pow(arg, a);
        case predict_mode::eigenvalue:
            if (!(arg >= 1)) throw range_violation("weyl_prediction: k must be >= 1");
            return std::pow(arg / nu0, 1.0 / a);
        case predict_mode::heat:
            if (!(arg > 0)) throw range_violation("weyl_prediction: t must be positive");
            return std::tgamma(1.0 + a) * nu0 * std::pow(arg, -a);
    }
    throw range_violation("weyl_prediction: unknown mode");
}

}
