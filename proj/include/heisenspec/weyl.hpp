#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "errors.hpp"
#include "kernel.hpp"

namespace heisenspec {

namespace detail {

// Exact binomial coefficient as a double (every intermediate is an integer).
inline double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

// nu at integer vertical parameter, cached.  Evaluating at |m| makes the
// evenness of nu exact, which in turn makes the table symmetries exact.
inline double nu_int(int n, int m, double rel_tol) {
    struct entry {
        double value;
        double rel_tol;
    };
    static std::map<std::pair<int, int>, entry> cache;
    static std::shared_mutex mtx;
    const std::pair<int, int> key{n, std::abs(m)};
    {
        std::shared_lock lk(mtx);
        auto it = cache.find(key);
        if (it != cache.end() && it->second.rel_tol <= rel_tol) return it->second.value;
    }
    const double v = nu(n, static_cast<double>(std::abs(m)), rel_tol).value;
    std::unique_lock lk(mtx);
    auto it = cache.find(key);
    if (it == cache.end() || it->second.rel_tol > rel_tol) cache[key] = {v, rel_tol};
    return cache[key].value;
}

// Deterministic sum independent of term generation order.
inline double sorted_sum(std::vector<double>& terms) {
    std::sort(terms.begin(), terms.end());
    quad::kahan_sum<double> s;
    for (double v : terms) s.add(v);
    return s.value();
}

}  // namespace detail

// Counting coefficient of the (p,q)-component operator family with signature
// kappa; defined when q avoids {kappa, n-kappa}:
//   alpha = 2^{-(n+1)} C(n,p) sum_k C(n-kappa,k) C(kappa,q-k) nu(n+2q-2kappa-4k).
inline double alpha_coefficient(int n, int kappa, int p, int q, double rel_tol = 1e-10) {
    if (n < 1) throw range_violation("alpha_coefficient: n must be >= 1");
    if (kappa < 0 || kappa > n)
        throw range_violation("alpha_coefficient: kappa must lie in [0, n]");
    if (p < 0 || p > n || q < 0 || q > n)
        throw range_violation("alpha_coefficient: p, q must lie in [0, n]");
    if (q == kappa || q == n - kappa)
        throw range_violation("alpha_coefficient: undefined at q in {kappa, n-kappa}, got q = " +
                              std::to_string(q));
    if (!(rel_tol > 0)) throw range_violation("alpha_coefficient: rel_tol must be positive");
    const double pref = std::pow(2.0, -(n + 1)) * detail::binom(n, p);
    std::vector<double> terms;
    for (int k = std::max(0, q - kappa); k <= std::min(q, n - kappa); ++k) {
        const int arg = n + 2 * q - 2 * kappa - 4 * k;
        if (std::abs(arg) >= n)
            throw inconsistency_fault("alpha_coefficient: internal vertical parameter " +
                                      std::to_string(arg) + " leaves (-n, n)");
        terms.push_back(detail::binom(n - kappa, k) * detail::binom(kappa, q - k) *
                        detail::nu_int(n, arg, rel_tol));
    }
    return pref * detail::sorted_sum(terms);
}

// Counting coefficient of the full (p,q)-form operator with signature kappa;
// defined when (p,q) avoids {(kappa, n-kappa), (n-kappa, kappa)}:
//   beta = sum_{l,k} C(n-kappa,l) C(kappa,p-l) C(n-kappa,k) C(kappa,q-k)
//          nu((q-p) + 2(l-k)).
inline double beta_coefficient(int n, int kappa, int p, int q, double rel_tol = 1e-10) {
    if (n < 1) throw range_violation("beta_coefficient: n must be >= 1");
    if (kappa < 0 || kappa > n)
        throw range_violation("beta_coefficient: kappa must lie in [0, n]");
    if (p < 0 || p > n || q < 0 || q > n)
        throw range_violation("beta_coefficient: p, q must lie in [0, n]");
    if ((p == kappa && q == n - kappa) || (p == n - kappa && q == kappa))
        throw range_violation("beta_coefficient: undefined at (p,q) = (" + std::to_string(p) +
                              ", " + std::to_string(q) + ") for kappa = " + std::to_string(kappa));
    if (!(rel_tol > 0)) throw range_violation("beta_coefficient: rel_tol must be positive");
    std::vector<double> terms;
    for (int l = std::max(0, p - kappa); l <= std::min(p, n - kappa); ++l) {
        for (int k = std::max(0, q - kappa); k <= std::min(q, n - kappa); ++k) {
            const int arg = (q - p) + 2 * (l - k);
            if (std::abs(arg) >= n)
                throw inconsistency_fault("beta_coefficient: internal vertical parameter " +
                                          std::to_string(arg) + " leaves (-n, n)");
            terms.push_back(detail::binom(n - kappa, l) * detail::binom(kappa, p - l) *
                            detail::binom(n - kappa, k) * detail::binom(kappa, q - k) *
                            detail::nu_int(n, arg, rel_tol));
        }
    }
    return detail::sorted_sum(terms);
}

// Counting coefficient of the degree-k horizontal form operator on a contact
// geometry; defined for k != n:
//   gamma = 2^{-n} sum_{p+q=k} C(n,p) C(n,q) nu(p-q).
inline double gamma_coefficient(int n, int k, double rel_tol = 1e-10) {
    if (n < 1) throw range_violation("gamma_coefficient: n must be >= 1");
    if (k < 0 || k > 2 * n)
        throw range_violation("gamma_coefficient: k must lie in [0, 2n]");
    if (k == n)
        throw range_violation("gamma_coefficient: undefined at the middle degree k = n");
    if (!(rel_tol > 0)) throw range_violation("gamma_coefficient: rel_tol must be positive");
    std::vector<double> terms;
    for (int p = std::max(0, k - n); p <= std::min(n, k); ++p) {
        const int q = k - p;
        const int arg = p - q;
        if (std::abs(arg) >= n)
            throw inconsistency_fault("gamma_coefficient: internal vertical parameter " +
                                      std::to_string(arg) + " leaves (-n, n)");
        terms.push_back(detail::binom(n, p) * detail::binom(n, q) *
                        detail::nu_int(n, arg, rel_tol));
    }
    return std::pow(2.0, -n) * detail::sorted_sum(terms);
}

struct volume_result {
    double value = 0;
    bool plausible = true;  // sign matches the orientation convention
};

// Volume normalization paired with the alpha/beta tables:
//   ((-1)^kappa / (n! 2^n)) * integral of the contact volume form.
inline volume_result pseudohermitian_volume(int n, int kappa, double theta_integral) {
    if (n < 1) throw range_violation("pseudohermitian_volume: n must be >= 1");
    if (kappa < 0 || kappa > n)
        throw range_violation("pseudohermitian_volume: kappa must lie in [0, n]");
    const double sign = (kappa % 2 == 0) ? 1.0 : -1.0;
    volume_result res;
    res.value = sign * theta_integral / (std::tgamma(n + 1.0) * std::pow(2.0, n));
    res.plausible = res.value >= 0;
    return res;
}

// Volume normalization paired with the gamma table: integral / n!.
inline double contact_volume(int n, double dtheta_integral) {
    if (n < 1) throw range_violation("contact_volume: n must be >= 1");
    return dtheta_integral / std::tgamma(n + 1.0);
}

// Counting prediction for the conformal power family of order 2k:
// N(lambda) ~ nu(0) * vol * lambda^{(n+1)/k}.
inline double conformal_power_prediction(int n, int k, double vol_theta, double lambda,
                                         double rel_tol = 1e-10) {
    if (n < 1) throw range_violation("conformal_power_prediction: n must be >= 1");
    if (k < 1) throw range_violation("conformal_power_prediction: k must be >= 1");
    if (!(vol_theta > 0))
        throw range_violation("conformal_power_prediction: volume must be positive");
    if (!(lambda >= 0))
        throw range_violation("conformal_power_prediction: lambda must be >= 0");
    return nu(n, 0.0, rel_tol).value * vol_theta *
           std::pow(lambda, static_cast<double>(n + 1) / k);
}

// Table generation for the CLI: one row per admissible (or skipped) index.
struct table_row {
    int n = 0;
    int kappa = 0;  // meaningful for alpha/beta
    int p = 0;      // alpha/beta; for gamma p carries k
    int q = 0;
    std::optional<double> value;  // empty = skipped by the admissibility window
};

enum class volume_convention { intro, section8 };

// alpha/beta pair with the pseudohermitian volume; under the section8
// convention (volume larger by 2^n) the matching coefficient shrinks by 2^-n.
inline double convention_scale(int n, volume_convention vc) {
    return vc == volume_convention::section8 ? std::pow(2.0, -n) : 1.0;
}

inline std::vector<table_row> alpha_table(int n, int kappa, double rel_tol = 1e-10,
                                          volume_convention vc = volume_convention::intro) {
    std::vector<table_row> rows;
    const double scale = convention_scale(n, vc);
    for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q) {
            table_row r{n, kappa, p, q, std::nullopt};
            if (q != kappa && q != n - kappa)
                r.value = scale * alpha_coefficient(n, kappa, p, q, rel_tol);
            rows.push_back(r);
        }
    return rows;
}

inline std::vector<table_row> beta_table(int n, int kappa, double rel_tol = 1e-10,
                                         volume_convention vc = volume_convention::intro) {
    std::vector<table_row> rows;
    const double scale = convention_scale(n, vc);
    for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q) {
            table_row r{n, kappa, p, q, std::nullopt};
            const bool excluded = (p == kappa && q == n - kappa) || (p == n - kappa && q == kappa);
            if (!excluded) r.value = scale * beta_coefficient(n, kappa, p, q, rel_tol);
            rows.push_back(r);
        }
    return rows;
}

inline std::vector<table_row> gamma_table(int n, double rel_tol = 1e-10) {
    std::vector<table_row> rows;
    for (int k = 0; k <= 2 * n; ++k) {
        table_row r{n, 0, k, 0, std::nullopt};
        if (k != n) r.value = gamma_coefficient(n, k, rel_tol);
        rows.push_back(r);
    }
    return rows;
}

}
