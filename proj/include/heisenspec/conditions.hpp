#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "group.hpp"

namespace heisenspec {

// Absolute spectral data of the vertical commutator matrix L = b^t - b:
// the d values |lambda_1| >= ... >= |lambda_d| >= 0 (each nonzero value
// appears twice since L is real antisymmetric) and the even rank.
struct levi_data {
    int d = 0;
    std::vector<double> abs_eigs;
    int rank = 0;
    double trace_abs = 0;
};

inline levi_data make_levi(int d, std::vector<double> abs_eigs) {
    if (d < 1) throw range_violation("levi_data: d must be >= 1");
    if (static_cast<int>(abs_eigs.size()) != d)
        throw dimension_mismatch("levi_data: expected " + std::to_string(d) +
                                 " absolute eigenvalues, got " +
                                 std::to_string(abs_eigs.size()));
    levi_data lv;
    lv.d = d;
    lv.abs_eigs = std::move(abs_eigs);
    int nz = 0;
    double prev = std::numeric_limits<double>::infinity();
    for (double v : lv.abs_eigs) {
        if (!(v >= 0)) throw range_violation("levi_data: absolute eigenvalues must be >= 0");
        if (v > prev + 1e-14 * std::max(1.0, prev))
            throw range_violation("levi_data: absolute eigenvalues must be nonincreasing");
        prev = v;
        if (v > 0) ++nz;
        lv.trace_abs += v;
    }
    if (nz % 2 != 0)
        throw inconsistency_fault("levi_data: odd count of nonzero absolute eigenvalues (" +
                                  std::to_string(nz) + "); antisymmetric spectra pair up");
    lv.rank = nz;
    return lv;
}

inline levi_data levi_from_group(const group_spec& g) {
    Eigen::MatrixXd l = structure_constants(g);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(l);
    std::vector<double> s(g.d);
    double smax = g.d > 0 ? svd.singularValues()(0) : 0.0;
    for (int j = 0; j < g.d; ++j) {
        double v = svd.singularValues()(j);
        s[j] = (smax > 0 && v > 1e-12 * smax) ? v : 0.0;
    }
    return make_levi(g.d, std::move(s));
}

// Admissible spectral set for the model vertical parameter.  When the
// commutator matrix is nondegenerate (rank == d) the set is the lattice
// +-(threshold + sum_j alpha_j gen_j), alpha in N_0^r; otherwise it is the
// pair of closed rays |x| >= threshold.
struct singular_set {
    bool lattice = false;
    double threshold = 0;
    std::vector<double> gens;  // one per eigenvalue pair, nonzero
};

inline singular_set singular_set_of(const levi_data& lv) {
    singular_set s;
    s.lattice = (lv.rank == lv.d);
    s.threshold = 0.5 * lv.trace_abs;
    for (int j = 0; j < lv.rank; j += 2) s.gens.push_back(lv.abs_eigs[j]);
    return s;
}

// Distance from a real x to the ray pair {|y| >= threshold}.
inline double dist_to_rays(double threshold, double x) {
    return std::max(0.0, threshold - std::abs(x));
}

namespace detail {

inline void enum_sums(const std::vector<double>& gens, std::size_t i, double acc,
                      double cap, std::vector<double>& out, std::size_t limit) {
    if (out.size() > limit)
        throw range_violation("singular set enumeration exceeds " + std::to_string(limit) +
                              " lattice points; reduce the query range");
    if (i == gens.size()) {
        out.push_back(acc);
        return;
    }
    for (double v = acc; v <= cap; v += gens[i]) enum_sums(gens, i + 1, v, cap, out, limit);
}

}  // namespace detail

// Distance from x to the lattice +-(threshold + N_0-combinations of gens).
inline double dist_to_lattice(const singular_set& s, double x) {
    if (!s.lattice) return dist_to_rays(s.threshold, x);
    const double ax = std::abs(x);
    if (ax < s.threshold) return s.threshold - ax;
    std::vector<double> sums;
    detail::enum_sums(s.gens, 0, 0.0, ax - s.threshold + 2.0 * (s.gens.empty() ? 1.0 : s.gens.back() + 1.0),
                      sums, 2000000);
    double best = std::numeric_limits<double>::infinity();
    for (double v : sums) best = std::min(best, std::abs(ax - (s.threshold + v)));
    return best;
}

struct model_data {
    levi_data levi;
    std::vector<std::complex<double>> mu;
    double tol = 1e-9;
};

struct condition_verdict {
    bool pass = true;
    // witness, set when pass is false
    int mu_index = -1;
    std::complex<double> offending{};
    double distance = 0;
    std::string note;
};

namespace detail {

inline condition_verdict spectral_check(const model_data& m, bool force_rays) {
    if (!(m.tol > 0)) throw range_violation("spectral check: tol must be positive");
    singular_set s = singular_set_of(m.levi);
    if (force_rays) s.lattice = false;
    condition_verdict v;
    for (std::size_t i = 0; i < m.mu.size(); ++i) {
        const auto& mu = m.mu[i];
        if (std::abs(mu.imag()) > m.tol) continue;  // off the real axis, always admissible
        double dist = s.lattice ? dist_to_lattice(s, mu.real())
                                : dist_to_rays(s.threshold, mu.real());
        if (dist <= m.tol) {
            v.pass = false;
            v.mu_index = static_cast<int>(i);
            v.offending = mu;
            v.distance = dist;
            v.note = s.lattice ? "real part within tol of the singular lattice"
                               : "real part within tol of the singular rays";
            return v;
        }
    }
    return v;
}

}  // namespace detail

// Model operator -(1/2) sum X_j^2 - i mu X_0 is invertible in the graded
// calculus iff no spectral value mu meets the singular set.
inline condition_verdict check_rockland(const model_data& m) {
    return detail::spectral_check(m, false);
}

inline bool rockland_sublaplacian(const model_data& m) { return check_rockland(m).pass; }

// Coarser criterion that only excludes the ray pair, independent of rank.
inline condition_verdict check_weaker(const model_data& m) {
    return detail::spectral_check(m, true);
}

inline bool weaker_condition(const model_data& m) { return check_weaker(m).pass; }

namespace detail {
inline void check_window_args(int n, int kappa, int r, const char* who) {
    if (n < 1) throw range_violation(std::string(who) + ": n must be >= 1");
    if (r < 0 || r > n) throw range_violation(std::string(who) + ": r must lie in [0, n]");
    if (kappa < 0 || kappa > r)
        throw range_violation(std::string(who) + ": kappa must lie in [0, r]");
}
}

// Degree windows in which the model operator fails to be hypoelliptic.
// y_condition holds iff q avoids {kappa..kappa+n-r} and {r-kappa..n-kappa}.
inline bool y_condition(int n, int kappa, int r, int q) {
    detail::check_window_args(n, kappa, r, "y_condition");
    if (q < 0 || q > n) throw range_violation("y_condition: q must lie in [0, n]");
    const bool in1 = (q >= kappa && q <= kappa + n - r);
    const bool in2 = (q >= r - kappa && q <= n - kappa);
    return !(in1 || in2);
}

// x_condition holds iff k avoids {r..d-r} where rank = 2r.
inline bool x_condition(int d, int rank, int k) {
    if (d < 1) throw range_violation("x_condition: d must be >= 1");
    if (rank < 0 || rank > d || rank % 2 != 0)
        throw range_violation("x_condition: rank must be even and lie in [0, d]");
    if (k < 0 || k > d) throw range_violation("x_condition: k must lie in [0, d]");
    const int r = rank / 2;
    return !(k >= r && k <= d - r);
}

// Bidegree version: (p,q) must avoid the two rectangles
//   {(kappa+j, r-kappa+k) : 0 <= j,k <= n-r} and its mirror.
inline bool ypq_condition(int n, int kappa, int r, int p, int q) {
    detail::check_window_args(n, kappa, r, "ypq_condition");
    if (p < 0 || p > n || q < 0 || q > n)
        throw range_violation("ypq_condition: p, q must lie in [0, n]");
    auto in_rect = [&](int a, int b, int lo_a, int lo_b) {
        return a >= lo_a && a <= lo_a + (n - r) && b >= lo_b && b <= lo_b + (n - r);
    };
    const bool bad = in_rect(p, q, kappa, r - kappa) || in_rect(p, q, r - kappa, kappa);
    return !bad;
}

}
