#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace heisenspec {

// Point (x0, x') in vertical-first coordinates: x0 is the distinguished
// coordinate, xp the d horizontal ones.
struct point {
    double x0 = 0;
    std::vector<double> xp;

    int dim() const { return static_cast<int>(xp.size()); }
};

// Two-step nilpotent polynomial group on R^{1+d}:
//   (x . y)_0 = x0 + y0 + sum_{j,k} b(j,k) x_k y_j,   (x . y)' = x' + y'.
struct group_spec {
    int d = 0;
    Eigen::MatrixXd b;
};

inline group_spec make_group_spec(int d, Eigen::MatrixXd b) {
    if (d < 1) throw range_violation("group_spec: d must be >= 1, got " + std::to_string(d));
    if (b.rows() != d || b.cols() != d)
        throw dimension_mismatch("group_spec: b must be " + std::to_string(d) + "x" +
                                 std::to_string(d) + ", got " + std::to_string(b.rows()) +
                                 "x" + std::to_string(b.cols()));
    return group_spec{d, std::move(b)};
}

// Standard group of real dimension 2n+1: b(j, n+j) = 1, b(n+j, j) = -1.
// Horizontal frame: X_j = d_j + x_{n+j} d_0,  X_{n+j} = d_{n+j} - x_j d_0.
inline group_spec heisenberg_spec(int n) {
    if (n < 1) throw range_violation("heisenberg_spec: n must be >= 1, got " + std::to_string(n));
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
        b(j, n + j) = 1.0;
        b(n + j, j) = -1.0;
    }
    return group_spec{2 * n, std::move(b)};
}

namespace detail {
inline void check_point(const group_spec& g, const point& x, const char* who) {
    if (x.dim() != g.d)
        throw dimension_mismatch(std::string(who) + ": point has " +
                                 std::to_string(x.dim()) + " horizontal coordinates, group has " +
                                 std::to_string(g.d));
}
}

inline point group_mul(const group_spec& g, const point& x, const point& y) {
    detail::check_point(g, x, "group_mul");
    detail::check_point(g, y, "group_mul");
    point z;
    z.xp.resize(g.d);
    double bil = 0;
    for (int j = 0; j < g.d; ++j) {
        double row = 0;
        for (int k = 0; k < g.d; ++k) row += g.b(j, k) * x.xp[k];
        bil += row * y.xp[j];
        z.xp[j] = x.xp[j] + y.xp[j];
    }
    z.x0 = x.x0 + y.x0 + bil;
    return z;
}

inline point group_inverse(const group_spec& g, const point& x) {
    detail::check_point(g, x, "group_inverse");
    double q = 0;
    for (int j = 0; j < g.d; ++j)
        for (int k = 0; k < g.d; ++k) q += g.b(j, k) * x.xp[k] * x.xp[j];
    point z;
    z.x0 = -x.x0 + q;
    z.xp.resize(g.d);
    for (int j = 0; j < g.d; ++j) z.xp[j] = -x.xp[j];
    return z;
}

// Anisotropic dilation: the vertical coordinate scales quadratically.
inline point dilate(double lam, const point& x) {
    point z;
    z.x0 = lam * lam * x.x0;
    z.xp.resize(x.xp.size());
    for (std::size_t j = 0; j < x.xp.size(); ++j) z.xp[j] = lam * x.xp[j];
    return z;
}

inline double pseudo_norm(const point& x) {
    double r2 = 0;
    for (double v : x.xp) r2 += v * v;
    return std::sqrt(std::hypot(x.x0, r2));
}

// L = b^t - b; [X_j, X_k] = L(j,k) X_0.
inline Eigen::MatrixXd structure_constants(const group_spec& g) {
    return g.b.transpose() - g.b;
}

// x . (0, s e_j): exact one-parameter flow of X_j when b(j,j) = 0.
inline point flow_step(const group_spec& g, const point& x, int j, double s) {
    detail::check_point(g, x, "flow_step");
    if (j < 0 || j >= g.d)
        throw range_violation("flow_step: direction " + std::to_string(j) +
                              " outside [0, " + std::to_string(g.d - 1) + "]");
    point step;
    step.xp.assign(g.d, 0.0);
    step.xp[j] = s;
    return group_mul(g, x, step);
}

// Horizontal frame field X_j = d_j + (sum_k b(j,k) x_k) d_0 for j in [1, d],
// or the vertical field d_0 for j = 0.
struct first_order_field {
    int j = 0;  // 0 = vertical
    group_spec g;

    double drift(const point& x) const {
        detail::check_point(g, x, "first_order_field");
        if (j == 0) return 0.0;
        double c = 0;
        for (int k = 0; k < g.d; ++k) c += g.b(j - 1, k) * x.xp[k];
        return c;
    }

    template <class F>
    double apply(F&& f, const point& x, double h) const {
        detail::check_point(g, x, "first_order_field");
        if (!(h > 0)) throw range_violation("first_order_field: h must be positive");
        if (j == 0) {
            point xm = x, xp_ = x;
            xm.x0 -= h;
            xp_.x0 += h;
            return (f(xp_) - f(xm)) / (2 * h);
        }
        point xm = x, xp_ = x;
        xm.xp[j - 1] -= h;
        xp_.xp[j - 1] += h;
        double horiz = (f(xp_) - f(xm)) / (2 * h);
        point vm = x, vp = x;
        vm.x0 -= h;
        vp.x0 += h;
        return horiz + drift(x) * (f(vp) - f(vm)) / (2 * h);
    }
};

inline first_order_field make_field(const group_spec& g, int j) {
    if (j < 0 || j > g.d)
        throw range_violation("make_field: index " + std::to_string(j) +
                              " outside [0, " + std::to_string(g.d) + "]");
    return first_order_field{j, g};
}

// Affine coordinate change y = A (x - u) on R^{1+d}, vertical coordinate first.
struct affine_change {
    Eigen::MatrixXd a;
    point u;

    point apply(const point& x) const {
        const int d = u.dim();
        if (x.dim() != d)
            throw dimension_mismatch("affine_change: point dimension mismatch");
        Eigen::VectorXd v(d + 1);
        v(0) = x.x0 - u.x0;
        for (int j = 0; j < d; ++j) v(j + 1) = x.xp[j] - u.xp[j];
        Eigen::VectorXd w = a * v;
        point z;
        z.x0 = w(0);
        z.xp.resize(d);
        for (int j = 0; j < d; ++j) z.xp[j] = w(j + 1);
        return z;
    }
};

// Privileged coordinates at u from a frame matrix B (rows = frame vector
// components in the coordinate basis): A = (B^t)^{-1}, psi_u(x) = A (x - u).
inline affine_change privileged_change(const Eigen::MatrixXd& frame, const point& u) {
    const int m = u.dim() + 1;
    if (frame.rows() != m || frame.cols() != m)
        throw dimension_mismatch("privileged_change: frame must be " + std::to_string(m) +
                                 "x" + std::to_string(m));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(frame.transpose(),
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (!(sv(0) > 0) || sv(m - 1) < 1e-12 * sv(0))
        throw singular_frame("privileged_change: frame matrix is singular to working precision");
    affine_change ch;
    ch.a = svd.solve(Eigen::MatrixXd::Identity(m, m));
    ch.u = u;
    return ch;
}

// Unimodular shear removing the symmetric part of b:
//   phi(x) = (x0 - (1/4) x'^t (b + b^t) x', x'),
// which intertwines the given group with the antisymmetric model.
struct vertical_shear {
    Eigen::MatrixXd s;  // b + b^t

    point apply(const point& x) const {
        const int d = static_cast<int>(s.rows());
        if (x.dim() != d) throw dimension_mismatch("vertical_shear: point dimension mismatch");
        double q = 0;
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) q += s(j, k) * x.xp[j] * x.xp[k];
        point z = x;
        z.x0 = x.x0 - 0.25 * q;
        return z;
    }

    point apply_inverse(const point& y) const {
        const int d = static_cast<int>(s.rows());
        if (y.dim() != d) throw dimension_mismatch("vertical_shear: point dimension mismatch");
        double q = 0;
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) q += s(j, k) * y.xp[j] * y.xp[k];
        point z = y;
        z.x0 = y.x0 + 0.25 * q;
        return z;
    }
};

inline vertical_shear heisenberg_correction(const group_spec& g) {
    return vertical_shear{g.b + g.b.transpose()};
}

// Group with the antisymmetrized bilinear form; heisenberg_correction
// intertwines it with the original.
inline group_spec antisymmetrized(const group_spec& g) {
    return group_spec{g.d, 0.5 * (g.b - g.b.transpose())};
}

}
