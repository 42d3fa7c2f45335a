#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "errors.hpp"

namespace heisenspec {

namespace detail {

// Lanczos approximation (g = 7, 9 terms), reflected for Re z < 0.5.
inline std::complex<double> gamma_complex(std::complex<double> z) {
    static const double coef[9] = {
        0.99999999999980993,  676.5203681218851,    -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,  12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
    };
    if (z.real() < 0.5) {
        const std::complex<double> pi{M_PI, 0.0};
        return pi / (std::sin(pi * z) * gamma_complex(1.0 - z));
    }
    z -= 1.0;
    std::complex<double> x = coef[0];
    for (int i = 1; i < 9; ++i) x += coef[i] / (z + static_cast<double>(i));
    const std::complex<double> t = z + 7.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

}  // namespace detail

// Symmetric positive semidefinite matrix with a distinguished projector onto
// its kernel; the pair defines the partial functional calculus below.
struct matrix_operator {
    Eigen::MatrixXd p;
    Eigen::MatrixXd pi0;
};

namespace detail {

inline void check_square_symmetric(const Eigen::MatrixXd& m, const char* who) {
    if (m.rows() != m.cols())
        throw dimension_mismatch(std::string(who) + ": matrix must be square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw range_violation(std::string(who) + ": matrix is not symmetric to 1e-12");
}

}  // namespace detail

// Projector defaults to the kernel eigenspace (eigenvalues below
// kernel_tol * max eigenvalue count as zero).
inline matrix_operator make_matrix_operator(Eigen::MatrixXd p, double kernel_tol = 1e-10) {
    detail::check_square_symmetric(p, "matrix_operator");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p);
    if (es.info() != Eigen::Success)
        throw assembly_fault("matrix_operator: eigendecomposition failed");
    const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
    if (es.eigenvalues().minCoeff() < -std::max(1e-10, kernel_tol * top))
        throw range_violation("matrix_operator: matrix has an eigenvalue below -1e-10");
    const int n = static_cast<int>(p.rows());
    Eigen::MatrixXd pi0 = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        if (es.eigenvalues()(i) <= kernel_tol * std::max(top, 1.0))
            pi0 += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose();
    return matrix_operator{std::move(p), std::move(pi0)};
}

inline matrix_operator make_matrix_operator(Eigen::MatrixXd p, Eigen::MatrixXd pi0) {
    detail::check_square_symmetric(p, "matrix_operator");
    detail::check_square_symmetric(pi0, "matrix_operator projector");
    if (pi0.rows() != p.rows())
        throw dimension_mismatch("matrix_operator: projector dimension mismatch");
    const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
    if ((pi0 * pi0 - pi0).cwiseAbs().maxCoeff() > 1e-10)
        throw range_violation("matrix_operator: projector is not idempotent");
    if ((p * pi0).cwiseAbs().maxCoeff() > 1e-8 * scale)
        throw inconsistency_fault("matrix_operator: projector does not annihilate the matrix");
    return matrix_operator{std::move(p), std::move(pi0)};
}

struct mellin_params {
    double step = 0.05;       // trapezoid step in u = log t
    double tail_tol = 1e-12;  // relative truncation target
    int max_nodes = 200000;
};

// Complex power through the subordination integral
//   P^{-s} = Gamma(s)^{-1} int_0^inf t^{s-1} (1 - Pi0) e^{-tP} dt,  Re s > 0,
// as a trapezoid over the whole line in u = log t.  The integrand is analytic
// in a strip of width ~pi/2 and decays at both ends, so the discretization
// error at the default step is far below the truncation targets.
// Vanishes on the kernel; s = 1 gives the partial inverse.
inline Eigen::MatrixXcd mellin_power(const matrix_operator& op, std::complex<double> s,
                                     const mellin_params& par = {}) {
    if (!(s.real() > 0))
        throw range_violation("mellin_power: need Re s > 0, got " + std::to_string(s.real()));
    if (!(par.step > 0) || !(par.tail_tol > 0))
        throw range_violation("mellin_power: step and tail_tol must be positive");
    const int n = static_cast<int>(op.p.rows());
    const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - op.pi0;
    const double mnorm = m.norm();
    const double sigma = s.real();
    const double h = par.step;
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
    if (mnorm == 0.0) return acc;  // pure kernel: the power is zero
    const double pnorm = std::max(op.p.cwiseAbs().maxCoeff() * n, 1e-30);
    const double uc = std::log(1.0 / pnorm);

    auto node = [&](double u) {
        const double t = std::exp(u);
        Eigen::MatrixXd e = (-t * op.p).exp() * m;
        acc += (std::exp(s * u) * h) * e.cast<std::complex<double>>();
        return h * std::abs(std::exp(s * u)) * e.norm();
    };

    int nodes = 0;
    int tiny_run = 0;
    for (double u = uc;; u += h) {
        if (u > 700.0)
            throw tolerance_not_met("mellin_power: semigroup does not decay within range; "
                                    "spectral gap too small");
        const double term = node(u);
        if (std::exp(u) * pnorm > 1.0 &&
            term <= par.tail_tol * std::max(1e-300, acc.norm())) {
            if (++tiny_run >= 3) break;
        } else {
            tiny_run = 0;
        }
        if (++nodes > par.max_nodes)
            throw tolerance_not_met("mellin_power: node budget exhausted");
    }
    // downward: closed tail bound h e^{sigma u} |M| / (1 - e^{-sigma h})
    const double geo = 1.0 - std::exp(-sigma * h);
    for (double u = uc - h;; u -= h) {
        const double tail_bound = h * std::exp(sigma * u) * mnorm / geo;
        if (tail_bound <= par.tail_tol * std::max(1e-300, acc.norm())) break;
        node(u);
        if (++nodes > par.max_nodes)
            throw tolerance_not_met("mellin_power: node budget exhausted");
    }

    return acc / detail::gamma_complex(s);
}

// Real-s convenience: the result of the subordination integral is real.
inline Eigen::MatrixXd mellin_power_real(const matrix_operator& op, double s,
                                         const mellin_params& par = {}) {
    return mellin_power(op, std::complex<double>(s, 0.0), par).real();
}

}
