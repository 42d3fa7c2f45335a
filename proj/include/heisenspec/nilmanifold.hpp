#pragma once

#include <chrono>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <lapacke.h>

#include "errors.hpp"

namespace heisenspec {

struct nilmanifold_result {
    int n_grid = 0;
    double mu = 0;
    std::vector<double> eigenvalues;
    double wallclock = 0;   // seconds spent in assembly + eigensolve
    double asymmetry = 0;   // max |H - H^t| before symmetrization
};

namespace detail {

// Grid index canonicalization on the lattice quotient of the dimension-3
// model group.  The compact quotient identifies
//   f(x0 - x2, x1 + 1, x2) = f(x),  f(x0 + x1, x1, x2 + 1) = f(x),
//   f(x0 + 1, x1, x2) = f(x),
// and on the uniform N^3 grid every identification is an exact index shift.
struct nil_indexer {
    int n = 0;

    int canon(long long a, long long b, long long c) const {
        // stencil neighbors move one step in one axis, so at most one of b, c
        // is out of range, by one
        if (c >= n) {
            a -= b;
            c -= n;
        } else if (c < 0) {
            a += b;
            c += n;
        }
        if (b >= n) {
            a += c;
            b -= n;
        } else if (b < 0) {
            a -= c;
            b += n;
        }
        a %= n;
        if (a < 0) a += n;
        return static_cast<int>(a + n * (b + n * c));
    }
};

}  // namespace detail

// Discretize the quotient model operator -(1/2)(X1^2 + X2^2) - i mu X0 on the
// uniform N^3 grid.  X1 = D1 + x2 D0 and X2 = D2 - x1 D0 are assembled as
// one-sided sparse stencils with the twisted wraps above, so the Gram form
// H = (1/2)(X1^t X1 + X2^t X2) is the centered second difference along each
// field (the coefficients x2 resp. -x1 are constant along the differenced
// axes, so the one-sided bias cancels in the Gram product and eigenvalues
// converge at second order).  A centered difference inside the Gram form
// would instead decouple even and odd sublattices and flood the low spectrum
// with mesh modes.  The vertical term for mu != 0 stays a centered (hence
// Hermitian) first difference.  Returns the lowest `count` eigenvalues from
// a dense eigensolve.
inline nilmanifold_result nilmanifold_spectrum(int n_grid, int count, double mu = 0.0) {
    if (n_grid < 4) throw range_violation("nilmanifold_spectrum: N must be >= 4");
    const long long dim_ll = static_cast<long long>(n_grid) * n_grid * n_grid;
    if (dim_ll > 4096)
        throw grid_too_large("nilmanifold_spectrum: N^3 = " + std::to_string(dim_ll) +
                             " exceeds the dense-solve cap 4096");
    const int dim = static_cast<int>(dim_ll);
    if (count < 1 || count > dim)
        throw range_violation("nilmanifold_spectrum: count must lie in [1, N^3]");

    const auto t_start = std::chrono::steady_clock::now();
    const double h = 1.0 / n_grid;
    const double invh = 1.0 / h;
    const double inv2h = 0.5 / h;
    detail::nil_indexer ix{n_grid};

    using trip = Eigen::Triplet<double>;
    std::vector<trip> t0, t1, t2;
    t0.reserve(2 * dim);
    t1.reserve(4 * dim);
    t2.reserve(4 * dim);
    for (int c = 0; c < n_grid; ++c)
        for (int b = 0; b < n_grid; ++b)
            for (int a = 0; a < n_grid; ++a) {
                const int row = ix.canon(a, b, c);
                const double x1 = b * h, x2 = c * h;
                // D0, centered (used only by the mu term)
                t0.emplace_back(row, ix.canon(a + 1, b, c), inv2h);
                t0.emplace_back(row, ix.canon(a - 1, b, c), -inv2h);
                // X1 = D1 + x2 D0, one-sided
                t1.emplace_back(row, ix.canon(a, b + 1, c), invh);
                t1.emplace_back(row, row, -invh);
                t1.emplace_back(row, ix.canon(a + 1, b, c), x2 * invh);
                t1.emplace_back(row, row, -x2 * invh);
                // X2 = D2 - x1 D0, one-sided
                t2.emplace_back(row, ix.canon(a, b, c + 1), invh);
                t2.emplace_back(row, row, -invh);
                t2.emplace_back(row, ix.canon(a + 1, b, c), -x1 * invh);
                t2.emplace_back(row, row, x1 * invh);
            }
    Eigen::SparseMatrix<double> d0(dim, dim), x1m(dim, dim), x2m(dim, dim);
    d0.setFromTriplets(t0.begin(), t0.end());
    x1m.setFromTriplets(t1.begin(), t1.end());
    x2m.setFromTriplets(t2.begin(), t2.end());

    Eigen::SparseMatrix<double> hs =
        0.5 * (Eigen::SparseMatrix<double>(x1m.transpose()) * x1m +
               Eigen::SparseMatrix<double>(x2m.transpose()) * x2m);
    Eigen::MatrixXd hd(hs);
    const double scale = hd.cwiseAbs().maxCoeff();
    const double asym = (hd - hd.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * std::max(1.0, scale))
        throw assembly_fault("nilmanifold_spectrum: assembled operator asymmetry " +
                             std::to_string(asym) + " exceeds tolerance");
    hd = 0.5 * (hd + hd.transpose().eval());

    nilmanifold_result res;
    res.n_grid = n_grid;
    res.mu = mu;
    res.asymmetry = asym;
    res.eigenvalues.resize(static_cast<std::size_t>(count));

    lapack_int found = 0;
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(std::max(1, count)));
    if (mu == 0.0) {
        std::vector<double> w(static_cast<std::size_t>(dim));
        double zdum = 0;
        lapack_int info = LAPACKE_dsyevr(
            LAPACK_COL_MAJOR, 'N', 'I', 'L', dim, hd.data(), dim, 0.0, 0.0, 1, count,
            0.0, &found, w.data(), &zdum, 1, isuppz.data());
        if (info != 0)
            throw assembly_fault("nilmanifold_spectrum: dsyevr failed with info " +
                                 std::to_string(info));
        if (found < count)
            throw assembly_fault("nilmanifold_spectrum: eigensolver returned fewer values than requested");
        for (int i = 0; i < count; ++i) res.eigenvalues[static_cast<std::size_t>(i)] = w[i];
    } else {
        Eigen::MatrixXcd hc = hd.cast<std::complex<double>>();
        const std::complex<double> im{0.0, 1.0};
        Eigen::MatrixXcd d0c = Eigen::MatrixXd(d0).cast<std::complex<double>>();
        hc -= im * mu * d0c;
        std::vector<double> w(static_cast<std::size_t>(dim));
        lapack_complex_double zdum;
        lapack_int info = LAPACKE_zheevr(
            LAPACK_COL_MAJOR, 'N', 'I', 'L', dim,
            reinterpret_cast<lapack_complex_double*>(hc.data()), dim, 0.0, 0.0, 1, count,
            0.0, &found, w.data(), &zdum, 1, isuppz.data());
        if (info != 0)
            throw assembly_fault("nilmanifold_spectrum: zheevr failed with info " +
                                 std::to_string(info));
        if (found < count)
            throw assembly_fault("nilmanifold_spectrum: eigensolver returned fewer values than requested");
        for (int i = 0; i < count; ++i) res.eigenvalues[static_cast<std::size_t>(i)] = w[i];
    }

    res.wallclock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

}
