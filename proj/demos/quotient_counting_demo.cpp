// Lattice quotient demo: discretize the model operator on N^3 grids, watch
// the spectral gap converge to 2 pi at second order, and read the counting
// staircase against the predicted density 1/16.

#include <cstdio>

#include <heisenspec/nilmanifold.hpp>

using namespace heisenspec;

int main() {
    const double two_pi = 6.283185307179586;

    std::printf("%4s %14s %12s %12s\n", "N", "lambda_1", "err vs 2pi", "wallclock");
    double prev_err = 0.0, first_err = 0.0;
    for (int n : {8, 12, 16}) {
        const auto res = nilmanifold_spectrum(n, 2);
        const double err = res.eigenvalues[1] - two_pi;
        if (first_err == 0.0) first_err = err;
        std::printf("%4d %14.6f %12.2e %10.2f s", n, res.eigenvalues[1], err, res.wallclock);
        if (prev_err != 0.0) std::printf("   (err ratio %.2f)", prev_err / err);
        std::printf("\n");
        prev_err = err;
    }
    std::printf("second-order convergence: N = 8 -> 16 halves h and divides the error by %.2f\n\n",
                first_err / prev_err);

    const auto res = nilmanifold_spectrum(16, 300);
    std::printf("counting staircase at N = 16 (300 lowest eigenvalues):\n");
    std::printf("%6s %12s %18s\n", "j+1", "lambda_j", "N(lambda)/lambda^2");
    for (int j : {9, 19, 49, 99, 149, 199, 249, 299}) {
        const double lam = res.eigenvalues[static_cast<std::size_t>(j)];
        std::printf("%6d %12.4f %18.6f\n", j + 1, lam, (j + 1) / (lam * lam));
    }
    std::printf("\npredicted density: 1/16 = 0.0625.  The ratio tracks it while the\n"
                "eigenvalues stay below the grid's vertical resolution and sags once\n"
                "the window asks for modes past the 16-point axis Nyquist limit;\n"
                "growing N restores the deeper window but the dense solve is capped\n"
                "at N^3 = 4096 here.\n");
    return 0;
}
