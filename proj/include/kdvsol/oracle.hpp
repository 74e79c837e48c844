#pragma once

#include <complex>
#include <string>
#include <vector>

#include "kdvsol/deform.hpp"
#include "kdvsol/ist.hpp"

namespace kdv {

/// Uniform 1-D sampling with half-width L. Non-periodic grids span [-L, L]
/// inclusive (eigenproblems, wall conditions); periodic grids span [-L, L)
/// with a power-of-two point count (spectral transforms).
struct Grid {
    double L = 0.0;
    int n = 0;
    bool periodic = false;

    Grid(double half_width, int points, bool periodic_grid = false);

    double dx() const {
        return periodic ? 2.0 * L / n : 2.0 * L / (n - 1);
    }
    double x(int i) const {
        // The symmetric form keeps x = 0 exact for odd non-periodic counts.
        return periodic ? -L + i * (2.0 * L / n)
                        : (2.0 * i - (n - 1)) * (L / (n - 1));
    }
    std::vector<double> points() const;
};

/// Lowest `count` eigenvalues of -psi'' + U psi = E psi, discretized with
/// second-order central differences and Dirichlet walls at +-L, solved by
/// Sturm-sequence bisection on the symmetric tridiagonal matrix.
/// Throws MissingBoundStates if fewer than `count` of them are negative.
std::vector<double> fd_spectrum(const PotentialModel& potential, const Grid& grid, int count);

/// Max-norm residual of u_t - 6 u u_x + u_xxx for the exact field, with
/// spectral x-derivatives on the periodic grid and a fourth-order centered
/// difference in t (samples at t, t +- dt, t +- 2dt). Throws DomainTooSmall
/// when |u| at the boundary exceeds 1e-8. Requires dt <= 1e-4.
double kdv_residual(const SolitonField& field, const Grid& grid, double t, double dt);

/// Step size at which the t-stencil truncation of kdv_residual balances
/// roundoff for a spectrum reaching kappa_max.
double residual_time_step(double kappa_max);

/// Integrates KdV u_t = 6 u u_x - u_xxx by Fourier pseudo-spectral
/// discretization with an integrating-factor (exact e^{ik^3 t} propagator)
/// fourth-order Runge-Kutta on the 2/3-dealiased nonlinear term.
/// Requires a periodic grid with L >= 30 and dt within the stability budget
/// dt <= 2.8 / k_max^3, k_max = pi n / (2L). Throws BlowUp on non-finite
/// values during stepping.
std::vector<double> spectral_evolve(const std::vector<double>& u0, const Grid& grid,
                                    double t_final, double dt);

/// Reflection coefficient r = b/a extracted numerically: a pure transmitted
/// wave e^{ikx} is imposed at x = +L, the Schroedinger equation is integrated
/// backward with an adaptive embedded Runge-Kutta pair, and
/// psi = a e^{ikx} + b e^{-ikx} is fitted at two stations near -L.
/// Requires |U(+-L)| < 1e-12 (DomainTooSmall otherwise); throws FitDegenerate
/// when the plane-wave fit is ill conditioned.
std::complex<double> numeric_reflection(const PotentialModel& potential, double k,
                                        const Grid& grid);

/// One verification check: measured error(s) against a single tolerance.
struct VerificationReport {
    std::string name;
    std::vector<double> measured;
    double tolerance = 0.0;
    bool pass = false;
    std::string parameters;

    static VerificationReport make(std::string name, std::vector<double> measured,
                                   double tolerance, std::string parameters);
};

} // namespace kdv
