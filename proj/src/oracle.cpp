#include "kdvsol/oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "kdvsol/errors.hpp"

namespace kdv {

Grid::Grid(double half_width, int points, bool periodic_grid)
    : L(half_width), n(points), periodic(periodic_grid) {
    if (n < 256) throw std::invalid_argument("Grid: need at least 256 points");
    if (L < 15.0) throw std::invalid_argument("Grid: half-width must be >= 15");
    if (periodic && (n & (n - 1)) != 0)
        throw std::invalid_argument("Grid: periodic grids need a power-of-two point count");
}

std::vector<double> Grid::points() const {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = x(i);
    return xs;
}

namespace {

// Number of eigenvalues of the symmetric tridiagonal matrix (diag d,
// off-diagonal e) strictly below lambda, by the Sturm sequence of the
// shifted LDL^T factorization.
int sturm_count(const std::vector<double>& d, const std::vector<double>& e, double lambda) {
    constexpr double pivmin = 1e-290;
    int count = 0;
    double q = d[0] - lambda;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < d.size(); ++i) {
        const double e2 = e[i - 1] * e[i - 1];
        if (std::fabs(q) < pivmin) q = -pivmin;
        q = d[i] - lambda - e2 / q;
        if (q < 0.0) ++count;
    }
    return count;
}

} // namespace

std::vector<double> fd_spectrum(const PotentialModel& potential, const Grid& grid, int count) {
    if (grid.periodic) throw std::invalid_argument("fd_spectrum: grid must be non-periodic");
    if (count < 1) throw std::invalid_argument("fd_spectrum: count must be >= 1");
    const int m = grid.n - 2;  // interior points, Dirichlet walls at +-L
    const double dx = grid.dx();
    const double inv_dx2 = 1.0 / (dx * dx);
    std::vector<double> d(m), e(m - 1, -inv_dx2);
    for (int i = 0; i < m; ++i) d[i] = 2.0 * inv_dx2 + potential(grid.x(i + 1));

    // Gershgorin bounds.
    double lo = d[0], hi = d[0];
    for (int i = 0; i < m; ++i) {
        double r = 0.0;
        if (i > 0) r += std::fabs(e[i - 1]);
        if (i + 1 < m) r += std::fabs(e[i]);
        lo = std::min(lo, d[i] - r);
        hi = std::max(hi, d[i] + r);
    }

    std::vector<double> eigs(count);
    for (int k = 0; k < count; ++k) {
        double a = lo, b = hi;
        // Smallest lambda with sturm_count(lambda) >= k+1.
        while (b - a > 1e-12 * std::max(1.0, std::fabs(a) + std::fabs(b))) {
            const double mid = 0.5 * (a + b);
            if (sturm_count(d, e, mid) >= k + 1) b = mid;
            else a = mid;
        }
        eigs[k] = 0.5 * (a + b);
    }
    for (int k = 0; k < count; ++k) {
        if (!(eigs[k] < 0.0))
            throw MissingBoundStates("missing bound states: only " + std::to_string(k) +
                                     " negative eigenvalues, " + std::to_string(count) +
                                     " requested");
    }
    return eigs;
}

namespace {

std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

// RAII bundle for a matched pair of real<->complex FFTW plans of size n.
struct FftPair {
    int n;
    double* real_buf;
    fftw_complex* cplx_buf;
    fftw_plan fwd, bwd;

    explicit FftPair(int size) : n(size) {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        real_buf = fftw_alloc_real(n);
        cplx_buf = fftw_alloc_complex(n / 2 + 1);
        fwd = fftw_plan_dft_r2c_1d(n, real_buf, cplx_buf, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(n, cplx_buf, real_buf, FFTW_ESTIMATE);
    }
    ~FftPair() {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(real_buf);
        fftw_free(cplx_buf);
    }
    FftPair(const FftPair&) = delete;
    FftPair& operator=(const FftPair&) = delete;

    // real samples -> spectrum (unnormalized)
    void forward(const std::vector<double>& u, std::vector<std::complex<double>>& spec) {
        std::copy(u.begin(), u.end(), real_buf);
        fftw_execute(fwd);
        spec.resize(n / 2 + 1);
        for (int i = 0; i <= n / 2; ++i)
            spec[i] = std::complex<double>(cplx_buf[i][0], cplx_buf[i][1]);
    }
    // spectrum -> real samples, dividing by n
    void backward(const std::vector<std::complex<double>>& spec, std::vector<double>& u) {
        for (int i = 0; i <= n / 2; ++i) {
            cplx_buf[i][0] = spec[i].real();
            cplx_buf[i][1] = spec[i].imag();
        }
        fftw_execute(bwd);
        u.resize(n);
        const double inv = 1.0 / n;
        for (int i = 0; i < n; ++i) u[i] = real_buf[i] * inv;
    }
};

} // namespace

double residual_time_step(double kappa_max) {
    if (kappa_max <= 0.0) return 1e-5;
    // Balance point of dt^4 truncation (u scales like kappa^5 per time
    // derivative) against the 1/dt roundoff of the 5-point stencil.
    return std::min(1e-5, 5.7e-4 * std::pow(kappa_max, -3.4));
}

double kdv_residual(const SolitonField& field, const Grid& grid, double t, double dt) {
    if (!grid.periodic) throw std::invalid_argument("kdv_residual: grid must be periodic");
    if (!(dt > 0.0) || dt > 1e-4) throw std::invalid_argument("kdv_residual: need 0 < dt <= 1e-4");

    const int n = grid.n;
    const ScatteringData& data = field.data();
    std::vector<double> u(n), um2(n), um1(n), up1(n), up2(n);
    for (int i = 0; i < n; ++i) {
        const double x = grid.x(i);
        u[i] = field_direct(data, x, t);
        um2[i] = field_direct(data, x, t - 2.0 * dt);
        um1[i] = field_direct(data, x, t - dt);
        up1[i] = field_direct(data, x, t + dt);
        up2[i] = field_direct(data, x, t + 2.0 * dt);
    }
    if (std::fabs(u.front()) > 1e-8 || std::fabs(u[n - 1]) > 1e-8)
        throw DomainTooSmall("domain too small: |u| at the boundary exceeds 1e-8");

    FftPair fft(n);
    std::vector<std::complex<double>> spec, s1, s3;
    fft.forward(u, spec);
    s1.resize(spec.size());
    s3.resize(spec.size());
    const double k0 = M_PI / grid.L;  // fundamental wavenumber of [-L, L)
    for (std::size_t j = 0; j < spec.size(); ++j) {
        const double k = k0 * static_cast<double>(j);
        const std::complex<double> ik(0.0, k);
        s1[j] = ik * spec[j];
        s3[j] = ik * ik * ik * spec[j];
    }
    std::vector<double> ux, uxxx;
    fft.backward(s1, ux);
    fft.backward(s3, uxxx);

    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double ut = (-up2[i] + 8.0 * up1[i] - 8.0 * um1[i] + um2[i]) / (12.0 * dt);
        worst = std::max(worst, std::fabs(ut - 6.0 * u[i] * ux[i] + uxxx[i]));
    }
    return worst;
}

std::vector<double> spectral_evolve(const std::vector<double>& u0, const Grid& grid,
                                    double t_final, double dt) {
    if (!grid.periodic) throw std::invalid_argument("spectral_evolve: grid must be periodic");
    if (grid.L < 30.0) throw std::invalid_argument("spectral_evolve: need L >= 30 for evolution");
    if (static_cast<int>(u0.size()) != grid.n)
        throw std::invalid_argument("spectral_evolve: sample count mismatch");
    if (!(t_final >= 0.0)) throw std::invalid_argument("spectral_evolve: t_final must be >= 0");
    const double k_max = M_PI * grid.n / (2.0 * grid.L);
    const double budget = 2.8 / (k_max * k_max * k_max);
    if (!(dt > 0.0) || dt > budget)
        throw std::invalid_argument("spectral_evolve: dt exceeds the stability budget 2.8/k_max^3");
    if (t_final == 0.0) return u0;

    const long steps = std::max(1L, static_cast<long>(std::ceil(t_final / dt - 1e-9)));
    const double h = t_final / static_cast<double>(steps);

    const int n = grid.n;
    const int nm = n / 2 + 1;
    FftPair fft(n);

    const double k0 = M_PI / grid.L;
    std::vector<double> k(nm);
    std::vector<bool> keep(nm);
    for (int j = 0; j < nm; ++j) {
        k[j] = k0 * j;
        keep[j] = (j <= (2 * (n / 2)) / 3);  // 2/3-rule dealiasing
    }
    // Half/full-step phases of the exact linear propagator e^{i k^3 t}.
    std::vector<std::complex<double>> e_half(nm), e_full(nm);
    for (int j = 0; j < nm; ++j) {
        const double p = k[j] * k[j] * k[j];
        e_half[j] = std::polar(1.0, p * h / 2.0);
        e_full[j] = std::polar(1.0, p * h);
    }

    std::vector<std::complex<double>> uh;
    std::vector<double> phys;
    fft.forward(u0, uh);
    for (int j = 0; j < nm; ++j)
        if (!keep[j]) uh[j] = 0.0;

    // N(w) = 3 i k F[(F^{-1} w)^2], dealiased.
    auto nonlinear = [&](const std::vector<std::complex<double>>& win,
                         std::vector<std::complex<double>>& out) {
        fft.backward(win, phys);
        for (int i = 0; i < n; ++i) phys[i] *= phys[i];
        fft.forward(phys, out);
        for (int j = 0; j < nm; ++j) {
            out[j] = keep[j] ? std::complex<double>(0.0, 3.0 * k[j]) * out[j]
                             : std::complex<double>(0.0, 0.0);
        }
    };

    std::vector<std::complex<double>> k1(nm), k2(nm), k3(nm), k4(nm), tmp(nm);
    for (long s = 0; s < steps; ++s) {
        nonlinear(uh, k1);
        for (int j = 0; j < nm; ++j) tmp[j] = e_half[j] * (uh[j] + 0.5 * h * k1[j]);
        nonlinear(tmp, k2);
        for (int j = 0; j < nm; ++j) k2[j] = std::conj(e_half[j]) * k2[j];
        for (int j = 0; j < nm; ++j) tmp[j] = e_half[j] * (uh[j] + 0.5 * h * k2[j]);
        nonlinear(tmp, k3);
        for (int j = 0; j < nm; ++j) k3[j] = std::conj(e_half[j]) * k3[j];
        for (int j = 0; j < nm; ++j) tmp[j] = e_full[j] * (uh[j] + h * k3[j]);
        nonlinear(tmp, k4);
        for (int j = 0; j < nm; ++j) k4[j] = std::conj(e_full[j]) * k4[j];
        for (int j = 0; j < nm; ++j) {
            uh[j] = e_full[j] *
                    (uh[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]));
        }
        if ((s & 1023) == 0 || s + 1 == steps) {
            for (int j = 0; j < nm; ++j) {
                if (!std::isfinite(uh[j].real()) || !std::isfinite(uh[j].imag()))
                    throw BlowUp("blow-up (reduce dt or increase N_g)");
            }
        }
    }
    std::vector<double> out;
    fft.backward(uh, out);
    return out;
}

namespace {

// One adaptive step of the Dormand-Prince 5(4) pair on a complex 2-vector
// field y' = f(x, y). Returns the accepted step size actually taken through
// `h_used` and proposes the next one in `h_next`.
template <typename F>
void dopri_step(const F& f, double& x, std::complex<double> y[2], double& h,
                double rtol, double atol) {
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    std::complex<double> k1[2], k2[2], k3[2], k4[2], k5[2], k6[2], k7[2], yt[2], y5[2];
    while (true) {
        f(x, y, k1);
        for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a21 * k1[i]);
        f(x + c2 * h, yt, k2);
        for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(x + c3 * h, yt, k3);
        for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(x + c4 * h, yt, k4);
        for (int i = 0; i < 2; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(x + c5 * h, yt, k5);
        for (int i = 0; i < 2; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f(x + h, yt, k6);
        for (int i = 0; i < 2; ++i)
            y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(x + h, y5, k7);

        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            const std::complex<double> de =
                h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err = std::max(err, std::abs(de) / sc);
        }
        if (err <= 1.0) {
            x += h;
            y[0] = y5[0];
            y[1] = y5[1];
            const double fac = std::clamp(0.9 * std::pow(err > 0 ? err : 1e-10, -0.2), 0.2, 5.0);
            h *= fac;
            return;
        }
        h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
    }
}

} // namespace

std::complex<double> numeric_reflection(const PotentialModel& potential, double k,
                                        const Grid& grid) {
    if (!(k > 0.0)) throw std::invalid_argument("numeric_reflection: k must be positive");
    const double L = grid.L;
    if (std::fabs(potential(L)) >= 1e-12 || std::fabs(potential(-L)) >= 1e-12)
        throw DomainTooSmall("domain too small: potential not negligible at the walls");

    auto rhs = [&](double x, const std::complex<double> y[2], std::complex<double> dy[2]) {
        dy[0] = y[1];
        dy[1] = (potential(x) - k * k) * y[0];
    };

    const std::complex<double> I(0.0, 1.0);
    std::complex<double> y[2] = {std::exp(I * k * L), I * k * std::exp(I * k * L)};

    // Stations for the two-point plane-wave fit, a quarter period apart so
    // the fit determinant 2 i sin(k dx) is well conditioned.
    const double delta = M_PI / (2.0 * k);
    const double xb = -L + delta;
    const double xa = -L;

    double x = L;
    double h = -1e-3;
    const double rtol = 1e-10, atol = 1e-13;
    auto integrate_to = [&](double target) {
        while (x > target + 1e-14) {
            if (x + h < target) h = target - x;
            dopri_step(rhs, x, y, h, rtol, atol);
        }
    };
    integrate_to(xb);
    const std::complex<double> psi_b = y[0];
    integrate_to(xa);
    const std::complex<double> psi_a = y[0];

    const std::complex<double> ea = std::exp(I * k * xa), eb = std::exp(I * k * xb);
    const std::complex<double> det = ea / eb - eb / ea;  // -2i sin(k(xb-xa))
    if (std::abs(det) < 1e-8) throw FitDegenerate("fit degenerate: stations nearly dependent");
    const std::complex<double> a = (psi_a / eb - psi_b / ea) / det;
    const std::complex<double> b = (psi_b * ea - psi_a * eb) / det;
    if (std::abs(a) < 1e-12 * (std::abs(b) + 1.0))
        throw FitDegenerate("fit degenerate: vanishing transmitted amplitude");
    return b / a;
}

VerificationReport VerificationReport::make(std::string name, std::vector<double> measured,
                                            double tolerance, std::string parameters) {
    VerificationReport r;
    r.name = std::move(name);
    r.measured = std::move(measured);
    r.tolerance = tolerance;
    r.parameters = std::move(parameters);
    r.pass = true;
    for (double m : r.measured)
        if (!(m <= r.tolerance)) r.pass = false;
    return r;
}

} // namespace kdv
