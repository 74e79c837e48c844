#include "kdvsol/ist.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kdvsol/errors.hpp"

namespace kdv {

double evolve_norming(double c0, double kappa, double t) {
    if (c0 <= 0.0 || kappa <= 0.0)
        throw std::invalid_argument("evolve_norming: c0 and kappa must be positive");
    return c0 * std::exp(4.0 * kappa * kappa * kappa * t);
}

double log_evolve_norming(double c0, double kappa, double t) {
    if (c0 <= 0.0 || kappa <= 0.0)
        throw std::invalid_argument("evolve_norming: c0 and kappa must be positive");
    return std::log(c0) + 4.0 * kappa * kappa * kappa * t;
}

namespace {

constexpr double kDirectWindow = 600.0;

void validate_data(const ScatteringData& data) {
    if (data.kappas.size() != data.normings.size())
        throw std::invalid_argument("ScatteringData: kappas/normings size mismatch");
    for (std::size_t i = 0; i < data.kappas.size(); ++i) {
        if (data.kappas[i] <= 0.0)
            throw std::invalid_argument("ScatteringData: wavenumbers must be positive");
        if (data.normings[i] <= 0.0)
            throw std::invalid_argument("ScatteringData: norming constants must be positive");
        if (i > 0 && data.kappas[i] <= data.kappas[i - 1])
            throw std::invalid_argument("ScatteringData: wavenumbers must be strictly ascending");
    }
}

} // namespace

TauMatrix::TauMatrix(const ScatteringData& data, double x, double t, Window window) {
    validate_data(data);
    n_ = static_cast<int>(data.kappas.size());
    kappa_ = data.kappas;
    theta_.resize(n_);
    phi_.resize(n_);
    b_.resize(n_);
    mu_.resize(n_);
    for (int i = 0; i < n_; ++i) {
        theta_[i] = log_evolve_norming(data.normings[i], kappa_[i], t) - kappa_[i] * x;
        if (window == Window::enforce && std::fabs(theta_[i]) > kDirectWindow) {
            std::ostringstream os;
            os << "out of direct-evaluation domain: |theta_" << i << "| = "
               << std::fabs(theta_[i]) << " > " << kDirectWindow;
            throw OutOfDirectWindow(os.str());
        }
        phi_[i] = std::max(theta_[i], 0.0);
        b_[i] = std::exp(std::min(theta_[i], 0.0));
        mu_[i] = theta_[i] > 0.0 ? 0.0 : kappa_[i];
    }
    // Scaled core C = S^{-1} A S^{-1}: diagonal e^{-2 phi_n} plus the Gram
    // part b_m b_n / (kappa_m + kappa_n); all entries bounded by ~1.
    c_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
    for (int m = 0; m < n_; ++m) {
        for (int n = 0; n < n_; ++n) {
            double v = b_[m] * b_[n] / (kappa_[m] + kappa_[n]);
            if (m == n) v += std::exp(-2.0 * phi_[m]);
            c_[m * n_ + n] = v;
        }
    }
}

double TauMatrix::entry(int m, int n) const {
    if (m < 0 || m >= n_ || n < 0 || n >= n_)
        throw std::out_of_range("TauMatrix::entry: index out of range");
    double v = std::exp(theta_[m] + theta_[n]) / (kappa_[m] + kappa_[n]);
    if (m == n) v += 1.0;
    return v;
}

bool TauMatrix::factorize() const {
    if (chol_state_ != 0) return chol_state_ == 1;
    chol_ = c_;
    // In-place lower Cholesky.
    for (int j = 0; j < n_; ++j) {
        double d = chol_[j * n_ + j];
        for (int k = 0; k < j; ++k) d -= chol_[j * n_ + k] * chol_[j * n_ + k];
        if (!(d > 0.0)) {
            chol_state_ = -1;
            return false;
        }
        const double l = std::sqrt(d);
        chol_[j * n_ + j] = l;
        for (int i = j + 1; i < n_; ++i) {
            double s = chol_[i * n_ + j];
            for (int k = 0; k < j; ++k) s -= chol_[i * n_ + k] * chol_[j * n_ + k];
            chol_[i * n_ + j] = s / l;
        }
    }
    chol_state_ = 1;
    return true;
}

bool TauMatrix::spd() const { return factorize(); }

double TauMatrix::log_det() const {
    if (!factorize()) throw std::runtime_error("TauMatrix: matrix not positive definite");
    double s = 0.0;
    for (int i = 0; i < n_; ++i) {
        s += 2.0 * phi_[i];
        s += 2.0 * std::log(chol_[i * n_ + i]);
    }
    return s;
}

double TauMatrix::second_log_derivative() const {
    if (!factorize()) throw std::runtime_error("TauMatrix: matrix not positive definite");
    // x-derivatives of the scaled core (phi_n' = -kappa_n [theta_n > 0],
    // b_n' = -mu_n b_n):
    //   C'_mn  = delta_mn 2 kappa_n sigma_n e^{-2 phi_n} - (mu_m+mu_n) G_mn
    //   C''_mn = delta_mn 4 kappa_n^2 sigma_n e^{-2 phi_n} + (mu_m+mu_n)^2 G_mn
    // with G_mn = b_m b_n/(kappa_m+kappa_n); then
    //   (log det A)'' = tr(C^{-1} C'') - tr((C^{-1} C')^2).
    std::vector<double> c1(static_cast<std::size_t>(n_) * n_), c2(c1.size());
    for (int m = 0; m < n_; ++m) {
        for (int n = 0; n < n_; ++n) {
            const double g = b_[m] * b_[n] / (kappa_[m] + kappa_[n]);
            const double mu = mu_[m] + mu_[n];
            double d1 = -mu * g;
            double d2 = mu * mu * g;
            if (m == n && theta_[m] > 0.0) {
                const double e = std::exp(-2.0 * phi_[m]);
                d1 += 2.0 * kappa_[m] * e;
                d2 += 4.0 * kappa_[m] * kappa_[m] * e;
            }
            c1[m * n_ + n] = d1;
            c2[m * n_ + n] = d2;
        }
    }
    // Solve C X = C' and C Y = C'' column by column with the Cholesky factor.
    auto solve_inplace = [&](std::vector<double>& rhs) {
        for (int col = 0; col < n_; ++col) {
            // forward: L z = rhs(:,col)
            for (int i = 0; i < n_; ++i) {
                double s = rhs[i * n_ + col];
                for (int k = 0; k < i; ++k) s -= chol_[i * n_ + k] * rhs[k * n_ + col];
                rhs[i * n_ + col] = s / chol_[i * n_ + i];
            }
            // backward: L^T x = z
            for (int i = n_ - 1; i >= 0; --i) {
                double s = rhs[i * n_ + col];
                for (int k = i + 1; k < n_; ++k) s -= chol_[k * n_ + i] * rhs[k * n_ + col];
                rhs[i * n_ + col] = s / chol_[i * n_ + i];
            }
        }
    };
    std::vector<double> x1 = c1;  // X = C^{-1} C'
    std::vector<double> y2 = c2;  // Y = C^{-1} C''
    solve_inplace(x1);
    solve_inplace(y2);
    double tr_y = 0.0, tr_xx = 0.0;
    for (int i = 0; i < n_; ++i) {
        tr_y += y2[i * n_ + i];
        for (int j = 0; j < n_; ++j) tr_xx += x1[i * n_ + j] * x1[j * n_ + i];
    }
    return tr_y - tr_xx;
}

TauMatrix tau_matrix(const ScatteringData& data, double x, double t) {
    return TauMatrix(data, x, t, TauMatrix::Window::enforce);
}

double field_checked(const ScatteringData& data, double x, double t) {
    if (data.kappas.empty()) return 0.0;
    TauMatrix a(data, x, t, TauMatrix::Window::enforce);
    return -2.0 * a.second_log_derivative();
}

double field_direct(const ScatteringData& data, double x, double t) {
    if (data.kappas.empty()) return 0.0;
    TauMatrix a(data, x, t, TauMatrix::Window::ignore);
    return -2.0 * a.second_log_derivative();
}

double field(const ScatteringData& data, double x, double t) {
    try {
        return field_checked(data, x, t);
    } catch (const OutOfDirectWindow&) {
        return asymptotic_field(data, x, t);
    }
}

double asymptotic_field(const ScatteringData& data, double x, double t) {
    validate_data(data);
    const double sgn = t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
    double u = 0.0;
    for (std::size_t n = 0; n < data.kappas.size(); ++n) {
        const double k = data.kappas[n];
        const double arg = k * (x - 4.0 * k * k * t) + sgn * phase_shift(data, static_cast<int>(n));
        // sech^2 without overflow for large |arg|
        const double e = std::exp(-std::fabs(arg));
        const double sech = 2.0 * e / (1.0 + e * e);
        u -= 2.0 * k * k * sech * sech;
    }
    return u;
}

double phase_shift(const ScatteringData& data, int n) {
    if (n < 0 || n >= static_cast<int>(data.kappas.size()))
        throw std::out_of_range("phase_shift: level out of range");
    const double kn = data.kappas[n];
    double chi = 0.0;
    for (std::size_t m = 0; m < data.kappas.size(); ++m) {
        if (static_cast<int>(m) == n) continue;
        const double km = data.kappas[m];
        if (kn == km)
            throw DegenerateSpectrum("phase_shift: degenerate spectrum (repeated wavenumber)");
        const double s = kn > km ? 1.0 : -1.0;
        chi += 0.5 * s * std::log(std::fabs((kn - km) / (kn + km)));
    }
    return chi;
}

} // namespace kdv
