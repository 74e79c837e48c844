#include "kdvsol/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "kdvsol/errors.hpp"

namespace kdv {

namespace {

bool is_integer(double x) {
    return x == std::floor(x);
}

void check_params(const JacobiParams& p) {
    if (p.n < 0) throw std::invalid_argument("jacobi: degree must be non-negative");
    // Integer a in [-n, -1] makes (a+1)_n vanish while individual sum terms
    // need not: the degree-n family degenerates there.
    if (p.n >= 1 && is_integer(p.a) && p.a <= -1.0 && p.a >= -static_cast<double>(p.n)) {
        throw ParameterDegeneracy("jacobi: parameter degeneracy at a = " + std::to_string(p.a) +
                                  " with n = " + std::to_string(p.n));
    }
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int j = 1; j <= k; ++j) r = r * static_cast<double>(n - k + j) / static_cast<double>(j);
    return r;
}

double pochhammer(double a, int k) {
    double r = 1.0;
    for (int j = 0; j < k; ++j) r *= (a + static_cast<double>(j));
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int j = 2; j <= n; ++j) r *= static_cast<double>(j);
    return r;
}

} // namespace

double jacobi(const JacobiParams& p, double y) {
    check_params(p);
    const double z = (1.0 - y) / 2.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 0; k <= p.n; ++k) {
        sum += sign * binomial(p.n, k) * pochhammer(p.n + p.a + p.b + 1.0, k) *
               pochhammer(p.a + k + 1.0, p.n - k) * std::pow(z, k);
        sign = -sign;
    }
    return sum / factorial(p.n);
}

double jacobi_deriv(const JacobiParams& p, double y, int order) {
    check_params(p);
    if (order < 1) throw std::invalid_argument("jacobi_deriv: order must be >= 1");
    if (order > p.n) return 0.0;
    double factor = pochhammer(p.n + p.a + p.b + 1.0, order) / std::pow(2.0, order);
    JacobiParams shifted{p.n - order, p.a + order, p.b + order};
    return factor * jacobi(shifted, y);
}

Polynomial jacobi_polynomial(const JacobiParams& p) {
    check_params(p);
    // Coefficients in z = (1-y)/2, then substitute z(y).
    std::vector<double> cz(p.n + 1, 0.0);
    double sign = 1.0;
    const double invfact = 1.0 / factorial(p.n);
    for (int k = 0; k <= p.n; ++k) {
        cz[k] = sign * binomial(p.n, k) * pochhammer(p.n + p.a + p.b + 1.0, k) *
                pochhammer(p.a + k + 1.0, p.n - k) * invfact;
        sign = -sign;
    }
    Polynomial in_z{std::vector<double>(cz)};
    Polynomial z_of_y{std::vector<double>{0.5, -0.5}};
    return in_z.compose(z_of_y);
}

namespace {

// Lanczos approximation, g = 7, nine coefficients.
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

std::complex<double> log_gamma_lanczos(std::complex<double> z) {
    // Valid for Re z >= 0.5.
    z -= 1.0;
    std::complex<double> x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    std::complex<double> t = z + 7.5;
    const double half_log_2pi = 0.91893853320467274178;
    return half_log_2pi + (z + 0.5) * std::log(t) - t + std::log(x);
}

} // namespace

std::complex<double> log_gamma(std::complex<double> z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && is_integer(z.real())) {
        throw GammaPole("log_gamma: gamma pole at z = " + std::to_string(z.real()));
    }
    if (z.real() >= 0.5) return log_gamma_lanczos(z);
    // Reflection: log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z).
    const double pi = 3.14159265358979323846;
    std::complex<double> log_sin = std::log(std::sin(pi * z));
    return std::log(std::complex<double>(pi)) - log_sin - log_gamma_lanczos(1.0 - z);
}

} // namespace kdv
