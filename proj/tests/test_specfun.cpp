#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "kdvsol/errors.hpp"
#include "kdvsol/specfun.hpp"

using kdv::JacobiParams;

namespace {

// Standard Jacobi three-term recurrence, seeded from the library's own
// degree-0 and degree-1 values:
//   2n(n+a+b)(2n+a+b-2) P_n = (2n+a+b-1)[(2n+a+b)(2n+a+b-2)y + a^2-b^2] P_{n-1}
//                             - 2(n+a-1)(n+b-1)(2n+a+b) P_{n-2}.
// `conditioning` records the largest magnitude any step passes through before
// its subtraction; cancellation below that level is roundoff, not disagreement.
double recurrence_value(int n, double a, double b, double y, double* conditioning) {
    double pm2 = kdv::jacobi({0, a, b}, y);
    double pm1 = kdv::jacobi({1, a, b}, y);
    *conditioning = std::max(std::fabs(pm2), std::fabs(pm1));
    if (n == 0) return pm2;
    if (n == 1) return pm1;
    double p = 0.0;
    for (int k = 2; k <= n; ++k) {
        const double s = 2.0 * k + a + b;
        const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
        const double c2 = (s - 1.0) * (s * (s - 2.0) * y + a * a - b * b);
        const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        p = (c2 * pm1 - c3 * pm2) / c1;
        *conditioning =
            std::max(*conditioning, (std::fabs(c2 * pm1) + std::fabs(c3 * pm2)) / std::fabs(c1));
        pm2 = pm1;
        pm1 = p;
    }
    return p;
}

// Magnitude of the alternating terminating series for P_n^{(a,b)}(y) in
// powers of (1-y)/2. No double-precision evaluation can resolve the value
// more finely than roundoff in terms of this size.
double series_magnitude(int n, double a, double b, double y) {
    const double z = (1.0 - y) / 2.0;
    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;
    double binom = 1.0;
    double poch_ab = 1.0;
    double total = 0.0;
    for (int k = 0; k <= n; ++k) {
        double poch_a = 1.0;
        for (int j = 0; j < n - k; ++j) poch_a *= (a + k + 1.0 + j);
        total += std::fabs(binom * poch_ab * poch_a) * std::pow(z, k);
        binom = binom * (n - k) / (k + 1.0);
        poch_ab *= (n + a + b + 1.0 + k);
    }
    return total / fact;
}

// The recurrence divides by 2k(k+a+b)(2k+a+b-2); keep every such factor
// comfortably away from zero so the reference itself is well conditioned.
bool recurrence_conditioned(int n, double a, double b) {
    for (int k = 2; k <= n; ++k) {
        const double s = 2.0 * k + a + b;
        if (std::fabs(k + a + b) < 0.3) return false;
        if (std::fabs(s - 2.0) < 0.3) return false;
        if (std::fabs(s - 1.0) < 0.1) return false;
        if (std::fabs(s) < 0.1) return false;
    }
    return true;
}

bool degenerate_first_parameter(int n, double a) {
    const double r = std::round(a);
    if (a != r) return false;
    return r >= -static_cast<double>(n) && r <= -1.0;
}

} // namespace

TEST_SUITE("specfun") {

TEST_CASE("degree zero is the constant one") {
    for (double y : {-1.0, -0.4, 0.0, 0.3, 1.0}) {
        CHECK(kdv::jacobi({0, 2.5, -1.25}, y) == 1.0);
        CHECK(kdv::jacobi({0, -4.0, -4.0}, y) == 1.0);
    }
}

TEST_CASE("quadratic with both parameters -4") {
    // P_2^{(-4,-4)}(y) = (1 + 5 y^2) / 2, the polynomial factor of the first
    // even pseudo-virtual seed at h = 1.
    for (double y : {-1.0, -0.6, -0.2, 0.0, 0.3, 0.7, 1.0}) {
        const double want = 0.5 * (1.0 + 5.0 * y * y);
        CHECK(kdv::jacobi({2, -4.0, -4.0}, y) == doctest::Approx(want).epsilon(1e-14));
    }
    CHECK(kdv::jacobi({2, -4.0, -4.0}, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(kdv::jacobi({2, -4.0, -4.0}, 1.0) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("degenerate integer parameters are rejected") {
    CHECK_THROWS_AS(kdv::jacobi({2, -1.0, 0.3}, 0.2), kdv::ParameterDegeneracy);
    CHECK_THROWS_AS(kdv::jacobi({3, -2.0, 1.0}, 0.1), kdv::ParameterDegeneracy);
    CHECK_THROWS_AS(kdv::jacobi({5, -5.0, -5.0}, -0.4), kdv::ParameterDegeneracy);
    // Integer a below -n is outside the degenerate band (the seed family
    // always lands here: a = -(h+1+v) < -v).
    CHECK_NOTHROW(kdv::jacobi({2, -3.0, -3.0}, 0.4));
    CHECK_NOTHROW(kdv::jacobi({4, -7.0, -7.0}, -0.9));
}

TEST_CASE("three-term recurrence consistency") {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> pick_n(2, 8);
    std::uniform_real_distribution<double> pick_ab(-10.0, 10.0);
    std::uniform_real_distribution<double> pick_y(-0.999, 0.999);

    int tested = 0;
    while (tested < 300) {
        const int n = pick_n(rng);
        const double a = pick_ab(rng);
        const double b = pick_ab(rng);
        if (!recurrence_conditioned(n, a, b)) continue;
        if (degenerate_first_parameter(n, a)) continue;
        const double y = pick_y(rng);
        const double lib = kdv::jacobi({n, a, b}, y);
        double conditioning = 0.0;
        const double rec = recurrence_value(n, a, b, y, &conditioning);
        const double scale = std::max(
            {1.0, std::fabs(lib), std::fabs(rec), conditioning, series_magnitude(n, a, b, y)});
        CHECK(std::fabs(lib - rec) <= 1e-10 * scale);
        ++tested;
    }
}

TEST_CASE("derivative matches centered finite differences") {
    std::mt19937 rng(98765);
    std::uniform_int_distribution<int> pick_n(1, 6);
    std::uniform_real_distribution<double> pick_ab(-5.0, 5.0);
    std::uniform_real_distribution<double> pick_y(-0.9, 0.9);

    const double step = 1e-5;
    for (int trial = 0; trial < 300; ++trial) {
        const int n = pick_n(rng);
        const double a = pick_ab(rng);
        const double b = pick_ab(rng);
        if (degenerate_first_parameter(n, a)) continue;
        const double y = pick_y(rng);
        const JacobiParams params{n, a, b};
        const double fd =
            (kdv::jacobi(params, y + step) - kdv::jacobi(params, y - step)) / (2.0 * step);
        CHECK(std::fabs(kdv::jacobi_deriv(params, y, 1) - fd) <= 1e-6);
    }
}

TEST_CASE("derivative closed forms for the quadratic seed factor") {
    const JacobiParams params{2, -4.0, -4.0};
    // d/dy of (1 + 5y^2)/2 is 5y; the second derivative is the constant 5.
    CHECK(kdv::jacobi_deriv(params, 0.5, 1) == doctest::Approx(2.5).epsilon(1e-14));
    for (double y : {-1.0, -0.3, 0.0, 0.7}) {
        CHECK(kdv::jacobi_deriv(params, y, 2) == doctest::Approx(5.0).epsilon(1e-14));
    }
    CHECK(kdv::jacobi_deriv(params, 0.4, 3) == 0.0);
    CHECK(kdv::jacobi_deriv({0, 1.5, -0.5}, 0.2, 1) == 0.0);
}

TEST_CASE("even-parameter symmetry") {
    std::mt19937 rng(24680);
    std::uniform_int_distribution<int> pick_n(0, 8);
    std::uniform_real_distribution<double> pick_a(-8.0, 8.0);
    std::uniform_real_distribution<double> pick_y(0.0, 1.0);

    for (int trial = 0; trial < 200; ++trial) {
        const int n = pick_n(rng);
        const double a = pick_a(rng);
        if (degenerate_first_parameter(n, a)) continue;
        const double y = pick_y(rng);
        const double plus = kdv::jacobi({n, a, a}, y);
        const double minus = kdv::jacobi({n, a, a}, -y);
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        // Any evaluation of the polynomial carries roundoff proportional to
        // the size of its coefficients, so measure the mismatch against that.
        double coeff_l1 = 0.0;
        for (double c : kdv::jacobi_polynomial({n, a, a}).coeffs()) coeff_l1 += std::fabs(c);
        const double scale = std::max({1.0, std::fabs(plus), coeff_l1});
        CHECK(std::fabs(minus - sign * plus) <= 1e-11 * scale);
    }
}

TEST_CASE("coefficient form agrees with pointwise evaluation") {
    const std::vector<JacobiParams> cases = {
        {2, -4.0, -4.0}, {5, -7.0, -7.0}, {3, 1.5, -0.5}, {4, -6.5, 2.25}, {1, -3.0, -3.0}};
    for (const auto& params : cases) {
        const kdv::Polynomial p = kdv::jacobi_polynomial(params);
        CHECK(p.degree() <= params.n);
        for (double y : {-0.95, -0.5, 0.0, 0.25, 0.8}) {
            const double direct = kdv::jacobi(params, y);
            const double scale = std::max(1.0, std::fabs(direct));
            CHECK(std::fabs(p(y) - direct) <= 1e-12 * scale);
        }
    }

    const kdv::Polynomial seed = kdv::jacobi_polynomial({2, -4.0, -4.0});
    REQUIRE(seed.degree() == 2);
    CHECK(seed.coeffs()[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(seed.coeffs()[1] == doctest::Approx(0.0));
    CHECK(seed.coeffs()[2] == doctest::Approx(2.5).epsilon(1e-15));

    const kdv::Polynomial odd = kdv::jacobi_polynomial({1, -3.0, -3.0});
    REQUIRE(odd.degree() == 1);
    CHECK(odd.coeffs()[0] == doctest::Approx(0.0));
    CHECK(odd.coeffs()[1] == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("log gamma special values") {
    const std::complex<double> one(1.0, 0.0);
    CHECK(std::abs(kdv::log_gamma(one)) <= 1e-13);
    CHECK(std::abs(kdv::log_gamma({2.0, 0.0})) <= 1e-13);
    const std::complex<double> half = kdv::log_gamma({0.5, 0.0});
    CHECK(half.real() == doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-13));
    CHECK(std::fabs(half.imag()) <= 1e-13);
}

TEST_CASE("log gamma poles") {
    CHECK_THROWS_AS(kdv::log_gamma({-1.0, 0.0}), kdv::GammaPole);
    CHECK_THROWS_AS(kdv::log_gamma({0.0, 0.0}), kdv::GammaPole);
    CHECK_THROWS_AS(kdv::log_gamma({-7.0, 0.0}), kdv::GammaPole);
}

TEST_CASE("log gamma matches the standard library on the positive axis") {
    for (double z : {0.1, 0.75, 1.5, 3.25, 10.5, 47.0, 99.5}) {
        const std::complex<double> got = kdv::log_gamma({z, 0.0});
        const double want = std::lgamma(z);
        const double scale = std::max(1.0, std::fabs(want));
        CHECK(std::fabs(got.real() - want) <= 1e-12 * scale);
        CHECK(std::fabs(got.imag()) <= 1e-12);
    }
}

TEST_CASE("log gamma reflection identity") {
    std::mt19937 rng(1357);
    std::uniform_real_distribution<double> pick(-14.0, 14.0);

    int tested = 0;
    while (tested < 150) {
        const std::complex<double> z(pick(rng), pick(rng));
        if (std::abs(z) > 20.0) continue;
        if (std::fabs(z.imag()) < 0.1) continue;
        const std::complex<double> lhs = std::exp(kdv::log_gamma(z) + kdv::log_gamma(1.0 - z));
        const std::complex<double> rhs = M_PI / std::sin(M_PI * z);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
        ++tested;
    }
}

TEST_CASE("polynomial arithmetic") {
    const kdv::Polynomial p({1.0, 2.0});   // 1 + 2y
    const kdv::Polynomial q({3.0, -1.0});  // 3 - y
    const kdv::Polynomial prod = p * q;
    REQUIRE(prod.degree() == 2);
    CHECK(prod.coeffs()[0] == 3.0);
    CHECK(prod.coeffs()[1] == 5.0);
    CHECK(prod.coeffs()[2] == -2.0);

    const kdv::Polynomial cube({0.0, 0.0, 0.0, 1.0});  // y^3
    const kdv::Polynomial d = cube.derivative();
    REQUIRE(d.degree() == 2);
    CHECK(d.coeffs()[2] == 3.0);

    // (1 + 2y) composed with (3 - y): 7 - 2y.
    const kdv::Polynomial comp = p.compose(q);
    CHECK(comp(0.5) == doctest::Approx(6.0));
    CHECK(comp(0.0) == doctest::Approx(7.0));

    CHECK(kdv::Polynomial().is_zero());
    CHECK((p - p).is_zero());
    CHECK((p + q)(2.0) == doctest::Approx(p(2.0) + q(2.0)));
}

} // TEST_SUITE("specfun")
