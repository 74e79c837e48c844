#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace kdv {

/// Dense univariate polynomial with double coefficients, stored low to high:
/// coeffs[k] multiplies y^k. Supports the exact coefficient arithmetic the
/// Wronskian machinery needs (small degrees, integer-like coefficients).
class Polynomial {
public:
    Polynomial() : c_(1, 0.0) {}
    explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) c_.assign(1, 0.0);
        trim();
    }

    static Polynomial constant(double v) { return Polynomial(std::vector<double>{v}); }

    /// Degree of the stored representation (0 for the zero polynomial).
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    const std::vector<double>& coeffs() const { return c_; }

    bool is_zero() const { return c_.size() == 1 && c_[0] == 0.0; }

    /// Horner evaluation.
    double operator()(double y) const {
        double r = 0.0;
        for (std::size_t i = c_.size(); i-- > 0;) r = r * y + c_[i];
        return r;
    }

    Polynomial derivative() const {
        if (c_.size() <= 1) return Polynomial();
        std::vector<double> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
        return Polynomial(std::move(d));
    }

    Polynomial& operator*=(double s) {
        for (double& v : c_) v *= s;
        trim();
        return *this;
    }

    friend Polynomial operator*(Polynomial p, double s) { p *= s; return p; }
    friend Polynomial operator*(double s, Polynomial p) { p *= s; return p; }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<double> r(std::max(a.c_.size(), b.c_.size()), 0.0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return Polynomial(std::move(r));
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        std::vector<double> r(std::max(a.c_.size(), b.c_.size()), 0.0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
        return Polynomial(std::move(r));
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return Polynomial();
        std::vector<double> r(a.c_.size() + b.c_.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                r[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(r));
    }

    /// Substitute another polynomial for the variable: (*this)(inner(y)).
    Polynomial compose(const Polynomial& inner) const {
        Polynomial r = Polynomial::constant(0.0);
        for (std::size_t i = c_.size(); i-- > 0;) {
            r = r * inner + Polynomial::constant(c_[i]);
        }
        return r;
    }

private:
    void trim() {
        while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
    }

    std::vector<double> c_;
};

} // namespace kdv
