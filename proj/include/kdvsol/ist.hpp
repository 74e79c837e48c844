#pragma once

#include <vector>

#include "kdvsol/scatter.hpp"

namespace kdv {

/// GGKM time evolution of a norming constant: c(t) = c(0) e^{4 kappa^3 t}.
/// May overflow for large kappa^3 t; downstream assembly uses the log form.
double evolve_norming(double c0, double kappa, double t);

/// log c(t) = log c(0) + 4 kappa^3 t (the overflow-safe form).
double log_evolve_norming(double c0, double kappa, double t);

/// The symmetrized N x N GLM matrix
///   A_mn = delta_mn + c_m(t) c_n(t) e^{-(kappa_m+kappa_n)x} / (kappa_m+kappa_n),
/// diagonally similar to the unsymmetrized variant (same determinant) and
/// symmetric positive definite (Gram structure).
///
/// Entries are assembled from the exponents theta_n = log c_n(t) - kappa_n x.
/// Internally the matrix is stored in the exactly rescaled form
/// A = S C S, S = diag(e^{max(theta_n,0)}), whose core C has entries in
/// [0, ~1]; determinants and the trace identities for (log det A)'' are
/// evaluated on C, so no exponential ever overflows. The public window
/// |theta_n| <= 600 bounds where callers may rely on direct evaluation;
/// the constructor throws OutOfDirectWindow beyond it unless told otherwise.
class TauMatrix {
public:
    enum class Window { enforce, ignore };

    TauMatrix(const ScatteringData& data, double x, double t,
              Window window = Window::enforce);

    int size() const { return n_; }

    /// Literal matrix entry A_mn (can overflow near the window edge where
    /// theta_m + theta_n approaches 1200; the determinant path does not).
    double entry(int m, int n) const;

    /// log det A = 2 sum_n max(theta_n, 0) + log det C, via Cholesky of C.
    double log_det() const;

    /// Cholesky success on the scaled core (congruent to A, so this is
    /// exactly the positive-definiteness of A).
    bool spd() const;

    /// (d/dx)^2 log det A from the analytic trace identities
    /// tr(C^{-1} C'') - tr((C^{-1} C')^2), never numerical differentiation.
    double second_log_derivative() const;

private:
    int n_ = 0;
    std::vector<double> kappa_, theta_, phi_, b_, mu_;
    std::vector<double> c_;  // scaled core, row-major
    mutable std::vector<double> chol_;
    mutable int chol_state_ = 0;  // 0 unknown, 1 ok, -1 failed
    bool factorize() const;
};

/// Convenience factory (throws OutOfDirectWindow outside the stable window).
TauMatrix tau_matrix(const ScatteringData& data, double x, double t);

/// u(x,t) = -2 (d/dx)^2 log det A. Falls back to asymptotic_field
/// automatically when the direct window is exceeded.
double field(const ScatteringData& data, double x, double t);

/// Direct evaluation only; throws OutOfDirectWindow outside the window.
double field_checked(const ScatteringData& data, double x, double t);

/// Direct evaluation with no window guard: the rescaled assembly is exact
/// for arbitrarily large |theta| (diagonal terms underflow harmlessly).
double field_direct(const ScatteringData& data, double x, double t);

/// Train-of-solitons form -2 sum_n kappa_n^2 sech^2(kappa_n(x - 4 kappa_n^2 t)
/// + sgn(t) chi_n), exponentially accurate for well-separated solitons and
/// independent of the norming constants.
double asymptotic_field(const ScatteringData& data, double x, double t);

/// chi_n = (1/2) sum_{m != n} sgn(kappa_n-kappa_m) log|(kappa_n-kappa_m)/(kappa_n+kappa_m)|.
/// Throws DegenerateSpectrum on repeated wavenumbers.
double phase_shift(const ScatteringData& data, int n);

/// An exact N-soliton KdV solution assembled from scattering data.
class SolitonField {
public:
    explicit SolitonField(ScatteringData data) : data_(std::move(data)) {}

    /// Builds the field whose u(x,0) is the deformed potential of the spec.
    static SolitonField from_spec(const DeformationSpec& spec) {
        return SolitonField(scattering_data(spec));
    }

    /// Direct evaluation with automatic asymptotic fallback.
    double operator()(double x, double t) const { return field(data_, x, t); }

    const ScatteringData& data() const { return data_; }

private:
    ScatteringData data_;
};

} // namespace kdv
