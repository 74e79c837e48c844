#pragma once

#include <complex>

#include "kdvsol/polynomial.hpp"

namespace kdv {

/// Jacobi polynomial P_n^{(a,b)} with no sign restriction on the parameters.
/// The seed functions of the Darboux-Crum construction need a = b < 0.
struct JacobiParams {
    int n;     ///< degree, n >= 0
    double a;  ///< first parameter
    double b;  ///< second parameter
};

/// Evaluate P_n^{(a,b)}(y) from the terminating hypergeometric sum,
///
///   P_n^{(a,b)}(y) = (1/n!) sum_{k=0}^{n} (-1)^k C(n,k) (n+a+b+1)_k
///                    (a+k+1)_{n-k} z^k,   z = (1-y)/2,
///
/// with every Pochhammer product formed term by term so negative-integer
/// parameter cancellations are exact in the degree-n truncation.
/// Throws ParameterDegeneracy when a is an integer in [-n, -1], where the
/// classical normalization degenerates (never reached by the parameter
/// families generated here).
double jacobi(const JacobiParams& params, double y);

/// order-th derivative d^m/dy^m P_n^{(a,b)}(y), via the exact shift identity
/// d/dy P_n^{(a,b)} = ((n+a+b+1)/2) P_{n-1}^{(a+1,b+1)}. Returns 0 when
/// order exceeds n. Requires order >= 1.
double jacobi_deriv(const JacobiParams& params, double y, int order);

/// Power-basis coefficients of P_n^{(a,b)} as a Polynomial in y, built from
/// the same terminating sum (used by the exact Wronskian machinery).
Polynomial jacobi_polynomial(const JacobiParams& params);

/// Principal-branch log Gamma, relative accuracy better than 1e-12 for
/// |z| <= 100 (Lanczos approximation plus the reflection formula for
/// Re z < 1/2). Throws GammaPole at non-positive real integers.
std::complex<double> log_gamma(std::complex<double> z);

} // namespace kdv
