#pragma once

#include <memory>
#include <string>
#include <vector>

#include "kdvsol/polynomial.hpp"

namespace kdv {

/// Integer parameters (h; v_1 < ... < v_M) of a multi-indexed Darboux-Crum
/// deformation of the soliton potential U(x) = -h(h+1)/cosh^2 x. The seed
/// indices select pseudo-virtual states; N = h + M is the bound-state count
/// of the deformed potential. Admissibility (nodeless seed Wronskian) is a
/// runtime property established by check_nodeless, not a structural one.
struct DeformationSpec {
    int h = 0;
    std::vector<int> v;

    int M() const { return static_cast<int>(v.size()); }
    int N() const { return h + M(); }

    /// Throws std::invalid_argument unless h >= 0 and v is strictly
    /// increasing with non-negative entries.
    void validate() const;
};

/// A function of the closed family cosh(x)^alpha * poly(tanh x). The family
/// is closed under d/dx with alpha fixed:
///   f' = cosh^alpha(x) * [alpha*y*poly + (1-y^2)*poly'],  y = tanh x,
/// which keeps every seed/eigenfunction derivative exact (no finite
/// differences anywhere in the construction).
struct HyperbolicFunction {
    double alpha = 0.0;
    Polynomial poly;

    double operator()(double x) const;
    /// alpha*log cosh x + log|poly(tanh x)|; -inf at zeros of the polynomial factor.
    double log_abs(double x) const;
    HyperbolicFunction derivative() const;
};

/// Pseudo-virtual seed phi_v(x) = cosh^{h+1+v}(x) * P_v^{(-h-1-v,-h-1-v)}(tanh x).
HyperbolicFunction seed_profile(int h, int v);

/// Original bound state phi_n(x) = cosh^{-(h-n)}(x) * P_n^{(h-n,h-n)}(tanh x),
/// for 0 <= n <= h-1. Throws std::out_of_range otherwise.
HyperbolicFunction eigen_profile(int h, int n);

/// Wronskian of hyperbolic-family functions in factored form
/// W(x) = cosh^{A}(x) * D(tanh x): every column of the Wronskian matrix
/// shares its function's fixed cosh power, so the determinant splits into
/// the cosh prefactor (A = sum alpha_i) and an exact polynomial D.
/// The bounded factor D(tanh x) carries all sign/zero structure of W.
class SplitWronskian {
public:
    /// Wronskian of an empty list is identically 1.
    explicit SplitWronskian(const std::vector<HyperbolicFunction>& fs);

    double alpha_sum() const { return alpha_; }
    const Polynomial& det_poly() const { return d0_; }

    /// W(x); overflows only for |x|*A beyond ~700, far outside the scan domain.
    double value(double x) const;
    double log_abs(double x) const;
    /// Bounded factor D(tanh x).
    double bounded_factor(double x) const;
    /// Exact (log|W|)'' = A/cosh^2 x + (S''S - S'^2)/S^2 with S = D(tanh x).
    double d2_log(double x) const;
    /// View as a hyperbolic-family function (for exact higher derivatives).
    HyperbolicFunction as_function() const { return {alpha_, d0_}; }

private:
    double alpha_;
    Polynomial d0_, d1_, d2_;
};

/// The undeformed potential -h(h+1)/cosh^2 x (identically 0 for h = 0).
/// Non-integer h >= 0 is allowed; only integer h is reflectionless.
double soliton_potential(double h, double x);

/// Unnormalized original bound state phi_n or its first derivative.
/// Requires 0 <= n <= h-1 ("level out of range" otherwise) and
/// deriv_order in {0,1}.
double eigenfunction(int h, int n, double x, int deriv_order = 0);

/// Pseudo-virtual seed phi_v or an exact derivative of any order >= 0.
double seed_function(int h, int v, double x, int deriv_order = 0);

/// Seed energy E_v = -(h+1+v)^2.
double seed_energy(int h, int v);

/// W[phi_{v1},...,phi_{vM}](x) or its first/second x-derivative
/// (extra_derivs in {0,1,2}). v must be non-empty and strictly increasing.
double wronskian(int h, const std::vector<int>& v, double x, int extra_derivs = 0);

/// Deformed potential U(x) - 2 (d/dx)^2 log|W(x)|, evaluated exactly through
/// the factored Wronskian. Throws WronskianZero when |W(x)| < 1e-300.
double deformed_potential(const DeformationSpec& spec, double x);

/// Verdict of the nodeless scan, with the bracketing interval of the first
/// detected node when inadmissible.
struct AdmissibilityReport {
    bool admissible = false;
    bool node_at_origin = false;
    double bracket_lo = 0.0;   ///< valid when !admissible
    double bracket_hi = 0.0;   ///< valid when !admissible
    double min_ratio = 0.0;    ///< smallest dip ratio of the bounded Wronskian factor
    double half_width = 0.0;
    int samples = 0;
    std::string message;
};

/// Scans the bounded Wronskian factor D(tanh x) on a uniform grid over
/// [-half_width, half_width]: reports inadmissible on any sign change
/// between adjacent samples or when the dip ratio min|D| / max(1, |D| at the
/// nearest sample peak) falls to 1e-8 or below. The grid contains x = 0
/// exactly (odd sample counts), where odd-index seeds place their node.
/// Requires half_width >= 20 and samples >= 4001.
AdmissibilityReport check_nodeless(const DeformationSpec& spec,
                                   double half_width = 25.0,
                                   int samples = 20001);

/// An evaluatable potential U(x) with its provenance: either the undeformed
/// soliton potential of strength h, or the deformation described by a spec.
/// Deformed models cache the factored Wronskian, so evaluation is O(deg D).
class PotentialModel {
public:
    static PotentialModel soliton(double h);
    static PotentialModel deformed(const DeformationSpec& spec);

    double operator()(double x) const;

    bool is_deformed() const { return spec_ != nullptr; }
    /// Deformation parameters, or nullptr for an undeformed model.
    const DeformationSpec* spec() const { return spec_.get(); }
    /// Potential strength h (also valid for undeformed models).
    double strength() const { return h_; }
    const std::string& name() const { return name_; }

private:
    PotentialModel() = default;

    double h_ = 0.0;
    std::shared_ptr<const DeformationSpec> spec_;
    std::shared_ptr<const SplitWronskian> wronskian_;
    std::string name_;
};

} // namespace kdv
