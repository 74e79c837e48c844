#pragma once

#include <complex>
#include <vector>

#include "kdvsol/deform.hpp"

namespace kdv {

/// Whether a bound-state level descends from the undeformed potential or was
/// added by a pseudo-virtual seed.
enum class LevelOrigin { original, added };

struct SpectrumLevel {
    double kappa = 0.0;       ///< E = -kappa^2
    LevelOrigin origin = LevelOrigin::original;
    int index = 0;            ///< quantum number n (original) or seed position j (added)
};

/// Complete discrete scattering data of a reflectionless potential:
/// wavenumbers kappa_0 < kappa_1 < ... and the norming constants c_n(0)
/// of the e^{-kappa_n x} tails of the normalized bound states.
struct ScatteringData {
    std::vector<double> kappas;    ///< strictly ascending, all positive
    std::vector<double> normings;  ///< same order, all positive
    int h = 0;
    std::vector<int> v;
    bool reflectionless = false;
};

/// The N = h+M wavenumbers of the deformed potential: {h-n : n=0..h-1} from
/// the original spectrum plus {h+1+v_j} from the seeds, sorted ascending.
std::vector<SpectrumLevel> spectrum(const DeformationSpec& spec);

/// Bound states of a deformed potential in exact factored form. The state at
/// `level` (indexing the ascending spectrum) is
///   psi = W[phi_{v1},...,phi_{vM}, phi] / W[phi_{v1},...,phi_{vM}]
/// with phi the original eigenfunction for original levels; for the level
/// added by seed v_j the numerator is instead the Wronskian with phi_{v_j}
/// deleted (for M = 1 this reduces to 1/phi_v). Both Wronskians factor as
/// cosh^{A} * poly(tanh x), and the cosh powers combine to exactly -kappa,
/// so psi = cosh^{-kappa}(x) * Dnum(tanh x)/Dden(tanh x).
class BoundStates {
public:
    explicit BoundStates(const DeformationSpec& spec);

    int count() const { return static_cast<int>(levels_.size()); }
    const SpectrumLevel& level(int i) const { return levels_.at(i); }

    /// Unnormalized psi_i(x). Throws WronskianZero on a denominator node.
    double unnormalized(int i, double x) const;
    /// Exact derivative of the unnormalized state, order in {0,1,2}.
    double unnormalized_deriv(int i, double x, int order) const;
    /// Normalization integral of psi_i^2 over [-30,30], composite Simpson
    /// refined to relative 1e-11. Cached. Throws NormalizationDiverges.
    double normalization(int i) const;
    double normalized(int i, double x) const;
    /// c_i(0) extracted from the normalized tail at stations x = 18 and 22;
    /// throws TailNotAsymptotic if the stations disagree beyond 1e-6.
    double norming_constant(int i) const;

private:
    DeformationSpec spec_;
    std::vector<SpectrumLevel> levels_;
    // psi_i = cosh^{-kappa_i} * num_[i](tanh x) / den_(tanh x); the
    // HyperbolicFunction forms keep exact derivatives available.
    std::vector<HyperbolicFunction> num_fn_;
    HyperbolicFunction den_fn_;
    mutable std::vector<double> norm_cache_;
};

/// Unnormalized deformed wavefunction at the given spectrum level.
double bound_state(const DeformationSpec& spec, int level, double x);

/// Extracts (kappa_n, c_n(0)) for every level by quadrature normalization
/// plus tail evaluation. Throws TailNotAsymptotic / NormalizationDiverges.
ScatteringData norming_constants(const DeformationSpec& spec);

/// Reflection amplitude r_D(k) of the deformed potential,
///   r_D(k) = r(k) * prod_j (-1)^j (k + i(h+v_j+1))/(k - i(h+v_j+1)),
///   r(k) = Gamma(1+h-ik) Gamma(-h-ik) Gamma(ik) /
///          (Gamma(-h) Gamma(1+h) Gamma(-ik)).
/// For integer h the Gamma(-h) pole forces r to vanish identically (the
/// potential is reflectionless); the deformation factors are unimodular, so
/// deformations never change |r|. Non-integer h >= 0 is supported.
/// Throws ThresholdEvaluation at k = 0.
std::complex<double> reflection_amplitude(double h, const std::vector<int>& v, double k);
std::complex<double> reflection_amplitude(const DeformationSpec& spec, double k);

/// Complete scattering data bundle for an admissible integer-h spec, with
/// the reflectionless flag asserted.
ScatteringData scattering_data(const DeformationSpec& spec);

} // namespace kdv
