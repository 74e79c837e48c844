#include "kdvsol/scatter.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kdvsol/errors.hpp"
#include "kdvsol/specfun.hpp"

namespace kdv {

std::vector<SpectrumLevel> spectrum(const DeformationSpec& spec) {
    spec.validate();
    std::vector<SpectrumLevel> levels;
    levels.reserve(spec.N());
    for (int n = 0; n < spec.h; ++n)
        levels.push_back({static_cast<double>(spec.h - n), LevelOrigin::original, n});
    for (int j = 0; j < spec.M(); ++j)
        levels.push_back({static_cast<double>(spec.h + 1 + spec.v[j]), LevelOrigin::added, j});
    std::sort(levels.begin(), levels.end(),
              [](const SpectrumLevel& a, const SpectrumLevel& b) { return a.kappa < b.kappa; });
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (levels[i].kappa == levels[i - 1].kappa)
            throw std::logic_error("spectrum: duplicate wavenumber");
    return levels;
}

BoundStates::BoundStates(const DeformationSpec& spec) : spec_(spec) {
    spec_.validate();
    levels_ = spectrum(spec_);

    std::vector<HyperbolicFunction> seeds;
    seeds.reserve(spec_.v.size());
    for (int vi : spec_.v) seeds.push_back(seed_profile(spec_.h, vi));
    SplitWronskian den(seeds);
    den_fn_ = den.as_function();

    num_fn_.reserve(levels_.size());
    for (const SpectrumLevel& lv : levels_) {
        std::vector<HyperbolicFunction> fns;
        if (lv.origin == LevelOrigin::original) {
            fns = seeds;
            fns.push_back(eigen_profile(spec_.h, lv.index));
        } else {
            for (int j = 0; j < spec_.M(); ++j)
                if (j != lv.index) fns.push_back(seeds[j]);
        }
        num_fn_.push_back(SplitWronskian(fns).as_function());
        // The cosh powers of numerator and denominator differ by exactly
        // -kappa for every level; the evaluators below rely on it.
        const double diff = num_fn_.back().alpha - den_fn_.alpha;
        if (std::fabs(diff + lv.kappa) > 1e-12)
            throw std::logic_error("BoundStates: cosh power mismatch");
    }
    norm_cache_.assign(levels_.size(), -1.0);
}

namespace {

double checked_den(const HyperbolicFunction& den, double y, double x) {
    const double d = den.poly(y);
    if (std::fabs(d) < 1e-300) {
        std::ostringstream os;
        os << "Wronskian zero at x = " << x;
        throw WronskianZero(os.str());
    }
    return d;
}

} // namespace

double BoundStates::unnormalized(int i, double x) const {
    const SpectrumLevel& lv = levels_.at(i);
    const double y = std::tanh(x);
    const double d = checked_den(den_fn_, y, x);
    return std::pow(std::cosh(x), -lv.kappa) * num_fn_[i].poly(y) / d;
}

double BoundStates::unnormalized_deriv(int i, double x, int order) const {
    if (order < 0 || order > 2)
        throw std::invalid_argument("unnormalized_deriv: order must be in {0,1,2}");
    if (order == 0) return unnormalized(i, x);
    // psi = N/D with both factors in the hyperbolic family; quotient rule
    // with exact member derivatives.
    const HyperbolicFunction& N = num_fn_[i];
    const HyperbolicFunction N1 = N.derivative();
    const HyperbolicFunction D = den_fn_;
    const HyperbolicFunction D1 = D.derivative();
    const double y = std::tanh(x);
    checked_den(den_fn_, y, x);
    const double dval = D(x);
    const double psi = N(x) / dval;
    const double psi1 = (N1(x) - psi * D1(x)) / dval;
    if (order == 1) return psi1;
    const HyperbolicFunction N2 = N1.derivative();
    const HyperbolicFunction D2 = D1.derivative();
    return (N2(x) - 2.0 * psi1 * D1(x) - psi * D2(x)) / dval;
}

namespace {

// Composite Simpson of f over [a,b] with n intervals (n even).
template <typename F>
double simpson(const F& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace

double BoundStates::normalization(int i) const {
    if (norm_cache_.at(i) >= 0.0) return norm_cache_[i];
    auto f = [&](double x) {
        const double p = unnormalized(i, x);
        return p * p;
    };
    const double a = -30.0, b = 30.0;
    double prev = simpson(f, a, b, 4096);
    double cur = prev;
    bool converged = false;
    for (int n = 8192; n <= (1 << 21); n *= 2) {
        cur = simpson(f, a, b, n);
        if (!std::isfinite(cur)) break;
        if (std::fabs(cur - prev) <= 1e-11 * std::fabs(cur)) {
            converged = true;
            break;
        }
        prev = cur;
    }
    if (!converged || !std::isfinite(cur) || cur <= 0.0)
        throw NormalizationDiverges("normalization diverges for level " + std::to_string(i));
    norm_cache_[i] = cur;
    return cur;
}

double BoundStates::normalized(int i, double x) const {
    return unnormalized(i, x) / std::sqrt(normalization(i));
}

double BoundStates::norming_constant(int i) const {
    const SpectrumLevel& lv = levels_.at(i);
    const double half_log_norm = 0.5 * std::log(normalization(i));
    double log_c[2];
    const double stations[2] = {18.0, 22.0};
    for (int s = 0; s < 2; ++s) {
        const double x0 = stations[s];
        const double y = std::tanh(x0);
        const double num = num_fn_[i].poly(y);
        const double den = checked_den(den_fn_, y, x0);
        if (num == 0.0 || !std::isfinite(num / den))
            throw TailNotAsymptotic("tail not asymptotic at station x = " + std::to_string(x0));
        const double ax = std::fabs(x0);
        const double log_cosh = ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
        // log |psi_hat(x0)| + kappa x0
        log_c[s] = -lv.kappa * log_cosh + std::log(std::fabs(num / den)) - half_log_norm +
                   lv.kappa * x0;
    }
    const double rel = std::fabs(std::expm1(log_c[0] - log_c[1]));
    if (rel > 1e-6)
        throw TailNotAsymptotic("tail not asymptotic: station disagreement " + std::to_string(rel));
    return std::exp(0.5 * (log_c[0] + log_c[1]));
}

double bound_state(const DeformationSpec& spec, int level, double x) {
    BoundStates bs(spec);
    return bs.unnormalized(level, x);
}

ScatteringData norming_constants(const DeformationSpec& spec) {
    BoundStates bs(spec);
    ScatteringData data;
    data.h = spec.h;
    data.v = spec.v;
    data.reflectionless = true;
    data.kappas.reserve(bs.count());
    data.normings.reserve(bs.count());
    for (int i = 0; i < bs.count(); ++i) {
        data.kappas.push_back(bs.level(i).kappa);
        data.normings.push_back(bs.norming_constant(i));
    }
    return data;
}

std::complex<double> reflection_amplitude(double h, const std::vector<int>& v, double k) {
    if (h < 0.0) throw std::invalid_argument("reflection_amplitude: h must be >= 0");
    if (k == 0.0) throw ThresholdEvaluation("evaluation at threshold k = 0");
    const std::complex<double> I(0.0, 1.0);
    std::complex<double> r(0.0, 0.0);
    if (h != std::floor(h)) {
        const std::complex<double> ik = I * k;
        r = std::exp(log_gamma(1.0 + h - ik) + log_gamma(-h - ik) + log_gamma(ik) -
                     log_gamma(-h) - log_gamma(1.0 + h) - log_gamma(-ik));
    }
    // Integer h: the Gamma(-h) pole in the denominator kills r identically,
    // and the seed factors below are unimodular, so r_D stays 0.
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double a = h + v[j] + 1.0;
        const double sign = (j + 1) % 2 ? -1.0 : 1.0;
        r *= sign * (k + I * a) / (k - I * a);
    }
    return r;
}

std::complex<double> reflection_amplitude(const DeformationSpec& spec, double k) {
    spec.validate();
    return reflection_amplitude(static_cast<double>(spec.h), spec.v, k);
}

ScatteringData scattering_data(const DeformationSpec& spec) {
    ScatteringData data = norming_constants(spec);
    data.reflectionless = true;
    return data;
}

} // namespace kdv
