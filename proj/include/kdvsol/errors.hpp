#pragma once

#include <stdexcept>
#include <string>

namespace kdv {

/// Base class for all domain-level failures raised by this library.
/// Plumbing failures (bad arguments, I/O) use the std exception types.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// log_gamma evaluated at a non-positive integer, where Gamma has a pole.
/// Callers that need 1/Gamma at a pole catch this and substitute zero.
class GammaPole : public Error {
public:
    explicit GammaPole(const std::string& msg) : Error(msg) {}
};

/// Jacobi parameter combination whose leading normalization vanishes
/// identically (integer a in [-n, -1]). Never produced by the parameter
/// families this library generates.
class ParameterDegeneracy : public Error {
public:
    explicit ParameterDegeneracy(const std::string& msg) : Error(msg) {}
};

/// Seed Wronskian vanished at a requested point; the deformed potential has
/// a singularity there (inadmissible index set or a genuine node).
class WronskianZero : public Error {
public:
    explicit WronskianZero(const std::string& msg) : Error(msg) {}
};

/// The two tail stations disagreed while extracting a norming constant:
/// the wavefunction is not yet in its pure exponential regime.
class TailNotAsymptotic : public Error {
public:
    explicit TailNotAsymptotic(const std::string& msg) : Error(msg) {}
};

/// Bound-state normalization integral failed to stabilize (non-normalizable
/// state, typically from an inadmissible deformation).
class NormalizationDiverges : public Error {
public:
    explicit NormalizationDiverges(const std::string& msg) : Error(msg) {}
};

/// A tau-matrix exponent left the window where direct evaluation is
/// guaranteed stable; callers fall back to the asymptotic form.
class OutOfDirectWindow : public Error {
public:
    explicit OutOfDirectWindow(const std::string& msg) : Error(msg) {}
};

/// Phase shifts requested for a spectrum with repeated wavenumbers.
class DegenerateSpectrum : public Error {
public:
    explicit DegenerateSpectrum(const std::string& msg) : Error(msg) {}
};

/// The finite-difference eigensolver found fewer negative eigenvalues than
/// the caller requested.
class MissingBoundStates : public Error {
public:
    explicit MissingBoundStates(const std::string& msg) : Error(msg) {}
};

/// A field or potential is not negligible at the grid boundary.
class DomainTooSmall : public Error {
public:
    explicit DomainTooSmall(const std::string& msg) : Error(msg) {}
};

/// The direct KdV integrator produced a non-finite value.
class BlowUp : public Error {
public:
    explicit BlowUp(const std::string& msg) : Error(msg) {}
};

/// The plane-wave fit in the reflection extractor is ill conditioned.
class FitDegenerate : public Error {
public:
    explicit FitDegenerate(const std::string& msg) : Error(msg) {}
};

/// Reflection amplitude requested at k = 0, the scattering threshold.
class ThresholdEvaluation : public Error {
public:
    explicit ThresholdEvaluation(const std::string& msg) : Error(msg) {}
};

/// A file could not be read, written, or parsed.
class IoFailure : public Error {
public:
    explicit IoFailure(const std::string& msg) : Error(msg) {}
};

} // namespace kdv
