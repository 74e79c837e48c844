#pragma once

#include <string>
#include <vector>

#include "kdvsol/deform.hpp"
#include "kdvsol/oracle.hpp"

namespace kdv {

struct VerifyOptions {
    double tol_scale = 1.0;  // multiplies every check tolerance
    std::string only;        // substring filter on check names; empty runs all
    int jobs = 1;            // checks executed concurrently
};

// Deformation specs exercised by the verification suite; undeformed
// potentials are encoded with an empty index list.
std::vector<DeformationSpec> verification_fixtures();

// Runs the verification suite (or the subset whose names contain
// options.only) and returns one report per check in a fixed order
// independent of scheduling.
std::vector<VerificationReport> run_verification(const VerifyOptions& options = {});

} // namespace kdv
