#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace strata {

// One acceptance criterion outcome.  The tolerances live in the
// implementations; every check prints through the caller.
struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

// identity-level checks: equilibrium closed forms, trivial residual,
// divergence inverses, smoothing axioms
std::vector<CheckResult> verify_identities(std::uint64_t seed);
// linearization checks: derivative correctness, discrete inverse
// consistency, iteration bookkeeping
std::vector<CheckResult> verify_linear(std::uint64_t seed);
// end-to-end solves: traveling wave, trivial uniqueness, wave-speed sweep
std::vector<CheckResult> verify_solves(std::uint64_t seed);

std::vector<CheckResult> verify_all(std::uint64_t seed);

}  // namespace strata
