#pragma once

#include <string>
#include <vector>

#include "looplab/actions.hpp"
#include "looplab/rng.hpp"

namespace looplab::suites {

using actions::MoebiusParam;
using actions::RootEmbedding;
using birkhoff::BirkhoffFactors;
using loops::GroupTag;
using loops::TruncatedLoop;

struct SuiteResult {
    std::string suite;
    int trials = 0;
    double max_error = 0.0;
    int failures = 0;
    double tolerance = 0.0;
    std::string note;

    bool passed() const { return failures == 0 && max_error <= tolerance; }
    std::string toJson() const;
};

// Random top-stratum factors with exactly finite support: g_- is a product
// of exp(X_k z^-k) with nilpotent X_k, so windows hold the loop exactly.
BirkhoffFactors randomTopFactors(int dim, int depth, double scale, Rng& rng);
// Symmetric variant: g_+ = g_-^{*Theta}, g_0 fixed by (.)^{*Theta}.
BirkhoffFactors randomSymmetricFactors(const loops::InvolutionConfig& cfg, int dim,
                                       int depth, double scale, Rng& rng);
MoebiusParam randomMoebius(Rng& rng, double spread = 1.0);

SuiteResult suiteLemma38(int trials, uint64_t seed, double tol);      // SL2 left/right/sigma + (3.28)
SuiteResult suiteLemma52(int trials, uint64_t seed, double tol);      // SL3 left/right
SuiteResult suiteCor313(int trials, uint64_t seed, double tol);       // B'_n cocycle n = 1..6
SuiteResult suiteLemma44(int trials, uint64_t seed, double tol);      // S^2 symmetric + (4.10)-(4.13)
SuiteResult suiteLemma61(int trials, uint64_t seed, double tol);      // general eps, SL2 + SL3
SuiteResult suiteRecursion617(int trials, uint64_t seed, double tol); // adjoint recursion
SuiteResult suiteAppB(uint64_t seed, double tol);                     // sigma_Delta for SU(3)
SuiteResult suiteAppC(int trials, uint64_t seed, double tol);         // Jacobian + C.19
SuiteResult suiteSpecial(uint64_t seed, double tol);                  // the scalar checks bundled

SuiteResult runSuite(const std::string& name, int trials, uint64_t seed, double tol);

// `special` CLI checks; each returns a JSON record
// {check, inputs, computed, reference, abs_error} and a pass flag.
struct SpecialResult {
    std::string json;
    bool pass = false;
};
SpecialResult specialCheck(const std::string& name, uint64_t seed);

// Birkhoff roundtrip batch used by the acceptance gate.
double roundtripMaxError(int dim, int window, int depth, int loops, uint64_t seed);

} // namespace looplab::suites
