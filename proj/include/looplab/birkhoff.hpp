#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "looplab/loop.hpp"

namespace looplab::birkhoff {

using loops::GroupTag;
using loops::InvolutionConfig;
using loops::TruncatedLoop;

// g = g_minus * g_zero * g_plus with g_-(inf) = g_+(0) = 1.
struct BirkhoffFactors {
    TruncatedLoop g_minus;
    Mat g_zero;
    TruncatedLoop g_plus;
    double residual = 0.0;

    TruncatedLoop product(int W = kWorkWindow) const;
    int dim() const { return g_minus.dim; }
};

struct StratumReport {
    bool in_top_stratum = false;
    double toeplitz_condition = 0.0;
    std::optional<std::vector<int>> detected_lambda_hint;
};

using FactorizeResult = std::variant<BirkhoffFactors, StratumReport>;

// Solves the block-Toeplitz system for g_+^{-1} (linear in the vanishing
// condition on positive degrees of g * g_+^{-1}) and assembles the factors.
FactorizeResult factorize(const TruncatedLoop& g, double condMax = kCondMax);

// Convenience for tests/oracles: expects top stratum, throws otherwise.
BirkhoffFactors factorizeTop(const TruncatedLoop& g);

// Linear Riemann-Hilbert coordinates of an accepted factorization.
struct RHLinearCoords {
    int dim = 2;
    // 1-based ladders stored from index 1; index 0 unused except D where
    // D[0] = 1 by convention.
    std::vector<Mat> g_n;      // coefficients of g_-: g_n[n] at degree -n
    std::vector<Mat> theta_n;  // from theta_- = (dg_-) g_-^{-1}, expansion in 1/z
    std::vector<Mat> x_n;      // g_- = exp(x_1 z^-1 + x_2 z^-2 + ...)
    std::vector<Cx> A, B, C, D;  // entry ladders of g_-, D[0] = 1
    std::vector<Cx> Z;           // e_theta components of x_n
    std::vector<Mat> y_n;        // g_+ = exp(y_1 z + ...)
    std::vector<Cx> W;           // e_{-theta} components of y_n

    int order() const { return static_cast<int>(g_n.size()) - 1; }
    // B'_1 = B_1, B'_n = B_n / D_{n-1}; throws DegenerateDn on |D_{n-1}| < tol.
    Cx Bprime(int n) const;
};

RHLinearCoords rhCoords(const BirkhoffFactors& f, int nMax);

// Rebuild g_- from the theta ladder (the inverse recursion n g_n = sum theta_k g_{n-k}).
TruncatedLoop gMinusFromTheta(const std::vector<Mat>& theta_n, int dim);

// Symmetric-point predicate of the fixed-point set: theta(star(g)) == g,
// with factor-level checks when a factorization is supplied.
bool isSymmetricPoint(const TruncatedLoop& g, const InvolutionConfig& cfg,
                      double tol = kTolId);
bool isSymmetricFactors(const BirkhoffFactors& f, const InvolutionConfig& cfg,
                        double tol = kTolId);

std::string factorsToJson(const BirkhoffFactors& f);
std::string stratumToJson(const StratumReport& r);
BirkhoffFactors factorsFromJson(const std::string& text);

} // namespace looplab::birkhoff
