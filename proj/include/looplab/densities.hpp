#pragma once

#include <string>
#include <vector>

#include "looplab/numerics.hpp"
#include "looplab/rng.hpp"

namespace looplab::dist {

// --- reference laws -----------------------------------------------------

enum class Tag { EQ321, EQ330, EQ331, SECH_CUBED, F_RHO };

std::string tagName(Tag t);
Tag tagFromName(const std::string& s);

// The unique rotation-invariant law (1 + |z|^2)^{-2} dm(z) / pi.
double eq321Density(Cx z);
double eq321RadialCdf(double r);  // r^2 / (1 + r^2)
Cx eq321Sample(Rng& rng);

// Joint law on (theta_1, theta_2) in sl2 x sl2 proportional to
// (1 + |theta_1|^2 + |theta_2|^2/2)^{-7}, |X|^2 = tr(X X^dagger).
struct Sl2Pair {
    Mat theta1, theta2;
};
Sl2Pair eq330Sample(Rng& rng);
double eq330Density(const Sl2Pair& p);          // normalized
double eq330Normalizer();                       // cached Z
double eq330RadialCdf(double r);                // law of the weighted 12-dim radius
double eq330Coord1Cdf(double x);                // 1-D coordinate marginal CDF

// The level-0 family on (beta_1..beta_N) in sl2^N proportional to
// (1 + sum |beta_n|^2 / n)^{-(1+3N)}.
std::vector<Mat> eq331Sample(int N, Rng& rng);
double eq331RadialCdf(int N, double r);

struct CoherenceReport {
    int N = 0;
    int samples = 0;
    double ksMarginalRadius = 0.0;  // (N-1)-marginal vs the (N-1) law
    double ksCoord = 0.0;           // B-coordinate pushforward
};
CoherenceReport coherenceCheck331(int N, int n, uint64_t seed);

// sech^3(2x) dx normalized on the real line.
double sechCubedDensity(double x);
double sechCubedCdf(double x);
double sechCubedSample(Rng& rng);

// --- Cartan / polar coordinates -----------------------------------------

// [k, x] -> k diag(e^{2x}, e^{-2x}) k^{*Theta}, the symmetric-point form of
// the zero mode; k in SU(2).
struct CartanPoint {
    Mat2 k;
    double x = 0.0;
};
Mat2 cartanMap(const CartanPoint& p);

// affine coordinate of the equivariant projection to the sphere; the two
// algebraic forms agree and are cross-checked in tests
Cx zetaCoordinate(const Mat2& g0);       // from (a0 + d0)/2 and cosh(2x)
Cx zetaCoordinateAlt(const Mat2& g0);    // the a0-multiplied form
Cx zetaOfCartan(const CartanPoint& p);   // -conj(b)/a, the exact coordinate

// polar-decomposition coordinate for SL(2,C) and the associated bound;
// the bound's derivation needs D >= A (second column no shorter than first)
Cx polarZetaSl2(const Mat2& m);
struct Ineq523 {
    double lhs = 0.0;   // (A + D)^2
    double rhs = 0.0;   // 4 + (Bbar / zeta)^2
    bool domainDgeA = false;
};
Ineq523 inequality523(const Mat2& m);

// --- Appendix C ----------------------------------------------------------

struct JacobianReport {
    double fdDet = 0.0;       // Richardson-extrapolated finite differences
    double cosh2 = 0.0;       // cosh^2(2|x|)
    double blockDet = 0.0;    // det of cosh(ad x) (+) sinh(ad x)/(ad x)
    double rootProduct = 0.0; // the (C.18)-style root-product evaluation
    double fdSpread = 0.0;    // disagreement between step sizes
};
JacobianReport jacobianCheck(const CartanPoint& p);

// Pointwise change-of-variables check of the B^- invariance of
// a_phi^rho dm: density ratio along 20 random lower-triangular moves.
struct C19Report {
    int trials = 0;
    double maxDensityError = 0.0;  // |density' * Jacobian - density| / density
};
C19Report c19InvarianceCheck(uint64_t seed, int trials = 20);

// --- section 7 evaluators -------------------------------------------------

// quadrature of int_0^1 t^{-2 i lambda} dt against 1/(1 - 2 i lambda)
struct CheckValue {
    Cx computed;
    Cx reference;
    double absError = 0.0;
};
CheckValue diagTransformS2(double lambda);

// quadrature of the hemisphere-average transform with sech^3 input,
// normalized at lambda = 0, against 1/sin(pi(1 - i lambda)/2)
CheckValue fourierCheck75(double lambda);

// data-driven sine-product of the loop-level conjecture: pairs are
// (<delta, alpha>, <lambda, alpha>), gv the dual Coxeter normalizer
Cx sineProduct74(const std::vector<std::pair<double, double>>& rootData, double gv);

// F(rho) = int_0^infty rho (rho + (x-1)^2/x)^{-3/2} dx by two quadrature routes
double fRho(double rho);
double fRhoAlt(double rho);

} // namespace looplab::dist
