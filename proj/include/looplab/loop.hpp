#pragma once

#include <string>
#include <vector>

#include "looplab/errors.hpp"
#include "looplab/numerics.hpp"

namespace looplab::loops {

enum class GroupTag { GL, SL2, SL3 };

std::string tagName(GroupTag t);
GroupTag tagFromName(const std::string& s);

// Matrix-valued Laurent polynomial on the circle, the working stand-in for
// loops with distributional tails. Coefficients are stored densely for the
// degree window [lo, hi] with lo <= 0 <= hi.
struct TruncatedLoop {
    int dim = 2;
    int lo = 0;
    int hi = 0;
    std::vector<Mat> coeffs;  // coeffs[k - lo] is the degree-k coefficient
    GroupTag tag = GroupTag::GL;
    bool truncated = false;   // a window crop dropped content above kTolTrunc

    TruncatedLoop() = default;
    TruncatedLoop(int d, int lo_, int hi_, GroupTag t);

    static TruncatedLoop identity(int d, GroupTag t = GroupTag::GL);
    static TruncatedLoop constant(const Mat& m, GroupTag t = GroupTag::GL);

    Mat coeff(int k) const;          // zero outside the window
    Mat& ref(int k);                 // k must lie in the window
    Mat evaluate(Cx z) const;
    double maxCoeffAbs() const;
    bool isIdentity(double tol = kTolId) const;
};

// Pointwise involutions. `star` is the fixed coefficient rule
// (degree reversal + conjugate transpose); theta conjugates by a constant.
struct InvolutionConfig {
    Mat theta_conjugator;   // e.g. diag(1,-1) for the 2-sphere
    double epsilon = +1.0;  // sign in Theta(e_theta) = -eps * e_theta

    static InvolutionConfig s2();                 // SL2, diag(1,-1), eps = +1
    static InvolutionConfig sl2GroupCase();       // theta = id, eps = -1
    static InvolutionConfig sl3(double epsilon);  // diag conjugator realizing eps
};

// Exact product; the window grows to [f.lo+g.lo, f.hi+g.hi].
TruncatedLoop mulNatural(const TruncatedLoop& f, const TruncatedLoop& g);

// Crop to [lo, hi]; sets `truncated` when dropped content exceeds kTolTrunc.
TruncatedLoop cropWindow(const TruncatedLoop& f, int lo, int hi);

// Product cropped to the working window [-W, W].
TruncatedLoop mul(const TruncatedLoop& f, const TruncatedLoop& g, int W = kWorkWindow);

// Grid evaluation / DFT refit inverse. Throws SingularOnCircle.
TruncatedLoop inverse(const TruncatedLoop& g);

// Exact series inverse for loops supported on one side of 0 with
// identity constant term (the Birkhoff factors g_-, g_+).
TruncatedLoop triangularInverse(const TruncatedLoop& g);

TruncatedLoop star(const TruncatedLoop& g);
TruncatedLoop theta(const TruncatedLoop& g, const InvolutionConfig& cfg);
TruncatedLoop starTheta(const TruncatedLoop& g, const InvolutionConfig& cfg);

// |det(g(z)) - 1| over the standard grid; used to validate SL tags.
double detUnitError(const TruncatedLoop& g);

// Uniform circle grid of m points (m defaults to the refit grid size).
int refitGridSize(const TruncatedLoop& g);
std::vector<Mat> gridEvaluate(const TruncatedLoop& g, int m);

// DFT refit of grid samples to the window [-W, W]; `outFraction`, when
// non-null, receives the out-of-window share of total spectral power.
TruncatedLoop gridRefit(const std::vector<Mat>& samples, int W, GroupTag tag,
                        double* outFraction = nullptr);

// JSON wire format (exact field names; degrees ascending).
std::string toJson(const TruncatedLoop& g);
TruncatedLoop loopFromJson(const std::string& text);

std::string matToJson(const Mat& m);
Mat matFromJsonText(const std::string& text);

} // namespace looplab::loops
