#pragma once

#include <Eigen/Dense>
#include <complex>

namespace looplab {

using Cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Mat2 = Eigen::Matrix2cd;
using Vec = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

// Tolerances used across the library. Identity/coefficient checks use
// kTolId unless an operation states a tighter bound.
inline constexpr double kTolId = 1e-9;
inline constexpr double kTolDet = 1e-9;       // singularity threshold on the circle
inline constexpr double kTolDetUnit = 1e-6;   // |det - 1| for SL-tagged loops
inline constexpr double kTolTrunc = 1e-12;    // dropped-coefficient visibility
inline constexpr double kTolDiv = 1e-12;      // excluded-locus guard
inline constexpr double kCondMax = 1e12;      // Toeplitz condition cutoff
inline constexpr int kWorkWindow = 16;        // default degree window [-N, N]

inline double maxAbs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

inline int nextPow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace looplab
