#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "looplab/errors.hpp"
#include "looplab/numerics.hpp"
#include "looplab/rng.hpp"

namespace looplab::paths {

// --- SU(2) primitives -------------------------------------------------

// Polar projection onto SU(2), renormalizing numerical drift.
Mat2 projectSU2(const Mat2& m);

// Class angle in [0, pi]: eigenvalues are e^{+-i angle}.
double su2Angle(const Mat2& u);

// Principal logarithm into su(2). Throws StepTooLarge at angle >= pi.
Mat2 su2Log(const Mat2& u);

Mat2 su2Exp(const Mat2& x);

// Rotation by `angle` around a uniform random axis.
Mat2 su2FromAngleAxis(double angle, double nx, double ny, double nz);
Mat2 haarSU2(Rng& rng);

// --- Closed discretized paths -----------------------------------------

// Discretized closed path in SU(2) at inverse temperature beta.
// points has M+1 entries with points[0] = points[M] = identity.
struct LoopPath {
    double beta = 1.0;
    int M = 0;
    std::vector<Mat2> points;
    uint64_t seed = 0;
    double renormDrift = 0.0;  // max polar-projection correction applied

    bool closed() const;
    double unitarityError() const;
};

// Kinetic energy (1/2) sum |log(g_i^{-1} g_{i+1})|^2 / dt under the
// Lie-algebra norm <X,Y> = -trace(XY).
double energy(const LoopPath& path);

// Pointwise transforms used by the invariance probes.
LoopPath leftMultiply(const LoopPath& path, const std::function<Mat2(double)>& loop);
LoopPath conjugateBy(const LoopPath& path, const std::function<Mat2(double)>& loop);

// t -> diag(e^{2 pi i t}, e^{-2 pi i t}); a degree-one polynomial loop.
Mat2 diagCharacterLoop(double t);
// t -> diag(e^{i pi t}, e^{-i pi t}); the multivalued loop whose conjugation
// action is the outer automorphism sigma.
Mat2 sigmaHalfLoop(double t);

} // namespace looplab::paths
