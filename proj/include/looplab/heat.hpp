#pragma once

#include <vector>

#include "looplab/errors.hpp"
#include "looplab/numerics.hpp"
#include "looplab/rng.hpp"

namespace looplab::heat {

// Heat kernel on SU(2) as a density against Haar probability measure,
// p_t(theta) = sum_{n>=1} n e^{-(n^2-1)t/2} sin(n theta)/sin(theta),
// theta the class angle. Metric normalization <X,Y> = -tr(XY).
class HeatKernelTable {
  public:
    HeatKernelTable(double t, int nMax);

    double t() const { return t_; }
    int nMax() const { return nMax_; }

    double value(double theta) const;
    double valueAtIdentity() const;

    // class-angle density against d(theta): p_t(theta) (2/pi) sin^2(theta)
    double radialDensity(double theta) const;

    // inverse-CDF sampling of the class angle (table built lazily)
    double sampleAngle(Rng& rng) const;

    // build the sampling table now (before any concurrent use)
    void prepareSampling() const;

    // integral of the radial density over [0, pi]; equals 1 by construction
    double haarIntegral() const;

  private:
    void buildCdf() const;

    double t_ = 1.0;
    int nMax_ = 1;
    mutable std::vector<double> cdf_;  // on a uniform theta grid
    mutable std::vector<double> grid_;
};

// picks the smallest series length with tail bound below 1e-14; throws
// TruncationInsufficient if the requested cap cannot reach 1e-10
int autoNmax(double t, int cap = 4096);

HeatKernelTable makeHeatKernel(double t, int nMax = -1);

// Haar class-angle density (2/pi) sin^2 theta.
double haarAngleDensity(double theta);

} // namespace looplab::heat
