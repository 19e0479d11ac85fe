#pragma once

#include <functional>
#include <vector>

#include "looplab/errors.hpp"
#include "looplab/numerics.hpp"

namespace looplab::stats {

struct TestResult {
    double distance = 0.0;
    double p_value = 1.0;
};

// One-sample Kolmogorov-Smirnov against a CDF. Needs >= 100 samples.
TestResult ksOneSample(std::vector<double> samples,
                       const std::function<double(double)>& cdf);

TestResult ksTwoSample(std::vector<double> a, std::vector<double> b);

// Kuiper test of angles (radians) against the uniform law on [0, 2 pi).
TestResult kuiperUniform(std::vector<double> angles);

// Complex-statistic test: radial KS against a radial CDF plus angular
// uniformity (the reference laws are rotation invariant).
struct ComplexTest {
    TestResult radial;
    TestResult angular;
};
ComplexTest complexKs(const std::vector<Cx>& samples,
                      const std::function<double(double)>& radialCdf);

double kolmogorovP(double d, size_t n);
double kuiperP(double v, size_t n);

} // namespace looplab::stats
