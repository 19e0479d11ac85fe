#pragma once

#include <functional>

#include "looplab/errors.hpp"
#include "looplab/numerics.hpp"

namespace looplab::quad {

// Adaptive Simpson with absolute tolerance; throws QuadratureNonconvergent
// when the recursion depth is exhausted before reaching tol.
double adaptiveSimpson(const std::function<double(double)>& f, double a, double b,
                       double tol = 1e-10, int maxDepth = 48);

Cx adaptiveSimpsonCx(const std::function<Cx(double)>& f, double a, double b,
                     double tol = 1e-10, int maxDepth = 48);

// Composite Gauss-Legendre (fixed 16-point panels); the independent scheme
// used wherever a dual-route agreement is asserted.
double gaussLegendre(const std::function<double(double)>& f, double a, double b,
                     int panels);

// integral over [a, infinity) via x = a + t/(1-t)
double adaptiveSimpsonSemiInf(const std::function<double(double)>& f, double a,
                              double tol = 1e-10);

} // namespace looplab::quad
