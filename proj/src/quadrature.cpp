#include "looplab/quadrature.hpp"

#include <cmath>

namespace looplab::quad {

namespace {

template <typename T>
T simpsonRec(const std::function<T(double)>& f, double a, double b, T fa, T fb, T fm,
             T whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const T flm = f(lm), frm = f(rm);
    const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const T delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0) throw QuadratureNonconvergent("adaptive Simpson: depth exhausted");
    return simpsonRec<T>(f, a, m, fa, fm, flm, left, 0.5 * tol, depth - 1) +
           simpsonRec<T>(f, m, b, fm, fb, frm, right, 0.5 * tol, depth - 1);
}

template <typename T>
T simpsonDriver(const std::function<T(double)>& f, double a, double b, double tol,
                int maxDepth) {
    if (a == b) return T(0);
    const T fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const T whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpsonRec<T>(f, a, b, fa, fb, fm, whole, tol, maxDepth);
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1]
constexpr double kGLx[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                            0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                            0.9445750230732326, 0.9894009349916499};
constexpr double kGLw[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                            0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                            0.0622535239386479, 0.0271524594117541};

} // namespace

double adaptiveSimpson(const std::function<double(double)>& f, double a, double b,
                       double tol, int maxDepth) {
    return simpsonDriver<double>(f, a, b, tol, maxDepth);
}

Cx adaptiveSimpsonCx(const std::function<Cx(double)>& f, double a, double b, double tol,
                     int maxDepth) {
    return simpsonDriver<Cx>(f, a, b, tol, maxDepth);
}

double gaussLegendre(const std::function<double(double)>& f, double a, double b,
                     int panels) {
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h;
        const double r = 0.5 * h;
        for (int k = 0; k < 8; ++k)
            sum += r * kGLw[k] * (f(c + r * kGLx[k]) + f(c - r * kGLx[k]));
    }
    return sum;
}

double adaptiveSimpsonSemiInf(const std::function<double(double)>& f, double a,
                              double tol) {
    auto g = [&](double t) {
        const double one = 1.0 - t;
        const double x = a + t / one;
        return f(x) / (one * one);
    };
    // keep away from t = 1 where the substituted integrand vanishes for
    // integrable tails; split to help the recursion
    return adaptiveSimpson(g, 0.0, 0.5, 0.5 * tol) +
           adaptiveSimpson(g, 0.5, 1.0 - 1e-12, 0.5 * tol);
}

} // namespace looplab::quad
