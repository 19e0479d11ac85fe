#include "looplab/densities.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <mutex>

#include "looplab/errors.hpp"
#include "looplab/quadrature.hpp"
#include "looplab/stats.hpp"

namespace looplab::dist {

std::string tagName(Tag t) {
    switch (t) {
        case Tag::EQ321: return "EQ321";
        case Tag::EQ330: return "EQ330";
        case Tag::EQ331: return "EQ331";
        case Tag::SECH_CUBED: return "SECH_CUBED";
        case Tag::F_RHO: return "F_RHO";
    }
    return "EQ321";
}

Tag tagFromName(const std::string& s) {
    if (s == "EQ321") return Tag::EQ321;
    if (s == "EQ330") return Tag::EQ330;
    if (s == "EQ331") return Tag::EQ331;
    if (s == "SECH_CUBED") return Tag::SECH_CUBED;
    if (s == "F_RHO") return Tag::F_RHO;
    throw UsageError("unknown reference tag: " + s);
}

// --- EQ321 ---------------------------------------------------------------

double eq321Density(Cx z) {
    const double q = 1.0 + std::norm(z);
    return 1.0 / (kPi * q * q);
}

double eq321RadialCdf(double r) {
    if (r <= 0) return 0.0;
    return r * r / (1.0 + r * r);
}

Cx eq321Sample(Rng& rng) {
    double u = rng.uniform();
    while (u >= 1.0) u = rng.uniform();
    const double r = std::sqrt(u / (1.0 - u));
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    return std::polar(r, phi);
}

// --- EQ330 / EQ331 --------------------------------------------------------

namespace {

// Orthonormal real coordinates for sl2 under tr(X X^dagger):
// entries (0,1), (1,0) and the traceless diagonal scaled by 1/sqrt(2).
Mat sl2FromCoords(const double* y) {
    Mat m = Mat::Zero(2, 2);
    m(0, 1) = Cx(y[0], y[1]);
    m(1, 0) = Cx(y[2], y[3]);
    const Cx a = Cx(y[4], y[5]) / std::sqrt(2.0);
    m(0, 0) = a;
    m(1, 1) = -a;
    return m;
}

double sl2NormSq(const Mat& x) { return (x * x.adjoint()).trace().real(); }

} // namespace

Sl2Pair eq330Sample(Rng& rng) {
    double y[12];
    for (auto& v : y) v = rng.normal();
    const double chi = std::sqrt(rng.chi2_2());
    for (auto& v : y) v /= chi;
    Sl2Pair p;
    p.theta1 = sl2FromCoords(y);
    double y2[6];
    for (int i = 0; i < 6; ++i) y2[i] = std::sqrt(2.0) * y[6 + i];
    p.theta2 = sl2FromCoords(y2);
    return p;
}

double eq330Normalizer() {
    static double z = 0.0;
    static std::once_flag flag;
    std::call_once(flag, [] {
        // 12-dim spherical reduction: Vol(S^11) * int r^11 (1+r^2)^{-7} dr
        const double volS11 = 2.0 * std::pow(kPi, 6.0) / 120.0;  // 2 pi^6 / 5!
        const double radial = quad::adaptiveSimpsonSemiInf(
            [](double r) { return std::pow(r, 11.0) * std::pow(1.0 + r * r, -7.0); }, 0.0,
            1e-12);
        z = volS11 * radial;
    });
    return z;
}

double eq330Density(const Sl2Pair& p) {
    const double q = 1.0 + sl2NormSq(p.theta1) + 0.5 * sl2NormSq(p.theta2);
    return std::pow(q, -7.0) / eq330Normalizer();
}

double eq330RadialCdf(double r) {
    if (r <= 0) return 0.0;
    const double u = r * r / (1.0 + r * r);
    return std::pow(u, 6.0);
}

double eq330Coord1Cdf(double x) { return 0.5 + 0.5 * x / std::sqrt(1.0 + x * x); }

std::vector<Mat> eq331Sample(int N, Rng& rng) {
    if (N < 1) throw UnnormalizableTag("eq331Sample: N >= 1 required");
    std::vector<double> y(static_cast<size_t>(6 * N));
    for (auto& v : y) v = rng.normal();
    const double chi = std::sqrt(rng.chi2_2());
    for (auto& v : y) v /= chi;
    std::vector<Mat> out;
    out.reserve(static_cast<size_t>(N));
    for (int n = 1; n <= N; ++n) {
        double block[6];
        for (int i = 0; i < 6; ++i)
            block[i] = std::sqrt(static_cast<double>(n)) * y[static_cast<size_t>(6 * (n - 1) + i)];
        out.push_back(sl2FromCoords(block));
    }
    return out;
}

double eq331RadialCdf(int N, double r) {
    if (r <= 0) return 0.0;
    const double u = r * r / (1.0 + r * r);
    return std::pow(u, 3.0 * N);
}

CoherenceReport coherenceCheck331(int N, int n, uint64_t seed) {
    if (N < 2) throw UsageError("coherenceCheck331: N >= 2");
    Rng rng(seed, 0x333331ULL);
    std::vector<double> radii;
    std::vector<double> coord;
    radii.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto betas = eq331Sample(N, rng);
        double q = 0.0;
        for (int k = 1; k < N; ++k)
            q += sl2NormSq(betas[static_cast<size_t>(k - 1)]) / k;
        radii.push_back(std::sqrt(q));
        coord.push_back(betas[0](0, 1).real());
    }
    CoherenceReport rep;
    rep.N = N;
    rep.samples = n;
    rep.ksMarginalRadius =
        stats::ksOneSample(radii, [&](double r) { return eq331RadialCdf(N - 1, r); }).distance;
    // every 1-D orthonormal coordinate of the family has the (1+y^2)^{-3/2} law
    rep.ksCoord = stats::ksOneSample(coord, eq330Coord1Cdf).distance;
    return rep;
}

// --- sech^3 ----------------------------------------------------------------

double sechCubedDensity(double x) {
    const double s = 1.0 / std::cosh(2.0 * x);
    return s * s * s / (kPi / 4.0);
}

double sechCubedCdf(double x) {
    const double u = 2.0 * x;
    const double v = 0.5 * (std::tanh(u) / std::cosh(u) + std::atan(std::sinh(u)));
    return (v + kPi / 4.0) / (kPi / 2.0);
}

double sechCubedSample(Rng& rng) {
    const double u = rng.uniform();
    double lo = -20.0, hi = 20.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (sechCubedCdf(mid) < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// --- Cartan / polar --------------------------------------------------------

Mat2 cartanMap(const CartanPoint& p) {
    if (std::abs(p.x) > 10.0) throw UsageError("cartanMap: |x| < 10 required");
    Mat2 a = Mat2::Zero();
    a(0, 0) = std::exp(2.0 * p.x);
    a(1, 1) = std::exp(-2.0 * p.x);
    Mat2 d = Mat2::Identity();
    d(1, 1) = -1.0;
    const Mat2 kst = d * p.k.adjoint() * d;  // k^{*Theta}
    return p.k * a * kst;
}

Cx zetaCoordinate(const Mat2& g0) {
    const double a0 = g0(0, 0).real();
    const double d0 = g0(1, 1).real();
    const Cx b0 = g0(0, 1);
    const double ch = std::sqrt(1.0 + 0.25 * (a0 - d0) * (a0 - d0));
    const double den = 0.5 * (a0 + d0) + ch;
    if (std::abs(den) < kTolDiv) throw DegenerateDenominator("zetaCoordinate: vanishing denominator");
    return -std::conj(b0) / den;
}

Cx zetaCoordinateAlt(const Mat2& g0) {
    const double a0 = g0(0, 0).real();
    const Cx b0 = g0(0, 1);
    if (std::abs(a0) < kTolDiv) throw DegenerateDenominator("zetaCoordinateAlt: a_0 ~ 0");
    const double q = a0 * a0 + std::norm(b0) - 1.0;
    const double root = 0.5 * std::sqrt(4.0 * a0 * a0 + q * q);
    const double den = 0.5 * (a0 * a0 + 1.0 - std::norm(b0)) + (a0 >= 0 ? root : -root);
    if (std::abs(den) < kTolDiv) throw DegenerateDenominator("zetaCoordinateAlt: vanishing denominator");
    return -std::conj(b0) * a0 / den;
}

Cx zetaOfCartan(const CartanPoint& p) {
    if (std::abs(p.k(0, 0)) < kTolDiv)
        throw DegenerateDenominator("zetaOfCartan: chart point at infinity");
    return -std::conj(p.k(0, 1)) / p.k(0, 0);
}

Cx polarZetaSl2(const Mat2& m) {
    const double A = std::norm(m(0, 0)) + std::norm(m(1, 0));
    const double D = std::norm(m(0, 1)) + std::norm(m(1, 1));
    const Cx B = std::conj(m(0, 0)) * m(0, 1) + std::conj(m(1, 0)) * m(1, 1);
    const double S = std::sqrt(std::max((A + D) * (A + D) - 4.0, 0.0));
    const double den = D - A + S;
    if (std::abs(den) < kTolDiv) throw DegenerateDenominator("polarZetaSl2: vanishing denominator");
    return std::conj(B) / den;
}

Ineq523 inequality523(const Mat2& m) {
    const double A = std::norm(m(0, 0)) + std::norm(m(1, 0));
    const double D = std::norm(m(0, 1)) + std::norm(m(1, 1));
    const double S = std::sqrt(std::max((A + D) * (A + D) - 4.0, 0.0));
    Ineq523 out;
    out.lhs = (A + D) * (A + D);
    out.rhs = 4.0 + (D - A + S) * (D - A + S);  // (Bbar/zeta)^2 with zeta of (5.20)
    out.domainDgeA = (D >= A);
    return out;
}

// --- Appendix C -------------------------------------------------------------

namespace {

// Orthonormal bases (under Re tr(X Y^dagger)) of i p, i k inside i g_R for
// the S^2 configuration: i p Hermitian off-diagonal, i k Hermitian diagonal.
std::vector<Mat2> ipBasis() {
    Mat2 p1, p2;
    p1 << 0, 1, 1, 0;
    p2 << 0, Cx(0, 1), Cx(0, -1), 0;
    return {p1 / std::sqrt(2.0), p2 / std::sqrt(2.0)};
}

Mat2 ikBasis() {
    Mat2 h;
    h << 1, 0, 0, -1;
    return h / std::sqrt(2.0);
}

Eigen::Vector3d chartCoords(const Mat2& hmat) {
    // coordinates of (1/2) log(h h^{*Theta}) in the ONB of i g_R
    Mat2 d = Mat2::Identity();
    d(1, 1) = -1.0;
    const Mat2 hst = d * hmat.adjoint() * d;
    const Mat2 u = (0.5 * Mat2(Mat2(hmat * hst).log())).eval();
    const auto ip = ipBasis();
    const Mat2 ik = ikBasis();
    Eigen::Vector3d v;
    v(0) = (u * ip[0].adjoint()).trace().real();
    v(1) = (u * ip[1].adjoint()).trace().real();
    v(2) = (u * ik.adjoint()).trace().real();
    return v;
}

Eigen::Matrix3d fdJacobian(const CartanPoint& p, double h) {
    const auto ip = ipBasis();
    const Mat2 ik = ikBasis();
    Mat2 xhat = Mat2::Zero();
    xhat(0, 0) = p.x;
    xhat(1, 1) = -p.x;
    auto F = [&](double s1, double s2, double t) {
        const Mat2 zeta = s1 * ip[0] + s2 * ip[1];
        const Mat2 arg = (Mat2(zeta)).exp();
        const Mat2 tail = (Mat2(xhat + t * ik)).exp();
        const Mat2 hm = (Mat2(-xhat)).exp() * arg * tail;
        return chartCoords(hm);
    };
    Eigen::Matrix3d J;
    J.col(0) = (F(h, 0, 0) - F(-h, 0, 0)) / (2 * h);
    J.col(1) = (F(0, h, 0) - F(0, -h, 0)) / (2 * h);
    J.col(2) = (F(0, 0, h) - F(0, 0, -h)) / (2 * h);
    return J;
}

} // namespace

JacobianReport jacobianCheck(const CartanPoint& p) {
    JacobianReport rep;
    const double h = 1e-4;
    const Eigen::Matrix3d J1 = fdJacobian(p, h);
    const Eigen::Matrix3d J2 = fdJacobian(p, 0.5 * h);
    const Eigen::Matrix3d J = (4.0 * J2 - J1) / 3.0;
    rep.fdSpread = (J2 - J1).cwiseAbs().maxCoeff();
    if (rep.fdSpread > 1e-4)
        throw StepSizeUnstable("jacobianCheck: finite differences disagree across steps");
    rep.fdDet = J.determinant();
    rep.cosh2 = std::cosh(2.0 * std::abs(p.x)) * std::cosh(2.0 * std::abs(p.x));

    // block form: cosh(ad x) on i p, sinh(ad x)/(ad x) on i k (abelian -> 1)
    Mat2 xhat = Mat2::Zero();
    xhat(0, 0) = p.x;
    xhat(1, 1) = -p.x;
    const auto ip = ipBasis();
    Eigen::Matrix2d coshBlock;
    const Mat2 ex = (Mat2(xhat)).exp();
    const Mat2 exi = (Mat2(-xhat)).exp();
    for (int j = 0; j < 2; ++j) {
        const Mat2 image = 0.5 * (ex * ip[static_cast<size_t>(j)] * exi + exi * ip[static_cast<size_t>(j)] * ex);
        for (int i = 0; i < 2; ++i)
            coshBlock(i, j) = (image * ip[static_cast<size_t>(i)].adjoint()).trace().real();
    }
    rep.blockDet = coshBlock.determinant() * 1.0;
    // root-product form: single positive p-root with alpha(x) = 2x, no k-roots
    rep.rootProduct = std::cosh(2.0 * p.x) * std::cosh(2.0 * p.x);
    return rep;
}

C19Report c19InvarianceCheck(uint64_t seed, int trials) {
    Rng rng(seed, 0xC19ULL);
    Mat2 dconj = Mat2::Identity();
    dconj(1, 1) = -1.0;
    auto decompose = [&](const Mat2& g0, double& delta, Cx& lambda) {
        delta = g0(0, 0).real();
        if (std::abs(delta) < 1e-10) throw Degenerate("c19: a_0 ~ 0");
        lambda = g0(1, 0) / delta;
    };
    auto build = [&](double delta, Cx lambda) {
        Mat2 l = Mat2::Identity();
        l(1, 0) = lambda;
        Mat2 a = Mat2::Zero();
        a(0, 0) = delta;
        a(1, 1) = 1.0 / delta;
        const Mat2 lst = dconj * l.adjoint() * dconj;
        return Mat2(l * a * lst);
    };
    C19Report rep;
    rep.trials = trials;
    for (int t = 0; t < trials; ++t) {
        const double delta = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.4, 1.8);
        const Cx lambda = 0.7 * rng.normalCx();
        Mat2 b = Mat2::Zero();
        const Cx bdiag = std::polar(rng.uniform(0.6, 1.5), rng.uniform(0.0, 2 * kPi));
        b(0, 0) = bdiag;
        b(1, 1) = 1.0 / bdiag;
        b(1, 0) = 0.7 * rng.normalCx();
        auto transported = [&](double d0, Cx l0) {
            const Mat2 moved = b * build(d0, l0) * (dconj * b.adjoint() * dconj);
            double dOut;
            Cx lOut;
            decompose(moved, dOut, lOut);
            return std::make_pair(dOut, lOut);
        };
        const auto [d1, l1] = transported(delta, lambda);
        // real 3x3 Jacobian of the transport by finite differences
        const double h = 1e-6;
        Eigen::Matrix3d J;
        auto fill = [&](int col, double dd, Cx dl) {
            const auto [dp, lp] = transported(delta + dd, lambda + dl);
            const auto [dm, lm] = transported(delta - dd, lambda - dl);
            J(0, col) = (dp - dm) / (2 * h);
            J(1, col) = (lp.real() - lm.real()) / (2 * h);
            J(2, col) = (lp.imag() - lm.imag()) / (2 * h);
        };
        fill(0, h, Cx(0, 0));
        fill(1, 0.0, Cx(h, 0));
        fill(2, 0.0, Cx(0, h));
        const double jac = std::abs(J.determinant());
        // invariance of a_phi^rho dm: |delta'| |Jacobian| = |delta|
        const double err = std::abs(std::abs(d1) * jac - std::abs(delta)) / std::abs(delta);
        rep.maxDensityError = std::max(rep.maxDensityError, err);
    }
    return rep;
}

// --- section 7 ---------------------------------------------------------------

CheckValue diagTransformS2(double lambda) {
    // t = e^{-u} turns int_0^1 t^{-2 i lambda} dt into int_0^inf e^{-u(1 - 2 i lambda)} du
    CheckValue out;
    out.computed = quad::adaptiveSimpsonCx(
        [&](double u) { return std::exp(-u * Cx(1.0, -2.0 * lambda)); }, 0.0, 60.0, 1e-12);
    out.reference = 1.0 / Cx(1.0, -2.0 * lambda);
    out.absError = std::abs(out.computed - out.reference);
    return out;
}

namespace {
Cx hemisphereTransform(double lambda) {
    // (7.7) with delta = sech^3: (1 - i lambda)^{-1} int e^{-2 i x lambda} e^{2x} sech^2(2x) dx
    const Cx integral = quad::adaptiveSimpsonCx(
        [&](double x) {
            const double s = 1.0 / std::cosh(2.0 * x);
            return std::exp(Cx(0.0, -2.0 * x * lambda)) * std::exp(2.0 * x) * s * s;
        },
        -30.0, 30.0, 1e-12);
    return integral / Cx(1.0, -lambda);
}
} // namespace

CheckValue fourierCheck75(double lambda) {
    CheckValue out;
    // the overall constant is lambda-independent; normalize at lambda = 0
    out.computed = hemisphereTransform(lambda) / hemisphereTransform(0.0);
    out.reference = 1.0 / std::sin(kPi * Cx(1.0, -lambda) / 2.0);
    out.absError = std::abs(out.computed - out.reference);
    return out;
}

Cx sineProduct74(const std::vector<std::pair<double, double>>& rootData, double gv) {
    Cx prod(1.0, 0.0);
    for (const auto& [dAlpha, lAlpha] : rootData) {
        const Cx den = std::sin((kPi / gv) * Cx(dAlpha, -lAlpha));
        if (std::abs(den) < kTolDiv) throw DegenerateDenominator("sineProduct74: sine zero");
        prod *= std::sin((kPi / gv) * dAlpha) / den;
    }
    return prod;
}

// --- F(rho) -------------------------------------------------------------------

double fRho(double rho) {
    if (!(rho > 0)) throw UsageError("fRho: rho > 0");
    auto f = [&](double x) { return rho * std::pow(rho + (x - 1.0) * (x - 1.0) / x, -1.5); };
    if (rho < 1e-4) {
        // concentration scale sqrt(rho) near x = 1; substitute x = 1 + sqrt(rho) v,
        // which turns the integrand into (1 + v^2/x)^{-3/2} dv over v > -1/sqrt(rho)
        const double s = std::sqrt(rho);
        auto g = [&](double v) {
            const double x = 1.0 + s * v;
            if (x <= 0) return 0.0;
            return std::pow(1.0 + v * v / x, -1.5);
        };
        const double cut = 1.0 / s;
        double acc = quad::adaptiveSimpson(g, -60.0, 60.0, 1e-12);
        if (cut > 60.0)
            acc += quad::adaptiveSimpson(g, -cut + 1e-12, -60.0, 1e-10);
        acc += quad::adaptiveSimpsonSemiInf(g, 60.0, 1e-12);
        return acc;
    }
    double v = quad::adaptiveSimpson(f, 0.0, 1.0, 1e-11) +
               quad::adaptiveSimpson(f, 1.0, 4.0, 1e-11) +
               quad::adaptiveSimpsonSemiInf(f, 4.0, 1e-11);
    return v;
}

double fRhoAlt(double rho) {
    // substitution s = (x-1)^2/x, both branches: F = rho int (rho+s)^{-3/2} (s+2)/sqrt(s(s+4)) ds,
    // then s = u^2 to remove the endpoint singularity; composite Gauss-Legendre panels
    auto g = [&](double u) {
        const double s = u * u;
        return 2.0 * rho * std::pow(rho + s, -1.5) * (s + 2.0) / std::sqrt(s + 4.0);
    };
    double acc = quad::gaussLegendre(g, 0.0, 4.0, 256);
    // tail in s beyond 16: integrand ~ rho (rho+s)^{-3/2} (1 + O(1/s))
    auto tailF = [&](double s) {
        return rho * std::pow(rho + s, -1.5) * (s + 2.0) / std::sqrt(s * (s + 4.0));
    };
    double s0 = 16.0, chunk = 16.0;
    for (int i = 0; i < 4000; ++i) {
        const double piece = quad::gaussLegendre(tailF, s0, s0 + chunk, 4);
        acc += piece;
        s0 += chunk;
        chunk *= 1.5;
        if (piece < 1e-13 * std::max(1.0, acc)) break;
    }
    return acc;
}

} // namespace looplab::dist
