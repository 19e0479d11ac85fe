#include "looplab/path.hpp"

#include <cmath>

namespace looplab::paths {

Mat2 projectSU2(const Mat2& m) {
    // polar factor via the quaternion form: nearest unitary is the
    // normalized projection onto span{1, i sigma} for 2x2 near-SU(2) input
    Eigen::JacobiSVD<Mat2> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat2 u = svd.matrixU() * svd.matrixV().adjoint();
    Cx det = u.determinant();
    // remove residual phase so det = 1 exactly up to rounding
    u *= std::pow(det, -0.5);
    if ((u - m).norm() > (u + m).norm()) u = -u;
    return u;
}

double su2Angle(const Mat2& u) {
    double c = 0.5 * u.trace().real();
    c = std::clamp(c, -1.0, 1.0);
    return std::acos(c);
}

Mat2 su2Log(const Mat2& u) {
    const double ang = su2Angle(u);
    if (ang >= kPi - 1e-12)
        throw StepTooLarge("su2Log: angle at or beyond injectivity radius");
    Mat2 skew = 0.5 * (u - u.adjoint());
    skew -= (0.5 * skew.trace()) * Mat2::Identity();
    const double s = std::sin(ang);
    if (s < 1e-8) {
        // u = cos(ang) + sin(ang) K with K^2 = -1; for tiny angles skew ~ ang*K
        return skew * (1.0 + ang * ang / 6.0);
    }
    return skew * (ang / s);
}

Mat2 su2Exp(const Mat2& x) {
    // x = ang * K, K^2 = -1, exp = cos(ang) + sin(ang) K
    const double ang = std::sqrt(std::max(0.0, (-(x * x).trace()).real() / 2.0));
    if (ang < 1e-12) return Mat2::Identity() + x + 0.5 * x * x;
    return std::cos(ang) * Mat2::Identity() + (std::sin(ang) / ang) * x;
}

Mat2 su2FromAngleAxis(double angle, double nx, double ny, double nz) {
    Mat2 k;
    k << Cx(0, nz), Cx(ny, nx), Cx(-ny, nx), Cx(0, -nz);
    return std::cos(angle) * Mat2::Identity() + std::sin(angle) * k;
}

Mat2 haarSU2(Rng& rng) {
    // uniform unit quaternion
    double q[4];
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (auto& qi : q) {
            qi = rng.normal();
            n2 += qi * qi;
        }
    } while (n2 < 1e-30);
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& qi : q) qi *= inv;
    Mat2 u;
    u << Cx(q[0], q[3]), Cx(q[2], q[1]), Cx(-q[2], q[1]), Cx(q[0], -q[3]);
    return u;
}

bool LoopPath::closed() const {
    if (points.empty()) return false;
    return (points.front() - Mat2::Identity()).norm() < 1e-12 &&
           (points.back() - Mat2::Identity()).norm() < 1e-12;
}

double LoopPath::unitarityError() const {
    double w = 0.0;
    for (const auto& p : points) {
        w = std::max(w, (p.adjoint() * p - Mat2::Identity()).norm());
        w = std::max(w, std::abs(p.determinant() - Cx(1, 0)));
    }
    return w;
}

double energy(const LoopPath& path) {
    if (path.points.size() < 2) throw UsageError("energy: empty path");
    const double dt = 1.0 / path.M;
    double e = 0.0;
    for (int i = 0; i < path.M; ++i) {
        const Mat2 step = path.points[static_cast<size_t>(i)].adjoint() *
                          path.points[static_cast<size_t>(i + 1)];
        const Mat2 x = su2Log(projectSU2(step));
        e += (-(x * x).trace()).real() / dt;
    }
    return 0.5 * e;
}

LoopPath leftMultiply(const LoopPath& path, const std::function<Mat2(double)>& loop) {
    LoopPath out = path;
    for (int k = 0; k <= path.M; ++k) {
        const double t = static_cast<double>(k) / path.M;
        out.points[static_cast<size_t>(k)] =
            projectSU2(loop(t) * path.points[static_cast<size_t>(k)]);
    }
    return out;
}

LoopPath conjugateBy(const LoopPath& path, const std::function<Mat2(double)>& loop) {
    LoopPath out = path;
    for (int k = 0; k <= path.M; ++k) {
        const double t = static_cast<double>(k) / path.M;
        const Mat2 m = loop(t);
        out.points[static_cast<size_t>(k)] =
            projectSU2(m * path.points[static_cast<size_t>(k)] * m.adjoint());
    }
    return out;
}

Mat2 diagCharacterLoop(double t) {
    Mat2 m = Mat2::Zero();
    m(0, 0) = std::polar(1.0, 2.0 * kPi * t);
    m(1, 1) = std::polar(1.0, -2.0 * kPi * t);
    return m;
}

Mat2 sigmaHalfLoop(double t) {
    Mat2 m = Mat2::Zero();
    m(0, 0) = std::polar(1.0, kPi * t);
    m(1, 1) = std::polar(1.0, -kPi * t);
    return m;
}

} // namespace looplab::paths
