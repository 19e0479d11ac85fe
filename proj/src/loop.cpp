#include "looplab/loop.hpp"

#include <nlohmann/json.hpp>

using nlohmann::json;

namespace looplab::loops {

std::string tagName(GroupTag t) {
    switch (t) {
        case GroupTag::GL: return "GL";
        case GroupTag::SL2: return "SL2";
        case GroupTag::SL3: return "SL3";
    }
    return "GL";
}

GroupTag tagFromName(const std::string& s) {
    if (s == "GL") return GroupTag::GL;
    if (s == "SL2") return GroupTag::SL2;
    if (s == "SL3") return GroupTag::SL3;
    throw UsageError("unknown group_tag: " + s);
}

TruncatedLoop::TruncatedLoop(int d, int lo_, int hi_, GroupTag t)
    : dim(d), lo(lo_), hi(hi_), tag(t) {
    if (lo > 0 || hi < 0) throw UsageError("loop window must contain degree 0");
    coeffs.assign(static_cast<size_t>(hi - lo + 1), Mat::Zero(d, d));
}

TruncatedLoop TruncatedLoop::identity(int d, GroupTag t) {
    TruncatedLoop g(d, 0, 0, t);
    g.coeffs[0] = Mat::Identity(d, d);
    return g;
}

TruncatedLoop TruncatedLoop::constant(const Mat& m, GroupTag t) {
    TruncatedLoop g(static_cast<int>(m.rows()), 0, 0, t);
    g.coeffs[0] = m;
    return g;
}

Mat TruncatedLoop::coeff(int k) const {
    if (k < lo || k > hi) return Mat::Zero(dim, dim);
    return coeffs[static_cast<size_t>(k - lo)];
}

Mat& TruncatedLoop::ref(int k) {
    if (k < lo || k > hi) throw UsageError("coefficient index outside window");
    return coeffs[static_cast<size_t>(k - lo)];
}

Mat TruncatedLoop::evaluate(Cx z) const {
    Mat out = Mat::Zero(dim, dim);
    Cx zk = std::pow(z, lo);
    for (int k = lo; k <= hi; ++k) {
        out += coeffs[static_cast<size_t>(k - lo)] * zk;
        zk *= z;
    }
    return out;
}

double TruncatedLoop::maxCoeffAbs() const {
    double m = 0.0;
    for (const auto& c : coeffs) m = std::max(m, maxAbs(c));
    return m;
}

bool TruncatedLoop::isIdentity(double tol) const {
    for (int k = lo; k <= hi; ++k) {
        Mat d = coeff(k);
        if (k == 0) d -= Mat::Identity(dim, dim);
        if (maxAbs(d) > tol) return false;
    }
    return true;
}

InvolutionConfig InvolutionConfig::s2() {
    InvolutionConfig c;
    c.theta_conjugator = Mat::Identity(2, 2);
    c.theta_conjugator(1, 1) = -1.0;
    c.epsilon = +1.0;
    return c;
}

InvolutionConfig InvolutionConfig::sl2GroupCase() {
    InvolutionConfig c;
    c.theta_conjugator = Mat::Identity(2, 2);
    c.epsilon = -1.0;
    return c;
}

InvolutionConfig InvolutionConfig::sl3(double epsilon) {
    InvolutionConfig c;
    c.theta_conjugator = Mat::Identity(3, 3);
    // Theta(E_13) = d1*d3 * E_13 = -eps E_13 for the diagonal conjugators below.
    if (epsilon > 0) {
        c.theta_conjugator(2, 2) = -1.0;  // CP^2-type: Theta(e_theta) = -e_theta
    } else {
        c.theta_conjugator(1, 1) = -1.0;  // fixes e_theta
    }
    c.epsilon = epsilon;
    return c;
}

TruncatedLoop mulNatural(const TruncatedLoop& f, const TruncatedLoop& g) {
    if (f.dim != g.dim) throw DimensionMismatch("mul: dimension mismatch");
    TruncatedLoop out(f.dim, f.lo + g.lo, f.hi + g.hi,
                      f.tag == g.tag ? f.tag : GroupTag::GL);
    out.truncated = f.truncated || g.truncated;
    for (int i = f.lo; i <= f.hi; ++i) {
        const Mat& fi = f.coeffs[static_cast<size_t>(i - f.lo)];
        if (maxAbs(fi) == 0.0) continue;
        for (int j = g.lo; j <= g.hi; ++j) {
            const Mat& gj = g.coeffs[static_cast<size_t>(j - g.lo)];
            if (maxAbs(gj) == 0.0) continue;
            out.coeffs[static_cast<size_t>(i + j - out.lo)] += fi * gj;
        }
    }
    return out;
}

TruncatedLoop cropWindow(const TruncatedLoop& f, int lo, int hi) {
    TruncatedLoop out(f.dim, lo, hi, f.tag);
    out.truncated = f.truncated;
    for (int k = f.lo; k <= f.hi; ++k) {
        if (k < lo || k > hi) {
            if (maxAbs(f.coeff(k)) > kTolTrunc) out.truncated = true;
        } else {
            out.ref(k) = f.coeff(k);
        }
    }
    return out;
}

TruncatedLoop mul(const TruncatedLoop& f, const TruncatedLoop& g, int W) {
    return cropWindow(mulNatural(f, g), -W, W);
}

int refitGridSize(const TruncatedLoop& g) {
    return nextPow2(4 * (g.hi - g.lo + 1));
}

std::vector<Mat> gridEvaluate(const TruncatedLoop& g, int m) {
    std::vector<Mat> out;
    out.reserve(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        const double t = 2.0 * kPi * j / m;
        out.push_back(g.evaluate(Cx(std::cos(t), std::sin(t))));
    }
    return out;
}

TruncatedLoop gridRefit(const std::vector<Mat>& samples, int W, GroupTag tag,
                        double* outFraction) {
    const int m = static_cast<int>(samples.size());
    const int d = static_cast<int>(samples[0].rows());
    TruncatedLoop out(d, -W, W, tag);
    double total = 0.0;
    for (const auto& s : samples) total += s.squaredNorm();
    total /= m;
    double inWindow = 0.0;
    for (int n = -W; n <= W; ++n) {
        Mat c = Mat::Zero(d, d);
        for (int j = 0; j < m; ++j) {
            const double t = -2.0 * kPi * j * n / m;
            c += samples[static_cast<size_t>(j)] * Cx(std::cos(t), std::sin(t));
        }
        c /= m;
        inWindow += c.squaredNorm();
        out.ref(n) = c;
    }
    if (outFraction) {
        *outFraction = total > 0 ? std::max(0.0, (total - inWindow) / total) : 0.0;
    }
    return out;
}

TruncatedLoop inverse(const TruncatedLoop& g) {
    const int m = refitGridSize(g);
    auto samples = gridEvaluate(g, m);
    for (auto& s : samples) {
        if (std::abs(s.determinant()) < kTolDet)
            throw SingularOnCircle("inverse: determinant below tol_det on circle grid");
        s = s.inverse().eval();
    }
    const int W = std::max(-g.lo, g.hi);
    return gridRefit(samples, W, g.tag, nullptr);
}

TruncatedLoop triangularInverse(const TruncatedLoop& g) {
    const bool minusSide = (g.hi == 0);
    const bool plusSide = (g.lo == 0);
    if (!minusSide && !plusSide)
        throw UsageError("triangularInverse: loop must be one-sided");
    if (maxAbs(g.coeff(0) - Mat::Identity(g.dim, g.dim)) > 1e-12)
        throw UsageError("triangularInverse: constant term must be identity");
    const int n = plusSide ? g.hi : -g.lo;
    const int step = plusSide ? 1 : -1;
    TruncatedLoop out(g.dim, plusSide ? 0 : -n, plusSide ? n : 0, g.tag);
    out.ref(0) = Mat::Identity(g.dim, g.dim);
    for (int k = 1; k <= n; ++k) {
        Mat s = Mat::Zero(g.dim, g.dim);
        for (int j = 1; j <= k; ++j) s += g.coeff(step * j) * out.coeff(step * (k - j));
        out.ref(step * k) = -s;
    }
    return out;
}

TruncatedLoop star(const TruncatedLoop& g) {
    TruncatedLoop out(g.dim, -g.hi, -g.lo, g.tag);
    out.truncated = g.truncated;
    for (int k = g.lo; k <= g.hi; ++k) out.ref(-k) = g.coeff(k).adjoint();
    return out;
}

TruncatedLoop theta(const TruncatedLoop& g, const InvolutionConfig& cfg) {
    TruncatedLoop out = g;
    const Mat D = cfg.theta_conjugator;
    const Mat Di = D.inverse();
    for (auto& c : out.coeffs) c = D * c * Di;
    return out;
}

TruncatedLoop starTheta(const TruncatedLoop& g, const InvolutionConfig& cfg) {
    return theta(star(g), cfg);
}

double detUnitError(const TruncatedLoop& g) {
    const int m = nextPow2(4 * (g.hi - g.lo + 1));
    double worst = 0.0;
    for (const auto& s : gridEvaluate(g, m))
        worst = std::max(worst, std::abs(s.determinant() - Cx(1.0, 0.0)));
    return worst;
}

std::string matToJson(const Mat& m) {
    json entries = json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            entries.push_back({m(i, j).real(), m(i, j).imag()});
    return entries.dump();
}

static json matToJsonObj(const Mat& m) {
    json entries = json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            entries.push_back({m(i, j).real(), m(i, j).imag()});
    return entries;
}

static Mat matFromJsonObj(const json& entries, int d) {
    if (static_cast<int>(entries.size()) != d * d)
        throw UsageError("matrix entry count does not match dim^2");
    Mat m(d, d);
    int idx = 0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j, ++idx)
            m(i, j) = Cx(entries[idx][0].get<double>(), entries[idx][1].get<double>());
    return m;
}

Mat matFromJsonText(const std::string& text) {
    json entries = json::parse(text);
    const int d = static_cast<int>(std::lround(std::sqrt(double(entries.size()))));
    return matFromJsonObj(entries, d);
}

std::string toJson(const TruncatedLoop& g) {
    json j;
    j["dim"] = g.dim;
    j["lo"] = g.lo;
    j["hi"] = g.hi;
    json cs = json::array();
    for (int k = g.lo; k <= g.hi; ++k) cs.push_back(matToJsonObj(g.coeff(k)));
    j["coeffs"] = cs;
    j["group_tag"] = tagName(g.tag);
    return j.dump();
}

TruncatedLoop loopFromJson(const std::string& text) {
    json j = json::parse(text);
    const int d = j.at("dim").get<int>();
    const int lo = j.at("lo").get<int>();
    const int hi = j.at("hi").get<int>();
    TruncatedLoop g(d, lo, hi, tagFromName(j.at("group_tag").get<std::string>()));
    const auto& cs = j.at("coeffs");
    if (static_cast<int>(cs.size()) != hi - lo + 1)
        throw UsageError("coeffs length must equal hi - lo + 1");
    for (int k = lo; k <= hi; ++k)
        g.ref(k) = matFromJsonObj(cs[static_cast<size_t>(k - lo)], d);
    if (g.tag != GroupTag::GL && detUnitError(g) > kTolDetUnit)
        throw UsageError("SL-tagged loop violates |det - 1| tolerance");
    return g;
}

} // namespace looplab::loops
