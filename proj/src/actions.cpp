#include "looplab/actions.hpp"

#include <cmath>

namespace looplab::actions {

using loops::cropWindow;
using loops::mulNatural;
using loops::star;
using loops::starTheta;
using loops::theta;
using loops::triangularInverse;

MoebiusParam::MoebiusParam(Cx a_, Cx b_, Cx c_, Cx d_) : a(a_), b(b_), c(c_), d(d_) {
    if (std::abs(a * d - b * c - Cx(1, 0)) > 1e-12)
        throw UsageError("MoebiusParam: ad - bc must be 1");
}

MoebiusParam MoebiusParam::compose(const MoebiusParam& r) const {
    return MoebiusParam(a * r.a + b * r.c, a * r.b + b * r.d,
                        c * r.a + d * r.c, c * r.b + d * r.d);
}

MoebiusParam MoebiusParam::starThetaTwist(double epsilon) const {
    const Cx e(epsilon, 0);
    return MoebiusParam(std::conj(a), -e * std::conj(c),
                        -e * std::conj(b), std::conj(d));
}

Cx MoebiusParam::moebius(Cx zeta) const {
    const Cx den = a + b * zeta;
    if (std::abs(den) < kTolDiv) throw Degenerate("moebius: zero denominator");
    return (c + d * zeta) / den;
}

RootEmbedding RootEmbedding::sl2(double epsilon) {
    RootEmbedding e;
    e.dim = 2;
    e.e_theta = Mat::Zero(2, 2);
    e.e_theta(0, 1) = 1.0;
    e.e_minus_theta = e.e_theta.adjoint();
    e.h_theta = Mat::Zero(2, 2);
    e.h_theta(0, 0) = 1.0;
    e.h_theta(1, 1) = -1.0;
    e.epsilon = epsilon;
    return e;
}

RootEmbedding RootEmbedding::sl3(double epsilon) {
    RootEmbedding e;
    e.dim = 3;
    e.e_theta = Mat::Zero(3, 3);
    e.e_theta(0, 2) = 1.0;
    e.e_minus_theta = e.e_theta.adjoint();
    e.h_theta = Mat::Zero(3, 3);
    e.h_theta(0, 0) = 1.0;
    e.h_theta(2, 2) = -1.0;
    e.epsilon = epsilon;
    return e;
}

double RootEmbedding::relationError() const {
    auto br = [](const Mat& x, const Mat& y) { return (x * y - y * x).eval(); };
    double w = maxAbs(br(e_theta, e_minus_theta) - h_theta);
    w = std::max(w, maxAbs(br(h_theta, e_theta) - 2.0 * e_theta));
    w = std::max(w, maxAbs(br(h_theta, e_minus_theta) + 2.0 * e_minus_theta));
    return w;
}

int RootEmbedding::rowIndex() const {
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            if (std::abs(e_theta(i, j)) > 0.5) return i;
    throw UsageError("RootEmbedding: empty e_theta");
}

int RootEmbedding::colIndex() const {
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            if (std::abs(e_theta(i, j)) > 0.5) return j;
    throw UsageError("RootEmbedding: empty e_theta");
}

TruncatedLoop i0Loop(const MoebiusParam& m, const RootEmbedding& emb) {
    const int d = emb.dim;
    const int i = emb.rowIndex(), j = emb.colIndex();
    TruncatedLoop h(d, -1, 1, d == 2 ? GroupTag::SL2 : d == 3 ? GroupTag::SL3 : GroupTag::GL);
    Mat m0 = Mat::Identity(d, d);
    m0(i, i) = m.d;
    m0(j, j) = m.a;
    h.ref(0) = m0;
    h.ref(-1) = m.c * emb.e_theta;
    h.ref(1) = m.b * emb.e_minus_theta;
    return h;
}

namespace {

Cx eThetaComponent(const Mat& x, const RootEmbedding& emb) {
    return x(emb.rowIndex(), emb.colIndex());
}

Cx eMinusThetaComponent(const Mat& x, const RootEmbedding& emb) {
    return x(emb.colIndex(), emb.rowIndex());
}

double sideResidue(const TruncatedLoop& g, int firstBadDegree, int direction) {
    double w = 0.0;
    for (int k = firstBadDegree; direction > 0 ? k <= g.hi : k >= g.lo; k += direction)
        w = std::max(w, maxAbs(g.coeff(k)));
    return w;
}

double factorsResidual(const BirkhoffFactors& out, const TruncatedLoop& target) {
    const TruncatedLoop back = out.product(std::max(
        {std::abs(target.lo), std::abs(target.hi), std::abs(out.g_minus.lo), out.g_plus.hi}));
    double res = 0.0;
    for (int k = std::min(back.lo, target.lo); k <= std::max(back.hi, target.hi); ++k)
        res = std::max(res, maxAbs(back.coeff(k) - target.coeff(k)));
    return res;
}

} // namespace

BirkhoffFactors actLeftI0(const MoebiusParam& m, const BirkhoffFactors& f,
                          const RootEmbedding& emb, ActionDetail* detail) {
    const int d = emb.dim;
    if (f.dim() != d) throw DimensionMismatch("actLeftI0: embedding dim mismatch");
    const Cx Z1 = eThetaComponent(f.g_minus.coeff(-1), emb);
    const Cx alpha = m.a + m.b * Z1;
    if (std::abs(alpha) < kTolDiv) throw Degenerate("actLeftI0: a + b Z_1 ~ 0");

    const TruncatedLoop h = i0Loop(m, emb);

    // E = exp(-(b/alpha) e_{-theta} z), exact: e_{-theta}^2 = 0 in the defining rep
    TruncatedLoop E(d, 0, 1, f.g_minus.tag);
    E.ref(0) = Mat::Identity(d, d);
    E.ref(1) = -(m.b / alpha) * emb.e_minus_theta;
    TruncatedLoop Einv = E;
    Einv.ref(1) = -E.coeff(1);

    const TruncatedLoop gt = mulNatural(mulNatural(h, f.g_minus), E);
    const double pos = sideResidue(gt, 1, +1);
    const Mat S = gt.coeff(0);
    if (std::abs(S.determinant()) < kTolDiv) throw Degenerate("actLeftI0: singular corrective factor");
    const Mat Si = S.inverse();

    BirkhoffFactors out;
    out.g_minus = cropWindow(mulNatural(gt, TruncatedLoop::constant(Si, gt.tag)), gt.lo, 0);
    out.g_minus.truncated = f.g_minus.truncated;
    out.g_zero = S * f.g_zero;
    const Mat g0i = f.g_zero.inverse();
    out.g_plus = cropWindow(
        mulNatural(mulNatural(TruncatedLoop::constant(g0i, gt.tag), Einv),
                   mulNatural(TruncatedLoop::constant(f.g_zero, gt.tag), f.g_plus)),
        0, f.g_plus.hi + 1);

    out.residual = factorsResidual(out, cropWindow(mulNatural(h, f.product(
        std::max(-f.g_minus.lo, f.g_plus.hi))), gt.lo, f.g_plus.hi + 1));
    if (detail) {
        detail->alpha = alpha;
        detail->S = S;
        detail->positiveResidue = pos;
    }
    return out;
}

BirkhoffFactors actRightI0(const MoebiusParam& m, const BirkhoffFactors& f,
                           const RootEmbedding& emb, ActionDetail* detail) {
    const int d = emb.dim;
    if (f.dim() != d) throw DimensionMismatch("actRightI0: embedding dim mismatch");
    const Cx W1 = eMinusThetaComponent(f.g_plus.coeff(1), emb);
    const Cx alpha = m.a + m.c * W1;
    if (std::abs(alpha) < kTolDiv) throw Degenerate("actRightI0: a + c W_1 ~ 0");

    const TruncatedLoop h = i0Loop(m, emb);

    TruncatedLoop Ep(d, -1, 0, f.g_plus.tag);
    Ep.ref(0) = Mat::Identity(d, d);
    Ep.ref(-1) = (m.c / alpha) * emb.e_theta;
    TruncatedLoop EpInv = Ep;
    EpInv.ref(-1) = -Ep.coeff(-1);

    const TruncatedLoop gpt = mulNatural(mulNatural(EpInv, f.g_plus), h);
    const double neg = sideResidue(gpt, -1, -1);
    const Mat S = gpt.coeff(0);
    if (std::abs(S.determinant()) < kTolDiv) throw Degenerate("actRightI0: singular corrective factor");
    const Mat Si = S.inverse();

    BirkhoffFactors out;
    out.g_plus = cropWindow(mulNatural(TruncatedLoop::constant(Si, gpt.tag), gpt), 0, gpt.hi);
    out.g_plus.truncated = f.g_plus.truncated;
    out.g_zero = f.g_zero * S;
    const Mat g0i = f.g_zero.inverse();
    out.g_minus = cropWindow(
        mulNatural(f.g_minus,
                   mulNatural(TruncatedLoop::constant(f.g_zero, gpt.tag),
                              mulNatural(Ep, TruncatedLoop::constant(g0i, gpt.tag)))),
        f.g_minus.lo - 1, 0);

    out.residual = factorsResidual(out, cropWindow(mulNatural(f.product(
        std::max(-f.g_minus.lo, f.g_plus.hi)), h), f.g_minus.lo - 1, gpt.hi));
    if (detail) {
        detail->alpha = alpha;
        detail->S = S;
        detail->positiveResidue = neg;
    }
    return out;
}

TruncatedLoop sigmaEntrywise(const TruncatedLoop& g) {
    if (g.dim != 2) throw UsageError("sigma acts entrywise on SL2 loops only");
    TruncatedLoop out(2, g.lo - 1, g.hi + 1, g.tag);
    out.truncated = g.truncated;
    for (int k = g.lo; k <= g.hi; ++k) {
        const Mat c = g.coeff(k);
        out.ref(k)(0, 0) += c(0, 0);
        out.ref(k)(1, 1) += c(1, 1);
        out.ref(k + 1)(0, 1) += c(0, 1);
        out.ref(k - 1)(1, 0) += c(1, 0);
    }
    return out;
}

BirkhoffFactors actSigma(const BirkhoffFactors& f) {
    if (f.dim() != 2) throw UsageError("actSigma: SL2 only");
    const Cx a0 = f.g_zero(0, 0), b0 = f.g_zero(0, 1), c0 = f.g_zero(1, 0);
    if (std::abs(a0) < kTolDiv) throw Degenerate("actSigma: a_0 ~ 0");
    const Cx B1 = f.g_minus.coeff(-1)(0, 1);
    const Cx c1 = f.g_plus.coeff(1)(1, 0);

    BirkhoffFactors out;
    // (g^sigma)_- = (g_-)^sigma (1, -B_1; (c0/a0) z^-1, 1 - (B_1 c0/a0) z^-1)
    TruncatedLoop R(2, -1, 0, f.g_minus.tag);
    R.ref(0) = Mat::Identity(2, 2);
    R.ref(0)(0, 1) = -B1;
    R.ref(-1)(1, 0) = c0 / a0;
    R.ref(-1)(1, 1) = -B1 * c0 / a0;
    out.g_minus = cropWindow(mulNatural(sigmaEntrywise(f.g_minus), R), f.g_minus.lo - 2, 0);

    out.g_zero = Mat::Zero(2, 2);
    out.g_zero(0, 0) = a0 + B1 * c1 / a0;
    out.g_zero(0, 1) = B1 / a0;
    out.g_zero(1, 0) = c1 / a0;
    out.g_zero(1, 1) = 1.0 / a0;

    TruncatedLoop L(2, 0, 1, f.g_plus.tag);
    L.ref(0) = Mat::Identity(2, 2);
    L.ref(0)(1, 0) = -c1;
    L.ref(1)(0, 1) = b0 / a0;
    L.ref(1)(1, 1) = -c1 * b0 / a0;
    out.g_plus = cropWindow(mulNatural(L, sigmaEntrywise(f.g_plus)), 0, f.g_plus.hi + 2);

    out.residual = factorsResidual(
        out, cropWindow(sigmaEntrywise(f.product(std::max(-f.g_minus.lo, f.g_plus.hi) + 1)),
                        out.g_minus.lo, out.g_plus.hi));
    return out;
}

Cx sigmaBnLaw(const RHLinearCoords& c, const Mat& g_zero, int n) {
    const Cx a0 = g_zero(0, 0), c0 = g_zero(1, 0);
    if (std::abs(a0) < kTolDiv) throw Degenerate("sigmaBnLaw: a_0 ~ 0");
    if (n + 1 >= static_cast<int>(c.B.size())) throw UsageError("sigmaBnLaw: order");
    const Cx B1 = c.B[1];
    return -c.A[static_cast<size_t>(n)] * B1 + c.B[static_cast<size_t>(n + 1)] -
           c.B[static_cast<size_t>(n)] * B1 * c0 / a0;
}

MoebiusLadders moebiusBn(const MoebiusParam& m, const RHLinearCoords& coords, int nMax) {
    if (nMax >= static_cast<int>(coords.B.size()))
        throw UsageError("moebiusBn: order exceeds coordinates");
    const Cx alpha = m.a + m.b * coords.Z[1];
    if (std::abs(alpha) < kTolDiv) throw Degenerate("moebiusBn: a + b Z_1 ~ 0");
    MoebiusLadders out;
    out.B.resize(static_cast<size_t>(nMax) + 1);
    out.Dm1.resize(static_cast<size_t>(nMax) + 1);
    out.Bp.resize(static_cast<size_t>(nMax) + 1);
    for (int n = 1; n <= nMax; ++n) {
        const Cx Bn = coords.B[static_cast<size_t>(n)];
        const Cx Dn1 = coords.D[static_cast<size_t>(n - 1)];
        out.B[static_cast<size_t>(n)] = (m.d * Bn + m.c * Dn1) / alpha;
        out.Dm1[static_cast<size_t>(n)] = (m.b * Bn + m.a * Dn1) / alpha;
        const Cx bp = coords.Bprime(n);
        const Cx den = m.a + m.b * bp;
        if (std::abs(den) < kTolDiv) throw Degenerate("moebiusBn: fractional denominator ~ 0");
        out.Bp[static_cast<size_t>(n)] = (m.c + m.d * bp) / den;
    }
    return out;
}

BirkhoffFactors actSymmetric(const MoebiusParam& m, const BirkhoffFactors& f,
                             const InvolutionConfig& cfg, const RootEmbedding& emb,
                             SymmetricDetail* detail) {
    if (std::abs(cfg.epsilon - emb.epsilon) > 0)
        throw UsageError("actSymmetric: epsilon mismatch between config and embedding");
    if (!birkhoff::isSymmetricFactors(f, cfg, 1e-7))
        throw UsageError("actSymmetric: input is not a symmetric point");

    const MoebiusParam mst = m.starThetaTwist(cfg.epsilon);
    ActionDetail dr, dl;
    const BirkhoffFactors mid = actRightI0(mst, f, emb, &dr);
    const BirkhoffFactors out = actLeftI0(m, mid, emb, &dl);
    if (detail) {
        detail->Z1 = eThetaComponent(f.g_minus.coeff(-1), emb);
        detail->Z1p = eThetaComponent(mid.g_minus.coeff(-1), emb);
        const int i = emb.rowIndex(), j = emb.colIndex();
        detail->q = (f.g_zero * emb.e_theta * f.g_zero.inverse())(i, j);
        detail->alphaRight = dr.alpha;
        detail->alphaLeft = dl.alpha;
    }
    return out;
}

BirkhoffFactors lemma44Factors(const MoebiusParam& m, const BirkhoffFactors& f,
                               const InvolutionConfig& cfg) {
    if (f.dim() != 2) throw UsageError("lemma44Factors: SL2/S^2 only");
    const Cx a = m.a, b = m.b, c = m.c, d = m.d;
    const double a0 = f.g_zero(0, 0).real();
    const Cx B1 = f.g_minus.coeff(-1)(0, 1);

    const Cx alphaPrime = std::conj(a) + std::conj(b) * std::conj(B1);
    if (std::abs(alphaPrime) < kTolDiv) throw Degenerate("lemma44: conj(a) + conj(b) conj(B1) ~ 0");
    const Cx bb = std::conj(b) / alphaPrime;  // the bold-b of (4.5)
    const Cx alpha = (std::norm(a + b * B1) - std::norm(b) * a0 * a0) / alphaPrime;
    if (std::abs(alpha) < kTolDiv) throw Degenerate("lemma44: |a+bB1|^2 - |b|^2 a0^2 ~ 0");

    const RootEmbedding emb = RootEmbedding::sl2(+1.0);
    const Mat g0i = f.g_zero.inverse();

    // intermediate I = g_- g_0 (1, -b z^-1; 0, 1) g_0^{-1}
    TruncatedLoop J(2, -1, 0, f.g_minus.tag);
    J.ref(0) = Mat::Identity(2, 2);
    J.ref(-1)(0, 1) = -bb;
    const TruncatedLoop inter = cropWindow(
        mulNatural(f.g_minus,
                   mulNatural(TruncatedLoop::constant(f.g_zero, f.g_minus.tag),
                              mulNatural(J, TruncatedLoop::constant(g0i, f.g_minus.tag)))),
        f.g_minus.lo - 1, 0);

    // gamma_0 from the group-case formula applied to the intermediate entries
    const Cx A1i = inter.coeff(-1)(0, 0);
    const Cx B1i = inter.coeff(-1)(0, 1);
    const Cx B2i = inter.coeff(-2)(0, 1);
    const Cx gamma0 = (-2.0 * a * b * A1i + b * b * (B2i - A1i * B1i)) / alpha;

    TruncatedLoop Ralpha(2, 0, 1, f.g_minus.tag);
    Ralpha.ref(0)(0, 0) = alpha;
    Ralpha.ref(0)(1, 0) = gamma0;
    Ralpha.ref(0)(1, 1) = 1.0 / alpha;
    Ralpha.ref(1)(1, 0) = -b;

    const TruncatedLoop h = i0Loop(m, emb);
    BirkhoffFactors out;
    out.g_minus = cropWindow(mulNatural(mulNatural(h, inter), Ralpha), f.g_minus.lo - 2, 0);

    // right-step corrective constant (alpha'^{-1}, beta_0; 0, alpha') extracted exactly
    const MoebiusParam mst = m.starThetaTwist(cfg.epsilon);
    ActionDetail dr;
    const BirkhoffFactors mid = actRightI0(mst, f, emb, &dr);
    const Mat Sprime = f.g_zero.inverse() * mid.g_zero;

    Mat left = Mat::Zero(2, 2);
    left(0, 0) = 1.0 / alpha;
    left(1, 0) = -gamma0;
    left(1, 1) = alpha;
    out.g_zero = left * f.g_zero * Sprime;
    out.g_plus = starTheta(out.g_minus, cfg);
    out.residual = 0.0;
    return out;
}

Cor49Laws cor49Laws(const MoebiusParam& m, const BirkhoffFactors& f) {
    const Cx a = m.a, b = m.b, c = m.c, d = m.d;
    const double a0 = f.g_zero(0, 0).real();
    const Cx b0 = f.g_zero(0, 1);
    const Cx B1 = f.g_minus.coeff(-1)(0, 1);
    const Cx A1 = f.g_minus.coeff(-1)(0, 0);
    const Cx D1 = f.g_minus.coeff(-1)(1, 1);
    const Cx B2 = f.g_minus.coeff(-2)(0, 1);

    const Cx alphaPrime = std::conj(a) + std::conj(b) * std::conj(B1);
    const Cx bb = std::conj(b) / alphaPrime;
    const double denom = std::norm(a + b * B1) - std::norm(b) * a0 * a0;
    if (std::abs(denom) < kTolDiv || std::abs(alphaPrime) < kTolDiv)
        throw Degenerate("cor49Laws: excluded locus");
    const Cx alpha = Cx(denom, 0) / alphaPrime;

    Cor49Laws out;
    out.a0p = a0 / denom;
    out.B1p = (d * B1 + c - d * bb * a0 * a0) / alpha;
    out.B2p = (d * B2 + c * D1 - d * A1 * bb * a0 * a0 +
               (d * B1 + c) * bb * std::conj(b0) * a0) /
              alpha;
    out.D1p = (b * B2 + a * D1 - b * A1 * bb * a0 * a0 +
               (b * B1 + a) * bb * std::conj(b0) * a0) /
              alpha;
    return out;
}

namespace {

// Orthonormal basis of sl(d) under tr(X Y^dagger).
std::vector<Mat> slBasis(int d) {
    std::vector<Mat> basis;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j) {
                Mat e = Mat::Zero(d, d);
                e(i, j) = 1.0;
                basis.push_back(e);
            }
    for (int k = 1; k < d; ++k) {
        Mat h = Mat::Zero(d, d);
        for (int i = 0; i < k; ++i) h(i, i) = 1.0;
        h(k, k) = -static_cast<double>(k);
        h /= std::sqrt(static_cast<double>(k * (k + 1)));
        basis.push_back(h);
    }
    return basis;
}

Vec coordsOf(const Mat& x, const std::vector<Mat>& basis) {
    Vec v(basis.size());
    for (size_t k = 0; k < basis.size(); ++k) v(static_cast<Eigen::Index>(k)) = (x * basis[k].adjoint()).trace();
    return v;
}

// Coefficients of Ad(L(z)) acting on sl(d), degree range inherited from L.
std::vector<Mat> adjointLoopCoeffs(const TruncatedLoop& L, const TruncatedLoop& Linv,
                                   const std::vector<Mat>& basis, int lo, int hi) {
    const int g = static_cast<int>(basis.size());
    std::vector<Mat> out(static_cast<size_t>(hi - lo + 1), Mat::Zero(g, g));
    for (int j = 0; j < g; ++j) {
        const TruncatedLoop col = cropWindow(
            mulNatural(mulNatural(L, TruncatedLoop::constant(basis[static_cast<size_t>(j)], L.tag)), Linv),
            lo, hi);
        for (int k = lo; k <= hi; ++k) {
            const Vec v = coordsOf(col.coeff(k), basis);
            for (int i = 0; i < g; ++i) out[static_cast<size_t>(k - lo)](i, j) = v(i);
        }
    }
    return out;
}

} // namespace

AdjointCheck adjointRecursionCheck(const BirkhoffFactors& f, const InvolutionConfig& cfg,
                                   const RootEmbedding& emb, int nMax) {
    const int d = emb.dim;
    const MoebiusParam w0(Cx(0, 0), Cx(1, 0), Cx(-1, 0), Cx(0, 0));
    SymmetricDetail det;
    const BirkhoffFactors out = actSymmetric(w0, f, cfg, emb, &det);

    const auto basis = slBasis(d);
    const Vec eTh = coordsOf(emb.e_theta, basis);
    const Vec eMth = coordsOf(emb.e_minus_theta, basis);
    auto pairNeg = [](const Vec& x, const Vec& y) { return -(y.adjoint() * x)(0, 0); };

    AdjointCheck chk;
    // (6.13)-type law for the zero mode, pairing <X,Y> = -tr(X Y^dagger)
    const Mat adG0 = f.g_zero * emb.e_theta * f.g_zero.inverse();
    const Mat adG0p = out.g_zero * emb.e_theta * out.g_zero.inverse();
    const Cx qt = pairNeg(coordsOf(adG0, basis), eTh);
    const Cx qtp = pairNeg(coordsOf(adG0p, basis), eTh);
    const Cx denom = std::norm(det.Z1) + cfg.epsilon * qt;  // a = 0, b = 1
    chk.pairing = qt;
    chk.pairingAfter = qtp;
    chk.err613 = std::abs(qtp - qt / (denom * denom));

    // order-n extraction: <Ad(g_-') e_-theta, e_-theta> coefficients against
    // the pushed-through series, with the z^2 shift from Ad(h^{-1}) e_-theta = -z^-2 e_theta
    const int depth = -out.g_minus.lo;
    const auto Aprime = adjointLoopCoeffs(out.g_minus, triangularInverse(out.g_minus),
                                          basis, -depth, 0);
    const int depthIn = -f.g_minus.lo;
    const auto Ain = adjointLoopCoeffs(f.g_minus, triangularInverse(f.g_minus),
                                       basis, -depthIn, 0);

    const Cx beta = -cfg.epsilon / std::conj(det.Z1);  // a = 0, b = 1
    const int g = static_cast<int>(basis.size());
    Mat C = Mat::Zero(g, g);
    for (int j = 0; j < g; ++j) {
        const Mat br = adG0 * basis[static_cast<size_t>(j)] - basis[static_cast<size_t>(j)] * adG0;
        C.col(j) = coordsOf(br, basis);
    }
    const Mat K0 = Mat::Identity(g, g);
    const Mat K1 = beta * C;
    const Mat K2 = 0.5 * beta * beta * C * C;

    auto AinAt = [&](int deg) -> Mat {
        if (deg > 0 || deg < -depthIn) return Mat::Zero(g, g);
        return Ain[static_cast<size_t>(deg + depthIn)];
    };
    const Cx zf = det.alphaLeft * det.alphaLeft;
    double worst = 0.0;
    for (int n = 1; n <= nMax && n <= depth; ++n) {
        const Cx lhs = pairNeg(Aprime[static_cast<size_t>(-n + depth)] * eMth, eMth);
        // T_{n+2} where T(z) = <N(z) e_-theta, e_theta>, N = Ad(g_-) K
        Mat Nn = AinAt(-(n + 2)) * K0 + AinAt(-(n + 1)) * K1 + AinAt(-n) * K2;
        const Cx rhs = -pairNeg(Nn * eMth, eTh) / zf;
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    chk.err617 = worst;
    return chk;
}

Mat sigmaDeltaSUn(int n, double t) {
    if (n < 2) throw UsageError("sigmaDeltaSUn: n >= 2");
    Mat m = Mat::Zero(n, n);
    // cyclic permutation matrix times the exp(2 pi i (j/n) t h_j) path
    m(0, n - 1) = std::polar(1.0, -2.0 * kPi * (n - 1) * t / n);
    for (int i = 1; i < n; ++i) m(i, i - 1) = std::polar(1.0, 2.0 * kPi * t / n);
    const Cx lambda = (n % 2 == 1) ? Cx(1, 0) : std::polar(1.0, kPi / n);
    return lambda * m;
}

TruncatedLoop applySigmaDelta(const TruncatedLoop& g) {
    if (g.dim < 2) throw UsageError("applySigmaDelta: need matrix loop");
    const int n = g.dim;
    const int W = std::max(-g.lo, g.hi) + 1;
    const int m = nextPow2(4 * (2 * W + 1));
    std::vector<Mat> samples;
    samples.reserve(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        const double t = static_cast<double>(j) / m;
        const Mat s = sigmaDeltaSUn(n, t);
        samples.push_back(s * g.evaluate(std::polar(1.0, 2.0 * kPi * t)) * s.inverse());
    }
    double outFrac = 0.0;
    TruncatedLoop res = loops::gridRefit(samples, W, g.tag, &outFrac);
    if (outFrac > 1e-8) throw AliasingExcessive("applySigmaDelta: refit lost spectral mass");
    return res;
}

double sigmaDeltaCentralError(int n) {
    const Mat lhs = sigmaDeltaSUn(n, 1.0) * sigmaDeltaSUn(n, 0.0).inverse();
    const Mat delta = std::polar(1.0, 2.0 * kPi / n) * Mat::Identity(n, n);
    return maxAbs(lhs - delta);
}

} // namespace looplab::actions
