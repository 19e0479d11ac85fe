#pragma once

#include "looplab/birkhoff.hpp"

namespace looplab::actions {

using birkhoff::BirkhoffFactors;
using birkhoff::RHLinearCoords;
using loops::GroupTag;
using loops::InvolutionConfig;
using loops::TruncatedLoop;

// Element (a, b; c, d) of SL(2,C) parameterizing the generator h = i0(.).
struct MoebiusParam {
    Cx a{1, 0}, b{0, 0}, c{0, 0}, d{1, 0};

    MoebiusParam() = default;
    MoebiusParam(Cx a_, Cx b_, Cx c_, Cx d_);

    MoebiusParam compose(const MoebiusParam& rhs) const;  // this * rhs
    // Parameters of h^{*Theta}: diag(1,-eps) conj(m)^T diag(1,-eps).
    MoebiusParam starThetaTwist(double epsilon) const;
    Cx moebius(Cx zeta) const;  // (c + d zeta) / (a + b zeta)
};

// sl2-triple for the highest root of the target group, plus the sign
// eps in Theta(e_theta) = -eps e_theta.
struct RootEmbedding {
    int dim = 2;
    Mat e_theta, e_minus_theta, h_theta;
    double epsilon = +1.0;

    static RootEmbedding sl2(double epsilon = +1.0);
    static RootEmbedding sl3(double epsilon = +1.0);

    // max violation of the canonical sl2 relations
    double relationError() const;
    int rowIndex() const;  // e_theta = E_{row,col}
    int colIndex() const;
};

// The loop h = i0(m): identity outside the (row, col) plane, pattern
// (d, c z^-1; b z, a) inside it.
TruncatedLoop i0Loop(const MoebiusParam& m, const RootEmbedding& emb);

// Scalars the closed forms expose for tests.
struct ActionDetail {
    Cx alpha{1, 0};   // a + b Z_1 (left) or a + c W_1 (right)
    Mat S;            // constant corrective factor absorbed into g_0
    double positiveResidue = 0.0;  // leftover mass on the wrong side
};

// Left action h.g of Lemma 5.2(a) / 3.8(a) in closed form: the corrective
// constant is extracted exactly as the value at infinity of h g_- E.
BirkhoffFactors actLeftI0(const MoebiusParam& m, const BirkhoffFactors& f,
                          const RootEmbedding& emb, ActionDetail* detail = nullptr);

// Right action g.h of Lemma 5.2(b).
BirkhoffFactors actRightI0(const MoebiusParam& m, const BirkhoffFactors& f,
                           const RootEmbedding& emb, ActionDetail* detail = nullptr);

// sigma = conjugation by diag(z^{1/2}, z^{-1/2}); SL2 only.
TruncatedLoop sigmaEntrywise(const TruncatedLoop& g);
BirkhoffFactors actSigma(const BirkhoffFactors& f);
// Coefficient law B_n(g^sigma) = -A_n B_1 + B_{n+1} - B_n B_1 c_0 / a_0.
Cx sigmaBnLaw(const RHLinearCoords& c, const Mat& g_zero, int n);

// Ladder transport under the left action: B_n -> (d B_n + c D_{n-1})/alpha,
// D_{n-1} -> (b B_n + a D_{n-1})/alpha, B'_n -> (c + d B'_n)/(a + b B'_n).
struct MoebiusLadders {
    std::vector<Cx> B;    // index n = 1..nMax
    std::vector<Cx> Dm1;  // D_{n-1}' for n = 1..nMax
    std::vector<Cx> Bp;
};
MoebiusLadders moebiusBn(const MoebiusParam& m, const RHLinearCoords& coords, int nMax);

// Symmetric-space action g -> h g h^{*Theta} (right step first, then left).
struct SymmetricDetail {
    Cx Z1{0, 0};
    Cx Z1p{0, 0};        // e_theta component after the right step
    Cx q{0, 0};          // <Ad(g_0) e_theta, e_theta> / <e_theta, e_theta>
    Cx alphaRight{1, 0};
    Cx alphaLeft{1, 0};
};
BirkhoffFactors actSymmetric(const MoebiusParam& m, const BirkhoffFactors& f,
                             const InvolutionConfig& cfg, const RootEmbedding& emb,
                             SymmetricDetail* detail = nullptr);

// The S^2 specialization in matrix-entry data (alpha, alpha', b of (4.5)),
// following the printed product structure of the symmetric-action lemma for
// the 2-sphere; used to cross-check the general-epsilon machinery.
BirkhoffFactors lemma44Factors(const MoebiusParam& m, const BirkhoffFactors& f,
                               const InvolutionConfig& cfg);

// Projected laws on {a_0, B_1, D_1, B_2} for the S^2 action.
struct Cor49Laws {
    double a0p = 0.0;
    Cx B1p, B2p, D1p;
};
Cor49Laws cor49Laws(const MoebiusParam& m, const BirkhoffFactors& f);

// Adjoint-representation recursion checks with h fixed at a = 0, b = 1:
// the g_0' matrix-coefficient law and the order-n extraction identity.
struct AdjointCheck {
    double err613 = 0.0;
    double err617 = 0.0;
    Cx pairing = {0, 0};
    Cx pairingAfter = {0, 0};
};
AdjointCheck adjointRecursionCheck(const BirkhoffFactors& f, const InvolutionConfig& cfg,
                                   const RootEmbedding& emb, int nMax);

// Appendix-B multivalued loop for SU(n) (cyclic diagram rotation),
// sigma_Delta(t+1) = sigma_Delta(t) * Delta with central Delta.
Mat sigmaDeltaSUn(int n, double t);
// Pointwise conjugation by sigma_Delta; single-valued since Delta is central.
TruncatedLoop applySigmaDelta(const TruncatedLoop& g);
// max |sigma_Delta(1) sigma_Delta(0)^{-1} - e^{2 pi i / n} I|
double sigmaDeltaCentralError(int n);

} // namespace looplab::actions
