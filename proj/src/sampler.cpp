#include "looplab/sampler.hpp"

#include <cmath>

#include "looplab/stats.hpp"

namespace looplab::sampler {

using heat::HeatKernelTable;
using heat::makeHeatKernel;
using paths::projectSU2;
using paths::su2Angle;
using paths::su2FromAngleAxis;

namespace {

Mat2 sampleIncrement(const HeatKernelTable& hk, Rng& rng) {
    const double theta = hk.sampleAngle(rng);
    const double z = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return su2FromAngleAxis(theta, r * std::cos(phi), r * std::sin(phi), z);
}

// Metropolis sweeps against the product of transition densities; engaged
// only when the sequential rejection stage stalls.
void metropolisPath(std::vector<Mat2>& pts, const HeatKernelTable& hkStep, Rng& rng,
                    int sweeps) {
    const int M = static_cast<int>(pts.size()) - 1;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (int k = 1; k < M; ++k) {
            const Mat2 cand = projectSU2(pts[static_cast<size_t>(k)] * sampleIncrement(hkStep, rng));
            const double num =
                hkStep.value(su2Angle(pts[static_cast<size_t>(k - 1)].adjoint() * cand)) *
                hkStep.value(su2Angle(cand.adjoint() * pts[static_cast<size_t>(k + 1)]));
            const double den =
                hkStep.value(su2Angle(pts[static_cast<size_t>(k - 1)].adjoint() * pts[static_cast<size_t>(k)])) *
                hkStep.value(su2Angle(pts[static_cast<size_t>(k)].adjoint() * pts[static_cast<size_t>(k + 1)]));
            if (den <= 0.0 || rng.uniform() < num / den) pts[static_cast<size_t>(k)] = cand;
        }
    }
}

} // namespace

BridgeSampler::BridgeSampler(double beta, int M, BridgeOptions opts)
    : beta_(beta), M_(M), opts_(opts) {
    if (!(beta > 0.0)) throw UsageError("BridgeSampler: beta must be positive");
    if (M < 16 || (M & (M - 1)) != 0)
        throw UsageError("BridgeSampler: M must be a power of two >= 16");
    const double dt = 1.0 / (static_cast<double>(M) * beta);
    step_ = std::make_shared<HeatKernelTable>(makeHeatKernel(dt));
    step_->prepareSampling();
    rem_.resize(static_cast<size_t>(M));
    for (int r = 1; r < M; ++r)
        rem_[static_cast<size_t>(r)] = std::make_shared<HeatKernelTable>(makeHeatKernel(r * dt));
}

LoopPath BridgeSampler::sample(uint64_t seed) const {
    Rng rng(seed, 0x42726964ULL);
    LoopPath path;
    path.beta = beta_;
    path.M = M_;
    path.seed = seed;
    path.points.assign(static_cast<size_t>(M_ + 1), Mat2::Identity());

    for (int attempt = 0;; ++attempt) {
        bool stalled = false;
        double drift = 0.0;
        for (int k = 1; k < M_ && !stalled; ++k) {
            const HeatKernelTable& rem = *rem_[static_cast<size_t>(M_ - k)];
            const double envelope = rem.valueAtIdentity();
            bool accepted = false;
            for (int tries = 0; tries < opts_.rejectionCap; ++tries) {
                const Mat2 raw = path.points[static_cast<size_t>(k - 1)] * sampleIncrement(*step_, rng);
                const Mat2 cand = projectSU2(raw);
                drift = std::max(drift, (cand - raw).norm());
                if (rng.uniform() * envelope < rem.value(su2Angle(cand))) {
                    path.points[static_cast<size_t>(k)] = cand;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) stalled = true;
        }
        if (!stalled) {
            path.renormDrift = drift;
            path.points[static_cast<size_t>(M_)] = Mat2::Identity();
            return path;
        }
        if (attempt + 1 < opts_.pathRestartCap) continue;
        if (!opts_.metropolisEnabled)
            throw RejectionStall("BridgeSampler: rejection cap exceeded and Metropolis disabled");
        std::fill(path.points.begin(), path.points.end(), Mat2::Identity());
        metropolisPath(path.points, *step_, rng, opts_.metropolisSweeps);
        path.points[0] = path.points[static_cast<size_t>(M_)] = Mat2::Identity();
        path.renormDrift = 0.0;
        return path;
    }
}

Mat2 BridgeSampler::freeEndpoint(uint64_t seed) const {
    Rng rng(seed, 0x46726565ULL);
    Mat2 g = Mat2::Identity();
    for (int k = 0; k < M_; ++k) g = projectSU2(g * sampleIncrement(*step_, rng));
    return g;
}

LoopPath sampleBridge(double beta, int M, uint64_t seed, const BridgeOptions& opts) {
    return BridgeSampler(beta, M, opts).sample(seed);
}

TruncatedLoop projectS2(const LoopPath& path, const InvolutionConfig& cfg, int W) {
    if (!path.closed()) throw UsageError("projectS2: path must be closed");
    const Mat D = cfg.theta_conjugator;
    const Mat Di = D.inverse();
    std::vector<Mat> samples;
    samples.reserve(static_cast<size_t>(path.M));
    for (int k = 0; k < path.M; ++k) {
        const Mat2& g = path.points[static_cast<size_t>(k)];
        const Mat th = D * g * Di;                 // Theta(g)
        samples.push_back(Mat(g) * th.adjoint());  // g Theta(g)^{-1}, unitary Theta(g)
    }
    double outFrac = 0.0;
    TruncatedLoop res = loops::gridRefit(samples, W, loops::GroupTag::SL2, &outFrac);
    if (outFrac > 0.05)
        throw AliasingExcessive("projectS2: out-of-window spectral mass exceeds 5%");
    return res;
}

double invarianceBound(double energySigma, double beta) {
    const double T = 1.0 / beta;
    const HeatKernelTable pT = makeHeatKernel(T);
    const HeatKernelTable pT2 = makeHeatKernel(T / 2.0);
    const double ratio = pT2.valueAtIdentity() * pT2.valueAtIdentity() / pT.valueAtIdentity();
    return std::pow(2.0, 1.5) * ratio * std::sqrt(beta) * std::sqrt(energySigma);
}

double invarianceBound(const LoopPath& sigmaLoop, double beta) {
    return invarianceBound(paths::energy(sigmaLoop), beta);
}

std::vector<ProbeRow> invarianceProbe(
    const std::function<Cx(const LoopPath&)>& statistic, Transform transform,
    const std::vector<double>& betas, int n, int M, uint64_t seed) {
    std::vector<ProbeRow> rows;
    for (size_t bi = 0; bi < betas.size(); ++bi) {
        const double beta = betas[bi];
        const BridgeSampler sampler(beta, M);
        std::vector<double> base, moved;
        int degenerate = 0;
        for (int i = 0; i < n; ++i) {
            const uint64_t s = mixSeed(seed, (bi << 32) ^ static_cast<uint64_t>(i));
            const LoopPath p = sampler.sample(s);
            LoopPath q = p;
            switch (transform) {
                case Transform::Identity: break;
                case Transform::LeftDiagCharacter:
                    q = paths::leftMultiply(p, paths::diagCharacterLoop);
                    break;
                case Transform::Sigma:
                    q = paths::conjugateBy(p, paths::sigmaHalfLoop);
                    break;
            }
            try {
                base.push_back(std::abs(statistic(p)));
                moved.push_back(std::abs(statistic(q)));
            } catch (const Error&) {
                ++degenerate;
            }
        }
        ProbeRow row;
        row.beta = beta;
        row.kept = static_cast<int>(base.size());
        row.degenerate = degenerate;
        row.ks = stats::ksTwoSample(base, moved).distance;
        rows.push_back(row);
    }
    return rows;
}

} // namespace looplab::sampler
