#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "looplab/heat.hpp"
#include "looplab/loop.hpp"
#include "looplab/path.hpp"

namespace looplab::sampler {

using loops::InvolutionConfig;
using loops::TruncatedLoop;
using paths::LoopPath;

struct BridgeOptions {
    int rejectionCap = 400;       // per-step proposals before fallback
    int pathRestartCap = 8;       // whole-path restarts before Metropolis
    bool metropolisEnabled = true;
    int metropolisSweeps = 64;
};

// Closed Brownian bridge on SU(2): increments over ds = 1/M follow the heat
// kernel at time ds/beta, conditioned on points[M] = points[0] = 1. Holds the
// per-(beta, M) kernel tables so batches amortize their construction.
// sample() is deterministic in (beta, M, seed) and safe to call concurrently.
class BridgeSampler {
  public:
    BridgeSampler(double beta, int M, BridgeOptions opts = BridgeOptions());

    LoopPath sample(uint64_t seed) const;
    Mat2 freeEndpoint(uint64_t seed) const;  // unconditioned path at s = 1

    double beta() const { return beta_; }
    int steps() const { return M_; }
    const heat::HeatKernelTable& stepKernel() const { return *step_; }

  private:
    double beta_;
    int M_;
    BridgeOptions opts_;
    std::shared_ptr<heat::HeatKernelTable> step_;
    std::vector<std::shared_ptr<heat::HeatKernelTable>> rem_;  // r steps remaining
};

LoopPath sampleBridge(double beta, int M, uint64_t seed,
                      const BridgeOptions& opts = BridgeOptions());

// g -> g g^{-Theta} pointwise, refit to the window [-W, W].
// Throws AliasingExcessive when >5% of spectral power falls outside.
TruncatedLoop projectS2(const LoopPath& path, const InvolutionConfig& cfg,
                        int W = kWorkWindow);

// Right-hand side of the asymptotic-invariance bound:
// 2^{3/2} (p_{T/2}(1)^2 / p_T(1)) beta^{1/2} E(sigma)^{1/2}, T = 1/beta.
double invarianceBound(const LoopPath& sigmaLoop, double beta);
double invarianceBound(double energySigma, double beta);

enum class Transform { Identity, LeftDiagCharacter, Sigma };

struct ProbeRow {
    double beta = 0.0;
    double ks = 0.0;
    int kept = 0;
    int degenerate = 0;
};

// Samples n loops per beta, pushes a scalar statistic through the pipeline
// with and without the transform, and reports two-sample KS distances.
std::vector<ProbeRow> invarianceProbe(
    const std::function<Cx(const LoopPath&)>& statistic, Transform transform,
    const std::vector<double>& betas, int n, int M, uint64_t seed);

} // namespace looplab::sampler
