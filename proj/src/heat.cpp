#include "looplab/heat.hpp"

#include <algorithm>
#include <cmath>

namespace looplab::heat {

namespace {
constexpr int kCdfGrid = 8192;
}

double haarAngleDensity(double theta) {
    const double s = std::sin(theta);
    return (2.0 / kPi) * s * s;
}

int autoNmax(double t, int cap) {
    // tail sum_{n>N} n^2 e^{-(n^2-1)t/2} below 1e-14 (crude union bound)
    double tail = 1.0;
    for (int n = 2; n <= cap; ++n) {
        tail = 0.0;
        for (int m = n + 1; m <= n + 64; ++m) tail += m * m * std::exp(-(double(m) * m - 1.0) * t / 2.0);
        if (tail < 1e-14) return n;
    }
    if (tail > 1e-10)
        throw TruncationInsufficient("heat kernel: series cap insufficient for this t");
    return cap;
}

HeatKernelTable::HeatKernelTable(double t, int nMax) : t_(t), nMax_(nMax) {
    if (!(t > 0.0)) throw UsageError("heat kernel: t must be positive");
    // verify the requested truncation is adequate
    double tail = 0.0;
    for (int m = nMax_ + 1; m <= nMax_ + 64; ++m)
        tail += m * m * std::exp(-(double(m) * m - 1.0) * t_ / 2.0);
    if (tail > 1e-10)
        throw TruncationInsufficient("heat kernel: n_max tail bound above 1e-10");
}

double HeatKernelTable::value(double theta) const {
    theta = std::abs(theta);
    const double s = std::sin(theta);
    double acc = 0.0;
    if (s < 1e-6) {
        // sin(n theta)/sin(theta) = n (1 - (n^2-1) theta^2/6 + O(theta^4))
        for (int n = 1; n <= nMax_; ++n) {
            const double w = n * std::exp(-(double(n) * n - 1.0) * t_ / 2.0);
            acc += w * n * (1.0 - (double(n) * n - 1.0) * theta * theta / 6.0);
        }
        return acc;
    }
    for (int n = 1; n <= nMax_; ++n)
        acc += n * std::exp(-(double(n) * n - 1.0) * t_ / 2.0) * std::sin(n * theta) / s;
    return acc;
}

double HeatKernelTable::valueAtIdentity() const { return value(0.0); }

double HeatKernelTable::radialDensity(double theta) const {
    return value(theta) * haarAngleDensity(theta);
}

void HeatKernelTable::buildCdf() const {
    grid_.resize(kCdfGrid + 1);
    cdf_.resize(kCdfGrid + 1);
    std::vector<double> dens(kCdfGrid + 1);
    for (int i = 0; i <= kCdfGrid; ++i) {
        grid_[static_cast<size_t>(i)] = kPi * i / kCdfGrid;
        dens[static_cast<size_t>(i)] = std::max(0.0, radialDensity(grid_[static_cast<size_t>(i)]));
    }
    cdf_[0] = 0.0;
    for (int i = 1; i <= kCdfGrid; ++i) {
        const double h = grid_[static_cast<size_t>(i)] - grid_[static_cast<size_t>(i - 1)];
        cdf_[static_cast<size_t>(i)] = cdf_[static_cast<size_t>(i - 1)] +
                                       0.5 * h * (dens[static_cast<size_t>(i)] + dens[static_cast<size_t>(i - 1)]);
    }
    const double total = cdf_[kCdfGrid];
    for (auto& c : cdf_) c /= total;
}

double HeatKernelTable::haarIntegral() const {
    double acc = 0.0;
    const int m = 4096;
    for (int i = 0; i < m; ++i) {
        const double th = kPi * (i + 0.5) / m;
        acc += radialDensity(th) * kPi / m;
    }
    return acc;
}

void HeatKernelTable::prepareSampling() const {
    if (cdf_.empty()) buildCdf();
}

double HeatKernelTable::sampleAngle(Rng& rng) const {
    if (cdf_.empty()) buildCdf();
    const double u = rng.uniform();
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    size_t i = static_cast<size_t>(std::distance(cdf_.begin(), it));
    if (i == 0) i = 1;
    if (i >= cdf_.size()) i = cdf_.size() - 1;
    const double c0 = cdf_[i - 1], c1 = cdf_[i];
    const double w = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.5;
    return grid_[i - 1] + w * (grid_[i] - grid_[i - 1]);
}

HeatKernelTable makeHeatKernel(double t, int nMax) {
    if (nMax < 1) nMax = autoNmax(t);
    return HeatKernelTable(t, nMax);
}

} // namespace looplab::heat
