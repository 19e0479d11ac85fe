#include "looplab/stats.hpp"

#include <algorithm>
#include <cmath>

namespace looplab::stats {

double kolmogorovP(double d, size_t n) {
    // Stephens' asymptotic correction
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    if (lambda < 0.2) return 1.0;
    double p = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 101; ++k) {
        p += sign * 2.0 * std::exp(-2.0 * k * k * lambda * lambda);
        sign = -sign;
    }
    return std::clamp(p, 0.0, 1.0);
}

double kuiperP(double v, size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.155 + 0.24 / sn) * v;
    if (lambda < 0.4) return 1.0;
    double p = 0.0;
    for (int k = 1; k <= 101; ++k) {
        const double a = 2.0 * k * k * lambda * lambda;
        p += 2.0 * (2.0 * a - 1.0) * std::exp(-a);
    }
    return std::clamp(p, 0.0, 1.0);
}

TestResult ksOneSample(std::vector<double> samples,
                       const std::function<double(double)>& cdf) {
    if (samples.size() < 100)
        throw InsufficientSamples("ksOneSample: need at least 100 samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double c = cdf(samples[i]);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - c));
        d = std::max(d, std::abs(c - static_cast<double>(i) / n));
    }
    return {d, kolmogorovP(d, samples.size())};
}

TestResult ksTwoSample(std::vector<double> a, std::vector<double> b) {
    if (a.size() < 100 || b.size() < 100)
        throw InsufficientSamples("ksTwoSample: need at least 100 samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                                 static_cast<double>(j) / b.size()));
    }
    const double ne = static_cast<double>(a.size()) * b.size() / (a.size() + b.size());
    return {d, kolmogorovP(d, static_cast<size_t>(ne))};
}

TestResult kuiperUniform(std::vector<double> angles) {
    if (angles.size() < 100)
        throw InsufficientSamples("kuiperUniform: need at least 100 samples");
    for (auto& t : angles) {
        t = std::fmod(t, 2.0 * kPi);
        if (t < 0) t += 2.0 * kPi;
        t /= 2.0 * kPi;
    }
    std::sort(angles.begin(), angles.end());
    const double n = static_cast<double>(angles.size());
    double dp = 0.0, dm = 0.0;
    for (size_t i = 0; i < angles.size(); ++i) {
        dp = std::max(dp, static_cast<double>(i + 1) / n - angles[i]);
        dm = std::max(dm, angles[i] - static_cast<double>(i) / n);
    }
    const double v = dp + dm;
    return {v, kuiperP(v, angles.size())};
}

ComplexTest complexKs(const std::vector<Cx>& samples,
                      const std::function<double(double)>& radialCdf) {
    std::vector<double> radii, angles;
    radii.reserve(samples.size());
    angles.reserve(samples.size());
    for (const Cx& z : samples) {
        radii.push_back(std::abs(z));
        angles.push_back(std::arg(z));
    }
    ComplexTest out;
    out.radial = ksOneSample(std::move(radii), radialCdf);
    out.angular = kuiperUniform(std::move(angles));
    return out;
}

} // namespace looplab::stats
