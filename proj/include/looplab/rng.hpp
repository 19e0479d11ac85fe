#pragma once

#include <cmath>
#include <cstdint>

#include "looplab/numerics.hpp"

namespace looplab {

// splitmix64, used both as a generator and to derive independent streams
// from (seed, counter) pairs so batch work is scheduling-independent.
inline uint64_t splitmix64(uint64_t& s) {
    uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t mixSeed(uint64_t seed, uint64_t stream) {
    uint64_t s = seed ^ (0x2545f4914f6cdd1dULL * (stream + 1));
    splitmix64(s);
    return splitmix64(s);
}

// xoshiro256** seeded via splitmix64. Self-contained so sampled values are
// identical across standard libraries.
class Rng {
  public:
    explicit Rng(uint64_t seed = 1) { reseed(seed); }
    Rng(uint64_t seed, uint64_t stream) { reseed(mixSeed(seed, stream)); }

    void reseed(uint64_t seed) {
        uint64_t s = seed;
        for (auto& w : state_) w = splitmix64(s);
        haveSpare_ = false;
    }

    uint64_t nextU64() {
        auto rotl = [](uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(nextU64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Box-Muller
    double normal() {
        if (haveSpare_) {
            haveSpare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * kPi * u2);
        haveSpare_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

    Cx normalCx() { return Cx(normal(), normal()); }

    // chi-square with 2 degrees of freedom (= 2 Exp(1))
    double chi2_2() {
        double u = 0.0;
        while (u == 0.0) u = uniform();
        return -2.0 * std::log(u);
    }

  private:
    uint64_t state_[4] = {1, 2, 3, 4};
    bool haveSpare_ = false;
    double spare_ = 0.0;
};

} // namespace looplab
