#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "looplab/birkhoff.hpp"
#include "looplab/sampler.hpp"

namespace looplab::harness {

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentConfig {
    std::string target = "S2";  // SU2_GROUP | S2
    std::vector<double> betas;
    int M = 256;
    int N = kWorkWindow;
    int n_loops = 0;
    uint64_t seed = 0;
    std::vector<std::string> statistics;          // B1p, B2p..B6p, a0, b0, theta1, zeta
    std::map<std::string, std::string> references;  // statistic -> EQ321 | SECH_CUBED | NONE
    int threads = 1;

    void validate() const;
};

std::string configToJson(const ExperimentConfig& c);
ExperimentConfig configFromJson(const std::string& text);
uint64_t configHash(const ExperimentConfig& c);  // FNV-1a of the canonical dump

// One sampled loop pushed through the pipeline.
struct SampleRecord {
    double beta = 0.0;
    int M = 0;
    uint64_t seed = 0;
    bool stratum_ok = false;
    std::map<std::string, Cx> values;  // per-statistic value
    std::optional<Mat> theta1;
    std::string failure;  // empty when kept
};

SampleRecord runPipeline(const ExperimentConfig& cfg, double beta, uint64_t loopSeed,
                         const sampler::BridgeSampler& bridge);

std::string sampleToJsonl(const SampleRecord& r);

struct StatCell {
    int samples = 0;
    int dropped_degenerate = 0;
    int lower_stratum = 0;
    double ks_distance = 0.0;
    double p_value = 1.0;
    std::string reference;
};

struct Report {
    ExperimentConfig config;
    // key = (beta index, statistic)
    std::vector<std::pair<std::pair<int, std::string>, StatCell>> cells;
    std::vector<double> lowerStratumFraction;  // per beta
    uint64_t config_hash = 0;
    std::string version = kVersion;

    bool countsReconcile() const;
};

Report runExperiment(const ExperimentConfig& cfg);
std::string reportToJson(const Report& r);

// KS of a sampled statistic against a named reference law.
stats::TestResult referenceKs(const std::string& reference, const std::vector<Cx>& values);

} // namespace looplab::harness
