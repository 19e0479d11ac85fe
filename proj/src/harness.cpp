#include "looplab/harness.hpp"

#include <nlohmann/json.hpp>

#include <future>
#include <sstream>

#include "looplab/densities.hpp"
#include "looplab/stats.hpp"

using nlohmann::json;

namespace looplab::harness {

using birkhoff::BirkhoffFactors;
using birkhoff::factorize;
using birkhoff::rhCoords;
using loops::GroupTag;
using loops::InvolutionConfig;
using loops::TruncatedLoop;

namespace {

bool isBnp(const std::string& s, int& n) {
    if (s.size() == 3 && s[0] == 'B' && s[2] == 'p' && s[1] >= '1' && s[1] <= '9') {
        n = s[1] - '0';
        return true;
    }
    return false;
}

} // namespace

void ExperimentConfig::validate() const {
    if (target != "S2" && target != "SU2_GROUP")
        throw UsageError("config: target must be S2 or SU2_GROUP");
    for (double b : betas)
        if (!(b > 0)) throw UsageError("config: betas must be positive");
    if (n_loops < 0) throw UsageError("config: n_loops >= 0");
    for (const auto& s : statistics) {
        int n = 0;
        const bool ok = isBnp(s, n) || s == "a0" || s == "b0" || s == "theta1" ||
                        s == "theta2" || s == "zeta";
        if (!ok) throw UsageError("config: unknown statistic " + s);
        if ((s == "a0" || s == "zeta") && target != "S2")
            throw UsageError("config: statistic " + s + " is only valid for the S2 target");
    }
    for (const auto& [k, v] : references)
        if (v != "EQ321" && v != "SECH_CUBED" && v != "NONE")
            throw UsageError("config: unknown reference " + v);
}

std::string configToJson(const ExperimentConfig& c) {
    json j;
    j["target"] = c.target;
    j["betas"] = c.betas;
    j["M"] = c.M;
    j["N"] = c.N;
    j["n_loops"] = c.n_loops;
    j["seed"] = c.seed;
    j["statistics"] = c.statistics;
    j["references"] = c.references;
    j["threads"] = c.threads;
    return j.dump();
}

ExperimentConfig configFromJson(const std::string& text) {
    json j = json::parse(text);
    ExperimentConfig c;
    c.target = j.at("target").get<std::string>();
    c.betas = j.at("betas").get<std::vector<double>>();
    c.M = j.at("M").get<int>();
    c.N = j.at("N").get<int>();
    c.n_loops = j.at("n_loops").get<int>();
    c.seed = j.at("seed").get<uint64_t>();
    c.statistics = j.at("statistics").get<std::vector<std::string>>();
    if (j.contains("references"))
        c.references = j.at("references").get<std::map<std::string, std::string>>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    c.validate();
    return c;
}

uint64_t configHash(const ExperimentConfig& c) {
    const std::string s = configToJson(c);
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

SampleRecord runPipeline(const ExperimentConfig& cfg, double beta, uint64_t loopSeed,
                         const sampler::BridgeSampler& bridge) {
    SampleRecord rec;
    rec.beta = beta;
    rec.M = cfg.M;
    rec.seed = loopSeed;
    const InvolutionConfig inv = InvolutionConfig::s2();
    try {
        const paths::LoopPath path = bridge.sample(loopSeed);
        TruncatedLoop loop;
        if (cfg.target == "S2") {
            loop = sampler::projectS2(path, inv, cfg.N);
        } else {
            std::vector<Mat> samples;
            samples.reserve(static_cast<size_t>(path.M));
            for (int k = 0; k < path.M; ++k)
                samples.push_back(Mat(path.points[static_cast<size_t>(k)]));
            double frac = 0.0;
            loop = loops::gridRefit(samples, cfg.N, GroupTag::SL2, &frac);
            if (frac > 0.05)
                throw AliasingExcessive("group-target refit lost >5% spectral mass");
        }
        auto res = factorize(loop);
        if (std::holds_alternative<birkhoff::StratumReport>(res)) {
            rec.failure = "LowerStratum";
            return rec;
        }
        const auto& f = std::get<BirkhoffFactors>(res);
        rec.stratum_ok = true;
        const auto coords = rhCoords(f, 8);
        for (const auto& s : cfg.statistics) {
            int n = 0;
            if (isBnp(s, n)) {
                rec.values[s] = coords.Bprime(n);
            } else if (s == "a0") {
                rec.values[s] = Cx(f.g_zero(0, 0).real(), 0.0);
            } else if (s == "b0") {
                rec.values[s] = f.g_zero(0, 1);
            } else if (s == "zeta") {
                Mat2 g0;
                g0 << f.g_zero(0, 0), f.g_zero(0, 1), f.g_zero(1, 0), f.g_zero(1, 1);
                rec.values[s] = dist::zetaCoordinate(g0);
            } else if (s == "theta1") {
                rec.theta1 = coords.theta_n[1];
                rec.values[s] = coords.theta_n[1](0, 1);
            } else if (s == "theta2") {
                rec.values[s] = coords.theta_n[2](0, 1);
            }
        }
    } catch (const Error& e) {
        rec.failure = e.what();
        rec.values.clear();
    }
    return rec;
}

std::string sampleToJsonl(const SampleRecord& r) {
    json j;
    j["beta"] = r.beta;
    j["M"] = r.M;
    j["seed"] = r.seed;
    json st;
    st["stratum_ok"] = r.stratum_ok;
    for (const auto& [k, v] : r.values) {
        if (k == "a0")
            st[k] = v.real();
        else
            st[k] = {v.real(), v.imag()};
    }
    if (r.theta1) {
        json t = json::array();
        for (int i = 0; i < r.theta1->rows(); ++i)
            for (int jj = 0; jj < r.theta1->cols(); ++jj)
                t.push_back({(*r.theta1)(i, jj).real(), (*r.theta1)(i, jj).imag()});
        st["theta1"] = t;
    }
    if (!r.failure.empty()) j["failure"] = r.failure;
    j["statistics"] = st;
    return j.dump();
}

stats::TestResult referenceKs(const std::string& reference, const std::vector<Cx>& values) {
    if (reference == "EQ321") {
        return stats::complexKs(values, dist::eq321RadialCdf).radial;
    }
    if (reference == "SECH_CUBED") {
        std::vector<double> re;
        re.reserve(values.size());
        for (const Cx& v : values) re.push_back(v.real());
        return stats::ksOneSample(re, dist::sechCubedCdf);
    }
    return {0.0, 1.0};
}

bool Report::countsReconcile() const {
    for (const auto& [key, cell] : cells)
        if (cell.samples + cell.dropped_degenerate + cell.lower_stratum != config.n_loops)
            return false;
    return true;
}

Report runExperiment(const ExperimentConfig& cfg) {
    cfg.validate();
    Report rep;
    rep.config = cfg;
    rep.config_hash = configHash(cfg);
    for (size_t bi = 0; bi < cfg.betas.size(); ++bi) {
        const double beta = cfg.betas[bi];
        std::vector<SampleRecord> recs(static_cast<size_t>(cfg.n_loops));
        if (cfg.n_loops > 0) {
            const sampler::BridgeSampler bridge(beta, cfg.M);
            const int nThreads = std::max(1, cfg.threads);
            auto worker = [&](int lo, int hi) {
                for (int i = lo; i < hi; ++i) {
                    const uint64_t s = mixSeed(cfg.seed, (static_cast<uint64_t>(bi) << 32) ^
                                                             static_cast<uint64_t>(i));
                    recs[static_cast<size_t>(i)] = runPipeline(cfg, beta, s, bridge);
                }
            };
            if (nThreads == 1) {
                worker(0, cfg.n_loops);
            } else {
                std::vector<std::future<void>> futs;
                const int chunk = (cfg.n_loops + nThreads - 1) / nThreads;
                for (int t = 0; t < nThreads; ++t)
                    futs.push_back(std::async(std::launch::async, worker, t * chunk,
                                              std::min(cfg.n_loops, (t + 1) * chunk)));
                for (auto& f : futs) f.get();
            }
        }
        int lower = 0, dropped = 0;
        for (const auto& r : recs) {
            if (r.failure == "LowerStratum") ++lower;
            else if (!r.failure.empty()) ++dropped;
        }
        rep.lowerStratumFraction.push_back(cfg.n_loops > 0 ? double(lower) / cfg.n_loops : 0.0);
        for (const auto& statName : cfg.statistics) {
            StatCell cell;
            cell.lower_stratum = lower;
            std::vector<Cx> values;
            for (const auto& r : recs) {
                if (!r.failure.empty()) continue;
                auto it = r.values.find(statName);
                if (it != r.values.end()) values.push_back(it->second);
            }
            cell.samples = static_cast<int>(values.size());
            cell.dropped_degenerate = cfg.n_loops - cell.samples - lower;
            auto refIt = cfg.references.find(statName);
            cell.reference = refIt == cfg.references.end() ? "NONE" : refIt->second;
            if (cell.reference != "NONE" && values.size() >= 100) {
                const auto tr = referenceKs(cell.reference, values);
                cell.ks_distance = tr.distance;
                cell.p_value = tr.p_value;
            }
            rep.cells.push_back({{static_cast<int>(bi), statName}, cell});
        }
    }
    return rep;
}

std::string reportToJson(const Report& r) {
    json j;
    j["config"] = json::parse(configToJson(r.config));
    j["config_hash"] = r.config_hash;
    j["version"] = r.version;
    json cells = json::array();
    for (const auto& [key, cell] : r.cells) {
        json c;
        c["beta"] = r.config.betas[static_cast<size_t>(key.first)];
        c["statistic"] = key.second;
        c["samples"] = cell.samples;
        c["dropped_degenerate"] = cell.dropped_degenerate;
        c["lower_stratum"] = cell.lower_stratum;
        c["ks_distance"] = cell.ks_distance;
        c["p_value"] = cell.p_value;
        c["reference"] = cell.reference;
        cells.push_back(c);
    }
    j["cells"] = cells;
    j["lower_stratum_fraction"] = r.lowerStratumFraction;
    j["counts_reconcile"] = r.countsReconcile();
    return j.dump(2);
}

} // namespace looplab::harness
