#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "looplab/harness.hpp"
#include "looplab/suites.hpp"

using nlohmann::json;
using namespace looplab;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << text << "\n";
}

int cmdFactorize(const std::string& inPath, const std::string& outPath) {
    const auto g = loops::loopFromJson(slurp(inPath));
    const auto res = birkhoff::factorize(g);
    if (const auto* f = std::get_if<birkhoff::BirkhoffFactors>(&res)) {
        spit(outPath, birkhoff::factorsToJson(*f));
        return 0;
    }
    spit(outPath, birkhoff::stratumToJson(std::get<birkhoff::StratumReport>(res)));
    return 1;
}

int cmdVerify(const std::string& suite, int trials, uint64_t seed, double tol) {
    const auto res = suites::runSuite(suite, trials, seed, tol);
    std::cout << res.toJson() << "\n";
    return res.passed() ? 0 : 1;
}

int cmdSample(const std::string& target, double beta, int M, int loops, uint64_t seed,
              const std::string& outPath, int N) {
    harness::ExperimentConfig cfg;
    cfg.target = target == "su2" ? "SU2_GROUP" : "S2";
    cfg.betas = {beta};
    cfg.M = M;
    cfg.N = N;
    cfg.n_loops = loops;
    cfg.seed = seed;
    cfg.statistics = {"B1p", "b0", "theta1"};
    if (cfg.target == "S2") {
        cfg.statistics.push_back("a0");
        cfg.statistics.push_back("zeta");
    }
    cfg.validate();
    std::ofstream out(outPath);
    if (!out) throw UsageError("cannot write " + outPath);
    const sampler::BridgeSampler bridge(beta, M);
    for (int i = 0; i < loops; ++i) {
        const uint64_t s = mixSeed(seed, static_cast<uint64_t>(i));
        out << harness::sampleToJsonl(harness::runPipeline(cfg, beta, s, bridge)) << "\n";
    }
    return 0;
}

int cmdStats(const std::string& inPath, const std::string& statistic,
             const std::string& reference, const std::string& outPath) {
    std::ifstream in(inPath);
    if (!in) throw UsageError("cannot open " + inPath);
    std::vector<Cx> values;
    int lower = 0, dropped = 0, total = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++total;
        const json j = json::parse(line);
        if (j.contains("failure")) {
            (j["failure"] == "LowerStratum" ? lower : dropped) += 1;
            continue;
        }
        const auto& st = j.at("statistics");
        if (!st.contains(statistic)) {
            ++dropped;
            continue;
        }
        if (statistic == "a0")
            values.push_back(Cx(st[statistic].get<double>(), 0.0));
        else
            values.push_back(Cx(st[statistic][0].get<double>(), st[statistic][1].get<double>()));
    }
    const auto tr = harness::referenceKs(reference, values);
    json rep;
    rep["statistic"] = statistic;
    rep["reference"] = reference;
    rep["samples"] = values.size();
    rep["lower_stratum"] = lower;
    rep["dropped_degenerate"] = dropped;
    rep["total"] = total;
    rep["ks_distance"] = tr.distance;
    rep["p_value"] = tr.p_value;
    spit(outPath, rep.dump(2));
    return 0;
}

int cmdSpecial(const std::string& check, uint64_t seed) {
    const auto r = suites::specialCheck(check, seed);
    std::cout << r.json << "\n";
    return r.pass ? 0 : 1;
}

int cmdRun(const std::string& cfgPath, const std::string& outPath) {
    const auto cfg = harness::configFromJson(slurp(cfgPath));
    const auto rep = harness::runExperiment(cfg);
    spit(outPath, harness::reportToJson(rep));
    return rep.countsReconcile() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"loop-group Birkhoff factorization laboratory"};
    app.require_subcommand(1);

    auto* fac = app.add_subcommand("factorize", "Birkhoff-factorize a loop JSON file");
    std::string facIn, facOut = "factors.json";
    fac->add_option("--in", facIn, "loop JSON input")->required();
    fac->add_option("--out", facOut, "factors/stratum JSON output");

    auto* ver = app.add_subcommand("verify", "run a verification suite");
    std::string suite;
    int trials = 200;
    uint64_t seed = 7;
    double tol = 1e-9;
    ver->add_option("--suite", suite, "suite name")
        ->required()
        ->check(CLI::IsMember({"lemma38", "cor313", "lemma44", "lemma52", "lemma61",
                               "recursion617", "appb", "appc", "special"}));
    ver->add_option("--trials", trials, "trial count");
    ver->add_option("--seed", seed, "RNG seed");
    ver->add_option("--tol", tol, "tolerance");

    auto* smp = app.add_subcommand("sample", "sample loops and emit JSONL records");
    std::string target = "s2", smpOut = "samples.jsonl";
    double beta = 1.0;
    int steps = 256, loops = 100, window = kWorkWindow;
    uint64_t smpSeed = 0;
    bool smpSeedSet = false;
    smp->add_option("--target", target)->check(CLI::IsMember({"su2", "s2"}));
    smp->add_option("--beta", beta, "inverse temperature")->required();
    smp->add_option("--steps", steps, "path discretization M");
    smp->add_option("--loops", loops, "number of loops");
    smp->add_option("--seed", smpSeed, "RNG seed (mandatory)")
        ->required()
        ->each([&](const std::string&) { smpSeedSet = true; });
    smp->add_option("--window", window, "degree window N");
    smp->add_option("--out", smpOut, "output JSONL path");

    auto* sts = app.add_subcommand("stats", "KS-test a sampled statistic");
    std::string stsIn, statName = "B1p", ref = "EQ321", stsOut = "report.json";
    sts->add_option("--in", stsIn)->required();
    sts->add_option("--statistic", statName);
    sts->add_option("--reference", ref);
    sts->add_option("--out", stsOut);

    auto* spc = app.add_subcommand("special", "run a scalar analytic check");
    std::string check;
    uint64_t spcSeed = 7;
    spc->add_option("--check", check)
        ->required()
        ->check(CLI::IsMember({"f-rho", "fourier75", "diag72", "heat-semigroup",
                               "coherence331", "eq330-pushforward"}));
    spc->add_option("--seed", spcSeed);

    auto* run = app.add_subcommand("run", "run an experiment config end to end");
    std::string runCfg, runOut = "report.json";
    run->add_option("--config", runCfg)->required();
    run->add_option("--out", runOut);

    try {
        app.parse(argc, argv);
        if (fac->parsed()) return cmdFactorize(facIn, facOut);
        if (ver->parsed()) return cmdVerify(suite, trials, seed, tol);
        if (smp->parsed()) return cmdSample(target, beta, steps, loops, smpSeed, smpOut, window);
        if (sts->parsed()) return cmdStats(stsIn, statName, ref, stsOut);
        if (spc->parsed()) return cmdSpecial(check, spcSeed);
        if (run->parsed()) return cmdRun(runCfg, runOut);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        json fail;
        fail["error"] = e.what();
        std::cerr << fail.dump() << "\n";
        return 1;
    }
    return 2;
}
