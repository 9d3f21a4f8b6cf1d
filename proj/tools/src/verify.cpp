#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "commands.hpp"
#include "speedlab/claims.hpp"
#include "speedlab/replicas.hpp"
#include "speedlab/rng.hpp"

namespace speedlab::cli {

namespace {

struct VerifyArgs {
    std::string suite = "quick";
    std::string config;
    std::string out;
    std::string text_out;
    SuiteConfig budgets;
    bool quiet = false;
};

std::size_t to_size(const std::string& v) {
    std::size_t pos = 0;
    const auto x = std::stoull(v, &pos, 0);
    if (pos != v.size()) throw std::invalid_argument("not an integer: '" + v + "'");
    return static_cast<std::size_t>(x);
}

// Flag name (without "--") -> setter; the config file accepts exactly these keys.
std::map<std::string, std::function<void(const std::string&)>> setters(VerifyArgs& a) {
    auto& b = a.budgets;
    return {
        {"suite", [&a](const std::string& v) { a.suite = v; }},
        {"out", [&a](const std::string& v) { a.out = v; }},
        {"text-out", [&a](const std::string& v) { a.text_out = v; }},
        {"seed", [&b](const std::string& v) { b.seed = to_size(v); }},
        {"jobs", [&b](const std::string& v) { b.jobs = static_cast<unsigned>(to_size(v)); }},
        {"tasep-replicas", [&b](const std::string& v) { b.tasep_replicas = to_size(v); }},
        {"stationarity-replicas", [&b](const std::string& v) { b.stationarity_replicas = to_size(v); }},
        {"asep-replicas", [&b](const std::string& v) { b.asep_replicas = to_size(v); }},
        {"symmetry-replicas", [&b](const std::string& v) { b.symmetry_replicas = to_size(v); }},
        {"multiline-samples", [&b](const std::string& v) { b.multiline_samples = to_size(v); }},
        {"reversal-words", [&b](const std::string& v) { b.reversal_words = to_size(v); }},
    };
}

void run_verify(VerifyArgs& a, CLI::App& sub, int& exit_code) {
    if (!a.config.empty()) {
        const auto kv = read_key_values(a.config);
        auto set = setters(a);
        for (const auto& [key, value] : kv) {
            auto it = set.find(key);
            if (it == set.end()) throw std::invalid_argument("unknown config key '" + key + "' in " + a.config);
            // flags given on the command line win over the file
            if (sub.get_option("--" + key)->count() == 0) it->second(value);
        }
    }
    if (a.suite != "quick" && a.suite != "full") throw std::invalid_argument("suite must be quick or full");
    if (a.budgets.jobs == 0) a.budgets.jobs = 1;

    const auto specs = a.suite == "full" ? full_suite(a.budgets) : quick_suite(a.budgets);
    RunOptions opt;
    opt.suite = a.suite;
    opt.seed = a.budgets.seed;
    opt.jobs = a.budgets.jobs;
    if (!a.quiet)
        opt.on_result = [](const ClaimResult& r) {
            std::fprintf(stderr, "%-34s %s  %.1f s\n", r.id.c_str(), r.pass ? "pass" : "FAIL", r.seconds);
        };
    const auto report = run_claims(specs, opt);

    if (!a.out.empty()) {
        Output o(a.out);
        o.stream() << report.to_json();
    }
    Output t(a.text_out);
    t.stream() << report.to_text();
    exit_code = report.all_passed() ? 0 : 2;
}

}  // namespace

void add_verify(CLI::App& app, int& exit_code) {
    auto a = std::make_shared<VerifyArgs>();
    a->budgets.seed = default_seed();
    a->budgets.jobs = default_jobs();
    auto& b = a->budgets;
    auto* sub = app.add_subcommand("verify", "Run the claim suites and write a test report");
    sub->add_option("--suite", a->suite, "quick (exact identities) or full (adds Monte Carlo claims)")
        ->capture_default_str();
    sub->add_option("--config", a->config, "key = value file mirroring these flags")->check(CLI::ExistingFile);
    sub->add_option("--seed", b.seed, "suite seed (default from SPEEDLAB_SEED)")->capture_default_str();
    sub->add_option("--out", a->out, "JSON report path");
    sub->add_option("--text-out", a->text_out, "text table path (default stdout)");
    sub->add_option("--jobs", b.jobs, "worker threads")->capture_default_str();
    sub->add_option("--tasep-replicas", b.tasep_replicas, "TASEP t=500 batch and t=2000 (U0, U4) batch")->capture_default_str();
    sub->add_option("--stationarity-replicas", b.stationarity_replicas, "t1=1000 batch, per half")
        ->capture_default_str();
    sub->add_option("--asep-replicas", b.asep_replicas, "ASEP p=0.7 batch")->capture_default_str();
    sub->add_option("--symmetry-replicas", b.symmetry_replicas, "t=3 symmetry batch, per side")
        ->capture_default_str();
    sub->add_option("--multiline-samples", b.multiline_samples, "stationary pair samples")->capture_default_str();
    sub->add_option("--reversal-words", b.reversal_words, "random words for the reversal check")
        ->capture_default_str();
    sub->add_flag("--quiet", a->quiet, "no per-claim progress on stderr");
    sub->callback([a, sub, &exit_code] { run_verify(*a, *sub, exit_code); });
}

}  // namespace speedlab::cli
