#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include "commands.hpp"
#include "speedlab/multiline.hpp"
#include "speedlab/replicas.hpp"
#include "speedlab/rng.hpp"

namespace speedlab::cli {

namespace {

struct StationaryArgs {
    std::string densities;
    std::size_t length = 10;
    long burn_in = -1;
    std::size_t samples = 1;
    std::uint64_t seed = 0;
    std::string out;
    std::string pairs_out;
    unsigned jobs = 1;
};

void run_stationary(const StationaryArgs& a) {
    const auto lambda = parse_doubles(a.densities);
    validate_densities(lambda);
    if (a.length == 0) throw std::invalid_argument("--length must be positive");
    const RngStream root(a.seed, 0x57A);
    const auto seqs = run_replicas<std::vector<int>>(a.samples, a.jobs, [&](std::size_t i) {
        RngStream rng = root.substream(i);
        return sample_stationary(lambda, a.length, a.burn_in, rng);
    });

    if (!a.out.empty()) {
        Output o(a.out);
        auto& s = o.stream();
        s << "sample,site,class\n";
        for (std::size_t i = 0; i < seqs.size(); ++i)
            for (std::size_t j = 0; j < seqs[i].size(); ++j) s << i << ',' << j << ',' << seqs[i][j] << '\n';
    }

    // adjacent pairs (site j, j+1) pooled over samples and positions
    const int k = static_cast<int>(lambda.size());
    std::vector<double> counts(static_cast<std::size_t>(k * k), 0.0);
    double total = 0.0;
    for (const auto& seq : seqs)
        for (std::size_t j = 0; j + 1 < seq.size(); ++j) {
            counts[static_cast<std::size_t>((seq[j] - 1) * k + (seq[j + 1] - 1))] += 1.0;
            total += 1.0;
        }
    Output o(a.pairs_out);
    auto& s = o.stream();
    s << "left,right,count,frequency,standard_error\n";
    for (int x = 1; x <= k; ++x)
        for (int y = 1; y <= k; ++y) {
            const double c = counts[static_cast<std::size_t>((x - 1) * k + (y - 1))];
            const double f = total > 0.0 ? c / total : 0.0;
            const double se = total > 0.0 ? std::sqrt(f * (1.0 - f) / total) : 0.0;
            s << x << ',' << y << ',' << static_cast<long long>(c) << ',' << fmt(f) << ',' << fmt(se) << '\n';
        }
}

}  // namespace

void add_stationary(CLI::App& app) {
    auto a = std::make_shared<StationaryArgs>();
    a->seed = default_seed();
    a->jobs = default_jobs();
    auto* sub = app.add_subcommand("stationary", "Sample the multi-type stationary measure with the multi-line process");
    sub->add_option("--densities", a->densities, "class densities, comma separated, summing to 1")->required();
    sub->add_option("--length", a->length, "sites per sample")->capture_default_str();
    sub->add_option("--burn-in", a->burn_in, "extra columns discarded at the right end (-1: automatic)")
        ->capture_default_str();
    sub->add_option("--samples", a->samples, "independent samples")->capture_default_str();
    sub->add_option("--seed", a->seed, "seed (default from SPEEDLAB_SEED)")->capture_default_str();
    sub->add_option("--out", a->out, "class-sequence CSV (sample, site, class); '-' for stdout");
    sub->add_option("--pairs-out", a->pairs_out, "adjacent-pair frequency CSV (default stdout)");
    sub->add_option("--jobs", a->jobs, "worker threads")->capture_default_str();
    sub->callback([a] { run_stationary(*a); });
}

}  // namespace speedlab::cli
