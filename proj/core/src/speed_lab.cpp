#include "speedlab/speed_lab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "speedlab/harris.hpp"
#include "speedlab/multiline.hpp"
#include "speedlab/replicas.hpp"

namespace speedlab {

double SpeedEstimate::speed(Label label) const {
    for (const auto& p : particles)
        if (p.label == label) return p.speed;
    throw std::out_of_range("SpeedEstimate: particle " + std::to_string(label) + " not estimated");
}

SpeedEstimate estimate_speeds(const SimResult& sim, std::span<const Label> particles, bool require_certified) {
    if (!(sim.horizon > 0.0)) throw std::invalid_argument("estimate_speeds: horizon must be > 0");
    SpeedEstimate est;
    est.horizon = sim.horizon;
    est.certificate = sim.certificate;
    est.particles.reserve(particles.size());
    for (Label n : particles) {
        const Site x = sim.tracker.position(n);
        const bool ok = sim.certificate.safe(x);
        if (!ok && require_certified)
            throw std::runtime_error("estimate_speeds: window too small (particle " + std::to_string(n) +
                                     " at site " + std::to_string(x) + " is not certified)");
        const double u = static_cast<double>(x - sim.tracker.initial_position(n)) / sim.horizon;
        est.particles.push_back({n, x, u, ok});
    }
    return est;
}

Site kinetic_margin(double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("kinetic_margin: t must be >= 0");
    return static_cast<Site>(std::ceil(t + 8.0 * std::sqrt(t) + 20.0));
}

SimResult simulate_projected(const ProjectedRun& run, RngStream& rng, SimObserver* observer) {
    if (run.first > run.last) throw std::invalid_argument("simulate_projected: first > last");
    const Site m = kinetic_margin(run.horizon);
    const Site lo = run.first - m;
    const auto length = static_cast<std::size_t>(run.last - run.first + 1 + 2 * m);
    const auto init = projected_canonical_config(lo, length, run.first, run.last);
    return simulate_kinetic(init, {run.mode, run.p, run.horizon, observer}, rng);
}

// ---- empirical measure ----

EmpiricalMeasure::EmpiricalMeasure(double horizon) : horizon_(horizon) {
    if (!(horizon > 0.0)) throw std::invalid_argument("EmpiricalMeasure: horizon must be > 0");
}

void EmpiricalMeasure::add(const SpeedEstimate& est) {
    for (const auto& p : est.particles) points_.emplace_back(static_cast<double>(p.label) / horizon_, p.speed);
}

std::vector<std::size_t> EmpiricalMeasure::histogram(double x0, double x1, int nx, double y0, double y1,
                                                     int ny) const {
    if (nx < 1 || ny < 1 || !(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("histogram: bad grid");
    std::vector<std::size_t> h(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), 0);
    for (auto [x, y] : points_) {
        if (x < x0 || x >= x1 || y < y0 || y >= y1) continue;
        const int i = std::min(nx - 1, static_cast<int>((x - x0) / (x1 - x0) * nx));
        const int j = std::min(ny - 1, static_cast<int>((y - y0) / (y1 - y0) * ny));
        ++h[static_cast<std::size_t>(i) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(j)];
    }
    return h;
}

// ---- observers ----

AdjacencyLedger::AdjacencyLedger(const Configuration& initial, std::vector<std::pair<Label, Label>> pairs,
                                 std::vector<double> snapshots)
    : pairs_(std::move(pairs)), snapshots_(std::move(snapshots)) {
    const TrajectoryTracker tr(initial);
    for (auto [a, b] : pairs_) pos_.emplace_back(tr.position(a), tr.position(b));
    j_.assign(pairs_.size(), 0.0);
    hits_.assign(pairs_.size(), 0);
}

void AdjacencyLedger::advance(double time) {
    const double dt = time - last_;
    if (dt <= 0.0) return;
    for (std::size_t k = 0; k < pairs_.size(); ++k)
        if (std::abs(pos_[k].first - pos_[k].second) == 1) j_[k] += dt;
    last_ = time;
}

void AdjacencyLedger::on_event(double time, Site bond, bool swapped, const Configuration&,
                               const TrajectoryTracker& tracker) {
    advance(time);
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
        auto& [xa, xb] = pos_[k];
        if (std::min(xa, xb) == bond && std::abs(xa - xb) == 1) ++hits_[k];
        if (swapped) {
            xa = tracker.position(pairs_[k].first);
            xb = tracker.position(pairs_[k].second);
        }
    }
}

void AdjacencyLedger::on_snapshot(double time, const Configuration&, const TrajectoryTracker&, const Certificate&) {
    advance(time);
    j_snap_.push_back(j_);
}

void AdjacencyLedger::finish(double horizon) { advance(horizon); }

PairOrderProbe::PairOrderProbe(const Configuration& initial, Label a, Label b, std::vector<double> snapshots)
    : a_(a), b_(b), snapshots_(std::move(snapshots)) {
    const TrajectoryTracker tr(initial);
    unswapped_ = tr.position(a) < tr.position(b);
}

void PairOrderProbe::on_event(double time, Site, bool swapped, const Configuration&,
                              const TrajectoryTracker& tracker) {
    if (!swapped) return;
    const bool now = tracker.position(a_) < tracker.position(b_);
    if (now == unswapped_) return;
    if (unswapped_) integral_ += time - last_;
    last_ = time;
    unswapped_ = now;
}

void PairOrderProbe::on_snapshot(double time, const Configuration& config, const TrajectoryTracker& tracker,
                                 const Certificate&) {
    double integral = integral_ + (unswapped_ ? time - last_ : 0.0);
    std::int64_t r = 0;
    const Site xa = tracker.position(a_);
    for (Site s = config.lo(); s < xa; ++s)
        if (config[s] > a_) ++r;
    records_.push_back({time, unswapped_, integral, r});
}

void ObserverFanout::on_event(double time, Site bond, bool swapped, const Configuration& config,
                              const TrajectoryTracker& tracker) {
    for (auto* t : targets_) t->on_event(time, bond, swapped, config, tracker);
}

std::vector<double> ObserverFanout::snapshot_times() const {
    std::vector<double> all;
    for (auto* t : targets_) {
        auto s = t->snapshot_times();
        all.insert(all.end(), s.begin(), s.end());
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

void ObserverFanout::on_snapshot(double time, const Configuration& config, const TrajectoryTracker& tracker,
                                 const Certificate& certificate) {
    for (auto* t : targets_) {
        const auto s = t->snapshot_times();
        if (std::binary_search(s.begin(), s.end(), time)) t->on_snapshot(time, config, tracker, certificate);
    }
}

// ---- swaps ----

std::int64_t count_swaps(const SimResult& sim, Label a) {
    const auto& c = sim.final;
    if (!(sim.certificate.left <= c.lo() && sim.certificate.right >= c.hi()))
        throw std::runtime_error("count_swaps: window too small (certificate does not cover the window)");
    const Site xa = sim.tracker.position(a);
    std::int64_t r = 0;
    for (Site s = c.lo(); s < xa; ++s)
        if (c[s] > a) ++r;
    return r;
}

SampleSummary unswapped_prob(std::span<const SimResult> sims, Label a, Label b) {
    std::size_t hits = 0;
    for (const auto& s : sims)
        if (s.tracker.position(a) < s.tracker.position(b)) ++hits;
    return proportion(hits, sims.size());
}

// ---- convoys ----

std::vector<std::vector<Label>> detect_convoys(const SpeedEstimate& est, double delta) {
    if (!(delta >= 0.0)) throw std::invalid_argument("detect_convoys: delta must be >= 0");
    std::vector<std::pair<double, Label>> v;
    for (const auto& p : est.particles) v.emplace_back(p.speed, p.label);
    std::sort(v.begin(), v.end());
    std::vector<std::vector<Label>> groups;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i == 0 || v[i].first - v[i - 1].first > delta) groups.emplace_back();
        groups.back().push_back(v[i].second);
    }
    for (auto& g : groups) std::sort(g.begin(), g.end());
    return groups;
}

bool same_convoy(const std::vector<std::vector<Label>>& groups, std::span<const Label> labels) {
    if (labels.empty()) return true;
    for (const auto& g : groups) {
        if (!std::binary_search(g.begin(), g.end(), labels[0])) continue;
        return std::all_of(labels.begin(), labels.end(),
                           [&](Label l) { return std::binary_search(g.begin(), g.end(), l); });
    }
    return false;
}

double default_convoy_delta(double t) {
    if (!(t > 0.0)) throw std::invalid_argument("default_convoy_delta: t must be > 0");
    return std::pow(t, -0.25);
}

// ---- experiments ----

namespace {

struct PairSample {
    int a = 0, b = 0;  // 0 marks a certificate failure
    double u0 = 0.0, u1 = 0.0;
};

}  // namespace

StationarityReport stationarity_experiment(const StationarityOptions& o) {
    if (o.replicas == 0) throw std::invalid_argument("stationarity_experiment: replicas must be > 0");
    if (o.half_width < 1) throw std::invalid_argument("stationarity_experiment: half_width must be >= 1");
    if (!(o.t1 > 0.0) || !(o.t2 >= 0.0)) throw std::invalid_argument("stationarity_experiment: bad horizons");
    const ClassProjection proj(o.thresholds);
    const int k = proj.class_count();
    const Label first = -o.half_width, last = o.half_width + 1;
    std::vector<Label> labels;
    for (Label n = first; n <= last; ++n) labels.push_back(n);

    const RngStream root(o.seed, 0x5747);
    auto one = [&](std::size_t r) -> PairSample {
        RngStream rng = root.substream(r);
        const auto sim = simulate_projected({Dynamics::tasep, 1.0, o.t1, first, last}, rng);
        const auto est = estimate_speeds(sim, labels, false);
        std::vector<Label> classes;
        for (const auto& p : est.particles) {
            if (!p.certified) return {};
            classes.push_back(proj.classify(std::clamp(p.speed, -1.0, 1.0)));
        }
        if (r < o.replicas)
            return {static_cast<int>(classes[-first]), static_cast<int>(classes[1 - first]), est.speed(0), est.speed(1)};

        const Configuration cfg(first, std::move(classes));
        const auto noise = sample_noise(rng, cfg.lo(), cfg.hi(), o.t2, Dynamics::tasep);
        const auto ev = simulate(cfg, noise, {Dynamics::tasep, 1.0, AsepDriver::marks, o.t2, nullptr});
        if (!ev.certificate.safe(0) || !ev.certificate.safe(1)) return {};
        return {static_cast<int>(ev.final[0]), static_cast<int>(ev.final[1])};
    };
    const auto samples = run_replicas<PairSample>(2 * o.replicas, o.jobs, one);

    StationarityReport rep;
    rep.classes = k;
    const auto cells = static_cast<std::size_t>(k * k);
    rep.before.assign(cells, 0.0);
    rep.after.assign(cells, 0.0);
    rep.reference.assign(cells, 0.0);
    rep.marginal_before.assign(static_cast<std::size_t>(k), 0.0);
    rep.marginal_after.assign(static_cast<std::size_t>(k), 0.0);
    for (std::size_t r = 0; r < samples.size(); ++r) {
        const int a = samples[r].a, b = samples[r].b;
        if (a == 0) {
            ++rep.certificate_failures;
            continue;
        }
        const bool before = r < o.replicas;
        (before ? rep.before : rep.after)[static_cast<std::size_t>((a - 1) * k + (b - 1))] += 1.0;
        (before ? rep.marginal_before : rep.marginal_after)[static_cast<std::size_t>(a - 1)] += 1.0;
        if (before) rep.before_speeds.emplace_back(samples[r].u0, samples[r].u1);
    }

    // reference: independent stationary windows of length 2 from the multi-line sampler
    std::vector<double> lambda;
    for (int c = 1; c <= k; ++c) lambda.push_back(proj.class_density(c));
    if (o.reference_samples > 0) {
        const std::size_t chunk = 1000;
        const std::size_t chunks = (o.reference_samples + chunk - 1) / chunk;
        const RngStream ref_root(o.seed, 0x7EF);
        auto block = [&](std::size_t i) {
            RngStream rng = ref_root.substream(i);
            std::vector<double> counts(cells, 0.0);
            const std::size_t n = std::min(chunk, o.reference_samples - i * chunk);
            for (std::size_t j = 0; j < n; ++j) {
                const auto w = sample_stationary(lambda, 2, -1, rng);
                counts[static_cast<std::size_t>((w[0] - 1) * k + (w[1] - 1))] += 1.0;
            }
            return counts;
        };
        for (const auto& c : run_replicas<std::vector<double>>(chunks, o.jobs, block))
            for (std::size_t i = 0; i < cells; ++i) rep.reference[i] += c[i];
        rep.before_vs_reference = chi2_two_sample(rep.before, rep.reference);
    }
    rep.before_vs_after = chi2_two_sample(rep.before, rep.after);
    return rep;
}

AdjacencyReport adjacency_experiment(const AdjacencyOptions& o) {
    if (o.replicas < 3) throw std::invalid_argument("adjacency_experiment: needs at least 3 replicas");
    if (!std::is_sorted(o.snapshots.begin(), o.snapshots.end()) ||
        (!o.snapshots.empty() && (o.snapshots.front() <= 0.0 || o.snapshots.back() > o.horizon)))
        throw std::invalid_argument("adjacency_experiment: snapshots must be ascending in (0, horizon]");
    if (o.mode == Dynamics::asep) validate_asymmetry(o.p);

    std::vector<double> snaps = o.snapshots;
    if (snaps.empty() || snaps.back() != o.horizon) snaps.push_back(o.horizon);

    const RngStream root(o.seed, 0xAD1);
    auto one = [&](std::size_t r) {
        RngStream rng = root.substream(r);
        const ProjectedRun run{o.mode, o.p, o.horizon, 0, 1};
        const Site m = kinetic_margin(o.horizon);
        const auto init = projected_canonical_config(-m, static_cast<std::size_t>(2 + 2 * m), 0, 1);
        AdjacencyLedger ledger(init, {{0, 1}}, snaps);
        PairOrderProbe probe(init, 0, 1, snaps);
        ObserverFanout fan({&ledger, &probe});
        const auto sim = simulate_kinetic(init, {run.mode, run.p, run.horizon, &fan}, rng);
        ledger.finish(o.horizon);
        AdjacencyRecord rec;
        rec.order = probe.records();
        for (const auto& js : ledger.J_at_snapshots()) rec.J.push_back(js[0]);
        rec.interactions = ledger.interactions(0);
        rec.certified = sim.certificate.left <= init.lo() && sim.certificate.right >= init.hi();
        return rec;
    };

    AdjacencyReport rep;
    rep.records = run_replicas<AdjacencyRecord>(o.replicas, o.jobs, one);

    std::vector<double> x, y;
    for (const auto& rec : rep.records) {
        if (!rec.certified) {
            ++rep.certificate_failures;
            continue;
        }
        x.push_back(std::exp(-rec.J.back()));
        y.push_back(rec.order.back().unswapped ? 1.0 : 0.0);
    }
    rep.fit = least_squares(x, y);

    constexpr int kBins = 10;
    for (int i = 0; i < kBins; ++i) {
        const double lo = static_cast<double>(i) / kBins, hi = static_cast<double>(i + 1) / kBins;
        RunningStats ex, un;
        for (std::size_t j = 0; j < x.size(); ++j)
            if (x[j] >= lo && (x[j] < hi || (i == kBins - 1 && x[j] <= hi))) {
                ex.add(x[j]);
                un.add(y[j]);
            }
        rep.bins.push_back({lo, hi, static_cast<std::size_t>(ex.count()), ex.mean(), un.mean()});
    }
    return rep;
}

}  // namespace speedlab
