#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "speedlab/kinetic.hpp"
#include "speedlab/projection.hpp"
#include "speedlab/simulation.hpp"
#include "speedlab/stats.hpp"

namespace speedlab {

// ---- speeds ------------------------------------------------------------------

struct ParticleSpeed {
    Label label;
    Site position;
    double speed;  // (X_n(t) - X_n(0)) / t
    bool certified;
};

struct SpeedEstimate {
    double horizon = 0.0;
    Certificate certificate;
    std::vector<ParticleSpeed> particles;

    /// Speed of a listed particle; throws std::out_of_range otherwise.
    double speed(Label label) const;
};

/// U_n(t) = (X_n(t) - X_n(0)) / t for the given tracked particles. With
/// require_certified, a particle outside the certificate-safe region throws
/// std::runtime_error ("window too small"); otherwise it is only flagged.
SpeedEstimate estimate_speeds(const SimResult& sim, std::span<const Label> particles, bool require_certified = true);

/// Half-width beyond the tracked labels that keeps a kinetic run exact with
/// overwhelming probability: t + 8 sqrt(t) + 20 (an edge hole moves as a rate-1
/// Poisson walk at most).
Site kinetic_margin(double t);

struct ProjectedRun {
    Dynamics mode = Dynamics::tasep;
    double p = 1.0;
    double horizon = 0.0;
    Label first = 0;  // tracked labels first..last stay distinct
    Label last = 0;
};

/// Kinetic run from the step-projected canonical window around [first, last].
SimResult simulate_projected(const ProjectedRun& run, RngStream& rng, SimObserver* observer = nullptr);

// ---- empirical measure -------------------------------------------------------

/// Points (i/t, U_i(t)), each of mass 1/t.
class EmpiricalMeasure {
public:
    explicit EmpiricalMeasure(double horizon);

    void add(const SpeedEstimate& est);
    double total_mass() const noexcept { return static_cast<double>(points_.size()) / horizon_; }
    std::size_t size() const noexcept { return points_.size(); }

    /// Point counts on an nx x ny grid over [x0, x1) x [y0, y1), row-major in x.
    std::vector<std::size_t> histogram(double x0, double x1, int nx, double y0, double y1, int ny) const;

private:
    double horizon_;
    std::vector<std::pair<double, double>> points_;
};

// ---- observers -------------------------------------------------------------

/// Accumulates J_{i,j}(t), the time particles i and j spend at distance 1, and
/// the number of clock rings on the bond between them ("interactions").
class AdjacencyLedger : public SimObserver {
public:
    AdjacencyLedger(const Configuration& initial, std::vector<std::pair<Label, Label>> pairs,
                    std::vector<double> snapshots = {});

    void on_event(double time, Site bond, bool swapped, const Configuration& config,
                  const TrajectoryTracker& tracker) override;
    std::vector<double> snapshot_times() const override { return snapshots_; }
    void on_snapshot(double time, const Configuration& config, const TrajectoryTracker& tracker,
                     const Certificate& certificate) override;

    /// Integrates up to the horizon; call once after the run.
    void finish(double horizon);

    std::size_t pair_count() const noexcept { return pairs_.size(); }
    double J(std::size_t pair) const { return j_.at(pair); }
    std::uint64_t interactions(std::size_t pair) const { return hits_.at(pair); }
    /// J of each pair at each snapshot, [snapshot][pair].
    const std::vector<std::vector<double>>& J_at_snapshots() const noexcept { return j_snap_; }

private:
    void advance(double time);

    std::vector<std::pair<Label, Label>> pairs_;
    std::vector<double> snapshots_;
    std::vector<std::pair<Site, Site>> pos_;
    std::vector<double> j_;
    std::vector<std::uint64_t> hits_;
    std::vector<std::vector<double>> j_snap_;
    double last_ = 0.0;
};

/// Tracks the order of particles a < b and the swap count R_a(t) = #{j > a : X_j(t) < X_a(t)}.
class PairOrderProbe : public SimObserver {
public:
    struct Snapshot {
        double time;
        bool unswapped;          // X_a(t) < X_b(t)
        double unswapped_time;   // integral over [0, t] of 1{X_a < X_b}
        std::int64_t swaps;      // R_a(t)
    };

    PairOrderProbe(const Configuration& initial, Label a, Label b, std::vector<double> snapshots);

    void on_event(double time, Site bond, bool swapped, const Configuration& config,
                  const TrajectoryTracker& tracker) override;
    std::vector<double> snapshot_times() const override { return snapshots_; }
    void on_snapshot(double time, const Configuration& config, const TrajectoryTracker& tracker,
                     const Certificate& certificate) override;

    const std::vector<Snapshot>& records() const noexcept { return records_; }

private:
    Label a_, b_;
    std::vector<double> snapshots_;
    bool unswapped_;
    double integral_ = 0.0;
    double last_ = 0.0;
    std::vector<Snapshot> records_;
};

/// Forwards every callback to several observers; snapshot times are the sorted union.
class ObserverFanout : public SimObserver {
public:
    explicit ObserverFanout(std::vector<SimObserver*> targets) : targets_(std::move(targets)) {}

    void on_event(double time, Site bond, bool swapped, const Configuration& config,
                  const TrajectoryTracker& tracker) override;
    std::vector<double> snapshot_times() const override;
    void on_snapshot(double time, const Configuration& config, const TrajectoryTracker& tracker,
                     const Certificate& certificate) override;

private:
    std::vector<SimObserver*> targets_;
};

// ---- swaps -------------------------------------------------------------------

/// R_a(t) = #{j > a : X_j(t) < X_a(t)} read off a finished run. Throws if the
/// certificate does not cover the whole window left of X_a.
std::int64_t count_swaps(const SimResult& sim, Label a = 0);

/// Fraction of runs with X_a(t) < X_b(t).
SampleSummary unswapped_prob(std::span<const SimResult> sims, Label a = 0, Label b = 1);

// ---- convoys -------------------------------------------------------------

/// Single-linkage groups of particles whose speeds differ by at most delta
/// (transitively). Groups are ordered by speed, members by label.
std::vector<std::vector<Label>> detect_convoys(const SpeedEstimate& est, double delta);

/// True when all the labels fall in one group.
bool same_convoy(const std::vector<std::vector<Label>>& groups, std::span<const Label> labels);

/// Default convoy threshold t^{-1/4}.
double default_convoy_delta(double t);

// ---- experiments -----------------------------------------------------------

struct StationarityOptions {
    std::vector<double> thresholds{0.3, 0.6};
    double t1 = 1000.0;
    double t2 = 100.0;
    std::size_t replicas = 10000;  // per sample; the experiment runs 2x this many
    Label half_width = 200;        // speeds are projected on labels [-half_width, half_width + 1]
    std::size_t reference_samples = 1000000;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
};

struct StationarityReport {
    int classes = 0;
    std::vector<double> before;     // pair counts at sites (0,1), cell (a-1)*classes + (b-1)
    std::vector<double> after;      // same after further evolution t2 (independent replicas)
    std::vector<double> reference;  // multi-line sampler
    std::vector<double> marginal_before, marginal_after;  // class counts at site 0
    TestResult before_vs_after{};
    TestResult before_vs_reference{};
    std::vector<std::pair<double, double>> before_speeds;  // (U_0, U_1) of the certified "before" replicas
    std::size_t certificate_failures = 0;
};

/// Projected-speed pair frequencies before and after further TASEP evolution,
/// compared to each other and to the multi-line sampler. Speeds are clamped to
/// [-1, 1] before projection. Replicas [0, n) give the "before" sample and
/// [n, 2n) the evolved one, so the two samples are independent.
StationarityReport stationarity_experiment(const StationarityOptions& options);

struct AdjacencyOptions {
    Dynamics mode = Dynamics::asep;
    double p = 0.7;
    double horizon = 500.0;
    std::vector<double> snapshots{50.0, 100.0, 200.0, 400.0, 500.0};
    std::size_t replicas = 10000;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
};

struct AdjacencyRecord {
    std::vector<PairOrderProbe::Snapshot> order;  // one per snapshot
    std::vector<double> J;                        // J_{0,1} at each snapshot
    std::uint64_t interactions = 0;               // by the horizon
    bool certified = true;
};

struct AdjacencyReport {
    std::vector<AdjacencyRecord> records;
    LinearFit fit{};  // unswapped-at-horizon on exp(-J) at the horizon
    struct Bin {
        double lo, hi;
        std::size_t n;
        double mean_exp_minus_J;
        double unswapped;
    };
    std::vector<Bin> bins;
    std::size_t certificate_failures = 0;
};

/// Runs particles 0, 1 (projected window) with a J ledger and order probe.
AdjacencyReport adjacency_experiment(const AdjacencyOptions& options);

}  // namespace speedlab
