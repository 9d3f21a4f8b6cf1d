#include "speedlab/kinetic.hpp"

#include <stdexcept>
#include <vector>

namespace speedlab {

namespace {

// Indexed set of active bonds with O(1) insert, erase and uniform pick.
class ActiveSet {
public:
    ActiveSet(Site lo, std::size_t bonds) : lo_(lo), slot_(bonds, -1) { items_.reserve(256); }

    std::size_t size() const noexcept { return items_.size(); }
    Site operator[](std::size_t i) const noexcept { return items_[i]; }

    void set(Site bond, bool active) {
        auto& s = slot_[static_cast<std::size_t>(bond - lo_)];
        if (active && s < 0) {
            s = static_cast<std::int64_t>(items_.size());
            items_.push_back(bond);
        } else if (!active && s >= 0) {
            const Site moved = items_.back();
            items_[static_cast<std::size_t>(s)] = moved;
            slot_[static_cast<std::size_t>(moved - lo_)] = s;
            items_.pop_back();
            s = -1;
        }
    }

private:
    Site lo_;
    std::vector<std::int64_t> slot_;
    std::vector<Site> items_;
};

}  // namespace

SimResult simulate_kinetic(const Configuration& initial, const KineticOptions& options, RngStream& rng) {
    if (!(options.horizon >= 0.0)) throw std::invalid_argument("simulate_kinetic: horizon must be >= 0");
    const bool asep = options.mode == Dynamics::asep;
    if (asep) validate_asymmetry(options.p);

    SimResult r;
    r.final = initial;
    r.tracker = TrajectoryTracker(initial);
    r.horizon = options.horizon;
    r.certificate = {initial.lo(), initial.hi()};

    Configuration& c = r.final;
    const Site lo = c.lo();
    const Site hi = c.hi();
    bool exact = true;

    auto is_active = [&](Site b) { return asep ? c[b] != c[b + 1] : c[b] < c[b + 1]; };
    ActiveSet active(lo, c.length());
    for (Site b = lo; b < hi; ++b)
        if (is_active(b)) active.set(b, true);

    SimObserver* obs = options.observer;
    std::vector<double> snaps;
    if (obs) snaps = obs->snapshot_times();
    std::size_t next_snap = 0;
    auto certificate_now = [&] { return exact ? Certificate{lo, hi} : Certificate{lo, lo}; };

    double t = 0.0;
    while (active.size() > 0) {
        t += rng.exponential(static_cast<double>(active.size()));
        if (t > options.horizon) break;
        while (next_snap < snaps.size() && snaps[next_snap] < t)
            obs->on_snapshot(snaps[next_snap++], c, r.tracker, certificate_now());

        const Site b = active[static_cast<std::size_t>(rng.below(active.size()))];
        bool swapped;
        if (!asep || rng.bernoulli(options.p))
            swapped = c[b] < c[b + 1];
        else
            swapped = c[b] > c[b + 1];
        if (swapped) {
            c.swap_bond(b);
            r.tracker.on_swap(c, b);
            ++r.swaps;
            if (b == lo || b + 1 == hi) exact = false;
            if (b > lo) active.set(b - 1, is_active(b - 1));
            active.set(b, is_active(b));
            if (b + 1 < hi) active.set(b + 1, is_active(b + 1));
        }
        ++r.events;
        if (obs) obs->on_event(t, b, swapped, c, r.tracker);
    }
    while (next_snap < snaps.size() && snaps[next_snap] <= options.horizon)
        obs->on_snapshot(snaps[next_snap++], c, r.tracker, certificate_now());

    r.certificate = certificate_now();
    return r;
}

}  // namespace speedlab
