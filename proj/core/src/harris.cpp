#include "speedlab/harris.hpp"

#include <algorithm>
#include <stdexcept>

namespace speedlab {

NoiseField sample_noise(RngStream& rng, Site lo, Site hi, double horizon, Dynamics mode, double p, AsepDriver driver) {
    if (mode == Dynamics::tasep) return NoiseField::sample(rng, lo, hi, horizon, 1.0, 1.0);
    validate_asymmetry(p);
    if (driver == AsepDriver::marks) return NoiseField::sample(rng, lo, hi, horizon, 1.0, p);
    return NoiseField::sample(rng, lo, hi, horizon, p, pi_swap_probability(p));
}

SimResult simulate(const Configuration& initial, const NoiseField& noise, const HarrisOptions& options) {
    if (initial.lo() != noise.lo() || initial.hi() != noise.hi())
        throw std::invalid_argument("simulate: noise window does not match the configuration window");
    if (!(options.horizon >= 0.0)) throw std::invalid_argument("simulate: horizon must be >= 0");
    if (options.horizon > noise.horizon()) throw std::invalid_argument("simulate: horizon exceeds noise horizon");
    if (options.mode == Dynamics::asep) validate_asymmetry(options.p);

    SimResult r;
    r.final = initial;
    r.tracker = TrajectoryTracker(initial);
    r.horizon = options.horizon;
    r.certificate = {initial.lo(), initial.hi()};

    Configuration& c = r.final;
    Site& left = r.certificate.left;
    Site& right = r.certificate.right;

    SimObserver* obs = options.observer;
    std::vector<double> snaps;
    if (obs) snaps = obs->snapshot_times();
    std::size_t next_snap = 0;
    auto certificate_now = [&] { return Certificate{std::min(left, right), right}; };

    for (const BondEvent& e : noise.events_until(options.horizon)) {
        while (next_snap < snaps.size() && snaps[next_snap] < e.time)
            obs->on_snapshot(snaps[next_snap++], c, r.tracker, certificate_now());

        bool swapped = false;
        switch (options.mode) {
            case Dynamics::tasep:
                swapped = apply_sort(c, e.bond, &r.tracker);
                break;
            case Dynamics::asep:
                if (options.driver == AsepDriver::marks)
                    swapped = e.mark ? apply_sort(c, e.bond, &r.tracker) : apply_antisort(c, e.bond, &r.tracker);
                else
                    swapped = apply_pi_with_coin(c, e.bond, e.mark, &r.tracker);
                break;
        }
        // fronts move on any ring of their adjacent bond, swap or not
        if (e.bond == left) ++left;
        if (e.bond == right - 1) --right;

        ++r.events;
        if (swapped) ++r.swaps;
        if (obs) obs->on_event(e.time, e.bond, swapped, c, r.tracker);
    }
    while (next_snap < snaps.size() && snaps[next_snap] <= options.horizon)
        obs->on_snapshot(snaps[next_snap++], c, r.tracker, certificate_now());

    if (left > right) left = right;
    return r;
}

std::vector<SimResult> coupled_simulate(std::span<const Configuration> initials, const NoiseField& noise,
                                        const HarrisOptions& options) {
    if (initials.empty()) return {};
    for (const auto& c : initials)
        if (c.lo() != initials.front().lo() || c.hi() != initials.front().hi())
            throw std::invalid_argument("coupled_simulate: initial configurations have mismatched windows");
    std::vector<SimResult> out;
    out.reserve(initials.size());
    for (const auto& c : initials) out.push_back(simulate(c, noise, options));
    return out;
}

}  // namespace speedlab
