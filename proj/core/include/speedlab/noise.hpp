#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "speedlab/configuration.hpp"
#include "speedlab/rng.hpp"

namespace speedlab {

struct BondEvent {
    double time;
    Site bond;
    bool mark;
};

/// Pre-sampled Harris noise on the bonds of a window.
///
/// Bond n (joining sites n and n+1) carries a Poisson process of the given
/// rate on [0, horizon], stored sorted, with an i.i.d. Bernoulli mark per
/// event. The same instance replays bit-identically for every coupled run.
class NoiseField {
public:
    NoiseField() = default;

    /// Samples bonds lo .. hi-1 (the bonds of the window [lo, hi]).
    static NoiseField sample(RngStream& rng, Site lo, Site hi, double horizon, double rate,
                             double mark_probability);

    /// A field with no events at all.
    static NoiseField empty(Site lo, Site hi, double horizon, double rate = 1.0, double mark_probability = 1.0);

    /// Builds a field on [lo, hi] that copies `inner` on the bonds they share
    /// and samples the remaining bonds fresh from `rng`.
    static NoiseField embed(const NoiseField& inner, RngStream& rng, Site lo, Site hi);

    /// Builds a field from explicit per-bond event lists (tests, replays).
    static NoiseField from_events(Site lo, Site hi, double horizon, std::span<const BondEvent> events,
                                  double rate = 1.0, double mark_probability = 1.0);

    Site lo() const noexcept { return lo_; }
    Site hi() const noexcept { return hi_; }
    double horizon() const noexcept { return horizon_; }
    double rate() const noexcept { return rate_; }
    double mark_probability() const noexcept { return mark_probability_; }
    std::size_t bond_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t event_count() const noexcept { return times_.size(); }

    std::span<const double> times(Site bond) const;
    std::span<const std::uint8_t> marks(Site bond) const;

    /// All events with time <= t, ordered by time, ties broken by bond index.
    std::vector<BondEvent> events_until(double t) const;

    bool operator==(const NoiseField&) const = default;

private:
    void append_bond(RngStream& rng);

    Site lo_ = 0;
    Site hi_ = 0;
    double horizon_ = 0.0;
    double rate_ = 1.0;
    double mark_probability_ = 1.0;
    std::vector<std::size_t> offsets_;
    std::vector<double> times_;
    std::vector<std::uint8_t> marks_;
};

}  // namespace speedlab
