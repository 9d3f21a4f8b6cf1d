#pragma once

#include <cstdint>
#include <vector>

#include "speedlab/configuration.hpp"
#include "speedlab/operators.hpp"

namespace speedlab {

/// Boundary-influence bounds of a finite-window run.
///
/// Sites <= left or >= right may have been influenced by what lies outside
/// the window; sites strictly between them hold exactly the state of the
/// infinite-lattice process driven by the same noise.
struct Certificate {
    Site left = 0;
    Site right = 0;

    bool safe(Site s) const noexcept { return left < s && s < right; }
};

/// Hooks into a running simulation. All callbacks run on the simulating thread.
class SimObserver {
public:
    virtual ~SimObserver() = default;

    /// After every clock ring that was applied (`swapped` says whether the
    /// pair was actually exchanged).
    virtual void on_event(double /*time*/, Site /*bond*/, bool /*swapped*/, const Configuration& /*config*/,
                          const TrajectoryTracker& /*tracker*/) {}

    /// Ascending times (<= horizon) at which on_snapshot should fire.
    virtual std::vector<double> snapshot_times() const { return {}; }

    virtual void on_snapshot(double /*time*/, const Configuration& /*config*/, const TrajectoryTracker& /*tracker*/,
                             const Certificate& /*certificate*/) {}
};

struct SimResult {
    Configuration final;
    TrajectoryTracker tracker;
    Certificate certificate;
    double horizon = 0.0;
    std::uint64_t events = 0;
    std::uint64_t swaps = 0;
};

}  // namespace speedlab
