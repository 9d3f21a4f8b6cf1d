#pragma once

#include "speedlab/configuration.hpp"
#include "speedlab/rng.hpp"

namespace speedlab {

enum class Dynamics { tasep, asep };

/// q = (1-p)/p, the swap probability of a decreasing pair under pi_n.
double pi_swap_probability(double p);

/// Throws std::invalid_argument unless p lies in (1/2, 1].
void validate_asymmetry(double p);

// Local operators on bond n = (n, n+1). Each returns true when the two
// entries were exchanged and keeps `tracker` (if given) in sync. They throw
// std::out_of_range when the bond is not inside the window.

/// sigma_n: sort the pair into decreasing order.
bool apply_sort(Configuration& config, Site n, TrajectoryTracker* tracker = nullptr);

/// sigma*_n: sort the pair into increasing order.
bool apply_antisort(Configuration& config, Site n, TrajectoryTracker* tracker = nullptr);

/// tau_n: exchange unconditionally.
bool apply_transpose(Configuration& config, Site n, TrajectoryTracker* tracker = nullptr);

/// pi_n: an increasing pair is always exchanged; a decreasing pair is
/// exchanged with probability q = (1-p)/p. Randomness is drawn from `coins`
/// only for decreasing pairs.
bool apply_pi(Configuration& config, Site n, double p, RngStream& coins, TrajectoryTracker* tracker = nullptr);

/// pi_n with the coin supplied by the caller (a pre-sampled Bernoulli(q) mark).
bool apply_pi_with_coin(Configuration& config, Site n, bool coin, TrajectoryTracker* tracker = nullptr);

}  // namespace speedlab
