#pragma once

#include "speedlab/rng.hpp"
#include "speedlab/simulation.hpp"

namespace speedlab {

struct KineticOptions {
    Dynamics mode = Dynamics::tasep;
    double p = 1.0;
    double horizon = 0.0;
    SimObserver* observer = nullptr;
};

/// Event-driven (Gillespie) simulation over active bonds only.
///
/// A bond is active when a ring can change it: an increasing pair under
/// TASEP, any pair of distinct labels under ASEP (rate 1, then a Bernoulli(p)
/// mark picks sort vs antisort). Rings on inactive bonds are no-ops and are
/// skipped, so the cost scales with the number of distinct-label contacts
/// rather than with the window. Meant for step-projected windows where most
/// labels coincide.
///
/// The window is read as the restriction of a configuration that continues
/// with copies of the edge labels on both sides. The run equals that infinite
/// system iff no swap ever touches an edge site; the certificate then covers
/// the whole interior (left = lo, right = hi), otherwise it is empty
/// (left = right = lo) from the first such swap on.
SimResult simulate_kinetic(const Configuration& initial, const KineticOptions& options, RngStream& rng);

}  // namespace speedlab
