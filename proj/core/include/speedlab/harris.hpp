#pragma once

#include <span>
#include <vector>

#include "speedlab/noise.hpp"
#include "speedlab/simulation.hpp"

namespace speedlab {

/// How ASEP clock rings are realized.
///  - marks: rate-1 bonds; a Bernoulli(p) mark picks sigma (1) or sigma* (0).
///  - pi:    rate-p bonds; each ring applies pi_n with a Bernoulli(q) coin.
/// Both generate the same process.
enum class AsepDriver { marks, pi };

struct HarrisOptions {
    Dynamics mode = Dynamics::tasep;
    double p = 1.0;
    AsepDriver driver = AsepDriver::marks;
    double horizon = 0.0;
    SimObserver* observer = nullptr;
};

/// Samples the noise field the given dynamics/driver expects on window [lo, hi].
NoiseField sample_noise(RngStream& rng, Site lo, Site hi, double horizon, Dynamics mode, double p = 1.0,
                        AsepDriver driver = AsepDriver::marks);

/// Harris graphical construction on a finite window.
///
/// Applies every event of `noise` up to `options.horizon` in time order (ties
/// by bond index). Influence fronts start at the window edges and advance one
/// site whenever the bond adjacent to the front rings, which yields the
/// certificate. Deterministic in (initial, noise, options).
SimResult simulate(const Configuration& initial, const NoiseField& noise, const HarrisOptions& options);

/// Runs every initial condition on the same noise field.
std::vector<SimResult> coupled_simulate(std::span<const Configuration> initials, const NoiseField& noise,
                                        const HarrisOptions& options);

}  // namespace speedlab
