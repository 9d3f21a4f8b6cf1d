#include "speedlab/operators.hpp"

#include <stdexcept>
#include <string>

namespace speedlab {

namespace {

void require_bond(const Configuration& config, Site n) {
    if (!config.has_bond(n))
        throw std::out_of_range("bond " + std::to_string(n) + " is not inside the window");
}

bool exchange(Configuration& config, Site n, TrajectoryTracker* tracker) {
    config.swap_bond(n);
    if (tracker) tracker->on_swap(config, n);
    return true;
}

}  // namespace

double pi_swap_probability(double p) {
    validate_asymmetry(p);
    return (1.0 - p) / p;
}

void validate_asymmetry(double p) {
    if (!(p > 0.5 && p <= 1.0)) throw std::invalid_argument("p must be in (0.5, 1]");
}

bool apply_sort(Configuration& config, Site n, TrajectoryTracker* tracker) {
    require_bond(config, n);
    return config[n] < config[n + 1] ? exchange(config, n, tracker) : false;
}

bool apply_antisort(Configuration& config, Site n, TrajectoryTracker* tracker) {
    require_bond(config, n);
    return config[n] > config[n + 1] ? exchange(config, n, tracker) : false;
}

bool apply_transpose(Configuration& config, Site n, TrajectoryTracker* tracker) {
    require_bond(config, n);
    return exchange(config, n, tracker);
}

bool apply_pi(Configuration& config, Site n, double p, RngStream& coins, TrajectoryTracker* tracker) {
    const double q = pi_swap_probability(p);
    require_bond(config, n);
    if (config[n] < config[n + 1]) return exchange(config, n, tracker);
    if (config[n] > config[n + 1] && coins.bernoulli(q)) return exchange(config, n, tracker);
    return false;
}

bool apply_pi_with_coin(Configuration& config, Site n, bool coin, TrajectoryTracker* tracker) {
    require_bond(config, n);
    if (config[n] < config[n + 1]) return exchange(config, n, tracker);
    if (config[n] > config[n + 1] && coin) return exchange(config, n, tracker);
    return false;
}

}  // namespace speedlab
