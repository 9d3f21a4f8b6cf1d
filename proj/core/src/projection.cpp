#include "speedlab/projection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace speedlab {

ClassProjection::ClassProjection(std::vector<double> thresholds) : thresholds_(std::move(thresholds)) {
    double prev = 0.0;
    for (double x : thresholds_) {
        if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("ClassProjection: thresholds must lie in (0, 1)");
        if (!(x > prev)) throw std::invalid_argument("ClassProjection: thresholds must be strictly increasing");
        prev = x;
    }
}

ClassProjection ClassProjection::from_densities(std::span<const double> densities) {
    if (densities.empty()) throw std::invalid_argument("ClassProjection: empty density vector");
    double total = 0.0;
    for (double d : densities) {
        if (!(d > 0.0)) throw std::invalid_argument("ClassProjection: class densities must be positive");
        total += d;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("ClassProjection: densities must sum to 1");
    std::vector<double> x;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < densities.size(); ++i) {
        acc += densities[i];
        x.push_back(acc);
    }
    return ClassProjection(std::move(x));
}

int ClassProjection::classify_hat(double uhat) const noexcept {
    // min{i : uhat < x_i}; upper_bound gives the first threshold strictly greater.
    const auto it = std::upper_bound(thresholds_.begin(), thresholds_.end(), uhat);
    return static_cast<int>(it - thresholds_.begin()) + 1;
}

int ClassProjection::classify(double u) const {
    if (!(u >= -1.0 && u <= 1.0)) throw std::domain_error("ClassProjection: speed outside [-1, 1]");
    return classify_hat(speed_hat(u));
}

double ClassProjection::class_density(int cls) const {
    if (cls < 1 || cls > class_count()) throw std::out_of_range("ClassProjection: class out of range");
    const double hi = cls <= static_cast<int>(thresholds_.size()) ? thresholds_[cls - 1] : 1.0;
    const double lo = cls >= 2 ? thresholds_[cls - 2] : 0.0;
    return hi - lo;
}

std::vector<int> project(std::span<const double> speeds, const ClassProjection& proj) {
    std::vector<int> out;
    out.reserve(speeds.size());
    for (double u : speeds) out.push_back(proj.classify(u));
    return out;
}

}  // namespace speedlab
