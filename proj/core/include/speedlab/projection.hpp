#pragma once

#include <span>
#include <vector>

namespace speedlab {

/// Canonical projection of speeds in [-1, 1] onto classes 1..k+1.
///
/// With thresholds 0 < x_1 < ... < x_k < 1 (x_0 = 0, x_{k+1} = 1 implicit),
/// a speed u maps to min{i : (1+u)/2 < x_i}. A uniform speed lands in class i
/// with probability x_i - x_{i-1}.
class ClassProjection {
public:
    ClassProjection() = default;
    explicit ClassProjection(std::vector<double> thresholds);

    /// Projection for class densities lambda_1..lambda_{k+1} (a probability vector).
    static ClassProjection from_densities(std::span<const double> densities);

    std::span<const double> thresholds() const noexcept { return thresholds_; }
    int class_count() const noexcept { return static_cast<int>(thresholds_.size()) + 1; }

    /// Class of a speed u in [-1, 1]; throws std::domain_error outside.
    int classify(double u) const;

    /// Class of an already rescaled speed uhat = (1+u)/2 in [0, 1].
    int classify_hat(double uhat) const noexcept;

    /// Density lambda_i = x_i - x_{i-1} of class i.
    double class_density(int cls) const;

private:
    std::vector<double> thresholds_;
};

/// Entry-wise canonical projection of a speed-valued configuration.
std::vector<int> project(std::span<const double> speeds, const ClassProjection& proj);

inline double speed_hat(double u) noexcept { return 0.5 * (1.0 + u); }

}  // namespace speedlab
