#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace speedlab {

using Label = std::int64_t;
using Site = std::int64_t;

/// Particle labels on the finite window [lo, lo + length - 1].
///
/// Entry i holds the label of the particle at site lo + i. Lower labels have
/// priority: a TASEP event on bond (n, n+1) sorts the pair into decreasing
/// order, so a lower label moves right past a higher one.
class Configuration {
public:
    Configuration() = default;
    Configuration(Site lo, std::vector<Label> labels);

    Site lo() const noexcept { return lo_; }
    Site hi() const noexcept { return lo_ + static_cast<Site>(labels_.size()) - 1; }
    std::size_t length() const noexcept { return labels_.size(); }

    bool contains(Site s) const noexcept { return s >= lo_ && s <= hi(); }
    /// Bond n joins sites n and n+1.
    bool has_bond(Site n) const noexcept { return n >= lo_ && n < hi(); }

    Label at(Site s) const;
    Label operator[](Site s) const noexcept { return labels_[static_cast<std::size_t>(s - lo_)]; }
    void set(Site s, Label value);

    std::span<const Label> labels() const noexcept { return labels_; }

    /// Unconditional exchange of sites n and n+1; caller guarantees has_bond(n).
    void swap_bond(Site n) noexcept {
        const auto i = static_cast<std::size_t>(n - lo_);
        std::swap(labels_[i], labels_[i + 1]);
    }

    bool operator==(const Configuration&) const = default;

private:
    Site lo_ = 0;
    std::vector<Label> labels_;
};

/// Labels[i] = lo + i: every particle labeled by its starting site.
Configuration canonical_config(Site lo, std::size_t length);

/// Step-projected canonical window: labels below `first` collapse to first - 1,
/// labels above `last` collapse to last + 1, and labels in [first, last] stay
/// distinct. By monotone projection the distinct particles follow exactly the
/// trajectories they would have in the canonical configuration.
Configuration projected_canonical_config(Site lo, std::size_t length, Label first, Label last);

/// Positions of the tracked labels; the inverse map of a Configuration.
///
/// Tracks every label that occurs exactly once in the window at construction
/// time (all of them for a permutation window). Storage is dense over the
/// tracked label range.
class TrajectoryTracker {
public:
    static constexpr Site kUntracked = INT64_MIN;

    TrajectoryTracker() = default;
    explicit TrajectoryTracker(const Configuration& config);

    bool is_tracked(Label label) const noexcept {
        return label >= min_label_ && label < min_label_ + static_cast<Label>(position_.size()) &&
               position_[static_cast<std::size_t>(label - min_label_)] != kUntracked;
    }

    /// Current site of a tracked label; throws std::out_of_range otherwise.
    Site position(Label label) const;

    /// Site the label occupied when tracking started.
    Site initial_position(Label label) const;

    std::vector<Label> tracked_labels() const;
    std::size_t tracked_count() const noexcept { return count_; }

    /// Called after the labels at n, n+1 were exchanged in `config`.
    void on_swap(const Configuration& config, Site n) noexcept {
        update(config[n], n);
        update(config[n + 1], n + 1);
    }

    /// Verifies labels[X_n - lo] == n for every tracked n.
    bool consistent_with(const Configuration& config) const;

private:
    void update(Label label, Site site) noexcept {
        const Label k = label - min_label_;
        if (k >= 0 && k < static_cast<Label>(position_.size())) {
            auto& slot = position_[static_cast<std::size_t>(k)];
            if (slot != kUntracked) slot = site;
        }
    }

    Label min_label_ = 0;
    std::vector<Site> position_;
    std::vector<Site> initial_;
    std::size_t count_ = 0;
};

}  // namespace speedlab
