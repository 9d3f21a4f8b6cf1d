#include "speedlab/configuration.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace speedlab {

Configuration::Configuration(Site lo, std::vector<Label> labels) : lo_(lo), labels_(std::move(labels)) {
    if (labels_.empty()) throw std::invalid_argument("Configuration: window must contain at least one site");
}

Label Configuration::at(Site s) const {
    if (!contains(s)) throw std::out_of_range("Configuration: site " + std::to_string(s) + " outside window");
    return (*this)[s];
}

void Configuration::set(Site s, Label value) {
    if (!contains(s)) throw std::out_of_range("Configuration: site " + std::to_string(s) + " outside window");
    labels_[static_cast<std::size_t>(s - lo_)] = value;
}

Configuration canonical_config(Site lo, std::size_t length) {
    if (length == 0) throw std::invalid_argument("canonical_config: length must be >= 1");
    std::vector<Label> labels(length);
    for (std::size_t i = 0; i < length; ++i) labels[i] = lo + static_cast<Label>(i);
    return Configuration(lo, std::move(labels));
}

Configuration projected_canonical_config(Site lo, std::size_t length, Label first, Label last) {
    if (first > last) throw std::invalid_argument("projected_canonical_config: first > last");
    auto config = canonical_config(lo, length);
    std::vector<Label> labels(config.labels().begin(), config.labels().end());
    for (auto& l : labels) l = std::clamp(l, first - 1, last + 1);
    return Configuration(lo, std::move(labels));
}

TrajectoryTracker::TrajectoryTracker(const Configuration& config) {
    std::unordered_map<Label, std::size_t> counts;
    counts.reserve(config.length());
    for (Label l : config.labels()) ++counts[l];

    Label lo = 0, hi = -1;
    bool any = false;
    for (auto [label, c] : counts) {
        if (c != 1) continue;
        if (!any) { lo = hi = label; any = true; }
        lo = std::min(lo, label);
        hi = std::max(hi, label);
    }
    if (!any) return;

    min_label_ = lo;
    position_.assign(static_cast<std::size_t>(hi - lo + 1), kUntracked);
    for (Site s = config.lo(); s <= config.hi(); ++s) {
        const Label l = config[s];
        if (counts[l] == 1) {
            position_[static_cast<std::size_t>(l - lo)] = s;
            ++count_;
        }
    }
    initial_ = position_;
}

Site TrajectoryTracker::position(Label label) const {
    if (!is_tracked(label)) throw std::out_of_range("TrajectoryTracker: label " + std::to_string(label) + " is not tracked");
    return position_[static_cast<std::size_t>(label - min_label_)];
}

Site TrajectoryTracker::initial_position(Label label) const {
    if (!is_tracked(label)) throw std::out_of_range("TrajectoryTracker: label " + std::to_string(label) + " is not tracked");
    return initial_[static_cast<std::size_t>(label - min_label_)];
}

std::vector<Label> TrajectoryTracker::tracked_labels() const {
    std::vector<Label> out;
    out.reserve(count_);
    for (std::size_t k = 0; k < position_.size(); ++k)
        if (position_[k] != kUntracked) out.push_back(min_label_ + static_cast<Label>(k));
    return out;
}

bool TrajectoryTracker::consistent_with(const Configuration& config) const {
    std::size_t seen = 0;
    for (std::size_t k = 0; k < position_.size(); ++k) {
        if (position_[k] == kUntracked) continue;
        const Site s = position_[k];
        if (!config.contains(s) || config[s] != min_label_ + static_cast<Label>(k)) return false;
        ++seen;
    }
    return seen == count_;
}

}  // namespace speedlab
