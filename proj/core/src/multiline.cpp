#include "speedlab/multiline.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace speedlab {

QueueState::QueueState(int lines) : lines_(lines) {
    if (lines < 0) throw std::invalid_argument("QueueState: negative line count");
    const std::size_t q = lines > 1 ? static_cast<std::size_t>(lines - 1) : 0;
    counts_.assign(q * (q + 1) / 2, 0);
}

std::size_t QueueState::slot(int queue, int cls) const {
    if (queue < 1 || queue > lines_ - 1) throw std::out_of_range("QueueState: queue index out of range");
    if (cls < 1 || cls > queue) throw std::out_of_range("QueueState: queue i holds classes 1..i only");
    const auto i = static_cast<std::size_t>(queue);
    return (i - 1) * i / 2 + static_cast<std::size_t>(cls - 1);
}

std::int64_t QueueState::count(int queue, int cls) const { return counts_[slot(queue, cls)]; }

void QueueState::set(int queue, int cls, std::int64_t n) {
    if (n < 0) throw std::invalid_argument("QueueState: occupancy must be nonnegative");
    counts_[slot(queue, cls)] = n;
}

bool QueueState::all_empty() const noexcept {
    for (auto c : counts_)
        if (c != 0) return false;
    return true;
}

std::int64_t QueueState::total(int queue) const {
    std::int64_t s = 0;
    for (int j = 1; j <= queue; ++j) s += count(queue, j);
    return s;
}

std::string QueueState::to_string() const {
    std::string s = "(";
    for (int i = 1; i < lines_; ++i) {
        if (i > 1) s += ",";
        s += "{";
        bool first = true;
        for (int j = 1; j <= i; ++j)
            for (std::int64_t k = 0; k < count(i, j); ++k) {
                if (!first) s += ",";
                s += std::to_string(j);
                first = false;
            }
        s += "}";
    }
    return s + ")";
}

class MultiLineCollapser {
public:
    explicit MultiLineCollapser(QueueState& q) : q_(q), n_(q.lines_) {}

    // One column; bit(k) is the service indicator of line k (1-based).
    template <typename Bit>
    int column(Bit bit) {
        if (n_ == 0) return 1;
        int arrival = bit(1) ? 1 : 0;
        for (int k = 2; k <= n_; ++k) {
            const std::size_t base = static_cast<std::size_t>(k - 2) * static_cast<std::size_t>(k - 1) / 2;
            if (arrival) ++q_.counts_[base + static_cast<std::size_t>(arrival - 1)];
            if (!bit(k)) {
                arrival = 0;
                continue;
            }
            arrival = k;
            for (int j = 1; j < k; ++j) {
                auto& c = q_.counts_[base + static_cast<std::size_t>(j - 1)];
                if (c > 0) {
                    --c;
                    arrival = j;
                    break;
                }
            }
        }
        return arrival ? arrival : n_ + 1;
    }

private:
    QueueState& q_;
    int n_;
};

CollapseResult collapse(std::span<const Line> lines, const QueueState& initial, bool with_trace) {
    if (static_cast<int>(lines.size()) != initial.lines())
        throw std::invalid_argument("collapse: queue state does not match the number of lines");
    const std::size_t width = lines.empty() ? 0 : lines.front().size();
    for (const auto& l : lines)
        if (l.size() != width) throw std::invalid_argument("collapse: lines have different lengths");

    CollapseResult r;
    r.final_queues = initial;
    r.classes.assign(width, 0);
    MultiLineCollapser step(r.final_queues);
    for (std::size_t c = width; c-- > 0;) {
        r.classes[c] = step.column([&](int k) { return lines[static_cast<std::size_t>(k - 1)][c] != 0; });
        if (with_trace) r.trace.push_back({c, r.classes[c], r.final_queues});
    }
    return r;
}

void validate_densities(std::span<const double> lambda) {
    if (lambda.empty()) throw std::invalid_argument("densities: need at least one class");
    double total = 0.0;
    for (double l : lambda) {
        if (!(l >= 0.0 && l <= 1.0)) throw std::invalid_argument("densities: each entry must lie in [0, 1]");
        total += l;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("densities: entries must sum to 1");
}

std::vector<double> line_densities(std::span<const double> lambda) {
    validate_densities(lambda);
    std::vector<double> x;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < lambda.size(); ++i) {
        acc += lambda[i];
        x.push_back(std::min(acc, 1.0));
    }
    return x;
}

std::size_t default_burn_in(std::span<const double> lambda) {
    validate_densities(lambda);
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k + 1 < lambda.size(); ++k)
        if (lambda[k] > 0.0) gap = std::min(gap, lambda[k]);
    if (!std::isfinite(gap)) return 0;
    return static_cast<std::size_t>(std::ceil(50.0 / gap));
}

namespace {

QueueState run_columns(const std::vector<double>& x, std::size_t columns, RngStream& rng, std::vector<int>* out) {
    QueueState q(static_cast<int>(x.size()));
    MultiLineCollapser step(q);
    for (std::size_t c = 0; c < columns; ++c) {
        const int cls = step.column([&](int k) { return rng.bernoulli(x[static_cast<std::size_t>(k - 1)]); });
        if (out) out->push_back(cls);
    }
    return q;
}

}  // namespace

std::vector<int> sample_stationary(std::span<const double> lambda, std::size_t length, long burn_in, RngStream& rng) {
    validate_densities(lambda);
    // zero-density classes never occur; dropping them keeps every queue positive recurrent
    std::vector<double> kept;
    std::vector<int> original;
    for (std::size_t i = 0; i < lambda.size(); ++i)
        if (lambda[i] > 0.0) {
            kept.push_back(lambda[i]);
            original.push_back(static_cast<int>(i) + 1);
        }
    const auto x = line_densities(kept);
    const std::size_t b = burn_in < 0 ? default_burn_in(kept) : static_cast<std::size_t>(burn_in);
    std::vector<int> produced;
    produced.reserve(length + b);
    run_columns(x, length + b, rng, &produced);
    // produced[0] is the rightmost column; keep the last `length`, reversed into lattice order
    std::vector<int> out(produced.rbegin(), produced.rbegin() + static_cast<std::ptrdiff_t>(length));
    for (int& c : out) c = original[static_cast<std::size_t>(c - 1)];
    return out;
}

EmptyQueueEstimate empty_queue_prob_estimate(std::span<const double> lambda, std::size_t samples, RngStream& rng,
                                             long depth) {
    const auto x = line_densities(lambda);
    if (x.size() < 2) throw std::invalid_argument("empty_queue_prob_estimate: needs at least two lines");
    if (samples == 0) throw std::invalid_argument("empty_queue_prob_estimate: samples must be positive");
    const std::size_t d = depth < 0 ? default_burn_in(lambda) : static_cast<std::size_t>(depth);
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples; ++s) hits += run_columns(x, d, rng, nullptr).all_empty();
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(samples)), samples};
}

}  // namespace speedlab
