#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "speedlab/rng.hpp"

namespace speedlab {

/// Occupancies of the N-1 coupled queues of an N-line process.
/// Queue i (1-based) holds customers of classes 1..i; count(i, j) is the
/// number of class-j customers waiting in queue i.
class QueueState {
public:
    QueueState() = default;
    explicit QueueState(int lines);

    int lines() const noexcept { return lines_; }
    std::int64_t count(int queue, int cls) const;
    void set(int queue, int cls, std::int64_t n);
    bool all_empty() const noexcept;
    std::int64_t total(int queue) const;

    /// e.g. "({1,1},{})": one brace group per queue, listing customers by class.
    std::string to_string() const;

    bool operator==(const QueueState&) const = default;

private:
    friend class MultiLineCollapser;
    std::size_t slot(int queue, int cls) const;

    int lines_ = 0;
    std::vector<std::int64_t> counts_;  // triangular, queue-major
};

struct CollapseStep {
    std::size_t column;  // index into the line arrays
    int output;          // emitted class, N+1 for a hole
    QueueState after;
};

struct CollapseResult {
    std::vector<int> classes;  // lattice (left-to-right) order
    QueueState final_queues;   // state after the leftmost column
    std::vector<CollapseStep> trace;  // right-to-left, only if requested
};

using Line = std::vector<std::uint8_t>;

/// Runs the queues over the columns right to left, starting from `initial`
/// (the state to the right of the last column). In each column, line 1
/// service injects a class-1 customer; for k = 2..N the arriving customer
/// (if any) joins queue k-1, then a service on line k releases the lowest
/// waiting class or, with queue k-1 empty, a class-k customer. No service
/// on line N yields class N+1.
CollapseResult collapse(std::span<const Line> lines, const QueueState& initial, bool with_trace = false);

/// Line densities x_k = lambda_1 + ... + lambda_k for k = 1..N.
std::vector<double> line_densities(std::span<const double> lambda);

/// Validates lambda (nonnegative, sums to 1, nonempty) or throws std::invalid_argument.
void validate_densities(std::span<const double> lambda);

/// 50 / (smallest positive lambda_k, k = 2..N); 0 when there are no queues.
std::size_t default_burn_in(std::span<const double> lambda);

/// Stationary sample of the (N+1)-type TASEP on `length` consecutive sites:
/// lines over length + burn_in columns, queues empty at the right end, the
/// burn_in rightmost outputs discarded. burn_in < 0 selects default_burn_in.
std::vector<int> sample_stationary(std::span<const double> lambda, std::size_t length, long burn_in,
                                   RngStream& rng);

struct EmptyQueueEstimate {
    double probability;
    double standard_error;
    std::size_t samples;
};

/// Frequency of the all-queues-empty state after `depth` columns started
/// empty (depth < 0 selects default_burn_in). Needs N >= 2 lines.
EmptyQueueEstimate empty_queue_prob_estimate(std::span<const double> lambda, std::size_t samples, RngStream& rng,
                                             long depth = -1);

}  // namespace speedlab
