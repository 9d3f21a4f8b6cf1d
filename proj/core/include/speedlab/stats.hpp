#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace speedlab {

struct TestResult {
    double statistic;
    double p_value;
    int dof = 0;  // chi-square only
};

/// P(sqrt(n) D > lambda) in the Kolmogorov limit: 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_survival(double lambda);

/// One-sample Kolmogorov-Smirnov test against a continuous cdf. Needs >= 20
/// samples. The p-value uses the asymptotic law with Stephens' small-n
/// correction (sqrt(n) + 0.12 + 0.11/sqrt(n)).
TestResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Pearson goodness of fit of counts against expected counts (same total).
/// Every expected count must be >= 5.
TestResult chi2_test(std::span<const double> observed, std::span<const double> expected);

/// Two-sample chi-square homogeneity test on two count vectors over the same cells.
/// Cells whose pooled expected count is < 5 are merged into one remainder cell
/// first; throws if fewer than two cells survive.
TestResult chi2_two_sample(std::span<const double> a, std::span<const double> b);

/// z = (estimate - target) / se with a two-sided normal p-value.
TestResult z_test(double estimate, double se, double target);

/// Upper-tail p-value of a chi-square statistic.
double chi2_survival(double statistic, int dof);

/// Streaming mean/variance (Welford); merging is exact in real arithmetic.
class RunningStats {
public:
    void add(double x) noexcept;
    void merge(const RunningStats& other) noexcept;

    std::uint64_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    double variance() const noexcept { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double standard_error() const noexcept;

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Sum of a sequence in a fixed pairwise tree; identical for any thread count.
double pairwise_sum(std::span<const double> values);

/// Mean and standard error of a 0/1 or real sample, via pairwise sums.
struct SampleSummary {
    double mean;
    double standard_error;
    std::size_t n;
};
SampleSummary summarize(std::span<const double> values);

/// Binomial proportion with its standard error sqrt(p(1-p)/n).
SampleSummary proportion(std::size_t hits, std::size_t n);

struct LinearFit {
    double intercept;
    double slope;
    double intercept_se;
    double slope_se;
};

/// Ordinary least squares y = a + b x with classical standard errors.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

/// Weighted least squares with weights w (e.g. bin counts); standard errors
/// treat 1/w as the relative variance of each point.
LinearFit weighted_least_squares(std::span<const double> x, std::span<const double> y, std::span<const double> w);

}  // namespace speedlab
