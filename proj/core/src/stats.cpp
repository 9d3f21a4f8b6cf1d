#include "speedlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace speedlab {

double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) return 1.0;
    // the alternating series converges fast once lambda > ~0.3; below that the value is 1 to double precision
    if (lambda < 0.2) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 ? 1.0 : -1.0) * term;
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf) {
    const std::size_t n = samples.size();
    if (n < 20) throw std::invalid_argument("ks_test: needs at least 20 samples");
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(s[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    const double rn = std::sqrt(static_cast<double>(n));
    return {d, kolmogorov_survival((rn + 0.12 + 0.11 / rn) * d)};
}

double chi2_survival(double statistic, int dof) {
    if (dof < 1) throw std::invalid_argument("chi2_survival: dof must be >= 1");
    if (statistic <= 0.0) return 1.0;
    return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(dof), statistic));
}

TestResult chi2_test(std::span<const double> observed, std::span<const double> expected) {
    if (observed.size() != expected.size() || observed.size() < 2)
        throw std::invalid_argument("chi2_test: need two or more matching cells");
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] < 5.0) throw std::invalid_argument("chi2_test: expected cell count below 5");
        stat += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
    }
    const int dof = static_cast<int>(observed.size()) - 1;
    return {stat, chi2_survival(stat, dof), dof};
}

TestResult chi2_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("chi2_two_sample: count vectors differ in length");
    double ta = 0.0, tb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ta += a[i];
        tb += b[i];
    }
    if (ta <= 0.0 || tb <= 0.0) throw std::invalid_argument("chi2_two_sample: empty sample");
    const double share_a = ta / (ta + tb), share_b = tb / (ta + tb);

    std::vector<double> ca, cb;
    double rest_a = 0.0, rest_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double pooled = a[i] + b[i];
        if (pooled * std::min(share_a, share_b) >= 5.0) {
            ca.push_back(a[i]);
            cb.push_back(b[i]);
        } else {
            rest_a += a[i];
            rest_b += b[i];
        }
    }
    if (rest_a + rest_b > 0.0) {
        ca.push_back(rest_a);
        cb.push_back(rest_b);
    }
    if (ca.size() < 2) throw std::invalid_argument("chi2_two_sample: fewer than two usable cells");

    double stat = 0.0;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        const double pooled = ca[i] + cb[i];
        if (pooled == 0.0) continue;
        const double ea = pooled * share_a, eb = pooled * share_b;
        stat += (ca[i] - ea) * (ca[i] - ea) / ea + (cb[i] - eb) * (cb[i] - eb) / eb;
    }
    const int dof = static_cast<int>(ca.size()) - 1;
    return {stat, chi2_survival(stat, dof), dof};
}

TestResult z_test(double estimate, double se, double target) {
    if (!(se > 0.0)) throw std::invalid_argument("z_test: standard error must be positive");
    const double z = (estimate - target) / se;
    return {z, std::erfc(std::abs(z) / std::sqrt(2.0))};
}

void RunningStats::add(double x) noexcept {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
}

void RunningStats::merge(const RunningStats& o) noexcept {
    if (o.n_ == 0) return;
    if (n_ == 0) {
        *this = o;
        return;
    }
    const double n = static_cast<double>(n_ + o.n_);
    const double d = o.mean_ - mean_;
    mean_ += d * static_cast<double>(o.n_) / n;
    m2_ += o.m2_ + d * d * static_cast<double>(n_) * static_cast<double>(o.n_) / n;
    n_ += o.n_;
}

double RunningStats::standard_error() const noexcept {
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t h = v.size() / 2;
    return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

SampleSummary summarize(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) throw std::invalid_argument("summarize: empty sample");
    const double mean = pairwise_sum(values) / static_cast<double>(n);
    std::vector<double> dev(n);
    for (std::size_t i = 0; i < n; ++i) dev[i] = (values[i] - mean) * (values[i] - mean);
    const double var = n > 1 ? pairwise_sum(dev) / static_cast<double>(n - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

SampleSummary proportion(std::size_t hits, std::size_t n) {
    if (n == 0) throw std::invalid_argument("proportion: empty sample");
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n};
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 3) throw std::invalid_argument("least_squares: need >= 3 matching points");
    const double mx = pairwise_sum(x) / static_cast<double>(n);
    const double my = pairwise_sum(y) / static_cast<double>(n);
    std::vector<double> sxx(n), sxy(n);
    for (std::size_t i = 0; i < n; ++i) {
        sxx[i] = (x[i] - mx) * (x[i] - mx);
        sxy[i] = (x[i] - mx) * (y[i] - my);
    }
    const double Sxx = pairwise_sum(sxx);
    if (!(Sxx > 0.0)) throw std::invalid_argument("least_squares: x has no spread");
    const double b = pairwise_sum(sxy) / Sxx;
    const double a = my - b * mx;
    std::vector<double> res(n);
    for (std::size_t i = 0; i < n; ++i) res[i] = (y[i] - a - b * x[i]) * (y[i] - a - b * x[i]);
    const double s2 = pairwise_sum(res) / static_cast<double>(n - 2);
    return {a, b, std::sqrt(s2 * (1.0 / static_cast<double>(n) + mx * mx / Sxx)), std::sqrt(s2 / Sxx)};
}

LinearFit weighted_least_squares(std::span<const double> x, std::span<const double> y,
                                 std::span<const double> w) {
    const std::size_t n = x.size();
    if (n != y.size() || n != w.size() || n < 3)
        throw std::invalid_argument("weighted_least_squares: need >= 3 matching points");
    std::vector<double> wx(n), wy(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(w[i] >= 0.0)) throw std::invalid_argument("weighted_least_squares: negative weight");
        wx[i] = w[i] * x[i];
        wy[i] = w[i] * y[i];
    }
    const double W = pairwise_sum(w);
    if (!(W > 0.0)) throw std::invalid_argument("weighted_least_squares: zero total weight");
    const double mx = pairwise_sum(wx) / W, my = pairwise_sum(wy) / W;
    std::vector<double> sxx(n), sxy(n);
    for (std::size_t i = 0; i < n; ++i) {
        sxx[i] = w[i] * (x[i] - mx) * (x[i] - mx);
        sxy[i] = w[i] * (x[i] - mx) * (y[i] - my);
    }
    const double Sxx = pairwise_sum(sxx);
    if (!(Sxx > 0.0)) throw std::invalid_argument("weighted_least_squares: x has no spread");
    const double b = pairwise_sum(sxy) / Sxx;
    const double a = my - b * mx;
    std::vector<double> res(n);
    std::size_t used = 0;
    for (std::size_t i = 0; i < n; ++i) {
        res[i] = w[i] * (y[i] - a - b * x[i]) * (y[i] - a - b * x[i]);
        if (w[i] > 0.0) ++used;
    }
    if (used < 3) throw std::invalid_argument("weighted_least_squares: fewer than 3 weighted points");
    const double s2 = pairwise_sum(res) / static_cast<double>(used - 2);
    return {a, b, std::sqrt(s2 * (1.0 / W + mx * mx / Sxx)), std::sqrt(s2 / Sxx)};
}

}  // namespace speedlab
