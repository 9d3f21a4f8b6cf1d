#include "speedlab/formulas.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/quadrature/gauss.hpp>

namespace speedlab {

namespace {

void check_speed(double u, const char* who) {
    if (!(u >= -1.0 && u <= 1.0)) throw std::domain_error(std::string(who) + ": speed outside [-1, 1]");
}

double sq(double v) { return v * v; }

}  // namespace

Joint2Density joint2_density(double u0, double u1) {
    check_speed(u0, "joint2_density");
    check_speed(u1, "joint2_density");
    const double f = u0 > u1 ? 0.25 : (u1 - u0) / 4.0;
    const double g = u0 == u1 ? (1.0 - u0 * u0) / 8.0 : 0.0;
    return {f, g};
}

void LazyWalkSpec::validate() const {
    if (!(p_plus >= 0.0 && p_minus >= 0.0 && p_zero >= 0.0))
        throw std::invalid_argument("LazyWalkSpec: step probabilities must be nonnegative");
    if (std::abs(p_plus + p_minus + p_zero - 1.0) > 1e-12)
        throw std::invalid_argument("LazyWalkSpec: step probabilities must sum to 1");
    if (steps < 0) throw std::invalid_argument("LazyWalkSpec: steps must be >= 0");
}

double walk_max_zero_prob_any(const LazyWalkSpec& spec) {
    spec.validate();
    // mass[d] = P(S_i = -d and S_j <= 0 for all j <= i)
    std::vector<double> mass(static_cast<std::size_t>(spec.steps) + 2, 0.0), next(mass.size());
    mass[0] = 1.0;
    for (int i = 0; i < spec.steps; ++i) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int d = 0; d <= i; ++d) {
            const double m = mass[d];
            if (m == 0.0) continue;
            if (d > 0) next[d - 1] += m * spec.p_plus;  // from 0 an up-step leaves the event
            next[d] += m * spec.p_zero;
            next[d + 1] += m * spec.p_minus;
        }
        mass.swap(next);
    }
    double total = 0.0;
    for (double m : mass) total += m;
    return total;
}

double walk_max_zero_prob(const LazyWalkSpec& spec) {
    spec.validate();
    if (spec.p_plus != spec.p_minus)
        throw std::invalid_argument("walk_max_zero_prob: needs symmetric steps (p_plus == p_minus)");
    return walk_max_zero_prob_any(spec);
}

double walk_end_zero_or_minus_one(const LazyWalkSpec& spec) {
    spec.validate();
    const int n = spec.steps;
    std::vector<double> law(2 * static_cast<std::size_t>(n) + 1, 0.0), next(law.size());
    law[n] = 1.0;  // index = position + n
    for (int i = 0; i < n; ++i) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int j = n - i; j <= n + i; ++j) {
            const double m = law[j];
            if (m == 0.0) continue;
            next[j + 1] += m * spec.p_plus;
            next[j] += m * spec.p_zero;
            next[j - 1] += m * spec.p_minus;
        }
        law.swap(next);
    }
    return law[n] + (n > 0 ? law[n - 1] : 0.0);
}

double dist2(int k, Dist2Region region, double x, double y) {
    if (k < 1) throw std::invalid_argument("dist2: k must be >= 1");
    if (!(x >= 0.0 && x < y && y <= 1.0)) throw std::invalid_argument("dist2: need 0 <= x < y <= 1");
    const double below = (y - x) * (1.0 - y);
    const LazyWalkSpec walk{x * (1.0 - y), (1.0 - x) * y, x * y + (1.0 - x) * (1.0 - y), k - 1};
    const double diag = (y - x) * (1.0 - x) * y * walk_max_zero_prob_any(walk);
    switch (region) {
        case Dist2Region::below: return below;
        case Dist2Region::diag: return diag;
        case Dist2Region::above: return (y - x) - below - diag;
    }
    return 0.0;
}

double dist2_diag_asymptotic(int k, double u) {
    if (k < 1) throw std::invalid_argument("dist2_diag_asymptotic: k must be >= 1");
    check_speed(u, "dist2_diag_asymptotic");
    return std::sqrt((1.0 - u * u) / (16.0 * std::numbers::pi * k));
}

double dist2_diag_density(int k, double u) {
    if (k < 1) throw std::invalid_argument("dist2_diag_density: k must be >= 1");
    check_speed(u, "dist2_diag_density");
    const double h = 0.5 * (1.0 + u);
    const double s = h * (1.0 - h);
    return (1.0 - u * u) / 8.0 * walk_max_zero_prob(LazyWalkSpec{s, s, 1.0 - 2.0 * s, k - 1});
}

const std::vector<std::string>& joint3_strata() {
    static const std::vector<std::string> names = {
        "u0<u1<u2", "u0<u2<u1", "u1<u0<u2", "u1<u2<u0", "u2<u0<u1", "u2<u1<u0", "u0=u1<u2",
        "u0<u1=u2", "u1<u0=u2", "u0=u2<u1", "u1=u2<u0", "u2<u0=u1", "u0=u1=u2"};
    return names;
}

Joint3Density joint3_density(double u0, double u1, double u2) {
    check_speed(u0, "joint3_density");
    check_speed(u1, "joint3_density");
    check_speed(u2, "joint3_density");
    int s;
    double d;
    if (u0 == u1 && u1 == u2) {
        s = 12;
        d = sq(1.0 - u0 * u0) / 32.0;
    } else if (u0 == u1) {
        if (u0 < u2) {
            s = 6;
            d = (u2 - u1) * (1.0 - u1 * u1) * (2.0 + 3.0 * u2 - u1) / 64.0;
        } else {
            s = 11;
            d = (1.0 - u1 * u1) / 16.0;
        }
    } else if (u1 == u2) {
        if (u0 < u1) {
            s = 7;
            d = (u1 - u0) * (1.0 - u1 * u1) * (2.0 - 3.0 * u0 + u1) / 64.0;
        } else {
            s = 10;
            d = (1.0 - u1 * u1) / 16.0;
        }
    } else if (u0 == u2) {
        if (u1 < u0) {
            s = 8;
            d = (u2 - u1) * (1.0 - u2 * u2) / 16.0;
        } else {
            s = 9;
            d = (u1 - u0) * (1.0 - u0 * u0) / 16.0;
        }
    } else if (u0 < u1 && u1 < u2) {
        s = 0;
        d = 3.0 / 32.0 * (u2 - u1) * (u1 - u0) * (u2 - u0);
    } else if (u0 < u2 && u2 < u1) {
        s = 1;
        d = (u2 - u0) * (2.0 + 4.0 * u1 - 3.0 * u2 - 3.0 * u0) / 32.0;
    } else if (u1 < u0 && u0 < u2) {
        s = 2;
        d = (u2 - u0) * (2.0 + 3.0 * u2 + 3.0 * u0 - 4.0 * u1) / 32.0;
    } else if (u1 < u2 && u2 < u0) {
        s = 3;
        d = (u2 - u1) / 8.0;
    } else if (u2 < u0 && u0 < u1) {
        s = 4;
        d = (u1 - u0) / 8.0;
    } else {
        s = 5;
        d = 1.0 / 8.0;
    }
    const int dim = s < 6 ? 3 : (s < 12 ? 2 : 1);
    return {s, joint3_strata()[static_cast<std::size_t>(s)], dim, d};
}

double vandermonde(std::span<const double> x, int a, int b) {
    if (a < 0 || b >= static_cast<int>(x.size()) || a > b + 1)
        throw std::out_of_range("vandermonde: index range outside the vector");
    double v = 1.0;
    for (int i = a; i <= b; ++i)
        for (int j = i + 1; j <= b; ++j) v *= x[j] - x[i];
    return v;
}

double ordered_density(std::span<const double> uhat) {
    for (std::size_t i = 0; i < uhat.size(); ++i) {
        if (!(uhat[i] >= 0.0 && uhat[i] <= 1.0)) throw std::domain_error("ordered_density: entries must lie in [0, 1]");
        if (i > 0 && !(uhat[i] > uhat[i - 1])) throw std::domain_error("ordered_density: entries must increase");
    }
    if (uhat.empty()) return 1.0;
    const int n = static_cast<int>(uhat.size());
    return std::tgamma(n + 1.0) * vandermonde(uhat, 0, n - 1);
}

double empty_queue_prob(std::span<const double> x) {
    const int n = static_cast<int>(x.size());
    if (n < 1) throw std::invalid_argument("empty_queue_prob: need at least one line");
    for (int i = 0; i < n; ++i) {
        if (!(x[i] > 0.0 && x[i] < 1.0)) throw std::domain_error("empty_queue_prob: densities must lie in (0, 1)");
        if (i > 0 && !(x[i] >= x[i - 1])) throw std::domain_error("empty_queue_prob: densities must be nondecreasing");
    }
    double denom = 1.0;
    for (int i = 1; i <= n; ++i) denom *= std::pow(x[i - 1], i - 1) * std::pow(1.0 - x[i - 1], n - i);
    return vandermonde(x, 0, n - 1) / denom;
}

double two_line_pair_prob(int a, int b, double x1, double x2) {
    if (!(x1 > 0.0 && x1 < x2 && x2 < 1.0)) throw std::invalid_argument("two_line_pair_prob: need 0 < x1 < x2 < 1");
    if (a < 1 || a > 3 || b < 1 || b > 3) throw std::out_of_range("two_line_pair_prob: classes are 1, 2, 3");
    // stationary queue: P(Q = j) = Q2 r^j; two columns can drain at most two customers, so cap at 2
    const double q2 = (x2 - x1) / (x2 * (1.0 - x1));
    const double r = x1 * (1.0 - x2) / ((1.0 - x1) * x2);
    const double start[3] = {q2, q2 * r, 1.0 - q2 - q2 * r};
    auto bern = [](bool bit, double p) { return bit ? p : 1.0 - p; };
    auto step = [](int& q, bool top, bool bottom) {
        q += top;
        if (!bottom) return 3;
        if (q > 0) {
            --q;
            return 1;
        }
        return 2;
    };
    double total = 0.0;
    for (int q0 = 0; q0 < 3; ++q0)
        for (int bits = 0; bits < 16; ++bits) {
            const bool t1 = bits & 1, b1 = bits & 2, t0 = bits & 4, b0 = bits & 8;
            int q = q0;
            const int v1 = step(q, t1, b1);  // site 1 is processed first
            const int v0 = step(q, t0, b0);
            if (v0 != a || v1 != b) continue;
            total += start[q0] * bern(t1, x1) * bern(b1, x2) * bern(t0, x1) * bern(b0, x2);
        }
    return total;
}

double rightmost_prob(int n, int k) {
    if (n < 1 || k < 1 || k > n) throw std::out_of_range("rightmost_prob: need 1 <= k <= n");
    return 2.0 * n / (static_cast<double>(n + k - 1) * static_cast<double>(n + k));
}

double rightmost_density(int n, int k, double y) {
    if (n < 1 || k < 1 || k > n) throw std::out_of_range("rightmost_density: need 1 <= k <= n");
    if (!(y >= 0.0 && y <= 1.0)) throw std::domain_error("rightmost_density: y must lie in [0, 1]");
    return std::pow(y, n + k - 2) * ((n + 1 - k) - (n - k) * y);
}

double equal_speeds_prob(int n) {
    if (n < 0) throw std::invalid_argument("equal_speeds_prob: n must be >= 0");
    return std::exp(2.0 * std::lgamma(n + 1.0) - std::lgamma(2.0 * n + 2.0));
}

namespace {

double log_step_count_prob(long count) {
    const double k = static_cast<double>((count - 1) / 2);
    // log(C_k) - (2k + 1) log 2
    return std::lgamma(2.0 * k + 1.0) - std::lgamma(k + 1.0) - std::lgamma(k + 2.0) - (2.0 * k + 1.0) * std::numbers::ln2;
}

double gap_success(double u) {
    if (!(u > -1.0 && u < 1.0)) throw std::domain_error("convoy gap: speed must lie in (-1, 1)");
    return 0.5 * (1.0 - u * u);
}

}  // namespace

double convoy_step_count_prob(int count) {
    if (count < 1 || count % 2 == 0) return 0.0;
    return std::exp(log_step_count_prob(count));
}

double convoy_gap_pmf(double u, long m) {
    const double s = gap_success(u);
    if (m < 1) throw std::invalid_argument("convoy_gap_pmf: m must be >= 1");
    const double ls = std::log(s), lf = std::log1p(-s);
    const double lm = std::lgamma(static_cast<double>(m));
    double total = 0.0;
    for (long K = 1; K <= m; K += 2) {
        const double kk = static_cast<double>(K);
        const double log_nb = lm - std::lgamma(kk) - std::lgamma(static_cast<double>(m - K + 1)) + kk * ls +
                              static_cast<double>(m - K) * lf;
        total += std::exp(log_step_count_prob(K) + log_nb);
    }
    return total;
}

double convoy_gap_tail(double u, long m) {
    const double s = gap_success(u);
    if (m < 0) throw std::invalid_argument("convoy_gap_tail: m must be >= 0");
    // P(K > m) = sum_{k >= k0} C_k / 2^(2k+1) = binom(2 k0, k0) / 4^k0
    const double k0 = static_cast<double>((m + 1) / 2);
    double tail = std::exp(std::lgamma(2.0 * k0 + 1.0) - 2.0 * std::lgamma(k0 + 1.0) - 2.0 * k0 * std::numbers::ln2);
    if (m == 0) return tail;
    const boost::math::binomial_distribution<double> bin(static_cast<double>(m), s);
    for (long K = 1; K <= m; K += 2) tail += convoy_step_count_prob(static_cast<int>(K)) * boost::math::cdf(bin, K - 1.0);
    return tail;
}

double AsepValues::signed_density(double x, double y) const {
    if (!(x >= -rho && x < y && y <= rho)) throw std::domain_error("signed_density: need -rho <= x < y <= rho");
    return (y - x) / (4.0 * rho * rho);
}

double AsepValues::interaction_prob(double J) const {
    if (!(J >= 0.0)) throw std::domain_error("interaction_prob: J must be >= 0");
    return (1.0 - p) + p * std::exp(-J);
}

AsepValues asep_values(double p) {
    if (!(p > 0.5 && p <= 1.0)) throw std::invalid_argument("p must be in (0.5, 1]");
    const double rho = 2.0 * p - 1.0;
    return {p, rho, (2.0 - p) / 3.0, rho / 3.0};
}

double gauss_integrate(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss<double, 30>::integrate(f, a, b);
}

}  // namespace speedlab
