#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "speedlab/formulas.hpp"
#include "speedlab/rng.hpp"
#include "speedlab/stats.hpp"

using namespace speedlab;

namespace {

// Piecewise Gauss-Legendre over [a, b] with the given interior breakpoints.
double integrate_split(const std::function<double(double)>& f, double a, double b, std::vector<double> cuts) {
    cuts.push_back(a);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = std::clamp(cuts[i], a, b), hi = std::clamp(cuts[i + 1], a, b);
        if (hi > lo) total += gauss_integrate(f, lo, hi);
    }
    return total;
}

// P(max_{0<=i<=n} S_i == 0) over every step sequence, with or without S_0.
double enumerate_max_zero(double pp, double pm, int n, bool include_origin) {
    double total = 0.0;
    const int paths = static_cast<int>(std::pow(3, n));
    for (int code = 0; code < paths; ++code) {
        int c = code, s = 0, mx = include_origin ? 0 : INT32_MIN;
        double w = 1.0;
        for (int i = 0; i < n; ++i, c /= 3) {
            const int step = c % 3 - 1;
            w *= step == 1 ? pp : step == -1 ? pm : 1.0 - pp - pm;
            s += step;
            mx = std::max(mx, s);
        }
        if (mx == 0) total += w;
    }
    return total;
}

}  // namespace

TEST(Joint2, DensityExamples) {
    EXPECT_DOUBLE_EQ(joint2_density(0.5, -0.5).continuous, 0.25);
    EXPECT_DOUBLE_EQ(joint2_density(-0.5, 0.5).continuous, 0.25);
    EXPECT_DOUBLE_EQ(joint2_density(0.0, 0.0).diagonal, 0.125);
    EXPECT_DOUBLE_EQ(joint2_density(0.3, -0.1).diagonal, 0.0);
}

TEST(Joint2, MassesByQuadrature) {
    const double above = gauss_integrate([](double u0) {
        return gauss_integrate([u0](double u1) { return joint2_density(u0, u1).continuous; }, -1.0, u0);
    }, -1.0, 1.0);
    const double below = gauss_integrate([](double u0) {
        return gauss_integrate([u0](double u1) { return joint2_density(u0, u1).continuous; }, u0, 1.0);
    }, -1.0, 1.0);
    const double diag = gauss_integrate([](double u) { return joint2_density(u, u).diagonal; }, -1.0, 1.0);
    const Joint2Masses m;
    EXPECT_NEAR(above, m.above, 1e-12);
    EXPECT_NEAR(below, m.below, 1e-12);
    EXPECT_NEAR(diag, m.equal, 1e-12);
    EXPECT_NEAR(above + below + diag, 1.0, 1e-12);
}

TEST(WalkMaximum, SmallCases) {
    EXPECT_DOUBLE_EQ(walk_max_zero_prob({0.3, 0.3, 0.4, 0}), 1.0);
    EXPECT_NEAR(walk_max_zero_prob({0.3, 0.3, 0.4, 1}), 0.7, 1e-15);
    EXPECT_NEAR(walk_max_zero_prob({0.25, 0.25, 0.5, 3}), enumerate_max_zero(0.25, 0.25, 3, true), 1e-12);
}

TEST(WalkMaximum, ConventionIncludesTheOrigin) {
    // with S_0 in the maximum, the reflection identity holds; without it, it fails at n = 1
    for (int n = 1; n <= 7; ++n)
        for (double q : {0.1, 0.25, 0.4}) {
            const LazyWalkSpec spec{q, q, 1.0 - 2 * q, n};
            EXPECT_NEAR(enumerate_max_zero(q, q, n, true), walk_max_zero_prob(spec), 1e-12);
            EXPECT_NEAR(walk_end_zero_or_minus_one(spec), walk_max_zero_prob(spec), 1e-12);
        }
    EXPECT_GT(std::abs(enumerate_max_zero(0.25, 0.25, 1, false) - walk_max_zero_prob({0.25, 0.25, 0.5, 1})), 0.1);
}

TEST(WalkMaximum, AsymmetricSteps) {
    for (int n = 0; n <= 7; ++n)
        EXPECT_NEAR(walk_max_zero_prob_any({0.2, 0.35, 0.45, n}), enumerate_max_zero(0.2, 0.35, n, true), 1e-12);
    EXPECT_THROW(walk_max_zero_prob({0.2, 0.35, 0.45, 3}), std::invalid_argument);
    EXPECT_THROW(LazyWalkSpec({0.5, 0.6, -0.1, 2}).validate(), std::invalid_argument);
    EXPECT_THROW(LazyWalkSpec({0.2, 0.2, 0.6, -1}).validate(), std::invalid_argument);
}

TEST(Dist2, Examples) {
    for (int k = 1; k <= 6; ++k) EXPECT_NEAR(dist2(k, Dist2Region::below, 0.2, 0.6), 0.16, 1e-15);
    EXPECT_NEAR(dist2(1, Dist2Region::diag, 0.2, 0.6), 0.4 * 0.8 * 0.6, 1e-15);
    const double sum = dist2(4, Dist2Region::below, 0.3, 0.5) + dist2(4, Dist2Region::diag, 0.3, 0.5) +
                       dist2(4, Dist2Region::above, 0.3, 0.5);
    EXPECT_NEAR(sum, 0.2, 1e-12);
    EXPECT_THROW(dist2(4, Dist2Region::below, 0.6, 0.2), std::invalid_argument);
    EXPECT_THROW(dist2(0, Dist2Region::below, 0.2, 0.6), std::invalid_argument);
}

TEST(Dist2, NeighbourCaseMatchesJoint2) {
    // k = 1: both speeds in [x, y] (uhat units), from the joint law of neighbours
    for (auto [x, y] : {std::pair{0.2, 0.6}, std::pair{0.1, 0.35}, std::pair{0.5, 0.95}}) {
        const double a = 2 * x - 1, b = 2 * y - 1;
        const double cont = gauss_integrate([&](double u0) {
            return integrate_split([u0](double u1) { return joint2_density(u0, u1).continuous; }, a, b, {u0});
        }, a, b);
        const double diag = gauss_integrate([](double u) { return joint2_density(u, u).diagonal; }, a, b);
        EXPECT_NEAR(cont + diag, dist2(1, Dist2Region::diag, x, y), 1e-12) << x << "," << y;
    }
}

TEST(Dist2, RegionsAreProbabilities) {
    for (int k : {1, 2, 4, 9})
        for (double x = 0.05; x < 1.0; x += 0.1)
            for (double y = x + 0.05; y <= 1.0; y += 0.1)
                for (auto r : {Dist2Region::below, Dist2Region::diag, Dist2Region::above}) {
                    const double v = dist2(k, r, x, y);
                    EXPECT_GE(v, -1e-15);
                    EXPECT_LE(v, y - x + 1e-15);
                }
}

TEST(Dist2, DiagonalDensityApproachesAsymptote) {
    for (double u : {0.0, 0.4, -0.7}) {
        const double exact = dist2_diag_density(2000, u), approx = dist2_diag_asymptotic(2000, u);
        EXPECT_NEAR(exact / approx, 1.0, 0.01) << u;
    }
    EXPECT_NEAR(dist2_diag_density(1, 0.0), 0.125, 1e-15);
}

TEST(Joint3, TableExamples) {
    auto a = joint3_density(-0.5, 0.0, 0.5);
    EXPECT_EQ(a.order, "u0<u1<u2");
    EXPECT_NEAR(a.density, 3.0 / 128.0, 1e-15);
    auto b = joint3_density(0.5, 0.0, -0.5);
    EXPECT_EQ(b.order, "u2<u1<u0");
    EXPECT_NEAR(b.density, 1.0 / 8.0, 1e-15);
    auto c = joint3_density(0.0, 0.0, 0.0);
    EXPECT_EQ(c.dimension, 1);
    EXPECT_NEAR(c.density, 1.0 / 32.0, 1e-15);
    EXPECT_EQ(joint3_strata().size(), 13u);
}

TEST(Joint3, DensitiesNonnegativeOnGrid) {
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= 20; ++j)
            for (int k = 0; k <= 20; ++k) {
                const auto d = joint3_density(-1 + 0.1 * i, -1 + 0.1 * j, -1 + 0.1 * k);
                ASSERT_GE(d.density, 0.0);
                ASSERT_EQ(joint3_strata()[static_cast<std::size_t>(d.stratum)], d.order);
            }
}

TEST(Joint3, MarginalizingTheLastSpeedGivesJoint2) {
    // off the diagonal: integral over u2 plus the two strata where u2 meets u0 or u1
    for (double u0 = -0.9; u0 < 1.0; u0 += 0.3)
        for (double u1 = -0.85; u1 < 1.0; u1 += 0.3) {
            const double cont = integrate_split([=](double u2) { return joint3_density(u0, u1, u2).density; }, -1.0, 1.0, {u0, u1});
            const double on_edges = joint3_density(u0, u1, u0).density + joint3_density(u0, u1, u1).density;
            EXPECT_NEAR(cont + on_edges, joint2_density(u0, u1).continuous, 1e-9) << u0 << "," << u1;
        }
    for (double u = -0.95; u < 1.0; u += 0.1) {
        const double cont = integrate_split([=](double u2) { return joint3_density(u, u, u2).density; }, -1.0, 1.0, {u});
        EXPECT_NEAR(cont + joint3_density(u, u, u).density, joint2_density(u, u).diagonal, 1e-9) << u;
    }
}

TEST(Joint3, EqualStratumMatchesEqualSpeeds) {
    const double m = gauss_integrate([](double u) { return joint3_density(u, u, u).density; }, -1.0, 1.0);
    EXPECT_NEAR(m, equal_speeds_prob(2), 1e-12);
    EXPECT_NEAR(m, 1.0 / 30.0, 1e-12);
}

TEST(OrderedDensity, SmallCases) {
    EXPECT_NEAR(ordered_density(std::vector<double>{0.25, 0.75}), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(ordered_density(std::vector<double>{0.4}), 1.0);
    EXPECT_THROW(ordered_density(std::vector<double>{0.5, 0.4}), std::domain_error);
    // change of variables to the neighbour law below the diagonal (Jacobian 4)
    for (double a = 0.05; a < 1.0; a += 0.1)
        for (double b = a + 0.07; b < 1.0; b += 0.1)
            EXPECT_NEAR(ordered_density(std::vector<double>{a, b}), 4.0 * joint2_density(2 * a - 1, 2 * b - 1).continuous, 1e-12);
}

TEST(OrderedDensity, MatchesThreeSpeedTable) {
    // on {u0 < u1 < u2} the ordered density is the table entry times the Jacobian 8
    for (double a = 0.05; a < 1.0; a += 0.15)
        for (double b = a + 0.04; b < 1.0; b += 0.15)
            for (double c = b + 0.03; c < 1.0; c += 0.15)
                EXPECT_NEAR(ordered_density(std::vector<double>{a, b, c}),
                            8.0 * joint3_density(2 * a - 1, 2 * b - 1, 2 * c - 1).density, 1e-12);
    // n = 2 carries the mass of {U0 < U1}
    const double m2 = gauss_integrate([](double a) {
        return gauss_integrate([a](double b) { return ordered_density(std::vector<double>{a, b}); }, a, 1.0);
    }, 0.0, 1.0);
    EXPECT_NEAR(m2, Joint2Masses{}.below, 1e-12);
}

TEST(Vandermonde, IntegralIdentity) {
    // Delta_{0,n}(x) = n! * integral of Delta_{1,n}(y) over x_{i-1} < y_i < x_i
    const std::vector<double> x2{0.1, 0.45, 0.8};
    const double i2 = gauss_integrate([&](double y1) {
        return gauss_integrate([&](double y2) { return vandermonde(std::vector<double>{y1, y2}, 0, 1); }, x2[1], x2[2]);
    }, x2[0], x2[1]);
    EXPECT_NEAR(vandermonde(x2, 0, 2), 2.0 * i2, 1e-8);

    const std::vector<double> x3{0.0, 0.2, 0.55, 0.9};
    const double i3 = gauss_integrate([&](double y1) {
        return gauss_integrate([&](double y2) {
            return gauss_integrate([&](double y3) { return vandermonde(std::vector<double>{y1, y2, y3}, 0, 2); }, x3[2], x3[3]);
        }, x3[1], x3[2]);
    }, x3[0], x3[1]);
    EXPECT_NEAR(vandermonde(x3, 0, 3), 6.0 * i3, 1e-8);
    EXPECT_DOUBLE_EQ(vandermonde(x3, 2, 2), 1.0);
    EXPECT_THROW(vandermonde(x3, 0, 4), std::out_of_range);
}

TEST(Rightmost, ThreeParticles) {
    EXPECT_NEAR(rightmost_prob(3, 1), 0.5, 1e-15);
    EXPECT_NEAR(rightmost_prob(3, 2), 0.3, 1e-15);
    EXPECT_NEAR(rightmost_prob(3, 3), 0.2, 1e-15);
    EXPECT_DOUBLE_EQ(rightmost_prob(1, 1), 1.0);
    for (int n = 1; n <= 10; ++n) {
        double s = 0.0;
        for (int k = 1; k <= n; ++k) s += rightmost_prob(n, k);
        EXPECT_NEAR(s, 1.0, 1e-12);
        EXPECT_NEAR(rightmost_prob(n, 1), 2.0 / (n + 1), 1e-15);
    }
}

TEST(Rightmost, IntegralRederivation) {
    // integrating the density gives 2n/((n+k-1)(n+k)); 2(n+1)/(...) would not normalize
    for (int n = 1; n <= 8; ++n)
        for (int k = 1; k <= n; ++k) {
            const double v = gauss_integrate([=](double y) { return rightmost_density(n, k, y); }, 0.0, 1.0);
            EXPECT_NEAR(v, 2.0 * n / ((n + k - 1.0) * (n + k)), 1e-12) << n << "," << k;
        }
}

TEST(Convoys, EqualSpeeds) {
    EXPECT_DOUBLE_EQ(equal_speeds_prob(0), 1.0);
    EXPECT_NEAR(equal_speeds_prob(1), 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(equal_speeds_prob(2), 1.0 / 30.0, 1e-15);
    const double q = gauss_integrate([](double u) { return std::pow(1 - u * u, 2) / 32.0; }, -1.0, 1.0);
    EXPECT_NEAR(equal_speeds_prob(2), q, 1e-14);
}

TEST(Convoys, StepCountLaw) {
    double s = 0.0;
    for (int c = 1; c <= 401; ++c) {
        if (c % 2 == 0) {
            EXPECT_EQ(convoy_step_count_prob(c), 0.0);
        }
        s += convoy_step_count_prob(c);
    }
    EXPECT_NEAR(convoy_step_count_prob(1), 0.5, 1e-15);
    EXPECT_NEAR(convoy_step_count_prob(3), 0.125, 1e-15);
    // remaining mass binom(402, 201)/4^201 ~ 1/sqrt(pi 201)
    EXPECT_NEAR(1.0 - s, 1.0 / std::sqrt(M_PI * 201.0), 5e-4);
}

TEST(Convoys, GapLawSumsToOne) {
    for (double u : {0.0, 0.5, -0.5}) {
        double s = 0.0;
        const long M = 20000;
        for (long m = 1; m <= M; ++m) s += convoy_gap_pmf(u, m);
        EXPECT_NEAR(s + convoy_gap_tail(u, M), 1.0, 1e-8) << u;
        EXPECT_NEAR(convoy_gap_tail(u, 0), 1.0, 1e-15);
        EXPECT_NEAR(convoy_gap_tail(u, 10), 1.0 - [&] {
            double t = 0.0;
            for (long m = 1; m <= 10; ++m) t += convoy_gap_pmf(u, m);
            return t;
        }(), 1e-12);
    }
}

TEST(Convoys, GapTailExponent) {
    std::vector<double> lx, ly;
    for (double m = 100; m <= 10000; m *= 1.25) {
        lx.push_back(std::log(m));
        ly.push_back(std::log(convoy_gap_pmf(0.3, static_cast<long>(m))));
    }
    EXPECT_NEAR(least_squares(lx, ly).slope, -1.5, 0.1);
}

TEST(Convoys, GapLawMatchesWalkSimulation) {
    // K = first passage of a simple walk to -1, then K successes of Bernoulli(s) trials
    const double u = 0.2, s = (1 - u * u) / 2;
    RngStream rng(40, 1);
    const int n = 100000;
    std::vector<double> hits(6, 0.0);
    for (int i = 0; i < n; ++i) {
        long pos = 0, K = 0;
        while (pos > -1 && K < 100) {
            pos += rng.bernoulli(0.5) ? 1 : -1;
            ++K;
        }
        if (pos > -1) continue;  // K > 100, so the gap exceeds 5
        long m = 0;
        for (long done = 0; done < K; ++m) done += rng.bernoulli(s);
        if (m <= 5) hits[static_cast<std::size_t>(m)] += 1.0;
    }
    for (long m = 1; m <= 5; ++m) {
        const double p = convoy_gap_pmf(u, m), f = hits[static_cast<std::size_t>(m)] / n;
        EXPECT_LE(std::abs(f - p), 4.0 * std::sqrt(p * (1 - p) / n)) << m;
    }
}

TEST(Asep, Values) {
    const auto one = asep_values(1.0);
    EXPECT_NEAR(one.swap_limit, 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(one.signed_density(-0.5, 0.5), joint2_density(-0.5, 0.5).continuous, 1e-15);
    const auto v = asep_values(0.7);
    EXPECT_NEAR(v.swap_limit, 13.0 / 30.0, 1e-15);
    EXPECT_NEAR(v.rho, 0.4, 1e-15);
    EXPECT_NEAR(v.r_slope, 0.4 / 3.0, 1e-15);
    EXPECT_DOUBLE_EQ(v.interaction_prob(0.0), 1.0);
    EXPECT_NEAR(v.interaction_prob(100.0), 0.3, 1e-15);
    EXPECT_THROW(asep_values(0.4), std::invalid_argument);
}

TEST(Asep, SignedDensityMass) {
    // mass of the signed density below the diagonal: rho / 3
    const auto v = asep_values(0.7);
    const double m = gauss_integrate([&](double x) {
        return gauss_integrate([&](double y) { return v.signed_density(x, y); }, x, v.rho);
    }, -v.rho, v.rho);
    EXPECT_NEAR(m, v.rho / 3.0, 1e-12);
}

TEST(Quadrature, ExactForHighDegree) {
    EXPECT_NEAR(gauss_integrate([](double x) { return std::pow(x, 59); }, 0.0, 1.0), 1.0 / 60.0, 1e-14);
    EXPECT_NEAR(gauss_integrate([](double x) { return std::exp(x); }, 0.0, 1.0), std::exp(1.0) - 1.0, 1e-14);
}
