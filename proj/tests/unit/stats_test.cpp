#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "speedlab/replicas.hpp"
#include "speedlab/rng.hpp"
#include "speedlab/stats.hpp"

using namespace speedlab;

TEST(ZTest, ZeroAtTarget) {
    const auto r = z_test(0.5, 0.005, 0.5);
    EXPECT_DOUBLE_EQ(r.statistic, 0.0);
    EXPECT_DOUBLE_EQ(r.p_value, 1.0);
    EXPECT_NEAR(z_test(0.52, 0.01, 0.5).statistic, 2.0, 1e-12);
    EXPECT_NEAR(z_test(0.52, 0.01, 0.5).p_value, 0.0455, 1e-4);
}

TEST(Ks, PValuesUniformAcrossSeeds) {
    // meta-test: 100 KS p-values of exact-uniform samples are themselves uniform
    std::vector<double> p;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        RngStream rng(seed, 0xC5);
        std::vector<double> x(10000);
        for (auto& v : x) v = rng.uniform(-1.0, 1.0);
        p.push_back(ks_test(x, [](double u) { return std::clamp((u + 1.0) / 2.0, 0.0, 1.0); }).p_value);
    }
    const auto meta = ks_test(p, [](double u) { return std::clamp(u, 0.0, 1.0); });
    EXPECT_GT(meta.p_value, 0.001);
    EXPECT_LE(std::count_if(p.begin(), p.end(), [](double v) { return v < 0.05; }), 15);
}

TEST(Ks, RejectsShiftedSample) {
    RngStream rng(50, 1);
    std::vector<double> x(10000);
    for (auto& v : x) v = rng.uniform(-0.9, 1.0);
    EXPECT_LT(ks_test(x, [](double u) { return std::clamp((u + 1.0) / 2.0, 0.0, 1.0); }).p_value, 0.001);
    EXPECT_THROW(ks_test(std::vector<double>(5, 0.0), [](double) { return 0.5; }), std::invalid_argument);
}

TEST(Ks, KolmogorovSurvivalKnownValues) {
    EXPECT_NEAR(kolmogorov_survival(1.358), 0.05, 5e-4);
    EXPECT_NEAR(kolmogorov_survival(1.949), 0.001, 5e-5);
}

TEST(Chi2, NullStatisticNearDof) {
    // a simulated distribution against itself: mean statistic ~ dof
    const std::vector<double> probs{0.1, 0.2, 0.3, 0.25, 0.15};
    RunningStats stat, stat2;
    for (std::uint64_t r = 0; r < 400; ++r) {
        RngStream rng(51, r);
        std::vector<double> obs(5, 0.0), other(5, 0.0);
        for (int i = 0; i < 5000; ++i) {
            for (auto* v : {&obs, &other}) {
                double u = rng.uniform();
                std::size_t k = 0;
                while (k + 1 < probs.size() && u >= probs[k]) u -= probs[k++];
                (*v)[k] += 1.0;
            }
        }
        std::vector<double> expected(5);
        for (std::size_t k = 0; k < 5; ++k) expected[k] = probs[k] * 5000.0;
        const auto t = chi2_test(obs, expected);
        EXPECT_EQ(t.dof, 4);
        stat.add(t.statistic);
        stat2.add(chi2_two_sample(obs, other).statistic);
    }
    EXPECT_NEAR(stat.mean(), 4.0, 4.0 * stat.standard_error());
    EXPECT_NEAR(stat2.mean(), 4.0, 4.0 * stat2.standard_error());
}

TEST(Chi2, SurvivalAndValidation) {
    EXPECT_NEAR(chi2_survival(3.841, 1), 0.05, 1e-4);
    EXPECT_NEAR(chi2_survival(9.488, 4), 0.05, 1e-4);
    const std::vector<double> obs{10, 10}, exp{2, 18};
    EXPECT_THROW(chi2_test(obs, exp), std::invalid_argument);
}

TEST(Chi2, TwoSampleMergesSparseCells) {
    const std::vector<double> a{500, 480, 1, 0, 2}, b{510, 470, 0, 1, 1};
    const auto r = chi2_two_sample(a, b);
    EXPECT_EQ(r.dof, 2);  // two large cells plus one merged remainder
    EXPECT_GT(r.p_value, 0.1);
    EXPECT_THROW(chi2_two_sample(std::vector<double>{1, 1}, std::vector<double>{1, 1}), std::invalid_argument);
}

TEST(RunningStats, MergeMatchesSequential) {
    RngStream rng(52, 1);
    RunningStats all, left, right;
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.uniform(-3.0, 5.0);
        all.add(x);
        (i < 400 ? left : right).add(x);
    }
    left.merge(right);
    EXPECT_EQ(left.count(), all.count());
    EXPECT_NEAR(left.mean(), all.mean(), 1e-12);
    EXPECT_NEAR(left.variance(), all.variance(), 1e-10);
}

TEST(Summaries, PairwiseSumAndProportion) {
    std::vector<double> x(1000, 0.1);
    EXPECT_NEAR(pairwise_sum(x), 100.0, 1e-12);
    const auto s = summarize(std::vector<double>{1, 0, 1, 1});
    EXPECT_DOUBLE_EQ(s.mean, 0.75);
    const auto p = proportion(30, 100);
    EXPECT_DOUBLE_EQ(p.mean, 0.3);
    EXPECT_NEAR(p.standard_error, std::sqrt(0.21 / 100), 1e-15);
}

TEST(LeastSquares, RecoversLine) {
    const std::vector<double> x{0, 1, 2, 3, 4}, y{1, 3, 5, 7, 9};
    const auto f = least_squares(x, y);
    EXPECT_NEAR(f.slope, 2.0, 1e-12);
    EXPECT_NEAR(f.intercept, 1.0, 1e-12);
    // weights only matter when points are off the line
    const std::vector<double> w{1, 100, 1, 1, 1}, yn{1, 3, 6, 7, 9};
    const auto g = weighted_least_squares(x, yn, w);
    const auto h = least_squares(x, yn);
    EXPECT_LT(std::abs(g.intercept + g.slope - 3.0), std::abs(h.intercept + h.slope - 3.0));
    const auto same = weighted_least_squares(x, yn, std::vector<double>(5, 7.0));
    EXPECT_NEAR(same.slope, h.slope, 1e-12);
}

TEST(Replicas, ResultsIndependentOfThreadCount) {
    auto fn = [](std::size_t i) {
        RngStream rng(53, i);
        return rng.uniform();
    };
    const auto a = run_replicas<double>(1000, 1, fn);
    const auto b = run_replicas<double>(1000, 4, fn);
    EXPECT_EQ(a, b);
    EXPECT_THROW(run_replicas<int>(10, 3, [](std::size_t i) -> int {
        if (i == 7) throw std::runtime_error("boom");
        return 0;
    }), std::runtime_error);
}
