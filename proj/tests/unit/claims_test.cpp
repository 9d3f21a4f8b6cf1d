#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "speedlab/claims.hpp"

using namespace speedlab;

namespace {

ClaimSpec make(TestKind kind, Measurement m) {
    ClaimSpec s;
    s.id = "t";
    s.kind = kind;
    s.estimator = [m] { return m; };
    return s;
}

bool verdict(const ClaimSpec& s) { return run_claims({s}, {}).claims.at(0).pass; }

Measurement est(double e, double se = std::nan("")) {
    Measurement m;
    m.estimate = e;
    m.standard_error = se;
    return m;
}

// JSON with the timing fields removed, for determinism comparisons
nlohmann::json untimed(const TestReport& r) {
    auto j = nlohmann::json::parse(r.to_json());
    j.erase("runtime_seconds");
    j.erase("jobs");
    for (auto& c : j["claims"]) c.erase("seconds");
    return j;
}

}  // namespace

TEST(Verdicts, ExactEquality) {
    auto s = make(TestKind::exact_equality, est(0.5));
    s.exact = 0.5;
    EXPECT_TRUE(verdict(s));
    s.exact = 0.5 + 1e-15;
    EXPECT_FALSE(verdict(s));  // tolerance 0 is bitwise
    s.tolerance = 1e-12;
    EXPECT_TRUE(verdict(s));
}

TEST(Verdicts, ZSigma) {
    auto s = make(TestKind::z_sigma, est(0.5, 0.005));
    s.exact = 0.5;
    s.tolerance = 4.0;
    EXPECT_TRUE(verdict(s));
    // the harness self-test: the same estimate against a wrong value must fail
    s.exact = 0.6;
    EXPECT_FALSE(verdict(s));
    s.expect_fail = true;
    EXPECT_TRUE(verdict(s));
}

TEST(Verdicts, BandUsesInterval) {
    auto s = make(TestKind::band, est(0.431, 0.001));
    s.band_lo = 13.0 / 30.0;
    s.band_hi = 13.0 / 30.0 + 0.02;
    s.alpha = 0.001;
    EXPECT_TRUE(verdict(s));  // 0.431 + 3.29 * 0.001 reaches 0.4333
    s.estimator = [] { return est(0.425, 0.001); };
    EXPECT_FALSE(verdict(s));
}

TEST(Verdicts, AbsTolerance) {
    auto s = make(TestKind::abs_tolerance, est(0.515, 0.005));
    s.exact = 0.5;
    s.tolerance = 0.02;
    EXPECT_TRUE(verdict(s));
    s.tolerance = 0.01;
    EXPECT_FALSE(verdict(s));
}

TEST(Verdicts, PValueKinds) {
    Measurement m;
    m.estimate = 1.0;
    m.p_value = 0.01;
    auto s = make(TestKind::ks, m);
    s.alpha = 0.001;
    EXPECT_TRUE(verdict(s));
    s.alpha = 0.05;
    EXPECT_FALSE(verdict(s));
}

TEST(Verdicts, NonFiniteAndThrowingEstimatorsFail) {
    auto s = make(TestKind::abs_tolerance, est(std::nan("")));
    s.exact = 0.0;
    s.tolerance = 1.0;
    EXPECT_FALSE(verdict(s));
    s.estimator = []() -> Measurement { throw std::runtime_error("window too small"); };
    const auto r = run_claims({s}, {});
    EXPECT_FALSE(r.claims[0].pass);
    EXPECT_EQ(r.claims[0].note, "window too small");
}

TEST(Verdicts, BonferroniSplit) {
    Measurement m;
    m.estimate = 1.0;
    m.p_value = 0.0004;
    auto a = make(TestKind::chi2, m), b = a;
    RunOptions o;
    o.family_alpha = 0.001;
    const auto r = run_claims({a, b}, o);
    EXPECT_EQ(r.bonferroni_claims, 2u);
    EXPECT_DOUBLE_EQ(r.claims[0].alpha, 0.0005);
    EXPECT_FALSE(r.claims[0].pass);
}

TEST(Report, CriteriaIgnoreCompanions) {
    auto good = make(TestKind::exact_equality, est(1.0));
    good.exact = 1.0;
    good.criterion = 3;
    auto bad = good;
    bad.exact = 2.0;
    bad.companion = true;
    const auto r = run_claims({good, bad}, {});
    EXPECT_TRUE(r.criteria().at(3));
    EXPECT_FALSE(r.all_passed());
}

TEST(Suites, QuickSuitePasses) {
    const auto specs = quick_suite({});
    RunOptions o;
    o.suite = "quick";
    const auto r = run_claims(specs, o);
    for (const auto& c : r.claims) EXPECT_TRUE(c.pass) << c.id << " " << c.statistic << " " << c.note;
    std::set<int> crit;
    for (const auto& c : r.claims) crit.insert(c.criterion);
    for (int k : {1, 2, 7, 8}) EXPECT_TRUE(crit.count(k)) << k;

    const auto j = nlohmann::json::parse(r.to_json());
    for (const char* key : {"suite", "seed", "version", "claims", "criteria", "all_passed", "multiple_testing"})
        EXPECT_TRUE(j.contains(key)) << key;
    for (const char* key : {"id", "test", "estimate", "ci_low", "ci_high", "p_value", "verdict", "seed", "replicas"})
        EXPECT_TRUE(j["claims"][0].contains(key)) << key;
    EXPECT_NE(r.to_text().find("all claims passed"), std::string::npos);
}

TEST(Suites, MonteCarloClaimsDeterministicAcrossJobs) {
    SuiteConfig c;
    c.seed = 11;
    c.tasep_replicas = 60;
    c.symmetry_replicas = 3000;
    c.multiline_samples = 20000;
    auto pick = [](const std::vector<ClaimSpec>& all) {
        std::vector<ClaimSpec> out;
        for (const auto& s : all)
            if (s.id.rfind("rightmost.n3", 0) == 0 || s.id.rfind("symmetry", 0) == 0 || s.id.rfind("pairs.", 0) == 0 ||
                s.id.rfind("speed.", 0) == 0 || s.id.rfind("selftest", 0) == 0)
                out.push_back(s);
        return out;
    };
    c.jobs = 1;
    const auto a = pick(full_suite(c));
    c.jobs = 3;
    const auto b = pick(full_suite(c));
    ASSERT_FALSE(a.empty());
    ASSERT_EQ(a.size(), b.size());
    RunOptions o;
    o.seed = 11;
    EXPECT_EQ(untimed(run_claims(a, o)), untimed(run_claims(b, o)));
}

TEST(Suites, SelfTestRejectsWrongValue) {
    SuiteConfig c;
    c.tasep_replicas = 2000;
    for (const auto& s : full_suite(c)) {
        if (s.id != "selftest.wrong_exact") continue;
        EXPECT_TRUE(s.expect_fail);
        const auto r = run_claims({s}, {});
        EXPECT_TRUE(r.claims[0].pass) << "a wrong exact value was accepted";
        return;
    }
    FAIL() << "self-test claim missing";
}

TEST(Config, KeyValueFile) {
    const std::string path = ::testing::TempDir() + "speedlab_kv.cfg";
    {
        std::ofstream out(path);
        out << "# comment\nseed = 11\n  suite=full  # trailing\n\n";
    }
    const auto kv = read_key_values(path);
    EXPECT_EQ(kv.at("seed"), "11");
    EXPECT_EQ(kv.at("suite"), "full");
    {
        std::ofstream out(path);
        out << "no equals sign\n";
    }
    EXPECT_THROW(read_key_values(path), std::runtime_error);
    std::remove(path.c_str());
    EXPECT_THROW(read_key_values(path), std::runtime_error);
}
