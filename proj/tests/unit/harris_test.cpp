#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "speedlab/harris.hpp"
#include "speedlab/kinetic.hpp"
#include "speedlab/noise.hpp"
#include "speedlab/speed_lab.hpp"
#include "speedlab/stats.hpp"

using namespace speedlab;

namespace {

HarrisOptions tasep_until(double t) {
    HarrisOptions o;
    o.horizon = t;
    return o;
}

// counts of a discrete key, aligned over the union of keys of two samples
template <typename K>
std::pair<std::vector<double>, std::vector<double>> aligned(const std::map<K, double>& a, const std::map<K, double>& b) {
    std::map<K, std::pair<double, double>> all;
    for (const auto& [k, v] : a) all[k].first = v;
    for (const auto& [k, v] : b) all[k].second = v;
    std::vector<double> x, y;
    for (const auto& [k, v] : all) {
        x.push_back(v.first);
        y.push_back(v.second);
    }
    return {x, y};
}

}  // namespace

TEST(NoiseField, SampleIsSortedAndReplays) {
    RngStream a(9, 1), b(9, 1);
    const auto f = NoiseField::sample(a, -5, 5, 10.0, 1.0, 0.7);
    const auto g = NoiseField::sample(b, -5, 5, 10.0, 1.0, 0.7);
    EXPECT_EQ(f, g);
    EXPECT_EQ(f.bond_count(), 10u);
    for (Site n = -5; n < 5; ++n) {
        const auto t = f.times(n);
        EXPECT_TRUE(std::is_sorted(t.begin(), t.end()));
        for (double x : t) EXPECT_TRUE(x >= 0.0 && x <= 10.0);
    }
    const auto ev = f.events_until(10.0);
    EXPECT_EQ(ev.size(), f.event_count());
    EXPECT_TRUE(std::is_sorted(ev.begin(), ev.end(), [](auto& x, auto& y) { return x.time < y.time; }));
}

TEST(NoiseField, RateMatchesPoisson) {
    RngStream rng(10, 1);
    const auto f = NoiseField::sample(rng, 0, 2001, 5.0, 1.0, 1.0);
    const double mean = 2000.0 * 5.0;
    EXPECT_LE(std::abs(static_cast<double>(f.event_count()) - mean), 4.0 * std::sqrt(mean));
}

TEST(Harris, EmptyNoiseLeavesConfiguration) {
    const auto init = canonical_config(-10, 21);
    const auto noise = NoiseField::empty(-10, 10, 50.0);
    const auto r = simulate(init, noise, tasep_until(50.0));
    EXPECT_EQ(r.final, init);
    EXPECT_EQ(r.events, 0u);
    EXPECT_EQ(r.certificate.left, -10);
    EXPECT_EQ(r.certificate.right, 10);
}

TEST(Harris, SingleBondSwapProbability) {
    // one bond, TASEP from (0, 1): swapped by t=1 iff the clock rang, 1 - e^{-1}
    const int n = 100000;
    RngStream rng(12, 1);
    int hits = 0;
    const Configuration init(0, {0, 1});
    for (int i = 0; i < n; ++i) {
        const auto noise = sample_noise(rng, 0, 1, 1.0, Dynamics::tasep);
        hits += simulate(init, noise, tasep_until(1.0)).final[0] == 1;
    }
    const double p = 1.0 - std::exp(-1.0);
    const double f = static_cast<double>(hits) / n;
    EXPECT_LE(std::abs(f - p), 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST(Harris, ExplicitEvents) {
    const std::vector<BondEvent> ev{{0.5, 0, true}, {0.7, 1, true}, {0.9, 0, true}};
    const auto noise = NoiseField::from_events(0, 2, 1.0, ev);
    const auto r = simulate(Configuration(0, {0, 1, 2}), noise, tasep_until(1.0));
    // (0,1,2) -> (1,0,2) -> (1,2,0) -> (2,1,0)
    EXPECT_EQ(r.final, Configuration(0, {2, 1, 0}));
    EXPECT_EQ(r.swaps, 3u);
    EXPECT_EQ(r.tracker.position(0), 2);
    EXPECT_THROW(NoiseField::from_events(0, 2, 1.0, std::vector<BondEvent>{{0.5, 2, true}}), std::invalid_argument);
}

TEST(Harris, HorizonAndWindowValidated) {
    RngStream rng(1, 1);
    const auto noise = sample_noise(rng, 0, 4, 1.0, Dynamics::tasep);
    EXPECT_THROW(simulate(canonical_config(0, 5), noise, tasep_until(2.0)), std::invalid_argument);
    EXPECT_THROW(simulate(canonical_config(0, 6), noise, tasep_until(1.0)), std::invalid_argument);
    HarrisOptions bad = tasep_until(1.0);
    bad.mode = Dynamics::asep;
    bad.p = 0.3;
    EXPECT_THROW(simulate(canonical_config(0, 5), noise, bad), std::invalid_argument);
}

TEST(Harris, IdenticalInitialsIdenticalTrajectories) {
    RngStream rng(13, 1);
    const auto noise = sample_noise(rng, -30, 30, 8.0, Dynamics::asep, 0.7);
    HarrisOptions o{Dynamics::asep, 0.7, AsepDriver::marks, 8.0, nullptr};
    const auto init = canonical_config(-30, 61);
    const std::vector<Configuration> inits{init, init};
    const auto r = coupled_simulate(inits, noise, o);
    EXPECT_EQ(r[0].final, r[1].final);
    EXPECT_EQ(r[0].swaps, r[1].swaps);
}

TEST(Harris, CoupledSortAtOriginOrdersTheTwoParticles) {
    // from id and sigma_0 id under shared noise, every other particle agrees
    // and particle 0 of the sorted start is the rightmost of the pair
    RngStream rng(14, 1);
    for (int trial = 0; trial < 200; ++trial) {
        const auto noise = sample_noise(rng, -40, 40, 10.0, Dynamics::tasep);
        const auto id = canonical_config(-40, 81);
        auto sorted = id;
        apply_sort(sorted, 0);
        const std::vector<Configuration> inits{id, sorted};
        for (double t : {1.0, 4.0, 10.0}) {
            const auto r = coupled_simulate(inits, noise, tasep_until(t));
            for (Label i = -40; i <= 40; ++i) {
                if (i == 0 || i == 1) continue;
                ASSERT_EQ(r[0].tracker.position(i), r[1].tracker.position(i)) << "label " << i << " t " << t;
            }
            const Site x0 = r[0].tracker.position(0), x1 = r[0].tracker.position(1);
            ASSERT_EQ(r[1].tracker.position(0), std::max(x0, x1));
            ASSERT_EQ(r[1].tracker.position(1), std::min(x0, x1));
        }
    }
}

TEST(Harris, CertificateIsSound) {
    // a bigger window sharing the inner bonds must agree on every certified site,
    // whatever lies outside the inner window
    RngStream rng(15, 1);
    for (int trial = 0; trial < 200; ++trial) {
        for (Dynamics mode : {Dynamics::tasep, Dynamics::asep}) {
            const double p = mode == Dynamics::tasep ? 1.0 : 0.7;
            const auto inner = sample_noise(rng, -20, 20, 6.0, mode, p);
            const auto outer = NoiseField::embed(inner, rng, -60, 60);
            HarrisOptions o{mode, p, AsepDriver::marks, 6.0, nullptr};
            const auto small = simulate(canonical_config(-20, 41), inner, o);

            std::vector<Label> labels(121);
            for (std::size_t i = 0; i < labels.size(); ++i) {
                const Site s = -60 + static_cast<Site>(i);
                labels[i] = (s >= -20 && s <= 20) ? s : static_cast<Label>(rng.below(1000)) - 500;
            }
            const auto big = simulate(Configuration(-60, labels), outer, o);
            for (Site s = -20; s <= 20; ++s)
                if (small.certificate.safe(s)) {
                    ASSERT_EQ(small.final[s], big.final[s]) << "site " << s;
                }
        }
    }
}

TEST(Harris, EmbedKeepsInnerBonds) {
    RngStream rng(16, 1);
    const auto inner = NoiseField::sample(rng, -3, 3, 2.0, 1.0, 0.7);
    const auto outer = NoiseField::embed(inner, rng, -8, 8);
    for (Site n = -3; n < 3; ++n) {
        const auto a = inner.times(n), b = outer.times(n);
        EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
    }
    EXPECT_THROW(NoiseField::embed(inner, rng, -2, 8), std::invalid_argument);
}

TEST(Harris, AsepDriversAgreeInLaw) {
    // marks driver and pi driver generate the same process
    const int n = 20000;
    const double p = 0.7, t = 3.0;
    std::map<std::pair<Site, Site>, double> a, b;
    RngStream rng(17, 1);
    for (int i = 0; i < n; ++i) {
        for (AsepDriver d : {AsepDriver::marks, AsepDriver::pi}) {
            const auto noise = sample_noise(rng, -25, 25, t, Dynamics::asep, p, d);
            const auto r = simulate(canonical_config(-25, 51), noise, {Dynamics::asep, p, d, t, nullptr});
            auto& m = d == AsepDriver::marks ? a : b;
            m[{r.tracker.position(0), r.tracker.position(1)}] += 1.0;
        }
    }
    const auto [x, y] = aligned(a, b);
    EXPECT_GT(chi2_two_sample(x, y).p_value, 0.001);
}

TEST(Kinetic, AgreesWithHarrisInLaw) {
    const int n = 20000;
    const double t = 5.0;
    for (Dynamics mode : {Dynamics::tasep, Dynamics::asep}) {
        const double p = mode == Dynamics::tasep ? 1.0 : 0.7;
        std::map<std::pair<Site, Site>, double> h, k;
        RngStream rng(18, static_cast<std::uint64_t>(mode));
        for (int i = 0; i < n; ++i) {
            const auto noise = sample_noise(rng, -40, 40, t, mode, p);
            const auto r = simulate(canonical_config(-40, 81), noise, {mode, p, AsepDriver::marks, t, nullptr});
            ASSERT_TRUE(r.certificate.safe(r.tracker.position(0)));
            h[{r.tracker.position(0), r.tracker.position(1)}] += 1.0;

            const auto s = simulate_projected({mode, p, t, 0, 1}, rng);
            ASSERT_EQ(s.certificate.left, s.final.lo());
            k[{s.tracker.position(0), s.tracker.position(1)}] += 1.0;
        }
        const auto [x, y] = aligned(h, k);
        EXPECT_GT(chi2_two_sample(x, y).p_value, 0.001) << (mode == Dynamics::tasep ? "tasep" : "asep");
    }
}

TEST(Kinetic, EdgeSwapVoidsCertificate) {
    // a two-site window whose only bond is active: the first swap touches an edge
    RngStream rng(19, 1);
    const auto r = simulate_kinetic(Configuration(0, {0, 1}), {Dynamics::tasep, 1.0, 100.0, nullptr}, rng);
    EXPECT_EQ(r.final, Configuration(0, {1, 0}));
    EXPECT_EQ(r.certificate.left, r.certificate.right);
    EXPECT_FALSE(r.certificate.safe(0));
}

TEST(Kinetic, InactiveWindowIsExact) {
    RngStream rng(20, 1);
    const auto init = Configuration(0, {3, 3, 2, 1, 0, 0});
    const auto r = simulate_kinetic(init, {Dynamics::tasep, 1.0, 100.0, nullptr}, rng);
    EXPECT_EQ(r.final, init);
    EXPECT_EQ(r.events, 0u);
    EXPECT_TRUE(r.certificate.safe(2));
}
