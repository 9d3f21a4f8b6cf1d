#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <vector>

#include "speedlab/configuration.hpp"
#include "speedlab/operators.hpp"
#include "speedlab/permutation_algebra.hpp"
#include "speedlab/rng.hpp"

using namespace speedlab;

namespace {

// Brute-force law of a pi-word applied to the identity of S_m: branch on every
// coin of every decreasing pair. Independent of the matrix code.
void enumerate(const std::vector<int>& word, std::size_t at, std::vector<Label> eta, double weight, double q,
               std::map<std::vector<Label>, double>& out) {
    if (weight == 0.0) return;
    if (at == word.size()) {
        out[eta] += weight;
        return;
    }
    const auto i = static_cast<std::size_t>(word[at]);
    if (eta[i] < eta[i + 1]) {
        std::swap(eta[i], eta[i + 1]);
        enumerate(word, at + 1, eta, weight, q, out);
        return;
    }
    enumerate(word, at + 1, eta, weight * (1.0 - q), q, out);
    std::swap(eta[i], eta[i + 1]);
    enumerate(word, at + 1, eta, weight * q, q, out);
}

std::vector<double> brute_force(const std::vector<int>& word, int m, double p) {
    std::map<std::vector<Label>, double> law;
    std::vector<Label> id(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) id[static_cast<std::size_t>(i)] = i;
    enumerate(word, 0, id, 1.0, pi_swap_probability(p), law);
    const PermIndex idx(m);
    std::vector<double> dist(idx.size(), 0.0);
    for (const auto& [eta, w] : law) dist[idx.rank(Perm(eta.begin(), eta.end()))] += w;
    return dist;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

}  // namespace

TEST(PermIndex, RanksRoundTrip) {
    const PermIndex idx(4);
    EXPECT_EQ(idx.size(), 24u);
    for (std::size_t r = 0; r < idx.size(); ++r) EXPECT_EQ(idx.rank(idx.perm(r)), r);
    EXPECT_EQ(idx.perm(0), (Perm{0, 1, 2, 3}));
    EXPECT_EQ(idx.perm(23), (Perm{3, 2, 1, 0}));
}

class OperatorRelations : public ::testing::TestWithParam<double> {};

TEST_P(OperatorRelations, HoldAsMatricesOnS4) {
    const double p = GetParam();
    const double q = pi_swap_probability(p);
    const int m = 4;
    const auto I = OperatorMatrix::identity(m);
    for (int i = 0; i < 3; ++i) {
        const auto Pi = OperatorMatrix::pi(m, i, p);
        EXPECT_LE(Pi.max_row_sum_error(), 1e-12);
        EXPECT_GE(Pi.min_entry(), 0.0);
        EXPECT_LE((Pi * Pi).max_abs_diff(q * I + (1.0 - q) * Pi), 1e-12) << "quadratic, bond " << i;
        if (i + 1 < 3) {
            const auto Pj = OperatorMatrix::pi(m, i + 1, p);
            EXPECT_LE((Pi * Pj * Pi).max_abs_diff(Pj * Pi * Pj), 1e-12) << "braid, bond " << i;
        }
    }
    const auto P0 = OperatorMatrix::pi(m, 0, p), P2 = OperatorMatrix::pi(m, 2, p);
    EXPECT_LE((P0 * P2).max_abs_diff(P2 * P0), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(P, OperatorRelations, ::testing::Values(0.6, 0.75, 1.0));

TEST(OperatorMatrix, DeterministicRelations) {
    const auto I = OperatorMatrix::identity(4);
    const auto t1 = OperatorMatrix::tau(4, 1);
    EXPECT_EQ((t1 * t1).max_abs_diff(I), 0.0);
    const auto s1 = OperatorMatrix::sigma(4, 1);
    EXPECT_EQ((s1 * s1).max_abs_diff(s1), 0.0);
    // pi at p = 1 is sort
    EXPECT_EQ(OperatorMatrix::pi(4, 1, 1.0).max_abs_diff(s1), 0.0);
}

TEST(WordDistribution, SortingNetworkReversesS3) {
    const std::vector<int> word{0, 1, 0};
    const auto d = exact_word_distribution(word, 3, 1.0);
    const PermIndex idx(3);
    EXPECT_DOUBLE_EQ(d[idx.rank({2, 1, 0})], 1.0);
}

TEST(WordDistribution, MatchesBruteForce) {
    RngStream rng(21, 1);
    for (int w = 0; w < 100; ++w) {
        const int len = 1 + static_cast<int>(rng.below(8));
        std::vector<int> word(static_cast<std::size_t>(len));
        for (auto& b : word) b = static_cast<int>(rng.below(3));
        const double p = rng.uniform(0.55, 1.0);
        EXPECT_LE(max_diff(exact_word_distribution(word, 4, p), brute_force(word, 4, p)), 1e-12);
    }
}

TEST(WordDistribution, ReversedWordGivesInverseLaw) {
    RngStream rng(22, 1);
    for (int w = 0; w < 200; ++w) {
        const int len = 1 + static_cast<int>(rng.below(8));
        std::vector<int> word(static_cast<std::size_t>(len));
        for (auto& b : word) b = static_cast<int>(rng.below(3));
        const std::vector<int> rev(word.rbegin(), word.rend());
        const double p = 0.7;
        const auto forward = exact_word_distribution(word, 4, p);
        const auto backward = exact_word_distribution(rev, 4, p);
        ASSERT_LE(max_diff(backward, inverse_distribution(forward, 4)), 1e-12);
        // the brute-force law of the reversed word agrees too
        ASSERT_LE(max_diff(brute_force(rev, 4, p), inverse_distribution(brute_force(word, 4, p), 4)), 1e-12);
    }
}

TEST(WordDistribution, InverseIsAnInvolution) {
    const std::vector<int> word{0, 2, 1, 0};
    const auto d = exact_word_distribution(word, 4, 0.6);
    EXPECT_LE(max_diff(inverse_distribution(inverse_distribution(d, 4), 4), d), 0.0);
}

TEST(BraidTable, ReproducesPublishedTable) {
    const char* expected[6][6] = {
        {"210", "120", "210", "120", "120", "120"}, {"210", "210", "201", "210", "201", "210"},
        {"210", "210", "210", "201", "210", "201"}, {"210", "210", "201", "201", "201", "201"},
        {"210", "120", "210", "120", "210", "210"}, {"210", "210", "210", "210", "120", "120"},
    };
    const auto t = braid_table();
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) EXPECT_EQ(t.cells[r][c], expected[r][c]) << BraidTable::words[r] << " on " << BraidTable::columns[c];
    EXPECT_TRUE(t.halves_match());
}

TEST(DeterministicWords, ParseAndApply) {
    const auto w = parse_word("t0 s1 S0");
    ASSERT_EQ(w.size(), 3u);
    EXPECT_EQ(w[0].kind, OpKind::tau);
    EXPECT_EQ(w[2].kind, OpKind::sigma_star);
    // rightmost acts first: S0 on 012 keeps it, s1 gives 021, t0 gives 201
    EXPECT_EQ(perm_string(apply_word(w, {0, 1, 2})), "201");
    EXPECT_THROW(parse_word("x0"), std::invalid_argument);
}
