#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace speedlab {

/// A permutation of {0..m-1} read as a configuration: entry i is the label at site i.
using Perm = std::vector<int>;

/// Permutations of S_m indexed by lexicographic rank (Lehmer code).
class PermIndex {
public:
    explicit PermIndex(int m);

    int m() const noexcept { return m_; }
    std::size_t size() const noexcept { return perms_.size(); }
    const Perm& perm(std::size_t rank) const { return perms_.at(rank); }
    std::size_t rank(const Perm& perm) const;
    std::size_t identity_rank() const noexcept { return 0; }

private:
    int m_;
    std::vector<Perm> perms_;
    std::vector<std::size_t> factorial_;
};

/// Largest m for which dense matrices are built (720 x 720).
inline constexpr int kMaxDenseGroup = 6;
/// Largest m for which word distributions are propagated (5040 states).
inline constexpr int kMaxWordGroup = 7;

/// Row-stochastic operator on measures over S_m: entry (a, b) is the
/// probability of moving from permutation a to permutation b.
///
/// Products follow operator notation: (A * B) applies B first, then A, so
/// pi_{i_n} * ... * pi_{i_1} is the paper-style word acting on a measure.
class OperatorMatrix {
public:
    OperatorMatrix() = default;

    static OperatorMatrix identity(int m);
    static OperatorMatrix tau(int m, int i);
    static OperatorMatrix sigma(int m, int i);
    static OperatorMatrix sigma_star(int m, int i);
    static OperatorMatrix pi(int m, int i, double p);

    int m() const noexcept { return m_; }
    std::size_t dim() const noexcept { return dim_; }
    double operator()(std::size_t a, std::size_t b) const { return entries_[a * dim_ + b]; }

    OperatorMatrix operator*(const OperatorMatrix& rhs) const;
    OperatorMatrix operator+(const OperatorMatrix& rhs) const;
    OperatorMatrix operator*(double s) const;
    friend OperatorMatrix operator*(double s, const OperatorMatrix& a) { return a * s; }

    /// max |row sum - 1| and min entry, for the stochasticity invariant.
    double max_row_sum_error() const;
    double min_entry() const;

    double max_abs_diff(const OperatorMatrix& other) const;

private:
    OperatorMatrix(int m, std::size_t dim) : m_(m), dim_(dim), entries_(dim * dim, 0.0) {}
    static OperatorMatrix deterministic(int m, int i, int kind);

    int m_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> entries_;
};

/// Exact law of pi_{w_n} ... pi_{w_1} . id (w_1 applied first), indexed by PermIndex rank.
std::vector<double> exact_word_distribution(std::span<const int> word, int m, double p);

/// Law of the inverse permutation of a sample from `dist`.
std::vector<double> inverse_distribution(std::span<const double> dist, int m);

enum class OpKind { tau, sigma, sigma_star };

struct LocalOp {
    OpKind kind;
    int bond;
};

/// Applies a deterministic operator word written left to right in operator
/// notation (the rightmost operator acts first).
Perm apply_word(std::span<const LocalOp> word, Perm eta);

/// Parses words such as "t0 s1 s0" (t = tau, s = sigma, S = sigma*).
std::vector<LocalOp> parse_word(const std::string& text);

/// The 6 x 6 table of the three-term braid identity: rows are the words
/// t0s1s0, s0s1t0, s0t1s0 | t1s0s1, s1s0t1, s1t0s1; columns the orders
/// 012, 021, 102, 120, 201, 210 of {0, 1, 2}.
struct BraidTable {
    static constexpr std::array<const char*, 6> words = {"t0 s1 s0", "s0 s1 t0", "s0 t1 s0",
                                                         "t1 s0 s1", "s1 s0 t1", "s1 t0 s1"};
    static constexpr std::array<const char*, 6> columns = {"012", "021", "102", "120", "201", "210"};
    std::array<std::array<std::string, 6>, 6> cells;

    /// True when in every column the top three entries are a rearrangement of the bottom three.
    bool halves_match() const;
};

BraidTable braid_table();

std::string perm_string(const Perm& perm);

}  // namespace speedlab
