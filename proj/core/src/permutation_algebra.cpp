#include "speedlab/permutation_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "speedlab/operators.hpp"

namespace speedlab {

PermIndex::PermIndex(int m) : m_(m) {
    if (m < 1 || m > kMaxWordGroup) throw std::invalid_argument("PermIndex: group size must be in [1, 7]");
    factorial_.assign(static_cast<std::size_t>(m) + 1, 1);
    for (int k = 1; k <= m; ++k) factorial_[k] = factorial_[k - 1] * static_cast<std::size_t>(k);
    Perm p(static_cast<std::size_t>(m));
    std::iota(p.begin(), p.end(), 0);
    perms_.reserve(factorial_[m]);
    do perms_.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
}

std::size_t PermIndex::rank(const Perm& perm) const {
    if (perm.size() != static_cast<std::size_t>(m_)) throw std::invalid_argument("PermIndex::rank: wrong length");
    std::size_t r = 0;
    for (int i = 0; i < m_; ++i) {
        int smaller = 0;
        for (int j = i + 1; j < m_; ++j) smaller += perm[j] < perm[i];
        r += static_cast<std::size_t>(smaller) * factorial_[m_ - 1 - i];
    }
    return r;
}

namespace {

void check_bond(int m, int i) {
    if (i < 0 || i > m - 2) throw std::out_of_range("bond index must lie in [0, m-2]");
}

void check_dense(int m) {
    if (m < 1 || m > kMaxDenseGroup) throw std::invalid_argument("OperatorMatrix: group size must be in [1, 6]");
}

// 0 = tau, 1 = sigma (decreasing), 2 = sigma* (increasing)
bool local_swaps(int kind, int a, int b) {
    switch (kind) {
        case 0: return true;
        case 1: return a < b;
        default: return a > b;
    }
}

}  // namespace

OperatorMatrix OperatorMatrix::identity(int m) {
    check_dense(m);
    const PermIndex idx(m);
    OperatorMatrix r(m, idx.size());
    for (std::size_t a = 0; a < r.dim_; ++a) r.entries_[a * r.dim_ + a] = 1.0;
    return r;
}

OperatorMatrix OperatorMatrix::deterministic(int m, int i, int kind) {
    check_dense(m);
    check_bond(m, i);
    const PermIndex idx(m);
    OperatorMatrix r(m, idx.size());
    for (std::size_t a = 0; a < r.dim_; ++a) {
        Perm p = idx.perm(a);
        if (local_swaps(kind, p[i], p[i + 1])) std::swap(p[i], p[i + 1]);
        r.entries_[a * r.dim_ + idx.rank(p)] = 1.0;
    }
    return r;
}

OperatorMatrix OperatorMatrix::tau(int m, int i) { return deterministic(m, i, 0); }
OperatorMatrix OperatorMatrix::sigma(int m, int i) { return deterministic(m, i, 1); }
OperatorMatrix OperatorMatrix::sigma_star(int m, int i) { return deterministic(m, i, 2); }

OperatorMatrix OperatorMatrix::pi(int m, int i, double p) {
    const double q = pi_swap_probability(p);
    return q * tau(m, i) + (1.0 - q) * sigma(m, i);
}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& rhs) const {
    if (dim_ != rhs.dim_) throw std::invalid_argument("OperatorMatrix: dimension mismatch");
    // A * B applies B first: transition matrix is M_B M_A.
    OperatorMatrix r(m_, dim_);
    for (std::size_t a = 0; a < dim_; ++a)
        for (std::size_t k = 0; k < dim_; ++k) {
            const double b_ak = rhs.entries_[a * dim_ + k];
            if (b_ak == 0.0) continue;
            for (std::size_t c = 0; c < dim_; ++c) r.entries_[a * dim_ + c] += b_ak * entries_[k * dim_ + c];
        }
    return r;
}

OperatorMatrix OperatorMatrix::operator+(const OperatorMatrix& rhs) const {
    if (dim_ != rhs.dim_) throw std::invalid_argument("OperatorMatrix: dimension mismatch");
    OperatorMatrix r = *this;
    for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] += rhs.entries_[k];
    return r;
}

OperatorMatrix OperatorMatrix::operator*(double s) const {
    OperatorMatrix r = *this;
    for (double& e : r.entries_) e *= s;
    return r;
}

double OperatorMatrix::max_row_sum_error() const {
    double worst = 0.0;
    for (std::size_t a = 0; a < dim_; ++a) {
        double s = 0.0;
        for (std::size_t b = 0; b < dim_; ++b) s += entries_[a * dim_ + b];
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

double OperatorMatrix::min_entry() const {
    return entries_.empty() ? 0.0 : *std::min_element(entries_.begin(), entries_.end());
}

double OperatorMatrix::max_abs_diff(const OperatorMatrix& other) const {
    if (dim_ != other.dim_) throw std::invalid_argument("OperatorMatrix: dimension mismatch");
    double worst = 0.0;
    for (std::size_t k = 0; k < entries_.size(); ++k) worst = std::max(worst, std::abs(entries_[k] - other.entries_[k]));
    return worst;
}

std::vector<double> exact_word_distribution(std::span<const int> word, int m, double p) {
    if (m > kMaxWordGroup) throw std::invalid_argument("exact_word_distribution: m exceeds the state-space cap of 7");
    const double q = pi_swap_probability(p);
    const PermIndex idx(m);
    for (int i : word) check_bond(m, i);

    // swap target of every state under each bond, computed once
    const std::size_t n = idx.size();
    std::vector<std::size_t> target(n * static_cast<std::size_t>(std::max(m - 1, 1)));
    for (std::size_t a = 0; a < n; ++a)
        for (int i = 0; i + 1 < m; ++i) {
            Perm pm = idx.perm(a);
            std::swap(pm[i], pm[i + 1]);
            target[a * (m - 1) + i] = idx.rank(pm);
        }

    std::vector<double> dist(n, 0.0), next(n);
    dist[idx.identity_rank()] = 1.0;
    for (int i : word) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t a = 0; a < n; ++a) {
            if (dist[a] == 0.0) continue;
            const Perm& pm = idx.perm(a);
            const std::size_t b = target[a * (m - 1) + i];
            if (pm[i] < pm[i + 1]) {
                next[b] += dist[a];
            } else {
                next[b] += q * dist[a];
                next[a] += (1.0 - q) * dist[a];
            }
        }
        dist.swap(next);
    }
    return dist;
}

std::vector<double> inverse_distribution(std::span<const double> dist, int m) {
    const PermIndex idx(m);
    if (dist.size() != idx.size()) throw std::invalid_argument("inverse_distribution: size is not m!");
    std::vector<double> out(dist.size(), 0.0);
    for (std::size_t a = 0; a < dist.size(); ++a) {
        const Perm& pm = idx.perm(a);
        Perm inv(pm.size());
        for (std::size_t k = 0; k < pm.size(); ++k) inv[pm[k]] = static_cast<int>(k);
        out[idx.rank(inv)] += dist[a];
    }
    return out;
}

Perm apply_word(std::span<const LocalOp> word, Perm eta) {
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        const int i = it->bond;
        if (i < 0 || static_cast<std::size_t>(i) + 1 >= eta.size()) throw std::out_of_range("apply_word: bond outside");
        if (local_swaps(static_cast<int>(it->kind), eta[i], eta[i + 1])) std::swap(eta[i], eta[i + 1]);
    }
    return eta;
}

std::vector<LocalOp> parse_word(const std::string& text) {
    std::istringstream in(text);
    std::vector<LocalOp> out;
    std::string tok;
    while (in >> tok) {
        if (tok.size() < 2) throw std::invalid_argument("parse_word: bad token '" + tok + "'");
        OpKind kind;
        switch (tok[0]) {
            case 't': kind = OpKind::tau; break;
            case 's': kind = OpKind::sigma; break;
            case 'S': kind = OpKind::sigma_star; break;
            default: throw std::invalid_argument("parse_word: bad token '" + tok + "'");
        }
        out.push_back({kind, std::stoi(tok.substr(1))});
    }
    return out;
}

std::string perm_string(const Perm& perm) {
    std::string s;
    for (int v : perm) s += std::to_string(v);
    return s;
}

bool BraidTable::halves_match() const {
    for (std::size_t c = 0; c < 6; ++c) {
        std::array<std::string, 3> top{cells[0][c], cells[1][c], cells[2][c]};
        std::array<std::string, 3> bottom{cells[3][c], cells[4][c], cells[5][c]};
        std::sort(top.begin(), top.end());
        std::sort(bottom.begin(), bottom.end());
        if (top != bottom) return false;
    }
    return true;
}

BraidTable braid_table() {
    BraidTable t;
    for (std::size_t r = 0; r < 6; ++r) {
        const auto word = parse_word(BraidTable::words[r]);
        for (std::size_t c = 0; c < 6; ++c) {
            Perm eta;
            for (char ch : std::string(BraidTable::columns[c])) eta.push_back(ch - '0');
            t.cells[r][c] = perm_string(apply_word(word, eta));
        }
    }
    return t;
}

}  // namespace speedlab
