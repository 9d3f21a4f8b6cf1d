#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace speedlab {

enum class ValueKind { probability, density, signed_density, pmf };

/// A closed-form value together with the result it comes from.
struct ExactValue {
    double value;
    ValueKind kind;
    std::string source;
};

// ---- two consecutive speeds -------------------------------------------------

struct Joint2Density {
    double continuous;  // f(u0, u1) w.r.t. du0 du1
    double diagonal;    // g(u0) w.r.t. du0 when u0 == u1, else 0
};

/// f = 1/4 on u0 > u1, (u1 - u0)/4 on u0 <= u1; g = (1 - u^2)/8 on the diagonal.
Joint2Density joint2_density(double u0, double u1);

/// Masses of {U0 > U1}, {U0 < U1}, {U0 = U1}: 1/2, 1/3, 1/6.
struct Joint2Masses {
    double above = 0.5;
    double below = 1.0 / 3.0;
    double equal = 1.0 / 6.0;
};

// ---- lazy walk maxima ----------------------------------------------------

struct LazyWalkSpec {
    double p_plus;
    double p_minus;
    double p_zero;
    int steps;

    /// Throws std::invalid_argument unless probabilities are >= 0, sum to 1 and steps >= 0.
    void validate() const;
};

/// P(M_n = 0), M_n = max_{0 <= i <= n} S_i, by dynamic programming; any step law.
double walk_max_zero_prob_any(const LazyWalkSpec& spec);

/// Same quantity restricted to symmetric steps (p_plus == p_minus), where it
/// equals P(S_n in {0, -1}). Throws on asymmetric steps.
double walk_max_zero_prob(const LazyWalkSpec& spec);

/// P(S_n in {0, -1}) from the exact endpoint law.
double walk_end_zero_or_minus_one(const LazyWalkSpec& spec);

// ---- two distant speeds (in uhat = (1+u)/2 units) ---------------------------

enum class Dist2Region { below, diag, above };

/// below: P(x < Uk^ < y < U0^) = (y - x)(1 - y)
/// diag:  P(U0^, Uk^ in [x, y]) = (y - x)(1 - x) y P(M_{k-1} = 0),
///        walk with p+ = x(1-y), p- = (1-x)y
/// above: P(U0^ < x < Uk^ < y) = (y - x) - below - diag
double dist2(int k, Dist2Region region, double x, double y);

/// Large-k density on the diagonal {U0 = Uk = u}: sqrt((1 - u^2) / (16 pi k)).
double dist2_diag_asymptotic(int k, double u);

/// Exact diagonal density (1 - u^2)/8 * P(M_{k-1} = 0) with p+ = p- = uhat(1 - uhat).
double dist2_diag_density(int k, double u);

// ---- three consecutive speeds ------------------------------------------

struct Joint3Density {
    int stratum;        // 0..12, index into joint3_strata()
    std::string order;  // e.g. "u0<u1<u2", "u0=u1<u2"
    int dimension;      // 3, 2 or 1
    double density;     // w.r.t. Lebesgue measure on the stratum
};

/// Classifies the weak order of (u0, u1, u2) by exact comparison and returns the table entry.
Joint3Density joint3_density(double u0, double u1, double u2);

/// The 13 weak-order labels in stratum order.
const std::vector<std::string>& joint3_strata();

// ---- ordered speeds ------------------------------------------------------

/// Delta_{a,b}(x) = prod_{a <= i < j <= b} (x_j - x_i); x is indexed from 0.
double vandermonde(std::span<const double> x, int a, int b);

/// n! Delta(uhat) for strictly increasing uhat in [0, 1]; the density of
/// (U1^, ..., Un^) on {U1 < ... < Un}.
double ordered_density(std::span<const double> uhat);

/// Q_n = Delta_{1,n}(x) / prod_i x_i^{i-1} (1 - x_i)^{n-i}: all queues of the
/// n-line process empty; x are the line densities (1-based in the formula).
double empty_queue_prob(std::span<const double> x);

/// Exact stationary probability of classes (a, b) at two adjacent sites of the
/// 3-type measure with line densities x1 < x2, enumerated from the 2-line
/// process with its geometric queue.
double two_line_pair_prob(int a, int b, double x1, double x2);

// ---- fastest particle ------------------------------------------------------

/// lim P(X_k(t) is the rightmost of X_1..X_n) = 2n / ((n + k - 1)(n + k)).
double rightmost_prob(int n, int k);

/// The integrand y^{n+k-2} ((n + 1 - k) - (n - k) y) in uhat units.
double rightmost_density(int n, int k, double y);

// ---- convoys -------------------------------------------------------------

/// P(U0 = ... = Un) = n!^2 / (2n + 1)!.
double equal_speeds_prob(int n);

/// P(K = K0) for the number of nonzero walk steps between consecutive convoy
/// members: Catalan_k / 2^(2k+1) at K0 = 2k + 1, zero for even K0.
double convoy_step_count_prob(int count);

/// P(distance to the next convoy member = m) for a convoy of speed u:
/// sum over odd K <= m of P(K) * NegBin(m; K, s), s = (1 - u^2)/2.
double convoy_gap_pmf(double u, long m);

/// P(distance > m), exact (uses the closed-form Catalan tail).
double convoy_gap_tail(double u, long m);

// ---- ASEP --------------------------------------------------------------

struct AsepValues {
    double p;
    double rho;         // 2p - 1
    double swap_limit;  // lim P(X0(t) < X1(t)) = (2 - p)/3
    double r_slope;     // R(t) ~ rho t / 3

    /// Density of p mu - (1-p) mu~ at (x, y), -rho <= x < y <= rho: (y - x)/(4 rho^2).
    double signed_density(double x, double y) const;
    /// P(X_i(t) < X_j(t) | J) = (1 - p) + p e^{-J}.
    double interaction_prob(double J) const;
};

AsepValues asep_values(double p);

// ---- quadrature ------------------------------------------------------------

/// 30-point Gauss-Legendre on [a, b]; exact for polynomials up to degree 59.
double gauss_integrate(const std::function<double(double)>& f, double a, double b);

}  // namespace speedlab
