#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace speedlab {

/// How a claim's measurement becomes a verdict.
///  - exact_equality: |estimate - exact| <= tolerance (deterministic; 0 means bitwise equal)
///  - abs_tolerance:  |estimate - exact| <= tolerance on the point estimate
///  - z_sigma:        |estimate - exact| <= tolerance * standard_error (4 sigma by default)
///  - band:           the (1 - alpha) interval around the estimate meets [band_lo, band_hi]
///  - ks, chi2:       p_value >= alpha
enum class TestKind { exact_equality, abs_tolerance, z_sigma, band, ks, chi2 };

const char* to_string(TestKind kind);

/// What an estimator hands back. Fields a test kind does not use stay NaN.
struct Measurement {
    double estimate = std::numeric_limits<double>::quiet_NaN();
    double standard_error = std::numeric_limits<double>::quiet_NaN();
    double statistic = std::numeric_limits<double>::quiet_NaN();
    double p_value = std::numeric_limits<double>::quiet_NaN();
    std::size_t replicas = 0;
    std::string note;
};

struct ClaimSpec {
    std::string id;
    int criterion = 0;       // acceptance criterion 1..11, 0 for none
    bool companion = false;  // reported with its criterion but does not decide it
    std::string description;
    TestKind kind = TestKind::exact_equality;
    double exact = std::numeric_limits<double>::quiet_NaN();
    double tolerance = 0.0;
    double band_lo = std::numeric_limits<double>::quiet_NaN();
    double band_hi = std::numeric_limits<double>::quiet_NaN();
    double alpha = 0.0;        // 0: family alpha split over the statistical claims (Bonferroni)
    bool expect_fail = false;  // harness self-test: the verdict passes when the test rejects
    std::size_t replicas = 0;
    std::uint64_t seed = 0;
    std::function<Measurement()> estimator;
};

struct ClaimResult {
    std::string id;
    int criterion = 0;
    bool companion = false;
    std::string description;
    TestKind kind = TestKind::exact_equality;
    double estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double exact = 0.0;
    double statistic = 0.0;
    double p_value = 0.0;
    double alpha = 0.0;
    bool pass = false;
    std::uint64_t seed = 0;
    std::size_t replicas = 0;
    std::string note;
    double seconds = 0.0;
};

struct TestReport {
    std::string suite;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    double family_alpha = 0.001;
    std::size_t bonferroni_claims = 0;  // statistical claims sharing family_alpha
    std::string version;
    double seconds = 0.0;
    std::vector<ClaimResult> claims;

    bool all_passed() const;
    /// Criterion number -> verdict over its non-companion claims.
    std::map<int, bool> criteria() const;

    std::string to_json() const;
    std::string to_text() const;
};

struct RunOptions {
    std::string suite = "custom";
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    double family_alpha = 0.001;
    /// Called after each claim finishes (progress output).
    std::function<void(const ClaimResult&)> on_result;
};

/// Runs every claim in order and derives verdicts. Claims whose estimator
/// throws fail with the message in `note` ("window too small" for
/// certificate violations). Deterministic given the specs' seeds.
TestReport run_claims(const std::vector<ClaimSpec>& specs, const RunOptions& options);

/// Replica budgets of the Monte Carlo suite; the defaults are the acceptance sizes.
struct SuiteConfig {
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    std::size_t tasep_replicas = 10000;        // t = 500, particles 0..4; also the t = 2000 (U0, U4) batch
    std::size_t stationarity_replicas = 10000; // t1 = 1000, per half; also feeds the convoy claim
    std::size_t asep_replicas = 10000;         // p = 0.7, t = 500
    std::size_t symmetry_replicas = 100000;    // t = 3, per side
    std::size_t multiline_samples = 1000000;   // adjacent pairs, lambda = (0.3, 0.3, 0.4)
    std::size_t reversal_words = 200;
};

/// Deterministic identities only: operator algebra, collapse example, formula consistency.
std::vector<ClaimSpec> quick_suite(const SuiteConfig& config);

/// quick_suite plus every Monte Carlo claim. Claims sharing a simulation batch
/// compute it once, on first use.
std::vector<ClaimSpec> full_suite(const SuiteConfig& config);

/// Parses "key = value" lines; "#" starts a comment. Throws if the file cannot be read
/// or a line has no "=".
std::map<std::string, std::string> read_key_values(const std::string& path);

}  // namespace speedlab
