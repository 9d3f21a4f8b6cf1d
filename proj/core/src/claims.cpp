#include "speedlab/claims.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <nlohmann/json.hpp>

#include "speedlab/formulas.hpp"
#include "speedlab/harris.hpp"
#include "speedlab/multiline.hpp"
#include "speedlab/permutation_algebra.hpp"
#include "speedlab/replicas.hpp"
#include "speedlab/speed_lab.hpp"

#ifndef SPEEDLAB_VERSION
#define SPEEDLAB_VERSION "unknown"
#endif

namespace speedlab {

const char* to_string(TestKind kind) {
    switch (kind) {
        case TestKind::exact_equality: return "exact";
        case TestKind::abs_tolerance: return "abs_tol";
        case TestKind::z_sigma: return "z";
        case TestKind::band: return "band";
        case TestKind::ks: return "ks";
        case TestKind::chi2: return "chi2";
    }
    return "?";
}

// ---- running ---------------------------------------------------------------

namespace {

bool is_bonferroni(const ClaimSpec& s) {
    return s.alpha <= 0.0 && (s.kind == TestKind::band || s.kind == TestKind::ks || s.kind == TestKind::chi2);
}

double normal_quantile_upper(double alpha_two_sided) {
    return boost::math::quantile(boost::math::complement(boost::math::normal(), alpha_two_sided / 2.0));
}

void decide(const ClaimSpec& s, const Measurement& m, ClaimResult& r) {
    r.estimate = m.estimate;
    r.statistic = m.statistic;
    r.p_value = m.p_value;
    r.ci_low = r.ci_high = m.estimate;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    switch (s.kind) {
        case TestKind::exact_equality: {
            // tolerance 0 means bitwise-exact agreement
            r.statistic = std::abs(m.estimate - s.exact);
            r.pass = r.statistic <= s.tolerance;
            break;
        }
        case TestKind::abs_tolerance:
            r.statistic = std::abs(m.estimate - s.exact);
            r.pass = r.statistic <= s.tolerance;
            if (std::isfinite(m.standard_error)) {
                const double z = normal_quantile_upper(r.alpha);
                r.ci_low = m.estimate - z * m.standard_error;
                r.ci_high = m.estimate + z * m.standard_error;
            }
            break;
        case TestKind::z_sigma: {
            const double k = s.tolerance > 0.0 ? s.tolerance : 4.0;
            const auto t = z_test(m.estimate, m.standard_error, s.exact);
            r.statistic = t.statistic;
            r.p_value = t.p_value;
            r.ci_low = m.estimate - k * m.standard_error;
            r.ci_high = m.estimate + k * m.standard_error;
            r.pass = std::abs(t.statistic) <= k;
            break;
        }
        case TestKind::band: {
            const double z = normal_quantile_upper(r.alpha);
            r.ci_low = m.estimate - z * m.standard_error;
            r.ci_high = m.estimate + z * m.standard_error;
            const double d = std::max({0.0, s.band_lo - m.estimate, m.estimate - s.band_hi});
            r.statistic = d / m.standard_error;
            r.p_value = d > 0.0 ? std::erfc(r.statistic / std::sqrt(2.0)) : 1.0;
            r.pass = r.ci_high >= s.band_lo && r.ci_low <= s.band_hi;
            break;
        }
        case TestKind::ks:
        case TestKind::chi2:
            r.pass = m.p_value >= r.alpha;
            break;
    }
    if (!std::isfinite(r.estimate)) r.pass = false;
    if (s.kind == TestKind::band) r.exact = nan;
    if (s.expect_fail) r.pass = !r.pass;
}

}  // namespace

TestReport run_claims(const std::vector<ClaimSpec>& specs, const RunOptions& options) {
    using clock = std::chrono::steady_clock;
    TestReport rep;
    rep.suite = options.suite;
    rep.seed = options.seed;
    rep.jobs = options.jobs;
    rep.family_alpha = options.family_alpha;
    rep.version = SPEEDLAB_VERSION;
    rep.bonferroni_claims = static_cast<std::size_t>(std::count_if(specs.begin(), specs.end(), is_bonferroni));
    const auto start = clock::now();

    for (const auto& s : specs) {
        ClaimResult r;
        r.id = s.id;
        r.criterion = s.criterion;
        r.companion = s.companion;
        r.description = s.description;
        r.kind = s.kind;
        r.exact = s.exact;
        r.seed = s.seed;
        r.replicas = s.replicas;
        r.alpha = s.alpha > 0.0 ? s.alpha
                                : options.family_alpha / static_cast<double>(std::max<std::size_t>(1, rep.bonferroni_claims));
        const auto t0 = clock::now();
        try {
            const Measurement m = s.estimator();
            if (m.replicas) r.replicas = m.replicas;
            r.note = m.note;
            decide(s, m, r);
        } catch (const std::exception& e) {
            r.estimate = r.ci_low = r.ci_high = std::numeric_limits<double>::quiet_NaN();
            r.statistic = r.p_value = std::numeric_limits<double>::quiet_NaN();
            r.pass = false;
            r.note = e.what();
        }
        r.seconds = std::chrono::duration<double>(clock::now() - t0).count();
        rep.claims.push_back(r);
        if (options.on_result) options.on_result(rep.claims.back());
    }
    rep.seconds = std::chrono::duration<double>(clock::now() - start).count();
    return rep;
}

bool TestReport::all_passed() const {
    return std::all_of(claims.begin(), claims.end(), [](const ClaimResult& c) { return c.pass; });
}

std::map<int, bool> TestReport::criteria() const {
    std::map<int, bool> out;
    for (const auto& c : claims) {
        if (c.criterion <= 0 || c.companion) continue;
        auto [it, fresh] = out.try_emplace(c.criterion, true);
        it->second = it->second && c.pass;
    }
    return out;
}

std::string TestReport::to_json() const {
    auto num = [](double x) -> nlohmann::json { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); };
    nlohmann::json j;
    j["suite"] = suite;
    j["seed"] = seed;
    j["jobs"] = jobs;
    j["version"] = version;
    j["runtime_seconds"] = seconds;
    j["multiple_testing"] = {
        {"policy", "bonferroni"},
        {"family_alpha", family_alpha},
        {"claims_sharing_family_alpha", bonferroni_claims},
        {"note", "claims with an explicit alpha keep it; z claims use fixed sigma bands"}};
    j["claims"] = nlohmann::json::array();
    for (const auto& c : claims) {
        j["claims"].push_back({{"id", c.id},
                               {"criterion", c.criterion},
                               {"companion", c.companion},
                               {"description", c.description},
                               {"test", to_string(c.kind)},
                               {"estimate", num(c.estimate)},
                               {"ci_low", num(c.ci_low)},
                               {"ci_high", num(c.ci_high)},
                               {"exact", num(c.exact)},
                               {"statistic", num(c.statistic)},
                               {"p_value", num(c.p_value)},
                               {"alpha", num(c.alpha)},
                               {"verdict", c.pass ? "pass" : "fail"},
                               {"seed", c.seed},
                               {"replicas", c.replicas},
                               {"seconds", c.seconds},
                               {"note", c.note}});
    }
    nlohmann::json crit = nlohmann::json::object();
    for (auto [k, v] : criteria()) crit[std::to_string(k)] = v ? "pass" : "fail";
    j["criteria"] = crit;
    j["all_passed"] = all_passed();
    return j.dump(2) + "\n";
}

std::string TestReport::to_text() const {
    std::ostringstream out;
    char line[512];
    std::snprintf(line, sizeof line, "suite %s  seed %llu  jobs %u  version %s  %.1f s\n", suite.c_str(),
                  static_cast<unsigned long long>(seed), jobs, version.c_str(), seconds);
    out << line;
    std::snprintf(line, sizeof line, "multiple testing: Bonferroni, family alpha %g over %zu claims\n\n",
                  family_alpha, bonferroni_claims);
    out << line;
    std::snprintf(line, sizeof line, "%-34s %4s %-7s %13s %27s %13s %10s %s\n", "claim", "crit", "test", "estimate",
                  "interval", "exact", "p", "verdict");
    out << line;
    for (const auto& c : claims) {
        std::string crit = c.criterion ? std::to_string(c.criterion) + (c.companion ? "*" : "") : "-";
        std::snprintf(line, sizeof line, "%-34s %4s %-7s %13.6g [%12.6g,%12.6g] %13.6g %10.3g %s", c.id.c_str(),
                      crit.c_str(), to_string(c.kind), c.estimate, c.ci_low, c.ci_high, c.exact, c.p_value,
                      c.pass ? "PASS" : "FAIL");
        out << line;
        if (!c.note.empty()) out << "  (" << c.note << ")";
        out << "\n";
    }
    out << "\n" << (all_passed() ? "all claims passed" : "some claims failed") << "\n";
    return out.str();
}

std::map<std::string, std::string> read_key_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::map<std::string, std::string> kv;
    std::string raw;
    for (int n = 1; std::getline(in, raw); ++n) {
        const std::string l = trim(raw.substr(0, raw.find('#')));
        if (l.empty()) continue;
        const auto eq = l.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(n) + ": expected key = value");
        kv[trim(l.substr(0, eq))] = trim(l.substr(eq + 1));
    }
    return kv;
}

// ---- suites ----------------------------------------------------------------

namespace {

constexpr double kAcceptAlpha = 0.001;

ClaimSpec exact_claim(std::string id, int criterion, std::string what, double exact, double tol,
                      std::function<double()> f) {
    ClaimSpec s;
    s.id = std::move(id);
    s.criterion = criterion;
    s.description = std::move(what);
    s.kind = TestKind::exact_equality;
    s.exact = exact;
    s.tolerance = tol;
    s.estimator = [f = std::move(f)] {
        Measurement m;
        m.estimate = f();
        return m;
    };
    return s;
}

// -- deterministic checks --

double relation_error(int which, double p) {
    const int m = 4;
    const double q = pi_swap_probability(p);
    const auto I = OperatorMatrix::identity(m);
    double err = 0.0;
    for (int i = 0; i + 1 < m; ++i) {
        const auto Pi = OperatorMatrix::pi(m, i, p);
        if (which == 1) err = std::max(err, (Pi * Pi).max_abs_diff(q * I + (1.0 - q) * Pi));
        for (int j = 0; j + 1 < m; ++j) {
            const auto Pj = OperatorMatrix::pi(m, j, p);
            if (which == 2 && std::abs(i - j) >= 2) err = std::max(err, (Pi * Pj).max_abs_diff(Pj * Pi));
            if (which == 3 && j == i + 1) err = std::max(err, (Pi * Pj * Pi).max_abs_diff(Pj * Pi * Pj));
        }
    }
    return err;
}

// The six-row table as printed in the paper (rows follow BraidTable::words).
constexpr std::array<std::array<const char*, 6>, 6> kBraidTable = {{
    {"210", "120", "210", "120", "120", "120"},
    {"210", "210", "201", "210", "201", "210"},
    {"210", "210", "210", "201", "210", "201"},
    {"210", "210", "201", "201", "201", "201"},
    {"210", "120", "210", "120", "210", "210"},
    {"210", "210", "210", "210", "120", "120"},
}};

double braid_mismatches() {
    const auto t = braid_table();
    int bad = t.halves_match() ? 0 : 1;
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) bad += t.cells[r][c] != kBraidTable[r][c];
    return bad;
}

double reversal_error(std::size_t words, std::uint64_t seed) {
    RngStream rng(seed, 0x4E7);
    const double ps[] = {0.6, 0.75, 1.0};
    double err = 0.0;
    for (std::size_t w = 0; w < words; ++w) {
        const int len = 1 + static_cast<int>(rng.below(8));
        std::vector<int> word(static_cast<std::size_t>(len));
        for (auto& b : word) b = static_cast<int>(rng.below(3));
        const double p = ps[rng.below(3)];
        const auto fwd = exact_word_distribution(word, 4, p);
        std::vector<int> rev(word.rbegin(), word.rend());
        const auto back = exact_word_distribution(rev, 4, p);
        const auto inv = inverse_distribution(fwd, 4);
        for (std::size_t i = 0; i < back.size(); ++i) err = std::max(err, std::abs(back[i] - inv[i]));
    }
    return err;
}

CollapseResult collapse_example() {
    const std::vector<Line> lines = {{0, 1, 1, 0}, {1, 0, 0, 1}, {1, 1, 0, 1}};
    return collapse(lines, QueueState(3), true);
}

double collapse_output_mismatches() {
    const std::vector<int> want = {1, 3, 4, 2};
    const auto r = collapse_example();
    if (r.classes.size() != want.size()) return 4;
    double bad = 0;
    for (std::size_t i = 0; i < want.size(); ++i) bad += r.classes[i] != want[i];
    return bad;
}

double collapse_trace_mismatches() {
    // columns right to left: (column, output, queues after)
    const std::vector<std::tuple<std::size_t, int, std::string>> want = {
        {3, 2, "({},{})"}, {2, 4, "({1},{})"}, {1, 3, "({1,1},{})"}, {0, 1, "({1},{})"}};
    const auto r = collapse_example();
    if (r.trace.size() != want.size()) return 4;
    double bad = 0;
    for (std::size_t i = 0; i < want.size(); ++i) {
        const auto& [col, out, q] = want[i];
        bad += r.trace[i].column != col || r.trace[i].output != out || r.trace[i].after.to_string() != q;
    }
    return bad;
}

// Groups of a weak-order label such as "u1<u0=u2", lowest first.
std::vector<std::vector<int>> stratum_groups(const std::string& order) {
    std::vector<std::vector<int>> groups(1);
    for (char c : order) {
        if (c >= '0' && c <= '2') groups.back().push_back(c - '0');
        if (c == '<') groups.emplace_back();
    }
    return groups;
}

double stratum_mass(int stratum) {
    const auto groups = stratum_groups(joint3_strata().at(static_cast<std::size_t>(stratum)));
    const int d = static_cast<int>(groups.size());
    auto density = [&](const std::array<double, 3>& v) {
        double u[3];
        for (int g = 0; g < d; ++g)
            for (int k : groups[static_cast<std::size_t>(g)]) u[k] = v[static_cast<std::size_t>(g)];
        return joint3_density(u[0], u[1], u[2]).density;
    };
    if (d == 1) return gauss_integrate([&](double a) { return density({a, 0, 0}); }, -1.0, 1.0);
    if (d == 2)
        return gauss_integrate(
            [&](double b) { return gauss_integrate([&](double a) { return density({a, b, 0}); }, -1.0, b); }, -1.0, 1.0);
    return gauss_integrate(
        [&](double c) {
            return gauss_integrate(
                [&](double b) { return gauss_integrate([&](double a) { return density({a, b, c}); }, -1.0, b); }, -1.0,
                c);
        },
        -1.0, 1.0);
}

double joint3_total_mass() {
    double total = 0.0;
    for (int s = 0; s < 13; ++s) total += stratum_mass(s);
    return total;
}

// Integrates u2 out of the three-speed law on the 21 x 21 grid and compares with the two-speed law.
double joint3_marginal_error() {
    auto f3 = [](double a, double b, double c) { return joint3_density(a, b, c).density; };
    auto integrate_u2 = [&](double u0, double u1) {
        std::vector<double> cuts = {-1.0, std::min(u0, u1), std::max(u0, u1), 1.0};
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            if (cuts[i + 1] > cuts[i])
                s += gauss_integrate([&](double c) { return f3(u0, u1, c); }, cuts[i], cuts[i + 1]);
        return s;
    };
    double err = 0.0;
    for (int i = -10; i <= 10; ++i)
        for (int j = -10; j <= 10; ++j) {
            const double u0 = i / 10.0, u1 = j / 10.0;
            const auto want = joint2_density(u0, u1);
            if (i != j) {
                const double got = integrate_u2(u0, u1) + f3(u0, u1, u0) + f3(u0, u1, u1);
                err = std::max(err, std::abs(got - want.continuous));
            } else {
                const double got = integrate_u2(u0, u0) + f3(u0, u0, u0);
                err = std::max(err, std::abs(got - want.diagonal));
            }
        }
    return err;
}

double joint3_symmetry_error() {
    double err = 0.0;
    for (int i = -10; i <= 10; ++i)
        for (int j = -10; j <= 10; ++j)
            for (int k = -10; k <= 10; ++k) {
                const auto a = joint3_density(i / 10.0, j / 10.0, k / 10.0);
                const auto b = joint3_density(-k / 10.0, -j / 10.0, -i / 10.0);
                if (a.dimension != b.dimension) return 1.0;
                err = std::max(err, std::abs(a.density - b.density));
            }
    return err;
}

double equal3_vs_joint3() { return std::abs(equal_speeds_prob(2) - stratum_mass(12)); }

double joint2_mass_error() {
    // {u0 > u1}, {u0 < u1} and the diagonal, by quadrature of the closed form
    const double above = gauss_integrate(
        [](double a) { return gauss_integrate([&](double b) { return joint2_density(a, b).continuous; }, -1.0, a); },
        -1.0, 1.0);
    const double below = gauss_integrate(
        [](double a) { return gauss_integrate([&](double b) { return joint2_density(a, b).continuous; }, a, 1.0); },
        -1.0, 1.0);
    const double diag = gauss_integrate([](double a) { return joint2_density(a, a).diagonal; }, -1.0, 1.0);
    const Joint2Masses m;
    return std::max({std::abs(above - m.above), std::abs(below - m.below), std::abs(diag - m.equal)});
}

double rightmost_sum_error() {
    double err = 0.0;
    for (int n = 1; n <= 8; ++n) {
        double s = 0.0;
        for (int k = 1; k <= n; ++k) s += rightmost_prob(n, k);
        err = std::max(err, std::abs(s - 1.0));
    }
    return err;
}

double walk_convention_error() {
    double err = 0.0;
    for (int n = 0; n <= 40; ++n)
        for (double h : {0.05, 0.2, 0.25}) {
            const LazyWalkSpec w{h, h, 1.0 - 2.0 * h, n};
            err = std::max(err, std::abs(walk_max_zero_prob(w) - walk_max_zero_prob_any(w)));
        }
    return err;
}

double convoy_gap_error() {
    double err = 0.0;
    for (double u : {-0.5, 0.0, 0.5}) {
        double s = 0.0;
        const long M = 400;
        for (long m = 1; m <= M; ++m) s += convoy_gap_pmf(u, m);
        err = std::max(err, std::abs(s + convoy_gap_tail(u, M) - 1.0));
    }
    return err;
}

double dist2_identity_error() {
    const double x = 0.2, y = 0.6;
    const double s = dist2(4, Dist2Region::below, x, y) + dist2(4, Dist2Region::diag, x, y) +
                     dist2(4, Dist2Region::above, x, y);
    return std::abs(s - (y - x));
}

void add_quick(std::vector<ClaimSpec>& v, const SuiteConfig& c) {
    for (double p : {0.6, 0.75, 1.0}) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%g", p);
        v.push_back(exact_claim(std::string("algebra.quadratic.p") + buf, 1, "pi_i^2 = q I + (1-q) pi_i on S4", 0.0,
                                1e-12, [p] { return relation_error(1, p); }));
        v.push_back(exact_claim(std::string("algebra.commute.p") + buf, 1, "pi_i pi_j = pi_j pi_i, |i-j| >= 2 on S4",
                                0.0, 1e-12, [p] { return relation_error(2, p); }));
        v.push_back(exact_claim(std::string("algebra.braid.p") + buf, 1, "pi_i pi_i+1 pi_i = pi_i+1 pi_i pi_i+1 on S4",
                                0.0, 1e-12, [p] { return relation_error(3, p); }));
    }
    v.push_back(exact_claim("algebra.braid_table", 1, "six-row deterministic table, mismatching cells", 0.0, 0.0,
                            braid_mismatches));
    const std::size_t words = c.reversal_words;
    const std::uint64_t seed = c.seed;
    v.push_back(exact_claim("algebra.reversal", 1, "reversed word gives the inverse law (random words, m=4)", 0.0,
                            1e-12, [words, seed] { return reversal_error(words, seed); }));
    v.back().replicas = words;
    v.back().seed = seed;

    v.push_back(exact_claim("multiline.collapse_output", 2, "worked example gives classes (1,3,4,2)", 0.0, 0.0,
                            collapse_output_mismatches));
    v.push_back(exact_claim("multiline.collapse_trace", 2, "queue states column by column", 0.0, 0.0,
                            collapse_trace_mismatches));

    v.push_back(exact_claim("dist2.identity", 7, "below + diag + above = y - x (k=4, x=0.2, y=0.6)", 0.0, 1e-12,
                            dist2_identity_error));
    v.push_back(exact_claim("joint3.total_mass", 8, "quadrature mass over the 13 strata", 1.0, 1e-9,
                            joint3_total_mass));
    v.push_back(exact_claim("joint3.marginal", 8, "integrating out u2 gives the two-speed law (21x21 grid)", 0.0,
                            1e-9, joint3_marginal_error));
    // strata must correspond exactly; densities are compared up to rounding of the polynomial evaluation
    v.push_back(exact_claim("joint3.space_class_symmetry", 8, "f(u0,u1,u2) = f(-u2,-u1,-u0) on the 21^3 grid", 0.0,
                            1e-15, joint3_symmetry_error));

    v.push_back(exact_claim("joint2.masses", 0, "quadrature masses 1/2, 1/3, 1/6", 0.0, 1e-12, joint2_mass_error));
    v.push_back(exact_claim("convoy.equal3", 0, "P(U0=U1=U2) = 1/30 equals the joint3 diagonal mass", 0.0, 1e-12,
                            equal3_vs_joint3));
    v.push_back(exact_claim("rightmost.normalized", 0, "rightmost probabilities sum to 1, n <= 8", 0.0, 1e-12,
                            rightmost_sum_error));
    v.push_back(exact_claim("walk.max_convention", 0, "reflection formula vs dynamic programming for P(M_n = 0)", 0.0,
                            1e-12, walk_convention_error));
    v.push_back(exact_claim("convoy.gap_law", 0, "gap pmf up to 400 plus exact tail sums to 1", 0.0, 1e-12,
                            convoy_gap_error));
}

// -- Monte Carlo batches --

constexpr double kDistantHorizon = 2000.0;

struct TasepRow {
    double u[5];
    Site x[5];
};

struct SymmetryCounts {
    std::vector<double> x, y;  // aligned cell counts
    std::size_t cells = 0;
};

class Batches {
public:
    explicit Batches(const SuiteConfig& c) : c_(c) {}

    const std::vector<TasepRow>& tasep() {
        if (!tasep_) {
            const RngStream root(c_.seed, 0x7A5E);
            const std::vector<Label> labels = {0, 1, 2, 3, 4};
            tasep_ = run_replicas<TasepRow>(c_.tasep_replicas, c_.jobs, [&](std::size_t r) {
                RngStream rng = root.substream(r);
                const auto est = estimate_speeds(simulate_projected({Dynamics::tasep, 1.0, 500.0, 0, 4}, rng), labels);
                TasepRow row{};
                for (int i = 0; i < 5; ++i) {
                    row.u[i] = est.particles[static_cast<std::size_t>(i)].speed;
                    row.x[i] = est.particles[static_cast<std::size_t>(i)].position;
                }
                return row;
            });
        }
        return *tasep_;
    }

    // (U0, U4) at t = 2000; the edge excess of the finite-t marginals is still
    // visible at t = 500 on 1e4 replicas
    const std::vector<std::pair<double, double>>& distant() {
        if (!distant_) {
            const RngStream root(c_.seed, 0x7A5F);
            const std::vector<Label> labels = {0, 4};
            distant_ = run_replicas<std::pair<double, double>>(c_.tasep_replicas, c_.jobs, [&](std::size_t r) {
                RngStream rng = root.substream(r);
                const auto est =
                    estimate_speeds(simulate_projected({Dynamics::tasep, 1.0, kDistantHorizon, 0, 4}, rng), labels);
                return std::pair{est.particles[0].speed, est.particles[1].speed};
            });
        }
        return *distant_;
    }

    const StationarityReport& stationarity() {
        if (!stationarity_) {
            StationarityOptions o;
            o.replicas = c_.stationarity_replicas;
            o.seed = derive_seed(c_.seed, 0x57A7);
            o.jobs = c_.jobs;
            o.reference_samples = c_.multiline_samples;
            stationarity_ = stationarity_experiment(o);
        }
        return *stationarity_;
    }

    const AdjacencyReport& asep() {
        if (!asep_) {
            AdjacencyOptions o;
            o.replicas = c_.asep_replicas;
            o.seed = derive_seed(c_.seed, 0xA5E9);
            o.jobs = c_.jobs;
            asep_ = adjacency_experiment(o);
            if (asep_->certificate_failures) throw std::runtime_error("ASEP batch: window too small");
        }
        return *asep_;
    }

    const SymmetryCounts& symmetry() {
        if (!symmetry_) symmetry_ = run_symmetry();
        return *symmetry_;
    }

    const std::vector<double>& pairs() {
        if (!pairs_) {
            const std::vector<double> lambda = {0.3, 0.3, 0.4};
            const std::size_t chunk = 1000, n = c_.multiline_samples;
            const RngStream root(c_.seed, 0x9A12);
            const auto parts = run_replicas<std::vector<double>>((n + chunk - 1) / chunk, c_.jobs, [&](std::size_t i) {
                RngStream rng = root.substream(i);
                std::vector<double> counts(9, 0.0);
                for (std::size_t j = 0; j < std::min(chunk, n - i * chunk); ++j) {
                    const auto w = sample_stationary(lambda, 2, -1, rng);
                    counts[static_cast<std::size_t>((w[0] - 1) * 3 + (w[1] - 1))] += 1.0;
                }
                return counts;
            });
            pairs_ = std::vector<double>(9, 0.0);
            for (const auto& p : parts)
                for (std::size_t i = 0; i < 9; ++i) (*pairs_)[i] += p[i];
        }
        return *pairs_;
    }

    const SuiteConfig& config() const { return c_; }

private:
    SymmetryCounts run_symmetry() {
        constexpr Site W = 25;
        constexpr double t = 3.0;
        const auto init = canonical_config(-W, 2 * W + 1);
        const HarrisOptions opt{Dynamics::tasep, 1.0, AsepDriver::marks, t, nullptr};
        auto key = [](Site a, Site b, Site c) {
            const Site k = 2 * W + 1;
            return ((a + W) * k + (b + W)) * k + (c + W);
        };
        auto side = [&](std::uint64_t stream, bool positions) {
            const RngStream root(c_.seed, stream);
            return run_replicas<Site>(c_.symmetry_replicas, c_.jobs, [&](std::size_t r) {
                RngStream rng = root.substream(r);
                const auto noise = sample_noise(rng, init.lo(), init.hi(), t, Dynamics::tasep);
                const auto sim = simulate(init, noise, opt);
                Site v[3];
                for (int i = 0; i < 3; ++i) {
                    const Site n = i - 1;
                    const Site s = positions ? sim.tracker.position(n) : n;
                    if (!sim.certificate.safe(s)) throw std::runtime_error("symmetry batch: window too small");
                    v[i] = positions ? s : sim.final[n];
                }
                return key(v[0], v[1], v[2]);
            });
        };
        const auto xs = side(0x5A, true);
        const auto ys = side(0x5B, false);
        std::map<Site, std::pair<double, double>> cells;
        for (Site k : xs) cells[k].first += 1.0;
        for (Site k : ys) cells[k].second += 1.0;
        SymmetryCounts out;
        for (auto& [k, v] : cells) {
            out.x.push_back(v.first);
            out.y.push_back(v.second);
        }
        out.cells = cells.size();
        return out;
    }

    SuiteConfig c_;
    std::optional<std::vector<TasepRow>> tasep_;
    std::optional<std::vector<std::pair<double, double>>> distant_;
    std::optional<StationarityReport> stationarity_;
    std::optional<AdjacencyReport> asep_;
    std::optional<SymmetryCounts> symmetry_;
    std::optional<std::vector<double>> pairs_;
};

Measurement proportion_of(std::size_t hits, std::size_t n) {
    const auto s = proportion(hits, n);
    Measurement m;
    m.estimate = s.mean;
    m.standard_error = s.standard_error;
    m.replicas = n;
    return m;
}

Measurement from_test(const TestResult& t, std::size_t n, std::string note = {}) {
    Measurement m;
    m.estimate = t.statistic;
    m.statistic = t.statistic;
    m.p_value = t.p_value;
    m.replicas = n;
    m.note = std::move(note);
    return m;
}

// Hotelling T^2 of per-replica vectors against mean zero; returns (T^2 as chi-square, dof).
TestResult hotelling_zero_mean(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size(), d = rows.front().size();
    std::vector<double> mean(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = rows[i][k];
        mean[k] = pairwise_sum(col) / static_cast<double>(n);
    }
    std::vector<double> S(d * d, 0.0);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            std::vector<double> prod(n);
            for (std::size_t i = 0; i < n; ++i) prod[i] = (rows[i][a] - mean[a]) * (rows[i][b] - mean[b]);
            S[a * d + b] = pairwise_sum(prod) / static_cast<double>(n - 1) / static_cast<double>(n);
        }
    // solve S x = mean by Gaussian elimination with partial pivoting
    std::vector<double> A = S, x = mean;
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < d; ++r)
            if (std::abs(A[r * d + col]) > std::abs(A[piv * d + col])) piv = r;
        if (A[piv * d + col] == 0.0) throw std::runtime_error("hotelling: singular covariance");
        for (std::size_t k = 0; k < d; ++k) std::swap(A[col * d + k], A[piv * d + k]);
        std::swap(x[col], x[piv]);
        for (std::size_t r = col + 1; r < d; ++r) {
            const double f = A[r * d + col] / A[col * d + col];
            for (std::size_t k = col; k < d; ++k) A[r * d + k] -= f * A[col * d + k];
            x[r] -= f * x[col];
        }
    }
    for (std::size_t col = d; col-- > 0;) {
        for (std::size_t k = col + 1; k < d; ++k) x[col] -= A[col * d + k] * x[k];
        x[col] /= A[col * d + col];
    }
    double t2 = 0.0;
    for (std::size_t k = 0; k < d; ++k) t2 += mean[k] * x[k];
    const int dof = static_cast<int>(d);
    return {t2, chi2_survival(t2, dof), dof};
}

void add_monte_carlo(std::vector<ClaimSpec>& v, const std::shared_ptr<Batches>& B) {
    const SuiteConfig& c = B->config();
    auto add = [&](ClaimSpec s, std::size_t replicas) {
        s.replicas = replicas;
        s.seed = c.seed;
        v.push_back(std::move(s));
    };
    auto spec = [](std::string id, int crit, std::string what, TestKind kind) {
        ClaimSpec s;
        s.id = std::move(id);
        s.criterion = crit;
        s.description = std::move(what);
        s.kind = kind;
        return s;
    };
    const std::size_t nt = c.tasep_replicas;

    // criterion 3: adjacent pair frequencies of the multi-line sampler
    {
        const double x1 = 0.3, x2 = 0.6;
        struct Cell {
            int a, b;
            double literal, corrected;
        };
        const Cell cells[] = {{1, 2, x1 * x2 * (x2 - x1), x1 * x2 * (x2 - x1)},
                              {2, 2, x1 * (1 - x2) * (x2 - x1), (1 - x1) * x2 * (x2 - x1)},
                              {3, 2, (1 - x1) * (x2 - x1), (1 - x2) * (x2 - x1)}};
        for (const auto& cell : cells) {
            for (bool literal : {true, false}) {
                const double target = literal ? cell.literal : cell.corrected;
                auto s = spec("pairs.(" + std::to_string(cell.a) + "," + std::to_string(cell.b) + ")" +
                                  (literal ? "" : ".corrected"),
                              3, literal ? "stated pair formula, 4 sigma binomial band" : "corrected pair formula",
                              TestKind::z_sigma);
                s.companion = !literal;
                s.exact = target;
                s.tolerance = 4.0;
                s.estimator = [B, cell, target] {
                    const auto& counts = B->pairs();
                    double n = 0.0;
                    for (double k : counts) n += k;
                    Measurement m;
                    m.estimate = counts[static_cast<std::size_t>((cell.a - 1) * 3 + (cell.b - 1))] / n;
                    m.standard_error = std::sqrt(target * (1.0 - target) / n);
                    m.replicas = static_cast<std::size_t>(n);
                    return m;
                };
                add(s, c.multiline_samples);
            }
        }
        auto s = spec("pairs.table", 3, "all nine cells vs the enumerated 2-line measure", TestKind::chi2);
        s.companion = true;
        s.estimator = [B] {
            const auto& counts = B->pairs();
            double n = 0.0;
            for (double k : counts) n += k;
            std::vector<double> expected(9);
            for (int a = 1; a <= 3; ++a)
                for (int b = 1; b <= 3; ++b)
                    expected[static_cast<std::size_t>((a - 1) * 3 + (b - 1))] = n * two_line_pair_prob(a, b, 0.3, 0.6);
            return from_test(chi2_test(counts, expected), static_cast<std::size_t>(n));
        };
        add(s, c.multiline_samples);
    }

    // criterion 4
    {
        auto s = spec("speed.uniform_marginal", 4, "U0(500) vs uniform[-1,1], KS", TestKind::ks);
        s.alpha = kAcceptAlpha;
        s.estimator = [B] {
            const auto& rows = B->tasep();
            std::vector<double> u;
            for (const auto& r : rows) u.push_back(r.u[0]);
            return from_test(ks_test(u, [](double x) { return std::clamp(0.5 * (x + 1.0), 0.0, 1.0); }), u.size());
        };
        add(s, nt);
    }

    // criterion 5
    {
        auto s = spec("joint2.swap_t500", 5, "P(X0(500) > X1(500)) in [2/3 - 0.02, 2/3]", TestKind::band);
        s.band_lo = 2.0 / 3.0 - 0.02;
        s.band_hi = 2.0 / 3.0;
        s.alpha = kAcceptAlpha;
        s.estimator = [B] {
            const auto& rows = B->tasep();
            std::size_t hits = 0;
            for (const auto& r : rows) hits += r.x[0] > r.x[1];
            return proportion_of(hits, rows.size());
        };
        add(s, nt);

        auto e = spec("joint2.equal_convoy_t1000", 5, "convoy rule delta = t^-1/4: P(U0 = U1) = 1/6 +- 0.03",
                      TestKind::abs_tolerance);
        e.exact = 1.0 / 6.0;
        e.tolerance = 0.03;
        e.alpha = kAcceptAlpha;
        e.estimator = [B] {
            const auto& rep = B->stationarity();
            const double d = default_convoy_delta(1000.0);
            std::size_t hits = 0;
            for (auto [a, b] : rep.before_speeds) hits += std::abs(a - b) <= d;
            return proportion_of(hits, rep.before_speeds.size());
        };
        add(e, c.stationarity_replicas);
    }

    // criterion 6
    for (int k = 1; k <= 3; ++k) {
        auto s = spec("rightmost.n3.k" + std::to_string(k), 6, "empirical P(X_k rightmost of X_1..X_3) at t=500",
                      TestKind::abs_tolerance);
        s.exact = rightmost_prob(3, k);
        s.tolerance = 0.02;
        s.alpha = kAcceptAlpha;
        s.estimator = [B, k] {
            const auto& rows = B->tasep();
            std::size_t hits = 0;
            for (const auto& r : rows) {
                int best = 1;
                for (int i = 2; i <= 3; ++i)
                    if (r.x[i] > r.x[best]) best = i;
                hits += best == k;
            }
            return proportion_of(hits, rows.size());
        };
        add(s, nt);
    }

    // criterion 7
    for (auto region : {Dist2Region::below, Dist2Region::diag, Dist2Region::above}) {
        const char* name = region == Dist2Region::below ? "below" : region == Dist2Region::diag ? "diag" : "above";
        auto s = spec(std::string("dist2.k4.") + name, 7, "region probability of (U0^, U4^)(2000), x=0.2, y=0.6",
                      TestKind::z_sigma);
        s.exact = dist2(4, region, 0.2, 0.6);
        s.tolerance = 4.0;
        s.estimator = [B, region] {
            const auto& rows = B->distant();
            const double x = 0.2, y = 0.6;
            std::size_t hits = 0;
            for (const auto& [u0, u4] : rows) {
                const double a = speed_hat(u0), b = speed_hat(u4);
                bool in = false;
                if (region == Dist2Region::below) in = x < b && b < y && y < a;
                if (region == Dist2Region::diag) in = x <= a && a <= y && x <= b && b <= y;
                if (region == Dist2Region::above) in = a < x && x < b && b < y;
                hits += in;
            }
            return proportion_of(hits, rows.size());
        };
        add(s, nt);
    }

    // convoy-rule version of P(U0 > U1) = 1/2 at t = 500 (reported; pairs within delta count as convoys)
    {
        auto s = spec("joint2.speed_order_t500", 5, "P(U0 - U1 > t^-1/4) at t=500 vs 1/2, 4 sigma", TestKind::z_sigma);
        s.companion = true;
        s.exact = 0.5;
        s.tolerance = 4.0;
        s.estimator = [B] {
            const auto& rows = B->tasep();
            const double d = default_convoy_delta(500.0);
            std::size_t hits = 0;
            for (const auto& r : rows) hits += r.u[0] - r.u[1] > d;
            return proportion_of(hits, rows.size());
        };
        add(s, nt);
    }

    // P(U0(t) > 0) = 1/2 holds at every t by particle-hole symmetry; the self-test
    // reuses it with a wrong value
    for (double target : {0.5, 0.6}) {
        auto s = spec(target == 0.5 ? "speed.sign_t500" : "selftest.wrong_exact", 0,
                      target == 0.5 ? "P(U0(500) > 0) + P(U0(500) = 0)/2 = 1/2, 4 sigma"
                                    : "same estimate against a wrong value 0.6; passes only if rejected",
                      TestKind::z_sigma);
        s.exact = target;
        s.tolerance = 4.0;
        s.expect_fail = target != 0.5;
        s.estimator = [B] {
            const auto& rows = B->tasep();
            double hits = 0.0;
            for (const auto& r : rows) hits += r.u[0] > 0.0 ? 1.0 : r.u[0] == 0.0 ? 0.5 : 0.0;
            const auto n = static_cast<double>(rows.size());
            Measurement m;
            m.estimate = hits / n;
            m.standard_error = std::sqrt(0.25 / n);
            m.replicas = rows.size();
            return m;
        };
        add(s, nt);
    }

    // criterion 9: ASEP p = 0.7 (snapshots 50, 100, 200, 400, 500)
    {
        const auto av = asep_values(0.7);
        const std::size_t na = c.asep_replicas;
        auto q_at = [B](std::size_t snap) {
            const auto& recs = B->asep().records;
            std::size_t hits = 0;
            for (const auto& r : recs) hits += r.order[snap].unswapped;
            return proportion_of(hits, recs.size());
        };
        auto s = spec("asep.q500", 9, "Q(500) in [13/30, 13/30 + 0.02]", TestKind::band);
        s.band_lo = av.swap_limit;
        s.band_hi = av.swap_limit + 0.02;
        s.alpha = kAcceptAlpha;
        s.estimator = [q_at] { return q_at(4); };
        add(s, na);

        auto mono = spec("asep.q_decreasing", 9, "Q(50) > Q(100) > Q(200) > Q(400), order violations",
                         TestKind::exact_equality);
        mono.exact = 0.0;
        mono.estimator = [q_at] {
            Measurement m;
            int bad = 0;
            for (std::size_t i = 0; i + 1 < 4; ++i) bad += !(q_at(i).estimate > q_at(i + 1).estimate);
            m.estimate = bad;
            char buf[96];
            std::snprintf(buf, sizeof buf, "Q = %.4f %.4f %.4f %.4f", q_at(0).estimate, q_at(1).estimate,
                          q_at(2).estimate, q_at(3).estimate);
            m.note = buf;
            return m;
        };
        add(mono, na);

        auto r = spec("asep.r_over_t400", 9, "R(400)/400 within rho/3 +- 0.01", TestKind::band);
        r.band_lo = av.r_slope - 0.01;
        r.band_hi = av.r_slope + 0.01;
        r.alpha = kAcceptAlpha;
        r.estimator = [B] {
            const auto& recs = B->asep().records;
            std::vector<double> v;
            for (const auto& rec : recs) v.push_back(static_cast<double>(rec.order[3].swaps) / 400.0);
            const auto sm = summarize(v);
            Measurement m;
            m.estimate = sm.mean;
            m.standard_error = sm.standard_error;
            m.replicas = sm.n;
            return m;
        };
        add(r, na);

        auto d = spec("asep.dRdt", 9, "R increments vs integral of p + Q - 1 on 4 intervals, Hotelling T^2",
                      TestKind::chi2);
        d.alpha = kAcceptAlpha;
        d.estimator = [B] {
            const auto& recs = B->asep().records;
            const double p = 0.7;
            std::vector<std::vector<double>> rows;
            for (const auto& rec : recs) {
                std::vector<double> row;
                for (std::size_t i = 0; i + 1 < rec.order.size(); ++i) {
                    const auto& a = rec.order[i];
                    const auto& b = rec.order[i + 1];
                    row.push_back(static_cast<double>(b.swaps - a.swaps) - (p - 1.0) * (b.time - a.time) -
                                  (b.unswapped_time - a.unswapped_time));
                }
                rows.push_back(std::move(row));
            }
            return from_test(hotelling_zero_mean(rows), rows.size());
        };
        add(d, na);

        for (bool slope : {true, false}) {
            auto j = spec(slope ? "asep.J_slope" : "asep.J_intercept", 9,
                          "binned unswapped frequency on exp(-J): slope p, intercept 1-p, +- 0.03",
                          TestKind::abs_tolerance);
            j.exact = slope ? 0.7 : 0.3;
            j.tolerance = 0.03;
            j.alpha = kAcceptAlpha;
            j.estimator = [B, slope] {
                const auto& rep = B->asep();
                std::vector<double> x, y, w;
                for (const auto& b : rep.bins)
                    if (b.n > 0) {
                        x.push_back(b.mean_exp_minus_J);
                        y.push_back(b.unswapped);
                        w.push_back(static_cast<double>(b.n));
                    }
                const auto f = weighted_least_squares(x, y, w);
                Measurement m;
                m.estimate = slope ? f.slope : f.intercept;
                m.standard_error = slope ? f.slope_se : f.intercept_se;
                m.replicas = rep.records.size();
                return m;
            };
            add(j, na);
        }
    }

    // criterion 10
    {
        auto s = spec("symmetry.t3", 10, "law of (Y-1,Y0,Y1)(3) vs (X-1,X0,X1)(3), two-sample chi-square",
                      TestKind::chi2);
        s.alpha = kAcceptAlpha;
        s.estimator = [B] {
            const auto& sc = B->symmetry();
            return from_test(chi2_two_sample(sc.x, sc.y), B->config().symmetry_replicas,
                             std::to_string(sc.cells) + " distinct triples");
        };
        add(s, c.symmetry_replicas);
    }

    // criterion 11
    {
        auto s = spec("stationarity.pairs", 11, "class pairs at sites (0,1) before vs after t2 = 100",
                      TestKind::chi2);
        s.alpha = kAcceptAlpha;
        s.estimator = [B] {
            const auto& rep = B->stationarity();
            return from_test(rep.before_vs_after, B->config().stationarity_replicas);
        };
        add(s, c.stationarity_replicas);

        auto m = spec("stationarity.marginal", 11, "class at site 0 before vs after t2 = 100", TestKind::chi2);
        m.alpha = kAcceptAlpha;
        m.estimator = [B] {
            const auto& rep = B->stationarity();
            return from_test(chi2_two_sample(rep.marginal_before, rep.marginal_after),
                             B->config().stationarity_replicas);
        };
        add(m, c.stationarity_replicas);

        auto r = spec("stationarity.reference", 0, "projected pairs at t1 = 1000 vs the multi-line sampler",
                      TestKind::chi2);
        r.estimator = [B] {
            const auto& rep = B->stationarity();
            return from_test(rep.before_vs_reference, B->config().stationarity_replicas);
        };
        add(r, c.stationarity_replicas);
    }

    // multi-line empty-queue probability, lambda = (0.2, 0.3, 0.3, 0.2)
    {
        auto s = spec("multiline.empty_queues", 0, "all queues empty vs Q_3(0.2, 0.5, 0.8), 4 sigma",
                      TestKind::z_sigma);
        s.exact = empty_queue_prob(std::vector<double>{0.2, 0.5, 0.8});
        s.tolerance = 4.0;
        const std::uint64_t seed = c.seed;
        s.estimator = [seed] {
            RngStream rng(seed, 0xE0);
            const auto e = empty_queue_prob_estimate(std::vector<double>{0.2, 0.3, 0.3, 0.2}, 100000, rng);
            Measurement m;
            m.estimate = e.probability;
            m.standard_error = e.standard_error;
            m.replicas = e.samples;
            return m;
        };
        add(s, 100000);
    }
}

}  // namespace

std::vector<ClaimSpec> quick_suite(const SuiteConfig& config) {
    std::vector<ClaimSpec> v;
    add_quick(v, config);
    return v;
}

std::vector<ClaimSpec> full_suite(const SuiteConfig& config) {
    std::vector<ClaimSpec> v;
    add_quick(v, config);
    add_monte_carlo(v, std::make_shared<Batches>(config));
    std::stable_sort(v.begin(), v.end(), [](const ClaimSpec& a, const ClaimSpec& b) {
        const int ka = a.criterion ? a.criterion : 100, kb = b.criterion ? b.criterion : 100;
        return ka < kb;
    });
    return v;
}

}  // namespace speedlab
