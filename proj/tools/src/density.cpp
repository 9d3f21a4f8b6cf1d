#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include "commands.hpp"
#include "speedlab/formulas.hpp"

namespace speedlab::cli {

namespace {

struct DensityArgs {
    std::string which;
    double grid = 0.0;  // 0: per-table default
    int k = 4;
    double x = -1.0, y = -1.0;
    int n = 3;
    double u = 0.0;
    long max_gap = 100;
    double p = 0.7;
    std::string out;
};

// Grid points lo, lo + h, ..., hi with an integer step count; throws unless h divides the span.
std::vector<double> grid_points(double lo, double hi, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("--grid must be > 0");
    const double steps = (hi - lo) / h;
    const long m = std::lround(steps);
    if (m < 1 || std::abs(steps - static_cast<double>(m)) > 1e-9)
        throw std::invalid_argument("--grid must divide the interval length");
    std::vector<double> v;
    for (long i = 0; i <= m; ++i) v.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(m));
    return v;
}

void joint2(const DensityArgs& a, std::ostream& s) {
    const auto g = grid_points(-1.0, 1.0, a.grid > 0.0 ? a.grid : 0.01);
    s << "u0,u1,density,diagonal\n";
    for (double u0 : g)
        for (double u1 : g) {
            const auto d = joint2_density(u0, u1);
            s << fmt(u0) << ',' << fmt(u1) << ',' << fmt(d.continuous) << ',' << fmt(d.diagonal) << '\n';
        }
    const Joint2Masses m;
    s << "# mass u0>u1 = " << fmt(m.above) << "\n# mass u0<u1 = " << fmt(m.below) << "\n# mass u0=u1 = " << fmt(m.equal)
      << '\n';
}

void dist2_table(const DensityArgs& a, std::ostream& s) {
    if (a.k < 1) throw std::invalid_argument("--k must be >= 1");
    const bool single = a.x >= 0.0 || a.y >= 0.0;
    if (single && !(a.x >= 0.0 && a.x < a.y && a.y <= 1.0)) throw std::invalid_argument("dist2 needs 0 <= x < y <= 1");
    s << "k,x,y,below,diag,above\n";
    auto row = [&](double x, double y) {
        s << a.k << ',' << fmt(x) << ',' << fmt(y) << ',' << fmt(dist2(a.k, Dist2Region::below, x, y)) << ','
          << fmt(dist2(a.k, Dist2Region::diag, x, y)) << ',' << fmt(dist2(a.k, Dist2Region::above, x, y)) << '\n';
    };
    if (single) {
        row(a.x, a.y);
        return;
    }
    const auto g = grid_points(0.0, 1.0, a.grid > 0.0 ? a.grid : 0.05);
    for (double x : g)
        for (double y : g)
            if (x < y) row(x, y);
}

void joint3(const DensityArgs& a, std::ostream& s) {
    const auto g = grid_points(-1.0, 1.0, a.grid > 0.0 ? a.grid : 0.1);
    s << "u0,u1,u2,stratum,order,dimension,density\n";
    for (double u0 : g)
        for (double u1 : g)
            for (double u2 : g) {
                const auto d = joint3_density(u0, u1, u2);
                s << fmt(u0) << ',' << fmt(u1) << ',' << fmt(u2) << ',' << d.stratum << ',' << d.order << ','
                  << d.dimension << ',' << fmt(d.density) << '\n';
            }
}

void ordered(const DensityArgs& a, std::ostream& s) {
    if (a.n < 1 || a.n > 3) throw std::invalid_argument("ordered: --n must be 1, 2 or 3");
    const auto g = grid_points(0.0, 1.0, a.grid > 0.0 ? a.grid : 0.05);
    for (int i = 1; i <= a.n; ++i) s << "uhat" << i << ',';
    s << "density\n";
    std::vector<double> v(static_cast<std::size_t>(a.n));
    auto emit = [&] {
        for (double x : v) s << fmt(x) << ',';
        s << fmt(ordered_density(v)) << '\n';
    };
    for (double a1 : g) {
        v[0] = a1;
        if (a.n == 1) {
            emit();
            continue;
        }
        for (double a2 : g) {
            if (!(a2 > a1)) continue;
            v[1] = a2;
            if (a.n == 2) {
                emit();
                continue;
            }
            for (double a3 : g)
                if (a3 > a2) {
                    v[2] = a3;
                    emit();
                }
        }
    }
}

void rightmost(const DensityArgs& a, std::ostream& s) {
    if (a.n < 1) throw std::invalid_argument("rightmost: --n must be >= 1");
    s << "k,probability\n";
    for (int k = 1; k <= a.n; ++k) s << k << ',' << fmt(rightmost_prob(a.n, k)) << '\n';
}

void convoy(const DensityArgs& a, std::ostream& s) {
    if (!(a.u > -1.0 && a.u < 1.0)) throw std::invalid_argument("convoy: --u must lie in (-1, 1)");
    if (a.max_gap < 1) throw std::invalid_argument("convoy: --max-gap must be >= 1");
    s << "gap,pmf,tail\n";
    for (long m = 1; m <= a.max_gap; ++m)
        s << m << ',' << fmt(convoy_gap_pmf(a.u, m)) << ',' << fmt(convoy_gap_tail(a.u, m)) << '\n';
    for (int n = 1; n <= 5; ++n) s << "# P(U0=...=U" << n << ") = " << fmt(equal_speeds_prob(n)) << '\n';
}

void asep(const DensityArgs& a, std::ostream& s) {
    const auto v = asep_values(a.p);
    s << "J,unswapped_prob\n";
    for (const double J : grid_points(0.0, 5.0, a.grid > 0.0 ? a.grid : 0.25))
        s << fmt(J) << ',' << fmt(v.interaction_prob(J)) << '\n';
    s << "# p = " << fmt(v.p) << "\n# rho = " << fmt(v.rho) << "\n# swap_limit = " << fmt(v.swap_limit)
      << "\n# r_slope = " << fmt(v.r_slope) << '\n';
}

void run_density(const DensityArgs& a) {
    Output o(a.out);
    auto& s = o.stream();
    if (a.which == "joint2") joint2(a, s);
    else if (a.which == "dist2") dist2_table(a, s);
    else if (a.which == "joint3") joint3(a, s);
    else if (a.which == "ordered") ordered(a, s);
    else if (a.which == "rightmost") rightmost(a, s);
    else if (a.which == "convoy") convoy(a, s);
    else asep(a, s);
}

}  // namespace

void add_density(CLI::App& app) {
    auto a = std::make_shared<DensityArgs>();
    auto* sub = app.add_subcommand("density", "Tabulate closed-form speed laws as CSV");
    sub->add_option("--which", a->which, "joint2|dist2|joint3|ordered|rightmost|convoy|asep")
        ->required()
        ->check(CLI::IsMember({"joint2", "dist2", "joint3", "ordered", "rightmost", "convoy", "asep"}));
    sub->add_option("--grid", a->grid, "grid spacing (table-specific default)");
    sub->add_option("--k", a->k, "dist2: distance between the two particles")->capture_default_str();
    sub->add_option("--x", a->x, "dist2: lower threshold in uhat units");
    sub->add_option("--y", a->y, "dist2: upper threshold in uhat units");
    sub->add_option("--n", a->n, "ordered/rightmost: number of particles")->capture_default_str();
    sub->add_option("--u", a->u, "convoy: convoy speed")->capture_default_str();
    sub->add_option("--max-gap", a->max_gap, "convoy: largest gap tabulated")->capture_default_str();
    sub->add_option("--p", a->p, "asep: right-jump probability")->capture_default_str();
    sub->add_option("--out", a->out, "CSV path (default stdout)");
    sub->callback([a] { run_density(*a); });
}

}  // namespace speedlab::cli
