// One PASS/FAIL line per acceptance criterion. Exit status is non-zero when
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "prodmin/extremal.hpp"
#include "prodmin/golden.hpp"
#include "prodmin/shallit.hpp"
#include "property_suites.hpp"

using namespace prodmin;

namespace {

// collects sub-checks of one criterion
struct Criterion {
    std::vector<std::string> failed;
    std::ostringstream info;

    void check(bool ok, const std::string& what) {
        if (!ok) failed.push_back(what);
    }
    void near(double got, double want, double tol, const std::string& what) {
        std::ostringstream os;
        os.precision(10);
        os << what << ": got " << got << ", want " << want << " +- " << tol;
        check(std::abs(got - want) <= tol, os.str());
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void run(int id, const char* title, const std::function<void(Criterion&)>& body) {
    Criterion c;
    auto t0 = Clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.failed.push_back(std::string("exception: ") + e.what());
    }
    const double secs = seconds_since(t0);
    const bool ok = c.failed.empty();
    failures += !ok;
    std::printf("criterion %2d %s  %s  (%.2f s)%s\n", id, ok ? "PASS" : "FAIL", title, secs,
                c.info.str().empty() ? "" : ("  " + c.info.str()).c_str());
    for (const auto& f : c.failed) std::printf("      - %s\n", f.c_str());
    std::fflush(stdout);
}

double normwise_rel(const Mat& a, const Mat& b) {
    const double scale = std::max(b.lpNorm<Eigen::Infinity>(), 1e-300);
    return (a - b).lpNorm<Eigen::Infinity>() / scale;
}

}  // namespace

int main() {
    run(1, "small-tree table: minima 1e-5, leaf values 1e-4, < 5 s", [](Criterion& c) {
        auto t0 = Clock::now();
        auto rep = golden_table(TreeMethod::Newton, true);
        const double secs = seconds_since(t0);
        c.check(rep.rows.size() == 18, "expected 18 rows");
        double em = 0, el = 0;
        for (const auto& r : rep.rows) {
            em = std::max(em, r.m_error);
            el = std::max(el, r.leaf_error);
            c.check(r.m_error <= 1e-5, "row " + r.row.label + " minimum");
            c.check(r.leaf_error <= 1e-4, "row " + r.row.label + " leaf values");
        }
        c.check(secs < 5.0, "runtime");
        c.info << "max errors " << em << " / " << el;
    });

    run(2, "double triangle: saturated value, closed form on a grid, argmin over t", [](Criterion& c) {
        c.near(f_gamma(fixture::double_triangle()).f, 3.0 * std::cbrt(4.0), 1e-8, "homogeneous unit weights");
        const double grid[] = {0.25, 0.6, 1.0, 2.5, 7.0};
        double worst = 0.0;
        for (double t1 : grid)
            for (double t2 : grid)
                for (double t3 : {0.4, 3.0}) {
                    auto s = f_gamma(fixture::double_triangle(), fixture::double_triangle_basis(t1, t2, t3));
                    worst = std::max(worst, std::abs(s.f - fixture::double_triangle_closed_form(t1, t2, t3)));
                }
        c.check(worst <= 1e-7, "closed form on the grid, worst " + std::to_string(worst));
        for (auto [wa, wd, wc] : {std::tuple{1.0, 1.0, 1.0}, std::tuple{1.4, 0.5, 0.9}, std::tuple{0.3, 2.0, 1.7}}) {
            auto g = fixture::double_triangle(wa, wa, wc, wd, wd);
            auto m = [&](double lt) { return f_gamma(g, fixture::double_triangle_basis(1, 1, std::exp(lt))).f; };
            auto best = boost::math::tools::brent_find_minima(m, -8.0, 8.0, 40);
            c.near(std::exp(best.first), wd / wa, 1e-5 * wd / wa, "argmin over t");
            c.near(best.second, 3.0 * std::cbrt(wc * 4.0 * wa * wd), 1e-9, "minimum over t");
        }
    });

    run(3, "lopsided triangle: f and x_a to 1e-3, x = 1/x + x^(-1/2) to 1e-9", [](Criterion& c) {
        auto s = f_gamma(fixture::lopsided_triangle());
        c.near(s.f, 3.7996, 1e-3, "f");
        const double xa = s.x[0];
        c.near(xa, 1.4902, 1e-3, "x_a");
        c.near(xa - 1.0 / xa - 1.0 / std::sqrt(xa), 0.0, 1e-9, "arc equation");
        c.info << "f = " << s.f << ", x_a = " << xa;
    });

    run(4, "harmonic example: F(0) to 1e-6, F/(4 e^(tau/2)) constant to 1e-8", [](Criterion& c) {
        auto u = fixture::harmonic_example();
        const double F0 = harmonic_min(u, {2, 3}, 0.0).F;
        c.near(F0, 3.86638136, 1e-6, "F(0)");
        double lo = 1e300, hi = -1e300;
        for (double tau : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
            double r = harmonic_min(u, {2, 3}, tau).F / (4.0 * std::exp(tau / 2.0));
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        c.near(hi - lo, 0.0, 1e-8, "ratio spread");
        c.info << "F(0) = " << F0;
    });

    run(5, "Shallit sums: defects, rates and limits, each run < 30 s", [](Criterion& c) {
        auto timed = [&](const char* what, const std::function<double()>& f) {
            auto t0 = Clock::now();
            double v = f();
            c.check(seconds_since(t0) < 30.0, std::string(what) + " runtime");
            return v;
        };
        c.near(timed("n=50", [] { return shallit_minimum(50, full_pattern()).defect; }), 1.3694514, 1e-5,
               "3n - m at n = 50");
        c.near(timed("n=60", [] { return shallit_minimum(60, parse_pattern("1..")).defect; }), 2.0112096, 1e-4,
               "defect for spans >= 1 at n = 60");
        auto full = pattern_roots(full_pattern());
        c.near(full.rho, 2.0, 1e-12, "rho (all spans)");
        c.near(full.lambda, 3.0, 1e-12, "lambda (all spans)");
        auto one = pattern_roots(parse_pattern("1.."));
        c.near(one.rho, 1.883203506, 1e-8, "rho (spans >= 1)");
        c.near(one.lambda, 2.484435332, 1e-8, "lambda (spans >= 1)");
    });

    run(6, "palm trees: closed form vs solver to 1e-10 for n <= 10", [](Criterion& c) {
        c.near(palm_closed_form(10, 8, {}), 6.0, 1e-10, "Palm(10,8)");
        c.near(palm_closed_form(10, 9, {}), 6.0, 1e-10, "Palm(10,9)");
        c.near(m_tree(palm_tree(10, 8), {}).m, 6.0, 1e-10, "solver Palm(10,8)");
        double worst = 0.0;
        for (int n = 2; n <= 10; ++n)
            for (int ell = 1; ell <= n - 1; ++ell)
                worst = std::max(worst, std::abs(m_tree(palm_tree(n, ell), {}).m - palm_closed_form(n, ell, {})));
        c.check(worst <= 1e-10, "worst deviation " + std::to_string(worst));
        c.info << "worst " << worst;
    });

    run(7, "extremal enumeration n <= 9 and graph classes m <= 8, < 2 min", [](Criterion& c) {
        auto t0 = Clock::now();
        for (int n = 2; n <= 9; ++n) {
            auto s = extremal_scan({n});
            const std::string tag = " (n=" + std::to_string(n) + ")";
            c.check(std::abs(s.max - n) <= 1e-9, "max over all trees is n" + tag);
            c.check(s.argmax.size() == 1 && canonical_code(s.argmax[0]) == canonical_code(linear_tree(n)),
                    "max only at the linear tree" + tag);
            for (int ell = 1; ell <= n - 1; ++ell) {
                auto b = tree_bounds(n, ell);
                auto fixed = extremal_scan({n, ell});
                const std::string tl = " (n=" + std::to_string(n) + ", l=" + std::to_string(ell) + ")";
                c.check(fixed.max <= b.max_upper + 1e-9 && fixed.max >= b.max_lower - 1e-9, "double bound" + tl);
                auto plus = extremal_scan({n, ell, true});
                c.check(plus.argmin.size() == 1 && is_palm(plus.argmin[0]), "unique palm minimizer" + tl);
            }
        }
        int pairs = 0;
        for (int m = 2; m <= 8; ++m)
            for (int n = 2; n <= m; ++n, ++pairs) {
                double graphs = oracle::min_graph_class_by_ears(m, n);
                double trees = extremal_scan({m, m - n + 1}).min;
                c.check(std::abs(graphs - trees) <= 1e-9 * trees,
                        "graph class (" + std::to_string(m) + "," + std::to_string(n) + ")");
            }
        c.check(seconds_since(t0) < 120.0, "runtime");
        c.info << pairs << " graph classes compared";
    });

    run(8, "assignment problem on 2021 indices: bounds and constructions", [](Criterion& c) {
        auto ch = chain_construction(2021, 6, 3.0);
        auto rep = assignment_bound(ch.a, ch.x);
        c.near(rep.lower_bound, 20.679, 1e-3, "explicit lower bound");
        c.near(rep.refined_bound, 20.704, 1e-3, "refined bound (l = " + std::to_string(rep.refined_ell) + ")");
        c.near(*rep.Y, 20.764, 1e-3, "chain construction");
        auto red = reducible_construction(2021, 1e-5);
        auto rr = assignment_bound(red.a, red.x);
        c.near(*rr.Y, 2.02019, 1e-5, "reducible construction");
        c.check(!rr.irreducible, "reducible construction flagged");
        c.info << "lower " << rep.lower_bound << ", refined " << rep.refined_bound << ", chain " << *rep.Y;
    });

    run(9, "sensitivities vs central differences (50 specs), hub multiplier rate -1/64", [](Criterion& c) {
        double worst = 0.0;
        for (int k = 0; k < 50; ++k) {
            CounterRng rng(90210, k);
            int n = 2 + static_cast<int>(rng.below(7));
            int r = 1 + static_cast<int>(rng.below(std::min(4, n - 1)));
            auto s = oracle::random_compact_spec(rng, n, r);
            auto sol = solve(s);
            auto sv = sensitivities(s, sol);
            Mat fd_t(n, r), fd_w(n, n);
            Vec fd_f(n);
            for (int j = 0; j < r; ++j) {
                const double h = 1e-5 * s.t[j];
                auto p = s, m = s;
                p.t[j] += h;
                m.t[j] -= h;
                fd_t.col(j) = (solve(p).x - solve(m).x) / (2 * h);
            }
            for (int l = 0; l < n; ++l) {
                const double h = 1e-5 * s.w[l];
                auto p = s, m = s;
                p.w[l] += h;
                m.w[l] -= h;
                auto sp = solve(p), sm = solve(m);
                fd_w.col(l) = (sp.x - sm.x) / (2 * h);
                fd_f[l] = (sp.f - sm.f) / (2 * h);
            }
            double e = std::max({normwise_rel(sv.dx_dt, fd_t), normwise_rel(sv.dx_dw, fd_w),
                                 normwise_rel(sv.df_dw, fd_f), normwise_rel(sv.df_dw, sol.x)});
            worst = std::max(worst, e);
            c.check(e <= 1e-5, "spec " + std::to_string(k) + " rel error " + std::to_string(e));
        }
        auto h = fixture::three_hub_graph();
        auto s = graph_spec(h.graph, h.basis);
        auto sv = sensitivities(s, solve(s));
        c.near(sv.dlambda_dlogt.row(2).sum(), -1.0 / 64.0, 1e-9, "d lambda_3 / ds");
        c.info << "worst rel error " << worst;
    });

    run(10, "counting: small complete digraphs, closed form n <= 7, cyclic-node expectation", [](Criterion& c) {
        c.check(enumerate_cycles(complete_digraph(3, false)).size() == 5, "simple cycles, K3 without loops");
        c.check(enumerate_cycles(complete_digraph(2, true)).size() == 3, "simple cycles, K2 with loops");
        c.check(enumerate_circuits(complete_digraph(3, false)).size() == 9, "circuits, K3 without loops");
        c.check(enumerate_circuits(complete_digraph(2, true)).size() == 6, "circuits, K2 with loops");
        for (int n = 1; n <= 7; ++n) {
            auto g = complete_digraph(n, false);
            c.check(count_cycles_complete(n, false) == enumerate_cycles(g).size(), "closed form n=" + std::to_string(n));
            if (n <= 4) c.check(count_cycles_complete(n, false) == oracle::count_arc_subsets(g, true), "subset count n=" + std::to_string(n));
        }
        for (int n = 1; n <= 4; ++n)
            c.near(expected_cyclic_nodes(n), oracle::exhaustive_cyclic_mean(n), 1e-12, "exhaustive n=" + std::to_string(n));
        const double e = expected_cyclic_nodes(10000), asym = std::sqrt(M_PI * 10000 / 2.0);
        c.check(std::abs(e / asym - 1.0) < 0.02, "within 2% of sqrt(pi n / 2)");
        c.info << "E(10^4) = " << e << " vs " << asym;
    });

    run(11, "property suites, 200 instances each, < 3 min", [](Criterion& c) {
        auto t0 = Clock::now();
        for (const auto& r : props::all_suites(200)) {
            c.check(r.instances == 200, r.name + ": ran " + std::to_string(r.instances));
            if (r.failures) c.failed.push_back(r.name + ": " + std::to_string(r.failures) + " failures; " + r.first_failure + (r.note.empty() ? "" : "; " + r.note));
        }
        c.check(seconds_since(t0) < 180.0, "runtime");
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
