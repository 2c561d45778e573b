#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "prodmin/extremal.hpp"
#include "prodmin/golden.hpp"
#include "prodmin/io.hpp"
#include "prodmin/rng.hpp"
#include "prodmin/shallit.hpp"

using namespace prodmin;
using OJson = nlohmann::ordered_json;

namespace {

struct Config {
    double tol = 1e-10;
    int max_iter = 200;
    std::uint64_t seed = 1;
    std::string format = "table";
    std::size_t cap = 1000000;
    int budget = kTreeBudget;

    SolveOptions solve() const {
        SolveOptions o;
        o.tol = tol;
        o.max_iter = max_iter;
        return o;
    }
};

double sig9(double v) {
    if (!std::isfinite(v)) return v;
    return std::strtod(fmt::format("{:.9g}", v).c_str(), nullptr);
}

OJson round_all(const OJson& j) {
    if (j.is_number_float()) return sig9(j.get<double>());
    if (j.is_array() || j.is_object()) {
        OJson out = j;
        for (auto it = out.begin(); it != out.end(); ++it) *it = round_all(*it);
        return out;
    }
    return j;
}

OJson vec(const Vec& v) {
    OJson a = OJson::array();
    for (double x : v) a.push_back(x);
    return a;
}

std::string cell(const OJson& j) {
    if (j.is_number_float()) return fmt::format("{:.9g}", j.get<double>());
    if (j.is_string()) return j.get<std::string>();
    if (j.is_array()) {
        std::string s;
        for (const auto& e : j) s += (s.empty() ? "" : " ") + cell(e);
        return s;
    }
    if (j.is_object()) {
        std::string s;
        for (auto it = j.begin(); it != j.end(); ++it) s += (s.empty() ? "" : " ") + it.key() + "=" + cell(it.value());
        return s;
    }
    return j.dump();
}

// objects become aligned key/value lines; a "rows" array of objects becomes
// a fixed-width table
void print_table(const OJson& j, std::ostream& out) {
    std::size_t w = 0;
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "rows") w = std::max(w, it.key().size());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "rows") out << fmt::format("{:<{}}  {}\n", it.key(), w, cell(it.value()));
    if (!j.contains("rows") || j["rows"].empty()) return;
    const OJson& rows = j["rows"];
    std::vector<std::string> cols;
    for (auto it = rows[0].begin(); it != rows[0].end(); ++it) cols.push_back(it.key());
    std::vector<std::size_t> width(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        width[c] = cols[c].size();
        for (const auto& r : rows) width[c] = std::max(width[c], cell(r[cols[c]]).size());
    }
    auto line = [&](const std::function<std::string(std::size_t)>& f) {
        std::string s;
        for (std::size_t c = 0; c < cols.size(); ++c) s += fmt::format("{:<{}}  ", f(c), width[c]);
        while (!s.empty() && s.back() == ' ') s.pop_back();
        out << s << "\n";
    };
    out << "\n";
    line([&](std::size_t c) { return cols[c]; });
    for (const auto& r : rows) line([&](std::size_t c) { return cell(r[cols[c]]); });
}

void emit(const Config& cfg, const OJson& report) {
    OJson r = round_all(report);
    if (cfg.format == "json")
        std::cout << r.dump(2) << "\n";
    else
        print_table(r, std::cout);
}

OJson solution_report(const Solution& s) {
    OJson j;
    j["min"] = s.f;
    j["x"] = vec(s.x);
    j["lambda"] = vec(s.lambda);
    j["iterations"] = s.iterations;
    j["residual"] = s.residual;
    return j;
}

OJson tree_list(const std::vector<RootedTree>& ts) {
    OJson a = OJson::array();
    for (const auto& t : ts) a.push_back(canonical_code(t));
    return a;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// deterministic strongly connected workload: a cycle plus seeded chords
Digraph bench_graph(int n, std::uint64_t seed) {
    CounterRng rng(seed, static_cast<std::uint64_t>(n));
    Digraph g = directed_cycle(n);
    for (int k = 0; k < 2 * n; ++k) {
        int a = static_cast<int>(rng.below(n)), b = static_cast<int>(rng.below(n));
        g.add_arc(a, b, {}, rng.uniform(0.5, 2.0));
    }
    return g;
}

}  // namespace

int main(int argc, char** argv) {
    Config cfg;
    if (const char* b = std::getenv("PRODMIN_BUDGET")) {
        char* end = nullptr;
        long v = std::strtol(b, &end, 10);
        if (end == b || *end != '\0' || v <= 0) {
            std::cerr << "error [Parse]: PRODMIN_BUDGET must be a positive integer\n";
            return 1;
        }
        cfg.budget = static_cast<int>(v);
    }

    CLI::App app{"product-constrained minimization toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--tol", cfg.tol, "solver tolerance")->check(CLI::PositiveNumber);
    app.add_option("--max-iter", cfg.max_iter, "iteration budget")->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "64-bit seed");
    app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "table"}));
    app.add_option("--cap", cfg.cap, "enumeration cap")->check(CLI::PositiveNumber);

    std::function<OJson()> run;

    // solve
    std::string problem_path;
    auto* solve_cmd = app.add_subcommand("solve", "minimize <w,x> under product constraints (JSON problem)");
    solve_cmd->add_option("file", problem_path, "problem file")->required();
    solve_cmd->callback([&] {
        run = [&] {
            ProblemSpec spec = parse_problem_json(read_text_file(problem_path));
            auto comp = check_compactness(spec);
            if (!comp.compact) throw Error(Errc::NonCompact, "constraint system is not compact; no minimizer");
            OJson j = solution_report(solve(spec, cfg.solve()));
            j["compact_margin"] = comp.margin;
            return j;
        };
    });

    // graph
    std::string graph_path;
    bool quotient = false;
    auto* graph_cmd = app.add_subcommand("graph", "graph-constrained minimum (graph text file)");
    graph_cmd->add_option("file", graph_path, "graph file")->required();
    graph_cmd->add_flag("--quotient", quotient, "report the quotient-sum minimum and potentials");
    graph_cmd->callback([&] {
        run = [&] {
            GraphFile gf = parse_graph_text(read_text_file(graph_path));
            OJson j;
            if (quotient) {
                auto q = quotient_min(gf.graph, cfg.solve());
                j["f"] = q.f;
                j["minimizer_exists"] = q.minimizer_exists;
                j["y"] = vec(q.y);
                j["iterations"] = q.iterations;
                j["residual"] = q.residual;
                return j;
            }
            Solution s = gf.homogeneous ? f_gamma(gf.graph, cfg.solve()) : f_gamma(gf.graph, gf.basis, cfg.solve());
            j = solution_report(s);
            OJson arcs = OJson::object();
            for (int a = 0; a < gf.graph.arc_count(); ++a) arcs[gf.graph.arcs[a].name] = s.x[a];
            j["arc_values"] = arcs;
            j["eulerian"] = is_eulerian(gf.graph);
            return j;
        };
    });

    // tree
    std::string tree_code_arg, tree_path, method = "newton";
    std::vector<double> targets;
    auto* tree_cmd = app.add_subcommand("tree", "minimum over a rooted tree or forest");
    auto* code_opt = tree_cmd->add_option("--code", tree_code_arg, "tree code, e.g. [[]^2[[]]]");
    tree_cmd->add_option("--file", tree_path, "tree file")->excludes(code_opt);
    tree_cmd->add_option("--targets", targets, "leaf targets in depth-first order");
    tree_cmd->add_option("--method", method, "recurrence | fixed_point | newton");
    tree_cmd->callback([&] {
        run = [&] {
            TreeFile tf;
            if (!tree_path.empty())
                tf = parse_tree_text(read_text_file(tree_path));
            else if (!tree_code_arg.empty())
                tf.tree = parse_tree_code(tree_code_arg);
            else
                throw Error(Errc::Parse, "tree needs --code or --file");
            if (!targets.empty()) tf.targets = targets;
            TreeOptions to;
            to.max_iter = std::max(cfg.max_iter, 200000);
            auto s = m_tree(tf.tree, tf.targets, parse_method(method), to);
            OJson j;
            j["code"] = tree_code(tf.tree);
            j["method"] = method_name(s.method);
            j["m"] = s.m;
            OJson leaves = OJson::array();
            for (int v : tf.tree.leaves()) leaves.push_back(s.y[v]);
            j["leaf_values"] = leaves;
            OJson y = OJson::object();
            for (int v = 0; v < tf.tree.size(); ++v) y[std::to_string(v)] = s.y[v];
            j["y"] = y;
            j["iterations"] = s.iterations;
            j["residual"] = s.residual;
            return j;
        };
    });

    // extremal
    auto* ext = app.add_subcommand("extremal", "extremal problems over trees, graphs and assignments");
    ext->require_subcommand(1);
    int ext_n = 0, ext_m = 0;
    std::optional<int> ext_ell;
    bool at_least = false, scan = false;
    auto* ext_tree = ext->add_subcommand("tree", "scan all rooted trees with n nodes");
    ext_tree->add_option("--n", ext_n)->required()->check(CLI::PositiveNumber);
    ext_tree->add_option("--ell", ext_ell, "leaf count");
    ext_tree->add_flag("--at-least", at_least, "leaf count >= ell");
    ext_tree->add_flag("--scan", scan, "enumerate the class (n <= budget)");
    ext_tree->callback([&] {
        run = [&] {
            OJson j;
            j["n"] = ext_n;
            if (ext_ell) j["ell"] = *ext_ell;
            if (scan) {
                auto r = extremal_scan({ext_n, ext_ell, at_least}, TreeMethod::Newton, cfg.budget);
                j["count"] = r.count;
                j["min"] = r.min;
                j["argmin"] = tree_list(r.argmin);
                j["max"] = r.max;
                j["argmax"] = tree_list(r.argmax);
            }
            if (ext_ell && *ext_ell >= 1 && *ext_ell <= ext_n - 1) {
                auto b = tree_bounds(ext_n, *ext_ell);
                j["max_lower_bound"] = b.max_lower;
                j["max_upper_bound"] = b.max_upper;
                j["homogeneous_min_constant"] = b.C_ell;
                for (double t : {0.1, 1.0, 10.0}) {
                    auto lb = min_lower_bound(ext_n, *ext_ell, t);
                    j[fmt::format("min_lower_bound_t{:g}", t)] = lb.value;
                    j[fmt::format("min_lower_regime_t{:g}", t)] = std::string(1, lb.regime);
                }
            }
            if (ext_n >= 2) {
                auto g = min_tree_global(ext_n);
                j["palm_minimum"] = g.min_value;
                j["explicit_bound"] = g.explicit_bound;
            }
            return j;
        };
    });
    auto* ext_graph = ext->add_subcommand("graph", "minimum over strongly connected graphs with m arcs, n nodes");
    ext_graph->add_option("--m", ext_m)->required()->check(CLI::PositiveNumber);
    ext_graph->add_option("--n", ext_n)->required()->check(CLI::PositiveNumber);
    ext_graph->callback([&] {
        run = [&] {
            auto b = graph_bounds(ext_m, ext_n);
            OJson j;
            j["lower_mn"] = b.lower_mn;
            j["lower_global"] = b.lower_global;
            j["exact_min"] = min_graph_class(ext_m, ext_n, cfg.budget);
            return j;
        };
    });
    std::string assign_path;
    int construction_n = 0, construction_k = 6;
    double eps = 1e-5, base = 3.0;
    std::string construction;
    auto* ext_assign = ext->add_subcommand("assignment", "lower bounds for assignment sums");
    std::vector<double> values;
    ext_assign->add_option("--file", assign_path, "assignment JSON (1-based)");
    ext_assign->add_option("--values", values, "positive values x_1..x_n");
    ext_assign->add_option("--construction", construction, "reducible | chain")
        ->check(CLI::IsMember({"reducible", "chain"}));
    ext_assign->add_option("--n", construction_n, "size for a construction");
    ext_assign->add_option("--k", construction_k, "chain length");
    ext_assign->add_option("--eps", eps, "reducible construction parameter");
    ext_assign->add_option("--base", base, "chain construction base");
    ext_assign->callback([&] {
        run = [&] {
            AssignmentFile af;
            if (!assign_path.empty()) {
                af = parse_assignment_json(read_text_file(assign_path));
            } else if (construction == "reducible") {
                auto in = reducible_construction(construction_n, eps);
                af = {in.a, in.x};
            } else if (construction == "chain") {
                auto in = chain_construction(construction_n, construction_k, base);
                af = {in.a, in.x};
            } else {
                throw Error(Errc::Parse, "assignment needs --file or --construction");
            }
            if (!values.empty()) af.x = Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
            if (af.x && af.x->size() != af.assignment.n())
                throw Error(Errc::BadData, "one value per index expected");
            auto rep = assignment_bound(af.assignment, af.x);
            OJson j;
            j["n"] = af.assignment.n();
            j["irreducible"] = rep.irreducible;
            if (rep.Y) j["Y"] = *rep.Y;
            j["lower_bound"] = rep.lower_bound;
            j["refined_bound"] = rep.refined_bound;
            j["refined_ell"] = rep.refined_ell;
            return j;
        };
    });

    // shallit
    int sh_n = 50;
    std::string pattern = "0..";
    std::optional<int> sh_from, sh_to;
    bool constant = false;
    auto* sh = app.add_subcommand("shallit", "cyclic sums with a gap pattern");
    sh->add_option("--n", sh_n)->check(CLI::PositiveNumber);
    sh->add_option("--pattern", pattern, "e.g. 0.. or 1.. or 0,2,5");
    sh->add_flag("--constant", constant, "tabulate the defect sequence");
    sh->add_option("--from", sh_from, "defect table start");
    sh->add_option("--to", sh_to, "defect table end");
    sh->callback([&] {
        run = [&] {
            Pattern p = parse_pattern(pattern);
            auto roots = pattern_roots(p);
            OJson j;
            j["pattern"] = to_string(p);
            j["rho"] = roots.rho;
            j["lambda"] = roots.lambda;
            j["degenerate"] = roots.degenerate;
            if (constant || sh_from || sh_to) {
                int a = sh_from.value_or(1), b = sh_to.value_or(sh_n);
                auto c = asymptotic_constant(p, a, b, cfg.solve());
                j["estimate"] = c.estimate;
                OJson rows = OJson::array();
                for (std::size_t i = 0; i < c.n.size(); ++i) {
                    OJson r;
                    r["n"] = c.n[i];
                    r["defect"] = c.defect[i];
                    r["step"] = i ? c.diffs[i - 1] : 0.0;
                    rows.push_back(r);
                }
                j["rows"] = rows;
            } else {
                auto s = shallit_minimum(sh_n, p, cfg.solve());
                j["n"] = sh_n;
                j["m"] = s.m;
                j["defect"] = s.defect;
                j["iterations"] = s.iterations;
            }
            return j;
        };
    });

    // count
    std::optional<int> complete_n;
    bool loops = false, circuits = false;
    std::string count_path;
    auto* count = app.add_subcommand("count", "count cycles and circuits");
    count->add_option("--complete", complete_n, "complete digraph on n nodes");
    count->add_flag("--loops", loops, "include loops");
    count->add_option("--file", count_path, "graph file");
    count->add_flag("--circuits", circuits, "also enumerate circuits (arc-simple closed walks)");
    count->callback([&] {
        run = [&] {
            Digraph g;
            OJson j;
            if (complete_n) {
                g = complete_digraph(*complete_n, loops);
                j["closed_form"] = count_cycles_complete(*complete_n, loops);
            } else if (!count_path.empty()) {
                g = parse_graph_text(read_text_file(count_path)).graph;
            } else {
                throw Error(Errc::Parse, "count needs --complete or --file");
            }
            j["nodes"] = g.node_count;
            j["arcs"] = g.arc_count();
            j["cycles"] = enumerate_cycles(g, cfg.cap).size();
            if (circuits) j["circuits"] = enumerate_circuits(g, cfg.cap).size();
            j["basis_size"] = circuit_basis(g).size();
            return j;
        };
    });

    // random-fungraph
    int fg_n = 10, samples = 0;
    auto* fg = app.add_subcommand("random-fungraph", "expected number of cyclic nodes of a random map");
    fg->add_option("--n", fg_n)->check(CLI::PositiveNumber);
    fg->add_option("--samples", samples, "Monte Carlo samples (0 = exact only)");
    fg->callback([&] {
        run = [&] {
            OJson j;
            j["n"] = fg_n;
            j["exact"] = expected_cyclic_nodes(fg_n);
            j["asymptotic"] = std::sqrt(std::acos(-1.0) * fg_n / 2.0);
            if (samples > 0) {
                auto e = expected_cyclic_nodes_mc(fg_n, cfg.seed, samples);
                j["mc_mean"] = e.mean;
                j["mc_stderr"] = e.stderr_;
                j["seed"] = cfg.seed;
            }
            return j;
        };
    });

    // golden
    std::string golden_method = "newton";
    auto* golden = app.add_subcommand("golden", "recompute the table of small-tree minima");
    golden->add_option("--method", golden_method, "recurrence | fixed_point | newton");
    golden->callback([&] {
        run = [&] {
            auto rep = golden_table(parse_method(golden_method), true);
            OJson j;
            j["method"] = golden_method;
            j["ok"] = rep.ok;
            OJson rows = OJson::array();
            for (const auto& c : rep.rows) {
                OJson r;
                r["tree"] = c.row.label;
                r["code"] = c.row.code;
                r["m"] = c.m;
                r["expected"] = c.row.m;
                r["dm"] = c.m_error;
                r["dleaf"] = c.leaf_error;
                r["ok"] = c.ok ? "yes" : "NO";
                rows.push_back(r);
            }
            j["rows"] = rows;
            if (!rep.ok) {
                emit(cfg, j);
                throw Error(Errc::Mismatch, "golden table differs (see rows marked NO)");
            }
            return j;
        };
    });

    // bench
    std::vector<std::string> only{"solve", "shallit", "tree"};
    auto* bench = app.add_subcommand("bench", "timing of deterministic workloads (CSV)");
    bench->add_option("--only", only, "workload classes: solve shallit tree; empty list for none")
        ->expected(0, -1);
    bench->callback([&] {
        run = [&] {
            std::cout << "operation,size,seconds,iterations,value\n";
            auto row = [](const std::string& op, int size, double sec, int it, double v) {
                std::cout << fmt::format("{},{},{:.6f},{},{:.9g}\n", op, size, sec, it, v);
            };
            auto want = [&](const char* k) { return std::find(only.begin(), only.end(), k) != only.end(); };
            if (want("solve"))
                for (int n : {10, 100, 1000}) {
                    Digraph g = bench_graph(n, cfg.seed);
                    auto t0 = std::chrono::steady_clock::now();
                    auto q = quotient_min(g, cfg.solve());
                    row("quotient_min", n, elapsed(t0), q.iterations, q.f);
                }
            if (want("shallit"))
                for (int n : {25, 50, 100}) {
                    auto t0 = std::chrono::steady_clock::now();
                    auto s = shallit_minimum(n, full_pattern(), cfg.solve());
                    row("shallit", n, elapsed(t0), s.iterations, s.defect);
                }
            if (want("tree"))
                for (int n : {8, 10}) {
                    auto t0 = std::chrono::steady_clock::now();
                    auto r = extremal_scan({n, std::nullopt, false}, TreeMethod::Newton, std::max(cfg.budget, n));
                    row("tree_scan", n, elapsed(t0), r.count, r.max);
                }
            return OJson();
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        OJson report = run();
        if (!report.is_null()) emit(cfg, report);
        return 0;
    } catch (const NoConvergenceError& e) {
        std::cerr << "error [NoConvergence]: " << e.what()
                  << fmt::format(" (best residual {:.3g})\n", e.best().residual);
        return 2;
    } catch (const Error& e) {
        std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << "\n";
        return is_numerical(e.code()) ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
