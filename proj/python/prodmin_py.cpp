#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "prodmin/core.hpp"
#include "prodmin/extremal.hpp"
#include "prodmin/golden.hpp"
#include "prodmin/graphs.hpp"
#include "prodmin/shallit.hpp"
#include "prodmin/trees.hpp"

namespace py = pybind11;
using namespace prodmin;

namespace {

SolveOptions options(double tol, int max_iter) {
    SolveOptions o;
    o.tol = tol;
    o.max_iter = max_iter;
    return o;
}

py::dict solution_dict(const Solution& s) {
    py::dict d;
    d["min"] = s.f;
    d["x"] = s.x;
    d["lambda"] = s.lambda;
    d["residual"] = s.residual;
    d["iterations"] = s.iterations;
    d["nonessential"] = s.nonessential;
    return d;
}

// arcs as (from, to) or (from, to, weight) tuples over nodes 0..n-1
Digraph make_graph(int nodes, const std::vector<py::tuple>& arcs) {
    Digraph g;
    for (int v = 0; v < nodes; ++v) g.add_node();
    for (const auto& a : arcs) {
        if (a.size() != 2 && a.size() != 3) throw Error(Errc::BadData, "arcs are (from, to[, weight])");
        int from = a[0].cast<int>(), to = a[1].cast<int>();
        if (from < 0 || to < 0 || from >= nodes || to >= nodes) throw Error(Errc::BadData, "arc endpoint out of range");
        g.add_arc(from, to, {}, a.size() == 3 ? a[2].cast<double>() : 1.0);
    }
    return g;
}

}  // namespace

PYBIND11_MODULE(prodmin, m) {
    m.doc() = "minimization of linear forms under product constraints";

    static py::exception<Error> numerical(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            if (is_numerical(e.code()))
                py::set_error(numerical, e.what());
            else
                PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    m.def(
        "solve",
        [](const Vec& w, const Mat& A, const Vec& t, double tol, int max_iter) {
            ProblemSpec s;
            s.w = w;
            s.A = A;
            s.t = t;
            return solution_dict(solve(s, options(tol, max_iter)));
        },
        py::arg("weights"), py::arg("exponents"), py::arg("targets"), py::arg("tol") = 1e-10,
        py::arg("max_iter") = 200, "min <w, x> subject to prod_i x_i^A[j, i] = t_j");

    m.def(
        "is_compact",
        [](const Mat& A) {
            ProblemSpec s;
            s.w = Vec::Ones(A.cols());
            s.A = A;
            s.t = Vec::Ones(A.rows());
            return check_compactness(s).compact;
        },
        py::arg("exponents"));

    m.def(
        "sensitivities",
        [](const Vec& w, const Mat& A, const Vec& t) {
            ProblemSpec s;
            s.w = w;
            s.A = A;
            s.t = t;
            auto sv = sensitivities(s, solve(s));
            py::dict d;
            d["dx_dt"] = sv.dx_dt;
            d["dx_dw"] = sv.dx_dw;
            d["df_dw"] = sv.df_dw;
            d["dlambda_dlogt"] = sv.dlambda_dlogt;
            return d;
        },
        py::arg("weights"), py::arg("exponents"), py::arg("targets"));

    m.def(
        "graph_min",
        [](int nodes, const std::vector<py::tuple>& arcs, std::optional<std::vector<std::vector<int>>> circuits,
           std::optional<std::vector<double>> targets) {
            Digraph g = make_graph(nodes, arcs);
            if (!circuits) return solution_dict(f_gamma(g));
            CircuitBasis b;
            b.circuits = *circuits;
            b.targets = targets ? *targets : std::vector<double>(circuits->size(), 1.0);
            if (b.targets.size() != b.circuits.size()) throw Error(Errc::BadData, "one target per circuit expected");
            return solution_dict(f_gamma(g, b));
        },
        py::arg("nodes"), py::arg("arcs"), py::arg("circuits") = py::none(), py::arg("targets") = py::none(),
        "graph-constrained minimum; without circuits every cyclic product is 1");

    m.def(
        "count_cycles",
        [](int nodes, const std::vector<py::tuple>& arcs, bool circuits) {
            Digraph g = make_graph(nodes, arcs);
            return circuits ? enumerate_circuits(g).size() : enumerate_cycles(g).size();
        },
        py::arg("nodes"), py::arg("arcs"), py::arg("circuits") = false);

    m.def("count_cycles_complete", &count_cycles_complete, py::arg("n"), py::arg("loops") = false);
    m.def("expected_cyclic_nodes", &expected_cyclic_nodes, py::arg("n"));

    m.def(
        "tree_min",
        [](const std::string& code, const std::vector<double>& targets, const std::string& method) {
            auto sol = m_tree(parse_tree_code(code), targets, parse_method(method));
            py::dict d;
            d["m"] = sol.m;
            d["y"] = sol.y;
            d["iterations"] = sol.iterations;
            d["residual"] = sol.residual;
            return d;
        },
        py::arg("code"), py::arg("targets") = std::vector<double>{}, py::arg("method") = "newton",
        "minimum over a rooted tree given by its code, e.g. '[[]^2[[]]]'");

    m.def("palm_min", &palm_closed_form, py::arg("n"), py::arg("ell"), py::arg("targets") = std::vector<double>{});

    m.def(
        "golden_table",
        [](const std::string& method) {
            py::list rows;
            for (const auto& c : golden_table(parse_method(method), true).rows) {
                py::dict d;
                d["label"] = c.row.label;
                d["code"] = c.row.code;
                d["m"] = c.m;
                d["expected"] = c.row.m;
                d["leaves"] = c.leaves;
                d["ok"] = c.ok;
                rows.append(d);
            }
            return rows;
        },
        py::arg("method") = "newton");

    m.def(
        "extremal_scan",
        [](int n, std::optional<int> ell, bool at_least) {
            auto s = extremal_scan({n, ell, at_least});
            py::dict d;
            d["min"] = s.min;
            d["max"] = s.max;
            d["count"] = s.count;
            std::vector<std::string> lo, hi;
            for (const auto& t : s.argmin) lo.push_back(tree_code(t));
            for (const auto& t : s.argmax) hi.push_back(tree_code(t));
            d["argmin"] = lo;
            d["argmax"] = hi;
            return d;
        },
        py::arg("n"), py::arg("ell") = py::none(), py::arg("at_least") = false);

    m.def(
        "shallit",
        [](int n, const std::string& pattern) {
            auto r = shallit_minimum(n, parse_pattern(pattern));
            py::dict d;
            d["m"] = r.m;
            d["lambda"] = r.lambda;
            d["defect"] = r.defect;
            return d;
        },
        py::arg("n"), py::arg("pattern") = "0..");

    m.def(
        "pattern_roots",
        [](const std::string& pattern) {
            auto r = pattern_roots(parse_pattern(pattern));
            return py::make_tuple(r.rho, r.lambda);
        },
        py::arg("pattern"));

    m.def(
        "harmonic_min",
        [](int nodes, const std::vector<std::pair<int, int>>& edges, const std::vector<int>& boundary, double tau) {
            UGraph u;
            u.node_count = nodes;
            u.edges = edges;
            auto h = harmonic_min(u, boundary, tau);
            return py::make_tuple(h.F, h.h);
        },
        py::arg("nodes"), py::arg("edges"), py::arg("boundary"), py::arg("tau"));
}
