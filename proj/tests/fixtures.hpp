#pragma once

// Small hand-built instances with known answers, shared by the unit tests,
// the acceptance driver and the examples in the README.

#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

#include "prodmin/graphs.hpp"

namespace fixture {

using namespace prodmin;

// nodes 1,2,3; a,d: 1->2; b,e: 2->3; c: 3->1
inline Digraph double_triangle(double wa = 1, double wb = 1, double wc = 1, double wd = 1, double we = 1) {
    Digraph g;
    for (const char* v : {"1", "2", "3"}) g.add_node(v);
    g.add_arc(0, 1, "a", wa);
    g.add_arc(1, 2, "b", wb);
    g.add_arc(2, 0, "c", wc);
    g.add_arc(0, 1, "d", wd);
    g.add_arc(1, 2, "e", we);
    return g;
}

// {d,b,c}, {a,e,c}, {a,b,c}
inline CircuitBasis double_triangle_basis(double t1, double t2, double t3) {
    CircuitBasis b;
    b.circuits = {{3, 1, 2}, {0, 4, 2}, {0, 1, 2}};
    b.targets = {t1, t2, t3};
    return b;
}

inline double double_triangle_closed_form(double t1, double t2, double t3) {
    return 3.0 * std::cbrt((t1 + t3) * (t2 + t3) / t3);
}

// a: 0->1, a': 1->0, b: 1->2, c: 2->0
inline Digraph lopsided_triangle() {
    Digraph g;
    for (int i = 0; i < 3; ++i) g.add_node();
    g.add_arc(0, 1, "a");
    g.add_arc(1, 0, "a'");
    g.add_arc(1, 2, "b");
    g.add_arc(2, 0, "c");
    return g;
}

// three hubs A, B, C joined by paths of 1 (A->B), 1 (B->A), 5 (B->C),
// 1 (C->B) and 2 (C->A) arcs; basis: A-B loop, B-C loop, A->B->C->A
struct HubGraph {
    Digraph graph;
    CircuitBasis basis;
};

inline HubGraph three_hub_graph() {
    HubGraph h;
    Digraph& g = h.graph;
    const int A = g.add_node("A"), B = g.add_node("B"), C = g.add_node("C");
    auto path = [&](int from, int to, int len, const std::string& tag) {
        std::vector<int> arcs;
        int cur = from;
        for (int i = 0; i < len; ++i) {
            int next = (i + 1 == len) ? to : g.add_node();
            arcs.push_back(g.add_arc(cur, next, tag + std::to_string(i + 1)));
            cur = next;
        }
        return arcs;
    };
    auto p1 = path(A, B, 1, "p");
    auto p1r = path(B, A, 1, "pr");
    auto p2 = path(B, C, 5, "q");
    auto p2r = path(C, B, 1, "qr");
    auto p3 = path(C, A, 2, "r");
    auto cat = [](std::initializer_list<std::vector<int>> parts) {
        std::vector<int> out;
        for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
        return out;
    };
    h.basis.circuits = {cat({p1, p1r}), cat({p2, p2r}), cat({p1, p2, p3})};
    h.basis.targets = {2.0, 32.0, 64.0};
    return h;
}

// edges 0-1, 0-2, 0-3, 1-2; boundary {2, 3}
inline UGraph harmonic_example() {
    UGraph u;
    u.node_count = 4;
    u.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}};
    return u;
}

}  // namespace fixture
