#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "prodmin/core.hpp"

namespace prodmin {

struct Arc {
    std::string name;
    int alpha = 0;  // tail
    int beta = 0;   // head
    double weight = 1.0;
};

// multi-digraph; loops and parallel arcs allowed
struct Digraph {
    int node_count = 0;
    std::vector<std::string> node_names;  // empty or one per node
    std::vector<Arc> arcs;

    int add_node(std::string name = {});
    // an empty name becomes "a<index>"
    int add_arc(int from, int to, std::string name = {}, double weight = 1.0);
    int arc_count() const { return static_cast<int>(arcs.size()); }
    int find_arc(std::string_view name) const;  // -1 if absent
    int find_node(std::string_view name) const;
    std::string node_label(int v) const;
    Vec weights() const;
    void check() const;  // throws BadData
};

struct CircuitBasis {
    std::vector<std::vector<int>> circuits;  // arc indices
    std::vector<double> targets;
    int size() const { return static_cast<int>(circuits.size()); }
};

struct StrongDecomposition {
    std::vector<int> component;  // per node
    int count = 0;
    std::vector<std::vector<int>> members;
    std::vector<std::pair<int, int>> dag_edges;  // distinct (from, to) component pairs
    std::vector<int> final_components;           // no outgoing dag edge
    std::vector<bool> relevant;                  // per arc
};

StrongDecomposition strong_components(const Digraph& g);

// ear decomposition inside every strong component; targets default to 1
CircuitBasis circuit_basis(const Digraph& g);

// |C| x |A| 0/1 matrix
Mat incidence_matrix(const Digraph& g, const CircuitBasis& basis);

// arcs distinct and orderable into a closed walk
bool is_circuit(const Digraph& g, const std::vector<int>& arcs);
void check_basis(const Digraph& g, const CircuitBasis& basis);  // throws

// simple cycles (no repeated node); throws CapExceeded past cap
std::vector<std::vector<int>> enumerate_cycles(const Digraph& g, std::size_t cap = 1000000);
// circuits: arc sets that admit a closed walk using each arc once
std::vector<std::vector<int>> enumerate_circuits(const Digraph& g, std::size_t cap = 1000000);
std::uint64_t count_cycles_complete(int n, bool loops);

Digraph complete_digraph(int n, bool loops);
Digraph directed_cycle(int n);
Digraph functional_graph(const std::vector<int>& map);

ProblemSpec graph_spec(const Digraph& g, const CircuitBasis& basis);

// constrained minimum over cyclic products; arcs outside every circuit get 0
Solution f_gamma(const Digraph& g, const CircuitBasis& basis, const SolveOptions& opt = {});
// homogeneous problem (all cyclic products equal to 1); lambda refers to
// circuit_basis(g) and is filled for graphs of at most 2000 arcs
Solution f_gamma(const Digraph& g, const SolveOptions& opt = {});

struct QuotientResult {
    double f = 0.0;
    Vec y;  // node potentials when a minimizer exists, else empty
    bool minimizer_exists = false;
    int iterations = 0;
    double residual = 0.0;  // max relative gradient over components
};

QuotientResult quotient_min(const Digraph& g, const SolveOptions& opt = {});
double quotient_sum(const Digraph& g, const Vec& y);

struct UGraph {
    int node_count = 0;
    std::vector<std::pair<int, int>> edges;
};

struct HarmonicResult {
    double F = 0.0;
    Vec h;
    Solution sol;
};

HarmonicResult harmonic_min(const UGraph& g, const std::vector<int>& boundary, double tau,
                            const SolveOptions& opt = {});

struct Expectation {
    double mean = 0.0;
    double stderr_ = 0.0;  // zero in exact mode
};

double expected_cyclic_nodes(int n);
Expectation expected_cyclic_nodes_mc(int n, std::uint64_t seed, int samples);
int cyclic_node_count(const std::vector<int>& map);

bool is_eulerian(const Digraph& g);
bool is_strongly_connected(const Digraph& g);

}  // namespace prodmin
