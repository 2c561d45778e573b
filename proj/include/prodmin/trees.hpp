#pragma once

#include <string>
#include <utility>
#include <vector>

#include "prodmin/core.hpp"
#include "prodmin/graphs.hpp"

namespace prodmin {

// parent[v] < v for every non-root; roots carry -1 (several roots = forest)
struct RootedTree {
    std::vector<int> parent;

    int size() const { return static_cast<int>(parent.size()); }
    std::vector<std::vector<int>> children() const;
    std::vector<int> leaves() const;  // increasing index = depth-first order
    std::vector<int> roots() const;
    std::vector<int> depth() const;   // roots at depth 0
    int height() const;
    int leaf_count() const { return static_cast<int>(leaves().size()); }
    bool operator==(const RootedTree&) const = default;
    void check() const;  // throws BadShape
};

// "[]" leaf, "[...]" node over its children, "^k" repeats the preceding
// subtree; a concatenation of trees is a forest
RootedTree parse_tree_code(const std::string& code);
std::string tree_code(const RootedTree& tree);       // repetitions folded
std::string canonical_code(const RootedTree& tree);  // isomorphism invariant

RootedTree linear_tree(int n);
RootedTree palm_tree(int n, int ell);
RootedTree star_tree(int leaves);

bool is_palm(const RootedTree& tree);
bool is_low_branching(const RootedTree& tree);

enum class TreeMethod { Recurrence, FixedPoint, Newton };
const char* method_name(TreeMethod m);
TreeMethod parse_method(const std::string& s);

struct TreeSolution {
    double m = 0.0;
    Vec y;  // per node
    int iterations = 0;
    double residual = 0.0;
    TreeMethod method = TreeMethod::Newton;
};

struct TreeOptions {
    double tol = 1e-12;
    int max_iter = 200000;
    double tau = 0.0;  // fixed-point damping; 0 means 1/(h+1)
};

// targets in leaf order; empty means all ones
TreeSolution m_tree(const RootedTree& tree, const std::vector<double>& t,
                    TreeMethod method = TreeMethod::Newton, const TreeOptions& opt = {});

// residual of the critical-point system (additive identity and path products)
double tree_residual(const RootedTree& tree, const std::vector<double>& t, const Vec& y);

double palm_closed_form(int n, int ell, const std::vector<double>& t);

struct ForestPart {
    RootedTree tree;
    std::vector<int> nodes;  // original index of each node
};
std::vector<ForestPart> forest_split(const RootedTree& forest);

struct QuotientForest {
    RootedTree forest;
    std::vector<double> targets;
};
QuotientForest quotient_tree_reduce(const RootedTree& tree, const std::vector<double>& t);
// sum_{v != root} y_parent/y_v + sum_leaves t y_leaf / y_root
double quotient_tree_sum(const RootedTree& tree, const std::vector<double>& t, const Vec& y);

struct TreeGraph {
    Digraph graph;
    CircuitBasis basis;
};
TreeGraph tree_to_graph(const RootedTree& tree, const std::vector<double>& t);

struct Linearization {
    Mat B;
    double min_eig = 0.0, max_eig = 0.0;
    int height = 0;
    bool within_bounds = false;  // spectrum inside [-h, 0)
};
Linearization tree_linearization(const RootedTree& tree, const Vec& y);

// iterates y <- tau M(y) + (1 - tau) y on leaf values from `start`;
// returns the sup-norm distance |M(y) - y| after each step
std::vector<double> damped_iteration(const RootedTree& tree, const std::vector<double>& t,
                                     const Vec& start_leaves, double tau, int steps);

enum class SnowflakeRoot { Center, Ring, Perimeter };
double snowflake(int p, int q, SnowflakeRoot root);
RootedTree snowflake_tree(int p, int q, SnowflakeRoot root);

}  // namespace prodmin
