#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "prodmin/graphs.hpp"
#include "prodmin/trees.hpp"

namespace prodmin {

inline constexpr int kTreeBudget = 13;

// one tree per isomorphism class, in preorder (canonical level sequences);
// throws BudgetExceeded when n > budget
void for_each_rooted_tree(int n, const std::function<void(const RootedTree&)>& visit,
                          int budget = kTreeBudget);
std::vector<RootedTree> enumerate_rooted_trees(int n, std::optional<int> ell = std::nullopt,
                                               int budget = kTreeBudget);

double R_ratio(double x);  // ln x / (x - 1), R(1) = 1

struct TreeBounds {
    double max_upper = 0.0;  // n - l - 1 + 2 sqrt(l)
    double max_lower = 0.0;  // n - l - 1 + 2 floor(sqrt(l))
    double C_ell = 0.0;      // R(l) e^{1 - R(l)}
};
TreeBounds tree_bounds(int n, int ell);
// lower bounds on m_T(t 1) over T(n, ell); empty outside their regime
std::optional<double> min_lower_small_t(int n, int ell, double t);
std::optional<double> min_lower_large_t(int n, int ell, double t);

struct BindingBound {
    double value = 0.0;
    char regime = 'a';  // 'a' small t, 'b' large t
};
BindingBound min_lower_bound(int n, int ell, double t);

struct GlobalTreeMin {
    double min_value = 0.0;
    std::vector<int> argmin_ell;
    double explicit_bound = 0.0;  // e ln(n - ln n)
};
GlobalTreeMin min_tree_global(int n);

struct TreeClassQuery {
    int n = 1;
    std::optional<int> ell;
    bool at_least = false;  // leaf count >= ell
};

struct ScanResult {
    double min = 0.0, max = 0.0;
    std::vector<RootedTree> argmin, argmax;  // all extremizers within 1e-9
    int count = 0;
};
ScanResult extremal_scan(const TreeClassQuery& q, TreeMethod method = TreeMethod::Newton,
                         int budget = 12);

struct GraphBounds {
    double lower_mn = 0.0;
    double lower_global = 0.0;
};
GraphBounds graph_bounds(int m, int n);

// graphs with a source s and sink z: out-degree 1 off s, in-degree 1 off z
std::vector<Digraph> special_graphs(int m, int n);
// exact minimum of f over strongly connected graphs with m arcs and n nodes
double min_graph_class(int m, int n, int budget = kTreeBudget);

struct Assignment {
    std::vector<std::vector<int>> omega;  // 0-based
    int n() const { return static_cast<int>(omega.size()); }
};

struct AssignmentReport {
    bool irreducible = false;
    std::optional<double> Y;
    double lower_bound = 0.0;
    double refined_bound = 0.0;
    int refined_ell = 0;
};
AssignmentReport assignment_bound(const Assignment& a, const std::optional<Vec>& x = std::nullopt);
double assignment_value(const Assignment& a, const Vec& x);

struct AssignmentInstance {
    Assignment a;
    Vec x;
};
// omega(1) = {1..n-1}, omega(i) = {n}; x = (eps^2, eps, ..., eps, 1)
AssignmentInstance reducible_construction(int n, double eps);
// chain 1 -> ... -> k -> {k+1..n} -> 1 with geometric values base^{1-i}
AssignmentInstance chain_construction(int n, int k, double base);

}  // namespace prodmin
