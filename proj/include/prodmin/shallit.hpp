#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prodmin/graphs.hpp"

namespace prodmin {

// subset of Z>=0: finite part plus an optional tail {k, k+1, ...}
struct Pattern {
    std::vector<int> finite;
    std::optional<int> tail_from;

    bool contains(int m) const;
    bool operator==(const Pattern&) const = default;
};

// "0..", "1..", "0,2,5", "0,2,7.."
Pattern parse_pattern(const std::string& s);
std::string to_string(const Pattern& p);
Pattern full_pattern();

// nodes 0..n; a_i = (i-1 -> i), b_ij = (j -> i-1) for 1 <= i <= j <= n
Digraph build_shallit_graph(int n);
// 3n-1 arcs: a_i, reverse arcs, and one parity-alternating chord per inner node
Digraph build_simplified_graph(int n);
// back arcs b_ij only when j - i lies in the pattern
Digraph build_pattern_graph(int n, const Pattern& p);

struct PatternRoots {
    double rho = 1.0;
    double lambda = 2.0;
    bool degenerate = false;  // no root above 1; separable value reported
};
PatternRoots pattern_roots(const Pattern& p);

// sum_{m >= k} (m+1) x^{m+1} and sum_{m >= k} x^{m+1}, 0 < x < 1
double tail_weighted_sum(int k, double x);
double tail_sum(int k, double x);

struct ShallitResult {
    double m = 0.0;
    double lambda = 0.0;
    double defect = 0.0;  // lambda n - m
    int iterations = 0;
};
ShallitResult shallit_minimum(int n, const Pattern& p, const SolveOptions& opt = {});

// sum x_i + sum_{j-i in P} prod_{k=i}^j 1/x_k
double shallit_sum(const Vec& x, const Pattern& p);

struct ConstantEstimate {
    double estimate = 0.0;
    std::vector<int> n;
    std::vector<double> defect;
    std::vector<double> diffs;  // |d_{n+1} - d_n|
};
ConstantEstimate asymptotic_constant(const Pattern& p, int n_from, int n_to,
                                     const SolveOptions& opt = {});

}  // namespace prodmin
