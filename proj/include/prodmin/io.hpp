#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "prodmin/extremal.hpp"
#include "prodmin/graphs.hpp"
#include "prodmin/trees.hpp"

namespace prodmin {

using Json = nlohmann::json;

std::string read_text_file(const std::string& path);

// {"weights": [...], "constraints": [{"exponents": [...], "product": t}, ...],
//  "names": [...]}; names optional
ProblemSpec parse_problem_json(const std::string& text);
std::string write_problem_json(const ProblemSpec& spec);
Json solution_json(const Solution& sol, const std::vector<std::string>& names = {});

// line format:
//   node <name>
//   arc <name> <from> <to> [weight]
//   constraint <arc> <arc> ... = <target>
//   homogeneous
// '#' starts a comment; nodes referenced by arcs are created on first use
struct GraphFile {
    Digraph graph;
    CircuitBasis basis;
    bool homogeneous = true;  // no constraint lines
};
GraphFile parse_graph_text(const std::string& text);
std::string write_graph_text(const GraphFile& file);

// tree: <code>
// targets: [t1, t2, ...]    (optional, one per leaf in depth-first order)
struct TreeFile {
    RootedTree tree;
    std::vector<double> targets;
};
TreeFile parse_tree_text(const std::string& text);
std::string write_tree_text(const TreeFile& file);

// {"omega": [[2,3],[1],...], "x": [...]} with 1-based indices
struct AssignmentFile {
    Assignment assignment;
    std::optional<Vec> x;
};
AssignmentFile parse_assignment_json(const std::string& text);
std::string write_assignment_json(const AssignmentFile& file);

// shortest decimal form that round-trips through strtod
std::string exact_number(double v);

}  // namespace prodmin
