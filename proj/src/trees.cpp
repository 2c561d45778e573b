#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>

#include "prodmin/trees.hpp"

namespace prodmin {

std::vector<std::vector<int>> RootedTree::children() const {
    std::vector<std::vector<int>> ch(parent.size());
    for (int v = 0; v < size(); ++v)
        if (parent[v] >= 0) ch[parent[v]].push_back(v);
    return ch;
}

std::vector<int> RootedTree::leaves() const {
    std::vector<bool> has_child(parent.size(), false);
    for (int p : parent)
        if (p >= 0) has_child[p] = true;
    std::vector<int> out;
    for (int v = 0; v < size(); ++v)
        if (!has_child[v]) out.push_back(v);
    return out;
}

std::vector<int> RootedTree::roots() const {
    std::vector<int> out;
    for (int v = 0; v < size(); ++v)
        if (parent[v] < 0) out.push_back(v);
    return out;
}

std::vector<int> RootedTree::depth() const {
    std::vector<int> d(parent.size(), 0);
    for (int v = 0; v < size(); ++v)
        if (parent[v] >= 0) d[v] = d[parent[v]] + 1;
    return d;
}

int RootedTree::height() const {
    auto d = depth();
    return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

void RootedTree::check() const {
    if (parent.empty()) throw Error(Errc::BadShape, "empty tree");
    for (int v = 0; v < size(); ++v)
        if (parent[v] < -1 || parent[v] >= v)
            throw Error(Errc::BadShape, "parent of node " + std::to_string(v) +
                                            " must precede it");
}

namespace {

struct CodeNode {
    std::vector<CodeNode> kids;
};

class CodeParser {
public:
    explicit CodeParser(const std::string& s) : s_(s) {}

    std::vector<CodeNode> parse() {
        auto forest = items();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        if (forest.empty()) fail("empty tree code");
        return forest;
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw Error(Errc::Parse, "tree code, column " + std::to_string(pos_ + 1) + ": " + msg);
    }
    std::vector<CodeNode> items() {
        std::vector<CodeNode> out;
        for (;;) {
            skip();
            if (pos_ >= s_.size() || s_[pos_] != '[') return out;
            ++pos_;
            CodeNode node;
            node.kids = items();
            skip();
            if (pos_ >= s_.size() || s_[pos_] != ']') fail("expected ']'");
            ++pos_;
            skip();
            int reps = 1;
            if (pos_ < s_.size() && s_[pos_] == '^') {
                ++pos_;
                skip();
                size_t start = pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                if (start == pos_) fail("expected repetition count");
                reps = std::stoi(s_.substr(start, pos_ - start));
                if (reps < 1 || reps > 100000) fail("repetition count out of range");
            }
            for (int k = 0; k < reps; ++k) out.push_back(node);
        }
    }

    const std::string& s_;
    size_t pos_ = 0;
};

void flatten(const CodeNode& node, int parent, std::vector<int>& out) {
    int me = static_cast<int>(out.size());
    out.push_back(parent);
    for (const auto& k : node.kids) flatten(k, me, out);
}

std::string fold(const std::vector<std::string>& parts) {
    std::string s;
    for (size_t i = 0; i < parts.size();) {
        size_t j = i;
        while (j < parts.size() && parts[j] == parts[i]) ++j;
        s += parts[i];
        if (j - i > 1) s += "^" + std::to_string(j - i);
        i = j;
    }
    return s;
}

}  // namespace

RootedTree parse_tree_code(const std::string& code) {
    auto forest = CodeParser(code).parse();
    RootedTree t;
    for (const auto& root : forest) flatten(root, -1, t.parent);
    return t;
}

std::string tree_code(const RootedTree& tree) {
    auto ch = tree.children();
    std::function<std::string(int)> code = [&](int v) {
        std::vector<std::string> parts;
        for (int c : ch[v]) parts.push_back(code(c));
        return "[" + fold(parts) + "]";
    };
    std::vector<std::string> parts;
    for (int r : tree.roots()) parts.push_back(code(r));
    return fold(parts);
}

std::string canonical_code(const RootedTree& tree) {
    auto ch = tree.children();
    std::function<std::string(int)> code = [&](int v) {
        std::vector<std::string> parts;
        for (int c : ch[v]) parts.push_back(code(c));
        std::sort(parts.begin(), parts.end());
        std::string s = "[";
        for (auto& p : parts) s += p;
        return s + "]";
    };
    std::vector<std::string> parts;
    for (int r : tree.roots()) parts.push_back(code(r));
    std::sort(parts.begin(), parts.end());
    std::string s;
    for (auto& p : parts) s += p;
    return s;
}

RootedTree linear_tree(int n) {
    if (n < 1) throw Error(Errc::BadShape, "linear tree needs n >= 1");
    RootedTree t;
    for (int v = 0; v < n; ++v) t.parent.push_back(v - 1);
    return t;
}

RootedTree palm_tree(int n, int ell) {
    if (ell < 1 || ell > n - 1) throw Error(Errc::BadShape, "palm tree needs 1 <= ell <= n-1");
    RootedTree t;
    int top = n - ell - 1;
    for (int v = 0; v <= top; ++v) t.parent.push_back(v - 1);
    for (int k = 0; k < ell; ++k) t.parent.push_back(top);
    return t;
}

RootedTree star_tree(int leaves) { return palm_tree(leaves + 1, leaves); }

bool is_palm(const RootedTree& tree) {
    if (tree.roots().size() != 1 || tree.size() < 2) return false;
    auto ch = tree.children();
    auto lv = tree.leaves();
    int p = tree.parent[lv[0]];
    for (int l : lv)
        if (tree.parent[l] != p) return false;
    for (int v = p; tree.parent[v] >= 0; v = tree.parent[v])
        if (ch[tree.parent[v]].size() != 1) return false;
    return true;
}

bool is_low_branching(const RootedTree& tree) {
    auto ch = tree.children();
    int branching = 0;
    for (const auto& c : ch)
        if (c.size() > 1) ++branching;
    return branching <= 1;
}

std::vector<ForestPart> forest_split(const RootedTree& forest) {
    forest.check();
    std::vector<int> comp(forest.size()), local(forest.size());
    std::vector<ForestPart> parts;
    for (int v = 0; v < forest.size(); ++v) {
        int p = forest.parent[v];
        if (p < 0) {
            comp[v] = static_cast<int>(parts.size());
            parts.emplace_back();
        } else {
            comp[v] = comp[p];
        }
        auto& part = parts[comp[v]];
        local[v] = static_cast<int>(part.nodes.size());
        part.nodes.push_back(v);
        part.tree.parent.push_back(p < 0 ? -1 : local[p]);
    }
    return parts;
}

QuotientForest quotient_tree_reduce(const RootedTree& tree, const std::vector<double>& t) {
    tree.check();
    if (tree.roots().size() != 1 || tree.size() < 2)
        throw Error(Errc::BadShape, "quotient reduction needs a tree with at least two nodes");
    auto ch = tree.children();
    auto lv = tree.leaves();
    std::vector<int> leaf_pos(tree.size(), -1);
    for (size_t k = 0; k < lv.size(); ++k) leaf_pos[lv[k]] = static_cast<int>(k);
    if (!t.empty() && t.size() != lv.size()) throw Error(Errc::BadData, "one target per leaf expected");

    QuotientForest q;
    std::function<void(int, int)> emit = [&](int v, int parent) {
        int me = static_cast<int>(q.forest.parent.size());
        q.forest.parent.push_back(parent);
        if (ch[v].empty()) {
            q.forest.parent.push_back(me);
            q.targets.push_back(t.empty() ? 1.0 : t[leaf_pos[v]]);
            return;
        }
        for (int c : ch[v]) emit(c, me);
    };
    for (int c : ch[tree.roots()[0]]) emit(c, -1);
    return q;
}

double quotient_tree_sum(const RootedTree& tree, const std::vector<double>& t, const Vec& y) {
    auto lv = tree.leaves();
    int root = tree.roots().at(0);
    double s = 0.0;
    for (int v = 0; v < tree.size(); ++v)
        if (tree.parent[v] >= 0) s += y[tree.parent[v]] / y[v];
    for (size_t k = 0; k < lv.size(); ++k)
        s += (t.empty() ? 1.0 : t[k]) * y[lv[k]] / y[root];
    return s;
}

TreeGraph tree_to_graph(const RootedTree& tree, const std::vector<double>& t) {
    tree.check();
    auto ch = tree.children();
    auto lv = tree.leaves();
    if (!t.empty() && t.size() != lv.size()) throw Error(Errc::BadData, "one target per leaf expected");

    TreeGraph tg;
    Digraph& g = tg.graph;
    std::vector<int> image(tree.size(), -1), arc_of(tree.size(), -1), sink_of(tree.size(), -1);
    for (int v = 0; v < tree.size(); ++v) {
        // each component collapses its leaves to its own sink node
        sink_of[v] = tree.parent[v] < 0 ? g.add_node("leaf*" + std::to_string(v))
                                        : sink_of[tree.parent[v]];
        image[v] = ch[v].empty() ? sink_of[v] : g.add_node("v" + std::to_string(v));
    }
    for (int v = 0; v < tree.size(); ++v) {
        int from = tree.parent[v] < 0 ? sink_of[v] : image[tree.parent[v]];
        arc_of[v] = g.add_arc(from, image[v], "e" + std::to_string(v));
    }
    for (size_t k = 0; k < lv.size(); ++k) {
        std::vector<int> circ;
        for (int v = lv[k]; v >= 0; v = tree.parent[v]) circ.push_back(arc_of[v]);
        std::reverse(circ.begin(), circ.end());
        tg.basis.circuits.push_back(circ);
        tg.basis.targets.push_back(t.empty() ? 1.0 : t[k]);
    }
    return tg;
}

namespace {

double solve_increasing(const std::function<double(double)>& f) {
    double lo = 0.0, hi = 1.0;
    while (f(hi) < 0.0) hi = 2.0 * hi + 1.0;
    lo = hi - 1.0;
    while (f(lo) > 0.0) lo = 2.0 * lo - 1.0;
    for (int it = 0; it < 300 && hi - lo > 1e-16 * std::max(1.0, hi); ++it) {
        double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double snowflake(int p, int q, SnowflakeRoot root) {
    if (p < 2 || q < 2) throw Error(Errc::BadShape, "snowflake needs p, q >= 2");
    const double P = p, Q = q;
    switch (root) {
        case SnowflakeRoot::Center:
            return 3.0 * std::cbrt(P * P * Q);
        case SnowflakeRoot::Ring: {
            double x = solve_increasing([&](double x) {
                return Q * Q * Q * (P - 1) * (P - 1) * std::pow(x, 4) * (1 + Q * Q * x * x) - 1.0;
            });
            return (P - 1) * Q * x * (4 + 2 * Q * Q * x * x);
        }
        case SnowflakeRoot::Perimeter: {
            double x = solve_increasing([&](double x) {
                double b = 1 + Q * (Q - 1) * x * x;
                return std::pow(P - 1, 3) * std::pow(Q, 4) * std::pow(x, 5) * b * b - 1.0;
            });
            return (P - 1) * Q * x * (5 + 3 * Q * (Q - 1) * x * x);
        }
    }
    return 0.0;
}

RootedTree snowflake_tree(int p, int q, SnowflakeRoot root) {
    if (p < 2 || q < 2) throw Error(Errc::BadShape, "snowflake needs p, q >= 2");
    // center 0, ring 1..p, perimeter p+1.. (q per ring node)
    const int n = 1 + p + p * q;
    std::vector<std::vector<int>> adj(n);
    auto link = [&](int a, int b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    };
    for (int i = 1; i <= p; ++i) {
        link(0, i);
        for (int j = 0; j < q; ++j) link(i, p + 1 + (i - 1) * q + j);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    int start = root == SnowflakeRoot::Center ? 0 : root == SnowflakeRoot::Ring ? 1 : p + 1;

    RootedTree t;
    std::function<void(int, int, int)> visit = [&](int v, int from, int parent) {
        int me = static_cast<int>(t.parent.size());
        t.parent.push_back(parent);
        for (int u : adj[v])
            if (u != from) visit(u, v, me);
    };
    visit(start, -1, -1);
    return t;
}

}  // namespace prodmin
