#include "prodmin/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace prodmin {

void for_each_rooted_tree(int n, const std::function<void(const RootedTree&)>& visit, int budget) {
    if (n < 1) throw Error(Errc::BadShape, "tree size must be positive");
    if (n > budget)
        throw Error(Errc::BudgetExceeded, "tree enumeration limited to n <= " + std::to_string(budget));
    // Beyer-Hedetniemi successor on level sequences, root at level 1,
    // from the path (1,2,...,n) down to the star (1,2,...,2)
    std::vector<int> L(n);
    for (int i = 0; i < n; ++i) L[i] = i + 1;
    RootedTree t;
    t.parent.assign(n, -1);
    std::vector<int> last(n + 2, -1);
    for (;;) {
        for (int i = 0; i < n; ++i) {
            t.parent[i] = L[i] == 1 ? -1 : last[L[i] - 1];
            last[L[i]] = i;
        }
        visit(t);
        int p = -1;
        for (int i = n - 1; i >= 0; --i)
            if (L[i] > 2) {
                p = i;
                break;
            }
        if (p < 0) break;
        int q = p - 1;
        while (L[q] != L[p] - 1) --q;
        for (int i = p; i < n; ++i) L[i] = L[i - (p - q)];
    }
}

std::vector<RootedTree> enumerate_rooted_trees(int n, std::optional<int> ell, int budget) {
    std::vector<RootedTree> out;
    for_each_rooted_tree(
        n,
        [&](const RootedTree& t) {
            if (!ell || t.leaf_count() == *ell) out.push_back(t);
        },
        budget);
    return out;
}

double R_ratio(double x) {
    if (std::abs(x - 1.0) < 1e-12) return 1.0;
    return std::log(x) / (x - 1.0);
}

TreeBounds tree_bounds(int n, int ell) {
    if (ell < 1 || ell > n - 1) throw Error(Errc::BadShape, "bounds need 1 <= ell <= n-1");
    TreeBounds b;
    double base = n - ell - 1;
    b.max_upper = base + 2.0 * std::sqrt(static_cast<double>(ell));
    b.max_lower = base + 2.0 * std::floor(std::sqrt(static_cast<double>(ell)) + 1e-12);
    double R = R_ratio(ell);
    b.C_ell = R * std::exp(1.0 - R);
    return b;
}

std::optional<double> min_lower_small_t(int n, int ell, double t) {
    double R = R_ratio(ell), lt = std::log(t);
    if (lt > -n * R + 1.0 + (n - 1.0) / ell) return std::nullopt;
    double k = n + ell - 1.0;
    return std::exp(ell * std::log(t / ell) / k + std::log(k));
}

std::optional<double> min_lower_large_t(int n, int ell, double t) {
    double R = R_ratio(ell), lt = std::log(t);
    if (!(lt > -n * R)) return std::nullopt;
    return std::exp(-R + 1.0 + std::log(lt + n * R));
}

BindingBound min_lower_bound(int n, int ell, double t) {
    if (auto a = min_lower_small_t(n, ell, t)) return {*a, 'a'};
    return {*min_lower_large_t(n, ell, t), 'b'};
}

GlobalTreeMin min_tree_global(int n) {
    if (n < 2) throw Error(Errc::BadShape, "global minimum needs n >= 2");
    GlobalTreeMin g;
    g.min_value = std::numeric_limits<double>::infinity();
    std::vector<double> vals(n);
    for (int ell = 1; ell <= n - 1; ++ell) {
        int k = n - ell + 1;
        vals[ell] = k * std::pow(static_cast<double>(ell), 1.0 / k);
        g.min_value = std::min(g.min_value, vals[ell]);
    }
    for (int ell = 1; ell <= n - 1; ++ell)
        if (vals[ell] <= g.min_value * (1.0 + 1e-12)) g.argmin_ell.push_back(ell);
    g.explicit_bound = std::numbers::e * std::log(n - std::log(static_cast<double>(n)));
    return g;
}

ScanResult extremal_scan(const TreeClassQuery& q, TreeMethod method, int budget) {
    if (q.ell && (*q.ell < 1 || *q.ell > q.n - 1))
        throw Error(Errc::BadShape, "class needs 1 <= ell <= n-1");
    std::vector<std::pair<double, RootedTree>> vals;
    for_each_rooted_tree(
        q.n,
        [&](const RootedTree& t) {
            if (q.ell) {
                int l = t.leaf_count();
                if (q.at_least ? l < *q.ell : l != *q.ell) return;
            }
            vals.emplace_back(m_tree(t, {}, method).m, t);
        },
        budget);
    ScanResult r;
    r.count = static_cast<int>(vals.size());
    if (vals.empty()) return r;
    r.min = std::numeric_limits<double>::infinity();
    r.max = -r.min;
    for (auto& [v, t] : vals) {
        r.min = std::min(r.min, v);
        r.max = std::max(r.max, v);
    }
    for (auto& [v, t] : vals) {
        if (v <= r.min + 1e-9) r.argmin.push_back(t);
        if (v >= r.max - 1e-9) r.argmax.push_back(t);
    }
    return r;
}

GraphBounds graph_bounds(int m, int n) {
    if (n < 1 || n > m) throw Error(Errc::BadShape, "graph bounds need 1 <= n <= m");
    GraphBounds b;
    if (n == m) {
        b.lower_mn = m;
    } else {
        double lam = 1.0 + 1.0 / (m - n), ell = m - n + 1.0;
        b.lower_mn = std::numbers::e * m * lam * std::pow(ell, -lam) * std::log(ell);
    }
    b.lower_global = std::numbers::e * std::log(m - std::log(static_cast<double>(m)));
    return b;
}

std::vector<Digraph> special_graphs(int m, int n) {
    if (n < 2 || n > m) throw Error(Errc::BadShape, "special graphs need 2 <= n <= m");
    const int r = m - n + 1;  // parallel source-to-sink paths
    std::vector<Digraph> out;
    std::vector<int> parts(r);
    // nonincreasing splits of `rest` inner nodes over r paths
    std::function<void(int, int, int, int)> split = [&](int idx, int rest, int cap, int k0) {
        if (idx == r) {
            if (rest != 0) return;
            Digraph g;
            for (int v = 0; v < n; ++v) g.add_node();
            int src = 0, snk = 1, next = 2;
            auto path = [&](int from, int to, int inner) {
                int cur = from;
                for (int i = 0; i < inner; ++i) {
                    g.add_arc(cur, next);
                    cur = next++;
                }
                g.add_arc(cur, to);
            };
            path(snk, src, k0);
            for (int p : parts) path(src, snk, p);
            out.push_back(std::move(g));
            return;
        }
        for (int v = std::min(rest, cap); v >= 0; --v) {
            parts[idx] = v;
            split(idx + 1, rest - v, v, k0);
        }
    };
    for (int k0 = 0; k0 <= n - 2; ++k0) split(0, n - 2 - k0, n - 2 - k0, k0);
    return out;
}

double min_graph_class(int m, int n, int budget) {
    if (n < 1 || n > m) throw Error(Errc::BadShape, "graph class needs 1 <= n <= m");
    if (n == m || n == 1) return m;  // a cycle, or a bouquet of loops
    double best = std::numeric_limits<double>::infinity();
    const int ell = m - n + 1;
    for_each_rooted_tree(
        m,
        [&](const RootedTree& t) {
            if (t.leaf_count() == ell) best = std::min(best, m_tree(t, {}).m);
        },
        budget);
    return best;
}

double assignment_value(const Assignment& a, const Vec& x) {
    if (x.size() != a.n()) throw Error(Errc::BadData, "one value per index expected");
    double Y = 0.0;
    for (int i = 0; i < a.n(); ++i) {
        double lo = std::numeric_limits<double>::infinity();
        for (int j : a.omega[i]) lo = std::min(lo, x[j]);
        Y += x[i] / lo;
    }
    return Y;
}

AssignmentReport assignment_bound(const Assignment& a, const std::optional<Vec>& x) {
    const int n = a.n();
    if (n < 2) throw Error(Errc::BadData, "assignment needs at least two indices");
    Digraph g;
    for (int i = 0; i < n; ++i) g.add_node();
    std::vector<bool> covered(n, false);
    for (int i = 0; i < n; ++i) {
        if (a.omega[i].empty()) throw Error(Errc::BadData, "omega(" + std::to_string(i + 1) + ") is empty");
        for (int j : a.omega[i]) {
            if (j < 0 || j >= n) throw Error(Errc::BadData, "assignment index out of range");
            covered[j] = true;
            g.add_arc(i, j);
        }
    }
    if (std::find(covered.begin(), covered.end(), false) != covered.end())
        throw Error(Errc::BadData, "the sets omega(i) do not cover 1..n");
    AssignmentReport rep;
    rep.irreducible = is_strongly_connected(g);
    if (x) {
        for (int i = 0; i < n; ++i)
            if (!((*x)[i] > 0.0)) throw Error(Errc::BadData, "values must be positive");
        rep.Y = assignment_value(a, *x);
    }
    auto gm = min_tree_global(n);
    rep.lower_bound = gm.explicit_bound;
    rep.refined_bound = gm.min_value;
    rep.refined_ell = gm.argmin_ell.front();
    return rep;
}

AssignmentInstance reducible_construction(int n, double eps) {
    AssignmentInstance in;
    in.a.omega.resize(n);
    for (int j = 0; j < n - 1; ++j) in.a.omega[0].push_back(j);
    for (int i = 1; i < n; ++i) in.a.omega[i] = {n - 1};
    in.x = Vec::Constant(n, eps);
    in.x[0] = eps * eps;
    in.x[n - 1] = 1.0;
    return in;
}

AssignmentInstance chain_construction(int n, int k, double base) {
    if (k < 1 || k >= n) throw Error(Errc::BadShape, "chain construction needs 1 <= k < n");
    AssignmentInstance in;
    in.a.omega.resize(n);
    for (int i = 0; i < k - 1; ++i) in.a.omega[i] = {i + 1};
    for (int j = k; j < n; ++j) in.a.omega[k - 1].push_back(j);
    for (int i = k; i < n; ++i) in.a.omega[i] = {0};
    in.x.resize(n);
    for (int i = 0; i < n; ++i) in.x[i] = std::pow(base, -std::min(i, k));
    return in;
}

}  // namespace prodmin
