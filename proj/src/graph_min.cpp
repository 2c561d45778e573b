#include <algorithm>
#include <cmath>
#include <limits>

#include "prodmin/graphs.hpp"
#include "prodmin/rng.hpp"

namespace prodmin {

ProblemSpec graph_spec(const Digraph& g, const CircuitBasis& basis) {
    ProblemSpec spec;
    spec.w = g.weights();
    spec.A = incidence_matrix(g, basis);
    spec.t = Eigen::Map<const Vec>(basis.targets.data(), basis.size());
    for (const auto& a : g.arcs) spec.names.push_back(a.name);
    return spec;
}

Solution f_gamma(const Digraph& g, const CircuitBasis& basis, const SolveOptions& opt) {
    g.check();
    check_basis(g, basis);
    const int m = g.arc_count();

    // drop arcs outside every circuit, then split by strong components
    Digraph used;
    used.node_count = g.node_count;
    std::vector<int> used_index;
    std::vector<bool> in_use(m, false);
    for (const auto& c : basis.circuits)
        for (int a : c) in_use[a] = true;
    for (int a = 0; a < m; ++a)
        if (in_use[a]) {
            used.add_arc(g.arcs[a].alpha, g.arcs[a].beta);
            used_index.push_back(a);
        }
    auto sd = strong_components(used);

    std::vector<std::vector<int>> groups(sd.count);
    for (int j = 0; j < basis.size(); ++j)
        groups[sd.component[g.arcs[basis.circuits[j][0]].alpha]].push_back(j);

    Solution sol;
    sol.x = Vec::Zero(m);
    sol.lambda = Vec::Zero(basis.size());
    for (int a = 0; a < m; ++a)
        if (!in_use[a]) sol.nonessential.push_back(a);
    for (const auto& grp : groups) {
        if (grp.empty()) continue;
        std::vector<int> cols;
        for (int j : grp)
            for (int a : basis.circuits[j]) cols.push_back(a);
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
        ProblemSpec sub;
        sub.w.resize(static_cast<Eigen::Index>(cols.size()));
        sub.A = Mat::Zero(static_cast<Eigen::Index>(grp.size()), static_cast<Eigen::Index>(cols.size()));
        sub.t.resize(static_cast<Eigen::Index>(grp.size()));
        for (size_t k = 0; k < cols.size(); ++k) sub.w[k] = g.arcs[cols[k]].weight;
        for (size_t r = 0; r < grp.size(); ++r) {
            sub.t[r] = basis.targets[grp[r]];
            for (int a : basis.circuits[grp[r]]) {
                auto pos = std::lower_bound(cols.begin(), cols.end(), a) - cols.begin();
                sub.A(static_cast<Eigen::Index>(r), pos) = 1.0;
            }
        }
        Solution s = solve(sub, opt);
        for (size_t k = 0; k < cols.size(); ++k) sol.x[cols[k]] = s.x[k];
        for (size_t r = 0; r < grp.size(); ++r) sol.lambda[grp[r]] = s.lambda[r];
        sol.iterations = std::max(sol.iterations, s.iterations);
    }
    sol.f = g.weights().dot(sol.x);
    sol.residual = critical_residual(graph_spec(g, basis), sol.x, sol.lambda);
    return sol;
}

namespace {

struct Potentials {
    Vec u;  // log potentials; meaningful on nodes of components with inner arcs
    double f = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

// minimize sum_a w_a exp(u_alpha - u_beta) over each strong component,
// first node of every component pinned at 0
Potentials component_potentials(const Digraph& g, const StrongDecomposition& sd,
                                const SolveOptions& opt) {
    Potentials P;
    P.u = Vec::Zero(g.node_count);
    std::vector<std::vector<int>> inner(sd.count);
    for (int a = 0; a < g.arc_count(); ++a)
        if (sd.relevant[a]) inner[sd.component[g.arcs[a].alpha]].push_back(a);

    std::vector<int> local(g.node_count, -1);
    for (int c = 0; c < sd.count; ++c) {
        const auto& arcs = inner[c];
        if (arcs.empty()) continue;
        const auto& nodes = sd.members[c];
        const int k = static_cast<int>(nodes.size());
        for (int i = 0; i < k; ++i) local[nodes[i]] = i;

        Vec u = Vec::Zero(k);
        auto value = [&](const Vec& uu) {
            double s = 0.0;
            for (int a : arcs) {
                const auto& arc = g.arcs[a];
                s += arc.weight * std::exp(uu[local[arc.alpha]] - uu[local[arc.beta]]);
            }
            return s;
        };
        double F = value(u);
        double res = 0.0;
        int it = 0;
        for (;; ++it) {
            Vec grad = Vec::Zero(k);
            Mat H = Mat::Zero(k, k);
            for (int a : arcs) {
                const auto& arc = g.arcs[a];
                int i = local[arc.alpha], j = local[arc.beta];
                if (i == j) continue;
                double c_a = arc.weight * std::exp(u[i] - u[j]);
                grad[i] += c_a;
                grad[j] -= c_a;
                H(i, i) += c_a;
                H(j, j) += c_a;
                H(i, j) -= c_a;
                H(j, i) -= c_a;
            }
            res = (k > 1 ? grad.tail(k - 1).lpNorm<Eigen::Infinity>() : 0.0) / std::max(1.0, F);
            if (res <= opt.tol || k == 1) break;
            if (it >= opt.max_iter)
                throw Error(Errc::NoConvergence, "potential iteration did not converge");
            Vec step = -H.bottomRightCorner(k - 1, k - 1).llt().solve(grad.tail(k - 1));
            double slope = grad.tail(k - 1).dot(step);
            if (!(slope < 0.0)) break;
            Vec un = u;
            if (-slope <= 1e-12 * F) {
                // decrement below roundoff of F: Armijo would accept useless
                // tiny steps, while the Newton step itself is safe here
                u.tail(k - 1) += step;
                F = value(u);
                continue;
            }
            double alpha = 1.0, Fn = F;
            for (; alpha > 1e-14; alpha *= 0.5) {
                un.tail(k - 1) = u.tail(k - 1) + alpha * step;
                Fn = value(un);
                if (Fn <= F + 1e-4 * alpha * slope) break;
            }
            if (!(alpha > 1e-14)) {
                un.tail(k - 1) = u.tail(k - 1) + step;
                Fn = value(un);
                if (!(Fn <= F * (1.0 + 1e-14))) break;
            }
            u = un;
            F = Fn;
        }
        if (res > opt.tol && k > 1 && res > 1e3 * opt.tol)
            throw Error(Errc::NoConvergence, "potential iteration stalled");
        for (int i = 0; i < k; ++i) P.u[nodes[i]] = u[i];
        P.f += F;
        P.iterations = std::max(P.iterations, it);
        P.residual = std::max(P.residual, res);
    }
    return P;
}

}  // namespace

Solution f_gamma(const Digraph& g, const SolveOptions& opt) {
    g.check();
    auto sd = strong_components(g);
    auto P = component_potentials(g, sd, opt);

    Solution sol;
    const int m = g.arc_count();
    sol.x = Vec::Zero(m);
    for (int a = 0; a < m; ++a) {
        if (sd.relevant[a])
            sol.x[a] = std::exp(P.u[g.arcs[a].alpha] - P.u[g.arcs[a].beta]);
        else
            sol.nonessential.push_back(a);
    }
    sol.f = g.weights().dot(sol.x);
    sol.iterations = P.iterations;
    sol.residual = P.residual;
    if (m <= 2000) {
        CircuitBasis basis = circuit_basis(g);
        ProblemSpec spec = graph_spec(g, basis);
        sol.lambda = recover_multipliers(spec, sol.x);
        sol.residual = std::max(sol.residual, critical_residual(spec, sol.x, sol.lambda));
    }
    return sol;
}

QuotientResult quotient_min(const Digraph& g, const SolveOptions& opt) {
    g.check();
    auto sd = strong_components(g);
    auto P = component_potentials(g, sd, opt);

    QuotientResult q;
    q.f = P.f;
    q.iterations = P.iterations;
    q.residual = P.residual;

    std::vector<bool> looped(sd.count, false), is_final(sd.count, false);
    for (const auto& a : g.arcs)
        if (a.alpha == a.beta) looped[sd.component[a.alpha]] = true;
    for (int c : sd.final_components) is_final[c] = true;
    q.minimizer_exists = true;
    for (auto [c, d] : sd.dag_edges)
        if (sd.members[c].size() != 1 || looped[c] || !is_final[d]) q.minimizer_exists = false;
    if (q.minimizer_exists) {
        q.y = Vec::Zero(g.node_count);
        for (int v = 0; v < g.node_count; ++v)
            if (is_final[sd.component[v]]) q.y[v] = std::exp(P.u[v]);
    }
    return q;
}

double quotient_sum(const Digraph& g, const Vec& y) {
    double s = 0.0;
    for (const auto& a : g.arcs) {
        if (y[a.alpha] == 0.0) continue;
        if (!(y[a.beta] > 0.0)) return std::numeric_limits<double>::infinity();
        s += a.weight * y[a.alpha] / y[a.beta];
    }
    return s;
}

HarmonicResult harmonic_min(const UGraph& g, const std::vector<int>& boundary, double tau,
                            const SolveOptions& opt) {
    const int n = g.node_count;
    if (boundary.empty()) throw Error(Errc::BadData, "boundary is empty");
    std::vector<bool> on_boundary(n, false);
    for (int v : boundary) {
        if (v < 0 || v >= n) throw Error(Errc::BadData, "boundary vertex out of range");
        on_boundary[v] = true;
    }
    std::vector<std::vector<int>> nbr(n);
    for (auto [a, b] : g.edges) {
        if (a == b) throw Error(Errc::BadData, "harmonic problem needs a loop-free graph");
        if (a < 0 || b < 0 || a >= n || b >= n) throw Error(Errc::BadData, "edge out of range");
        nbr[a].push_back(b);
        nbr[b].push_back(a);
    }
    std::vector<int> inner;
    for (int v = 0; v < n; ++v)
        if (!on_boundary[v]) inner.push_back(v);

    ProblemSpec spec;
    const int r = static_cast<int>(inner.size()) + 1;
    spec.w = Vec::Ones(n);
    spec.A = Mat::Zero(r, n);
    spec.t = Vec::Ones(r);
    for (size_t k = 0; k < inner.size(); ++k) {
        int v = inner[k];
        spec.A(static_cast<Eigen::Index>(k), v) = static_cast<double>(nbr[v].size());
        for (int u : nbr[v]) spec.A(static_cast<Eigen::Index>(k), u) -= 1.0;
    }
    for (int v : boundary) spec.A(r - 1, v) = 1.0;
    spec.t[r - 1] = std::exp(tau);

    HarmonicResult res;
    res.sol = solve(spec, opt);
    res.F = res.sol.f;
    res.h = res.sol.x.array().log();
    return res;
}

double expected_cyclic_nodes(int n) {
    if (n < 1) throw Error(Errc::BadData, "n must be positive");
    // terms (n-1)!/((n-k)! n^{k-1}); ratio of consecutive terms is (n-k)/n
    long double term = 1.0L, sum = 0.0L;
    for (int k = 1; k <= n; ++k) {
        sum += term;
        term *= static_cast<long double>(n - k) / n;
        if (term < 1e-30L) break;
    }
    return static_cast<double>(sum);
}

Expectation expected_cyclic_nodes_mc(int n, std::uint64_t seed, int samples) {
    if (n < 1 || samples < 2) throw Error(Errc::BadData, "need n >= 1 and at least 2 samples");
    double sum = 0.0, sum2 = 0.0;
    std::vector<int> map(n);
    for (int s = 0; s < samples; ++s) {
        CounterRng rng(seed, static_cast<std::uint64_t>(s));
        for (int i = 0; i < n; ++i) map[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        double c = cyclic_node_count(map);
        sum += c;
        sum2 += c * c;
    }
    Expectation e;
    e.mean = sum / samples;
    double var = std::max(0.0, (sum2 - samples * e.mean * e.mean) / (samples - 1));
    e.stderr_ = std::sqrt(var / samples);
    return e;
}

}  // namespace prodmin
