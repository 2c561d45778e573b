#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>

#include "prodmin/trees.hpp"

namespace prodmin {

const char* method_name(TreeMethod m) {
    switch (m) {
        case TreeMethod::Recurrence: return "recurrence";
        case TreeMethod::FixedPoint: return "fixed_point";
        case TreeMethod::Newton: return "newton";
    }
    return "?";
}

TreeMethod parse_method(const std::string& s) {
    if (s == "recurrence") return TreeMethod::Recurrence;
    if (s == "fixed_point" || s == "fixed-point") return TreeMethod::FixedPoint;
    if (s == "newton") return TreeMethod::Newton;
    throw Error(Errc::BadData, "unknown method " + s);
}

namespace {

// single tree with per-leaf data
struct TreeData {
    const RootedTree& T;
    std::vector<std::vector<int>> ch;
    std::vector<int> lv, leaf_pos, depth;
    std::vector<double> logt;  // per leaf
    int h = 0;

    TreeData(const RootedTree& tree, const std::vector<double>& t)
        : T(tree), ch(tree.children()), lv(tree.leaves()), leaf_pos(tree.size(), -1),
          depth(tree.depth()), h(tree.height()) {
        for (size_t k = 0; k < lv.size(); ++k) leaf_pos[lv[k]] = static_cast<int>(k);
        for (size_t k = 0; k < lv.size(); ++k) logt.push_back(std::log(t[k]));
    }
    int L() const { return static_cast<int>(lv.size()); }
    bool internal(int v) const { return !ch[v].empty(); }

    // node values from leaf values (additive identity)
    Vec all_values(const Vec& leaves) const {
        Vec y = Vec::Zero(T.size());
        for (int k = 0; k < L(); ++k) y[lv[k]] = leaves[k];
        for (int v = T.size() - 1; v >= 0; --v)
            if (T.parent[v] >= 0) y[T.parent[v]] += y[v];
        return y;
    }
    // log M on leaf values
    Vec logM(const Vec& y) const {
        Vec S = Vec::Zero(T.size());
        for (int v = 0; v < T.size(); ++v) {
            double base = T.parent[v] >= 0 ? S[T.parent[v]] : 0.0;
            S[v] = base + (internal(v) ? std::log(y[v]) : 0.0);
        }
        Vec out(L());
        for (int k = 0; k < L(); ++k) {
            int p = T.parent[lv[k]];
            out[k] = logt[k] - (p >= 0 ? S[p] : 0.0);
        }
        return out;
    }
    // prefix sums of 1/y over internal nodes on the root path (inclusive)
    Vec inv_prefix(const Vec& y) const {
        Vec P = Vec::Zero(T.size());
        for (int v = 0; v < T.size(); ++v) {
            double base = T.parent[v] >= 0 ? P[T.parent[v]] : 0.0;
            P[v] = base + (internal(v) ? 1.0 / y[v] : 0.0);
        }
        return P;
    }
    // deepest internal node shared by the root paths of leaves a and b
    int shared(int a, int b) const {
        int u = T.parent[lv[a]], w = T.parent[lv[b]];
        if (u < 0 || w < 0) return -1;
        while (depth[u] > depth[w]) u = T.parent[u];
        while (depth[w] > depth[u]) w = T.parent[w];
        while (u != w) {
            u = T.parent[u];
            w = T.parent[w];
        }
        return u;
    }
    // S_{ab} = sum over shared internal ancestors of 1/y
    Mat shared_inverse(const Vec& y) const {
        Vec P = inv_prefix(y);
        Mat S(L(), L());
        for (int a = 0; a < L(); ++a)
            for (int b = a; b < L(); ++b) {
                int c = shared(a, b);
                S(a, b) = S(b, a) = c >= 0 ? P[c] : 0.0;
            }
        return S;
    }
    Vec initial_leaves() const {
        Vec z(L());
        for (int k = 0; k < L(); ++k)
            z[k] = std::exp(logt[k] / (depth[lv[k]] + 1) - 0.5 * std::log(static_cast<double>(L())));
        return z;
    }
};

double residual_on(const TreeData& D, const Vec& y) {
    double res = 0.0;
    Vec acc = Vec::Zero(D.T.size());
    for (int k = 0; k < D.L(); ++k) acc[D.lv[k]] = y[D.lv[k]];
    for (int v = D.T.size() - 1; v >= 0; --v)
        if (D.T.parent[v] >= 0) acc[D.T.parent[v]] += acc[v];
    for (int v = 0; v < D.T.size(); ++v) {
        if (!(y[v] > 0.0)) return std::numeric_limits<double>::infinity();
        if (D.internal(v)) res = std::max(res, std::abs(y[v] - acc[v]) / y[v]);
    }
    for (int k = 0; k < D.L(); ++k) {
        double s = -D.logt[k];
        for (int v = D.lv[k]; v >= 0; v = D.T.parent[v]) s += std::log(y[v]);
        res = std::max(res, std::abs(s));
    }
    return res;
}

TreeSolution finish(const TreeData& D, const Vec& leaves, int iters, TreeMethod m) {
    TreeSolution s;
    s.y = D.all_values(leaves);
    s.m = s.y.sum();
    s.iterations = iters;
    s.residual = residual_on(D, s.y);
    s.method = m;
    return s;
}

TreeSolution fixed_point(const TreeData& D, const TreeOptions& opt) {
    const double tau = opt.tau > 0.0 ? opt.tau : 1.0 / (D.h + 1);
    Vec yl = D.initial_leaves();
    for (int it = 0; it < opt.max_iter; ++it) {
        Vec m = D.logM(D.all_values(yl)).array().exp();
        double gap = ((m.array() - yl.array()).abs() / yl.array()).maxCoeff();
        if (gap <= opt.tol) return finish(D, m, it, TreeMethod::FixedPoint);
        yl = tau * m + (1.0 - tau) * yl;
        if (!(yl.array() > 0.0).all())
            throw Error(Errc::NoConvergence, "fixed-point iterate left the positive orthant");
    }
    throw Error(Errc::NoConvergence,
                "fixed-point iteration did not converge in " + std::to_string(opt.max_iter) + " steps");
}

TreeSolution newton(const TreeData& D, const TreeOptions& opt) {
    const int L = D.L();
    Vec z = D.initial_leaves().array().log();
    auto F = [&](const Vec& zz) -> Vec {
        return zz - D.logM(D.all_values(zz.array().exp()));
    };
    Vec r = F(z);
    const int limit = std::min(opt.max_iter, 500);
    for (int it = 0; it < limit; ++it) {
        double norm = r.lpNorm<Eigen::Infinity>();
        if (norm <= opt.tol) return finish(D, z.array().exp(), it, TreeMethod::Newton);
        Vec yl = z.array().exp();
        Vec y = D.all_values(yl);
        // J = I - B~,  B~_{ab} = -S_{ab} yhat_b
        Mat J = D.shared_inverse(y) * yl.asDiagonal();
        J.diagonal().array() += 1.0;
        Vec dz = -J.partialPivLu().solve(r);
        double alpha = 1.0;
        Vec zn, rn;
        for (; alpha > 1e-10; alpha *= 0.5) {
            zn = z + alpha * dz;
            rn = F(zn);
            if (rn.allFinite() && rn.norm() <= (1.0 - 1e-4 * alpha) * r.norm()) break;
        }
        if (!(alpha > 1e-10)) {
            // fall back to one damped fixed-point step
            double tau = 1.0 / (D.h + 1);
            Vec m = (z - r).array().exp();
            zn = (tau * m + (1.0 - tau) * yl).array().log();
            rn = F(zn);
            if (!(rn.norm() < r.norm())) break;
        }
        z = zn;
        r = rn;
    }
    (void)L;
    if (r.lpNorm<Eigen::Infinity>() <= opt.tol) return finish(D, z.array().exp(), limit, TreeMethod::Newton);
    throw Error(Errc::NoConvergence, "tree Newton iteration did not converge");
}

// m_T(t) = min_k 1/k + sum_v m_{T_v}(k t_v), chains of single children
// solved as one scalar problem (all chain nodes carry the same value)
struct Recurrence {
    const TreeData& D;
    std::vector<int> chain_end, chain_len;
    int evaluations = 0;

    explicit Recurrence(const TreeData& d) : D(d), chain_end(d.T.size()), chain_len(d.T.size()) {
        for (int v = 0; v < D.T.size(); ++v) {
            int u = v, c = 0;
            while (D.ch[u].size() == 1) {
                u = D.ch[u][0];
                ++c;
            }
            chain_end[v] = u;
            chain_len[v] = c;
        }
    }

    // scalar kappa with e^{-kappa} = value(kappa), value increasing
    double root(const std::function<double(double)>& value) {
        auto g = [&](double k) { return std::log(value(k)) + k; };
        double lo = -1.0, hi = 1.0;
        double glo = g(lo), ghi = g(hi);
        while (glo > 0.0) {
            hi = lo;
            ghi = glo;
            lo = 2.0 * lo - 1.0;
            glo = g(lo);
        }
        while (ghi < 0.0) {
            lo = hi;
            glo = ghi;
            hi = 2.0 * hi + 1.0;
            ghi = g(hi);
        }
        if (glo == 0.0) return lo;
        if (ghi == 0.0) return hi;
        boost::uintmax_t iters = 200;
        auto tolf = boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 3);
        auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, tolf, iters);
        return 0.5 * (a + b);
    }

    // root value and minimum of the subtree at v with targets scaled by e^sigma
    std::pair<double, double> eval(int v, double sigma, Vec* y = nullptr) {
        ++evaluations;
        if (!D.internal(v)) {
            double val = std::exp(D.logt[D.leaf_pos[v]] + sigma);
            if (y) (*y)[v] = val;
            return {val, val};
        }
        if (chain_len[v] > 0) {
            const int c = chain_len[v], w = chain_end[v];
            double k = root([&](double kk) { return eval(w, sigma + c * kk).first; });
            double Y = std::exp(-k);
            auto sub = eval(w, sigma + c * k, y);
            if (y)
                for (int u = v; u != w; u = D.ch[u][0]) (*y)[u] = Y;
            return {Y, c * Y + sub.second};
        }
        double k = root([&](double kk) {
            double s = 0.0;
            for (int c : D.ch[v]) s += eval(c, sigma + kk).first;
            return s;
        });
        double Y = std::exp(-k), m = Y;
        if (y) (*y)[v] = Y;
        for (int c : D.ch[v]) m += eval(c, sigma + k, y).second;
        return {Y, m};
    }
};

TreeSolution recurrence(const TreeData& D) {
    Recurrence R(D);
    Vec y = Vec::Zero(D.T.size());
    R.eval(0, 0.0, &y);
    Vec yl(D.L());
    for (int k = 0; k < D.L(); ++k) yl[k] = y[D.lv[k]];
    TreeSolution s;
    s.y = y;
    s.m = y.sum();
    s.iterations = R.evaluations;
    s.residual = residual_on(D, y);
    s.method = TreeMethod::Recurrence;
    return s;
}

TreeSolution solve_single(const RootedTree& tree, const std::vector<double>& t, TreeMethod method,
                          const TreeOptions& opt) {
    TreeData D(tree, t);
    switch (method) {
        case TreeMethod::Recurrence: return recurrence(D);
        case TreeMethod::FixedPoint: return fixed_point(D, opt);
        case TreeMethod::Newton: return newton(D, opt);
    }
    return {};
}

std::vector<double> leaf_targets(const RootedTree& tree, const std::vector<double>& t) {
    auto L = tree.leaves().size();
    if (t.empty()) return std::vector<double>(L, 1.0);
    if (t.size() != L)
        throw Error(Errc::BadData, "expected " + std::to_string(L) + " leaf targets, got " +
                                       std::to_string(t.size()));
    for (double v : t)
        if (!(v > 0.0) || !std::isfinite(v)) throw Error(Errc::BadData, "leaf targets must be positive");
    return t;
}

}  // namespace

TreeSolution m_tree(const RootedTree& tree, const std::vector<double>& t, TreeMethod method,
                    const TreeOptions& opt) {
    tree.check();
    auto tt = leaf_targets(tree, t);
    auto parts = forest_split(tree);
    if (parts.size() == 1) return solve_single(tree, tt, method, opt);

    auto lv = tree.leaves();
    std::vector<int> leaf_pos(tree.size(), -1);
    for (size_t k = 0; k < lv.size(); ++k) leaf_pos[lv[k]] = static_cast<int>(k);
    TreeSolution sol;
    sol.method = method;
    sol.y = Vec::Zero(tree.size());
    for (const auto& part : parts) {
        std::vector<double> pt;
        for (int v : part.nodes)
            if (leaf_pos[v] >= 0) pt.push_back(tt[leaf_pos[v]]);
        auto s = solve_single(part.tree, pt, method, opt);
        for (size_t k = 0; k < part.nodes.size(); ++k) sol.y[part.nodes[k]] = s.y[k];
        sol.m += s.m;
        sol.iterations = std::max(sol.iterations, s.iterations);
        sol.residual = std::max(sol.residual, s.residual);
    }
    return sol;
}

double tree_residual(const RootedTree& tree, const std::vector<double>& t, const Vec& y) {
    auto tt = leaf_targets(tree, t);
    double res = 0.0;
    auto lv = tree.leaves();
    std::vector<int> leaf_pos(tree.size(), -1);
    for (size_t k = 0; k < lv.size(); ++k) leaf_pos[lv[k]] = static_cast<int>(k);
    for (const auto& part : forest_split(tree)) {
        std::vector<double> pt;
        Vec py(static_cast<Eigen::Index>(part.nodes.size()));
        for (size_t k = 0; k < part.nodes.size(); ++k) {
            py[k] = y[part.nodes[k]];
            if (leaf_pos[part.nodes[k]] >= 0) pt.push_back(tt[leaf_pos[part.nodes[k]]]);
        }
        TreeData D(part.tree, pt);
        res = std::max(res, residual_on(D, py));
    }
    return res;
}

double palm_closed_form(int n, int ell, const std::vector<double>& t) {
    if (ell < 1 || ell > n - 1) throw Error(Errc::BadShape, "palm tree needs 1 <= ell <= n-1");
    double s = 0.0;
    if (t.empty()) {
        s = ell;
    } else {
        if (static_cast<int>(t.size()) != ell) throw Error(Errc::BadData, "one target per leaf expected");
        for (double v : t) {
            if (!(v > 0.0)) throw Error(Errc::BadData, "leaf targets must be positive");
            s += v;
        }
    }
    const int k = n - ell + 1;
    return k * std::pow(s, 1.0 / k);
}

Linearization tree_linearization(const RootedTree& tree, const Vec& y) {
    tree.check();
    if (tree.roots().size() != 1) throw Error(Errc::BadShape, "linearization expects a single tree");
    std::vector<double> ones(tree.leaves().size(), 1.0);
    TreeData D(tree, ones);
    Vec yl(D.L());
    for (int k = 0; k < D.L(); ++k) yl[k] = y[D.lv[k]];
    Mat S = D.shared_inverse(y);

    Linearization lin;
    lin.height = D.h;
    lin.B = -(yl.asDiagonal() * S);
    // similar to the symmetric -D^{1/2} S D^{1/2}
    Vec s = yl.array().sqrt();
    Mat sym = -(s.asDiagonal() * S * s.asDiagonal());
    Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
    lin.min_eig = es.eigenvalues().minCoeff();
    lin.max_eig = es.eigenvalues().maxCoeff();
    // an eigenvalue at roundoff size is a zero eigenvalue, not a negative one
    const double zero_tol = 1e-12 * std::max(1.0, -lin.min_eig);
    lin.within_bounds = lin.min_eig >= -D.h - 1e-9 && lin.max_eig < -zero_tol;
    return lin;
}

std::vector<double> damped_iteration(const RootedTree& tree, const std::vector<double>& t,
                                     const Vec& start_leaves, double tau, int steps) {
    tree.check();
    auto tt = leaf_targets(tree, t);
    TreeData D(tree, tt);
    if (start_leaves.size() != D.L()) throw Error(Errc::BadData, "one start value per leaf expected");
    std::vector<double> hist;
    Vec yl = start_leaves;
    for (int k = 0; k < steps; ++k) {
        if (!(yl.array() > 0.0).all()) {
            hist.push_back(std::numeric_limits<double>::infinity());
            break;
        }
        Vec y = D.all_values(yl);
        Vec m = D.logM(y).array().exp();
        hist.push_back((m - yl).lpNorm<Eigen::Infinity>());
        yl = tau * m + (1.0 - tau) * yl;
    }
    return hist;
}

}  // namespace prodmin
