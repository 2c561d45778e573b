#pragma once

// Randomized invariant suites shared by the unit tests and the acceptance
// driver. Each suite runs `count` seeded instances and reports failures.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "prodmin/core.hpp"
#include "prodmin/graphs.hpp"
#include "prodmin/trees.hpp"

namespace props {

using namespace prodmin;

inline constexpr std::uint64_t kSeed = 20240611;

struct SuiteResult {
    std::string name;
    int instances = 0;
    int failures = 0;
    std::string first_failure;
    std::string note;

    bool ok() const { return failures == 0 && instances > 0; }
    void fail(int k, const std::string& why) {
        if (failures++ == 0) first_failure = "instance " + std::to_string(k) + ": " + why;
    }
};

inline double rel(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

inline ProblemSpec spec_for(std::uint64_t stream, CounterRng* out_rng = nullptr) {
    CounterRng rng(kSeed, stream);
    int n = 2 + static_cast<int>(rng.below(5));
    int r = 1 + static_cast<int>(rng.below(std::min(3, n - 1)));
    auto s = oracle::random_compact_spec(rng, n, r);
    if (out_rng) *out_rng = rng;
    return s;
}

inline double fval(const ProblemSpec& s) { return solve(s).f; }

inline SuiteResult uniqueness(int count) {
    SuiteResult res{"uniqueness"};
    for (int k = 0; k < count; ++k, ++res.instances) {
        CounterRng rng(0);
        auto s = spec_for(1000 + k, &rng);
        auto sol = solve(s);
        for (int start = 0; start < 20; ++start) {
            Vec y0(s.n());
            for (int i = 0; i < s.n(); ++i) y0[i] = rng.uniform(-3.0, 3.0);
            Vec x;
            oracle::descent_min(s, &x, &y0);
            double d = 0.0;
            for (int i = 0; i < s.n(); ++i) d = std::max(d, rel(x[i], sol.x[i]));
            if (d > 1e-8) {
                res.fail(k, "start " + std::to_string(start) + " differs by " + std::to_string(d));
                break;
            }
        }
    }
    return res;
}

inline SuiteResult monotonicity(int count) {
    SuiteResult res{"monotonicity in w"};
    for (int k = 0; k < count; ++k, ++res.instances) {
        CounterRng rng(0);
        auto s = spec_for(2000 + k, &rng);
        auto s2 = s;
        for (int i = 0; i < s.n(); ++i) s2.w[i] += rng.below(2) ? rng.uniform(0.0, 2.0) : 0.0;
        double f = fval(s), f2 = fval(s2);
        if (f2 < f * (1 - 1e-12)) res.fail(k, "f decreased when weights grew");
    }
    return res;
}

inline SuiteResult concavity(int count) {
    SuiteResult res{"concavity in w"};
    for (int k = 0; k < count; ++k, ++res.instances) {
        CounterRng rng(0);
        auto s1 = spec_for(3000 + k, &rng);
        auto s2 = s1;
        for (int i = 0; i < s1.n(); ++i) s2.w[i] = rng.uniform(0.2, 5.0);
        double f1 = fval(s1), f2 = fval(s2);
        for (double a : {0.25, 0.5, 0.75}) {
            auto m = s1;
            m.w = a * s1.w + (1 - a) * s2.w;
            if (fval(m) < (a * f1 + (1 - a) * f2) * (1 - 1e-10)) {
                res.fail(k, "concavity violated at alpha " + std::to_string(a));
                break;
            }
        }
    }
    return res;
}

inline SuiteResult log_convexity(int count) {
    SuiteResult res{"log-convexity in t"};
    for (int k = 0; k < count; ++k, ++res.instances) {
        CounterRng rng(0);
        auto s = spec_for(4000 + k, &rng);
        const int parts = 2 + static_cast<int>(rng.below(2));
        std::vector<double> p(parts);
        double ps = 0.0;
        for (auto& v : p) ps += (v = rng.uniform(0.1, 1.0));
        Vec logt = Vec::Zero(s.r());
        double rhs = 0.0;
        for (int i = 0; i < parts; ++i) {
            auto si = s;
            for (int j = 0; j < s.r(); ++j) si.t[j] = std::exp(rng.uniform(-2.0, 2.0));
            logt += (p[i] / ps) * si.t.array().log().matrix();
            rhs += (p[i] / ps) * std::log(fval(si));
        }
        auto sm = s;
        sm.t = logt.array().exp().matrix();
        if (std::log(fval(sm)) > rhs + 1e-10) res.fail(k, "log f above the convex combination");
    }
    return res;
}

inline SuiteResult dilatation(int count) {
    SuiteResult res{"dilatation"};
    for (int k = 0; k < count; ++k, ++res.instances) {
        auto s = spec_for(5000 + k);
        double f = fval(s);
        Vec rowsum = s.A * Vec::Ones(s.n());
        for (double c : {-1.0, 0.5, 2.0}) {
            auto sd = s;
            sd.t = (s.t.array() * (c * rowsum.array()).exp()).matrix();
            if (rel(fval(sd), std::exp(c) * f) > 1e-9) {
                res.fail(k, "scaling by e^" + std::to_string(c) + " not reproduced");
                break;
            }
        }
    }
    return res;
}

inline SuiteResult relaxation(int count) {
    SuiteResult res{"relaxation"};
    for (int k = 0; k < count; ++k, ++res.instances) {
        CounterRng rng(kSeed, 6000 + k);
        int n = 3 + static_cast<int>(rng.below(4));
        int r = 2 + static_cast<int>(rng.below(n - 2));
        auto s = oracle::random_compact_spec(rng, n, r);
        int drop = static_cast<int>(rng.below(r));
        ProblemSpec s2;
        s2.w = s.w;
        s2.A.resize(r - 1, n);
        s2.t.resize(r - 1);
        for (int j = 0, q = 0; j < r; ++j)
            if (j != drop) {
                s2.A.row(q) = s.A.row(j);
                s2.t[q++] = s.t[j];
            }
        if (!check_compactness(s2).compact) continue;  // infimum not attained; nothing to compare
        if (fval(s2) > fval(s) * (1 + 1e-10)) res.fail(k, "dropping a row increased f");
    }
    return res;
}

// relabel nodes and arcs; also reverse every arc (anti-isomorphism)
inline SuiteResult isomorphism(int count) {
    SuiteResult res{"isomorphism invariance"};
    for (int k = 0; k < count; ++k, ++res.instances) {
        CounterRng rng(kSeed, 7000 + k);
        int n = 3 + static_cast<int>(rng.below(4));
        Digraph g = oracle::random_strong_graph(rng, n, 1 + static_cast<int>(rng.below(n + 1)), true);
        CircuitBasis b = circuit_basis(g);
        for (auto& t : b.targets) t = std::exp(rng.uniform(-1.0, 1.0));
        Solution s = f_gamma(g, b);

        const int m = g.arc_count();
        std::vector<int> pn(n), pa(m);
        std::iota(pn.begin(), pn.end(), 0);
        std::iota(pa.begin(), pa.end(), 0);
        for (int i = n - 1; i > 0; --i) std::swap(pn[i], pn[rng.below(i + 1)]);
        for (int i = m - 1; i > 0; --i) std::swap(pa[i], pa[rng.below(i + 1)]);
        Digraph h, rev;
        for (int v = 0; v < n; ++v) {
            h.add_node();
            rev.add_node();
        }
        std::vector<int> inv(m);
        for (int i = 0; i < m; ++i) inv[pa[i]] = i;
        for (int j = 0; j < m; ++j) {
            const Arc& a = g.arcs[inv[j]];  // new arc j is old arc inv[j]
            h.add_arc(pn[a.alpha], pn[a.beta], {}, a.weight);
        }
        for (const Arc& a : g.arcs) rev.add_arc(a.beta, a.alpha, {}, a.weight);
        CircuitBasis hb = b;
        for (auto& c : hb.circuits)
            for (int& a : c) a = pa[a];
        Solution sh = f_gamma(h, hb), sr = f_gamma(rev, b);
        double d = std::max(rel(sh.f, s.f), rel(sr.f, s.f));
        for (int a = 0; a < m; ++a) d = std::max({d, rel(sh.x[pa[a]], s.x[a]), rel(sr.x[a], s.x[a])});
        if (d > 1e-8) res.fail(k, "relabelled minimum differs by " + std::to_string(d));
    }
    return res;
}

inline SuiteResult tree_dilatation(int count) {
    SuiteResult res{"tree minimizer dilatation-monotone"};
    for (int k = 0; k < count; ++k, ++res.instances) {
        CounterRng rng(kSeed, 8000 + k);
        auto t = oracle::random_tree(rng, 2 + static_cast<int>(rng.below(9)));
        std::vector<double> tt(t.leaf_count());
        for (auto& v : tt) v = std::exp(rng.uniform(-1.0, 1.0));
        auto base = m_tree(t, tt);
        for (double r : {1.5, 3.0}) {
            std::vector<double> ts = tt;
            for (auto& v : ts) v *= r;
            auto big = m_tree(t, ts);
            if (((big.y - base.y).array() < -1e-9 * base.y.array()).any()) {
                res.fail(k, "some node value decreased under dilatation " + std::to_string(r));
                break;
            }
        }
    }
    return res;
}

inline SuiteResult spectrum(int count) {
    SuiteResult res{"linearization spectrum in [-h,0)"};
    int kernel = 0, outside_closed = 0;
    for (int k = 0; k < count; ++k, ++res.instances) {
        CounterRng rng(kSeed, 9000 + k);
        auto t = oracle::random_tree(rng, 2 + static_cast<int>(rng.below(11)));
        std::vector<double> tt(t.leaf_count());
        for (auto& v : tt) v = std::exp(rng.uniform(-1.0, 1.0));
        auto sol = m_tree(t, tt);
        auto lin = tree_linearization(t, sol.y);
        const double h = t.height();
        const double zero_tol = 1e-12 * std::max(1.0, -lin.min_eig);
        if (!(lin.min_eig >= -h - 1e-9 && lin.max_eig < -zero_tol)) {
            std::ostringstream os;
            os << "eigenvalues [" << lin.min_eig << ", " << lin.max_eig << "] with h = " << h;
            res.fail(k, os.str());
            // B = -diag(y) Q diag(1/y_v) Q^T has a kernel whenever the
            // internal-node columns of Q do not span the leaf space
            auto lv = t.leaves();
            Mat Q = Mat::Zero(static_cast<int>(lv.size()), t.size());
            for (std::size_t i = 0; i < lv.size(); ++i)
                for (int v = t.parent[lv[i]]; v >= 0; v = t.parent[v]) Q(static_cast<int>(i), v) = 1.0;
            if (Q.fullPivLu().rank() < static_cast<int>(lv.size())) ++kernel;
            if (lin.min_eig < -h - 1e-9 || lin.max_eig > zero_tol) ++outside_closed;
        }
    }
    if (res.failures) {
        std::ostringstream os;
        os << kernel << " of " << res.failures << " failures have a rank-deficient path matrix (zero eigenvalue); "
           << outside_closed << " lie outside [-h,0]";
        res.note = os.str();
    }
    return res;
}

inline std::vector<SuiteResult> all_suites(int count) {
    return {uniqueness(count),  monotonicity(count),    concavity(count),
            log_convexity(count), dilatation(count),    relaxation(count),
            isomorphism(count), tree_dilatation(count), spectrum(count)};
}

}  // namespace props
