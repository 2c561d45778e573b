#include "prodmin/shallit.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace prodmin {

bool Pattern::contains(int m) const {
    if (m < 0) return false;
    if (tail_from && m >= *tail_from) return true;
    return std::binary_search(finite.begin(), finite.end(), m);
}

Pattern parse_pattern(const std::string& s) {
    Pattern p;
    std::stringstream ss(s);
    std::string tok;
    std::vector<std::string> toks;
    while (std::getline(ss, tok, ',')) {
        tok.erase(std::remove_if(tok.begin(), tok.end(), [](unsigned char c) { return std::isspace(c); }),
                  tok.end());
        toks.push_back(tok);
    }
    if (toks.empty()) throw Error(Errc::Parse, "pattern is empty");
    for (size_t k = 0; k < toks.size(); ++k) {
        std::string t = toks[k];
        bool tail = t.size() > 2 && t.compare(t.size() - 2, 2, "..") == 0;
        if (tail) {
            if (k + 1 != toks.size()) throw Error(Errc::Parse, "pattern tail 'k..' must come last");
            t.resize(t.size() - 2);
        }
        if (t.empty() || !std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); }))
            throw Error(Errc::Parse, "pattern item " + std::to_string(k + 1) + " is not a non-negative integer");
        int v = std::stoi(t);
        if (tail)
            p.tail_from = v;
        else
            p.finite.push_back(v);
    }
    std::sort(p.finite.begin(), p.finite.end());
    p.finite.erase(std::unique(p.finite.begin(), p.finite.end()), p.finite.end());
    if (p.tail_from)
        p.finite.erase(std::remove_if(p.finite.begin(), p.finite.end(),
                                      [&](int m) { return m >= *p.tail_from; }),
                       p.finite.end());
    return p;
}

std::string to_string(const Pattern& p) {
    std::string s;
    for (int m : p.finite) s += (s.empty() ? "" : ",") + std::to_string(m);
    if (p.tail_from) s += (s.empty() ? "" : ",") + std::to_string(*p.tail_from) + "..";
    return s;
}

Pattern full_pattern() { return Pattern{{}, 0}; }

Digraph build_pattern_graph(int n, const Pattern& p) {
    if (n < 1) throw Error(Errc::BadShape, "need n >= 1");
    Digraph g;
    for (int v = 0; v <= n; ++v) g.add_node(std::to_string(v));
    for (int i = 1; i <= n; ++i) g.add_arc(i - 1, i, "a" + std::to_string(i));
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j)
            if (p.contains(j - i)) g.add_arc(j, i - 1, "b" + std::to_string(i) + "_" + std::to_string(j));
    return g;
}

Digraph build_shallit_graph(int n) { return build_pattern_graph(n, full_pattern()); }

Digraph build_simplified_graph(int n) {
    if (n < 1) throw Error(Errc::BadShape, "need n >= 1");
    Digraph g;
    for (int v = 0; v <= n; ++v) g.add_node(std::to_string(v));
    for (int i = 1; i <= n; ++i) g.add_arc(i - 1, i, "a" + std::to_string(i));
    for (int i = 1; i <= n; ++i) g.add_arc(i, i - 1, "r" + std::to_string(i));
    for (int i = 1; i < n; ++i) {
        if (i % 2)
            g.add_arc(i - 1, i + 1, "b" + std::to_string(i));
        else
            g.add_arc(i + 1, i - 1, "b" + std::to_string(i));
    }
    return g;
}

double tail_weighted_sum(int k, double x) {
    return std::pow(x, k + 1) * ((k + 1) - k * x) / ((1 - x) * (1 - x));
}

double tail_sum(int k, double x) { return std::pow(x, k + 1) / (1 - x); }

PatternRoots pattern_roots(const Pattern& p) {
    if (p.finite.empty() && !p.tail_from) throw Error(Errc::BadData, "pattern is empty");
    auto rhs = [&](double rho) {
        double x = 1.0 / rho, s = 0.0;
        for (int m : p.finite) s += (m + 1) * std::pow(x, m + 1);
        if (p.tail_from) s += tail_weighted_sum(*p.tail_from, x);
        return s;
    };
    auto lambda_at = [&](double rho) {
        double x = 1.0 / rho, s = rho;
        for (int m : p.finite) s += std::pow(x, m + 1);
        if (p.tail_from) s += tail_sum(*p.tail_from, x);
        return s;
    };

    PatternRoots r;
    if (!p.tail_from) {
        double at_one = 0.0;
        for (int m : p.finite) at_one += m + 1;
        if (at_one <= 1.0) {
            // rho = rho^{-1} type equation: no root above 1, terms separate
            r.rho = 1.0;
            r.lambda = lambda_at(1.0);
            r.degenerate = true;
            return r;
        }
    }
    double lo = 1.0, hi = 64.0;
    if (!(hi - rhs(hi) > 0.0)) throw Error(Errc::NoBracket, "no root of the pattern equation below 64");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (mid - rhs(mid) < 0.0 ? lo : hi) = mid;
    }
    r.rho = 0.5 * (lo + hi);
    r.lambda = lambda_at(r.rho);
    return r;
}

ShallitResult shallit_minimum(int n, const Pattern& p, const SolveOptions& opt) {
    bool full = p.tail_from && *p.tail_from == 0;
    Digraph g = full ? build_simplified_graph(n) : build_pattern_graph(n, p);
    auto q = quotient_min(g, opt);
    ShallitResult s;
    s.m = q.f;
    s.lambda = pattern_roots(p).lambda;
    s.defect = s.lambda * n - s.m;
    s.iterations = q.iterations;
    return s;
}

double shallit_sum(const Vec& x, const Pattern& p) {
    const int n = static_cast<int>(x.size());
    double s = x.sum();
    for (int i = 0; i < n; ++i) {
        double prod = 1.0;
        for (int j = i; j < n; ++j) {
            prod /= x[j];
            if (p.contains(j - i)) s += prod;
        }
    }
    return s;
}

ConstantEstimate asymptotic_constant(const Pattern& p, int n_from, int n_to, const SolveOptions& opt) {
    if (n_from < 1 || n_to < n_from) throw Error(Errc::BadData, "need 1 <= from <= to");
    ConstantEstimate c;
    for (int n = n_from; n <= n_to; ++n) {
        auto s = shallit_minimum(n, p, opt);
        c.n.push_back(n);
        c.defect.push_back(s.defect);
        if (c.defect.size() > 1)
            c.diffs.push_back(std::abs(c.defect.back() - c.defect[c.defect.size() - 2]));
    }
    c.estimate = c.defect.back();
    return c;
}

}  // namespace prodmin
