#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "prodmin/core.hpp"

namespace prodmin {

PhiResult solve_phi_iteration(const ProblemSpec& spec, const Vec& x0, const Vec& y0,
                              int steps) {
    auto vrep = validate(spec);
    const int n = spec.n();
    if (x0.size() != n || y0.size() != n) throw Error(Errc::BadData, "start has wrong length");
    if (!vrep.nonessential.empty())
        throw Error(Errc::ZeroComponent, "nonessential variables are pinned at zero");
    for (int i = 0; i < n; ++i)
        if (!(x0[i] > 0.0))
            throw Error(Errc::ZeroComponent, "start x0 has a non-positive component");

    const Mat& A = spec.A;
    Vec logt = spec.t.array().log();
    double ydef = (A * y0 - logt).lpNorm<Eigen::Infinity>();
    if (ydef > 1e-8 * std::max(1.0, logt.lpNorm<Eigen::Infinity>()))
        throw Error(Errc::BadData, "start y0 does not satisfy A y = log t");
    Vec wx = spec.w.cwiseProduct(x0);
    Vec lam0 = A.transpose().colPivHouseholderQr().solve(wx);
    if ((A.transpose() * lam0 - wx).lpNorm<Eigen::Infinity>() >
        1e-8 * std::max(1.0, wx.lpNorm<Eigen::Infinity>()))
        throw Error(Errc::BadData, "start x0 is not of the form W^-1 A^T lambda");

    PhiResult res;
    Vec x = x0, y = y0;
    auto eps_of = [&]() -> Vec { return y.array() - x.array().log(); };
    for (int k = 0; k < steps; ++k) {
        for (int i = 0; i < n; ++i)
            if (!(x[i] > 0.0))
                throw Error(Errc::ZeroComponent,
                            "component " + std::to_string(i) + " left the positive orthant");
        Vec eps = eps_of();
        res.eps_norms.push_back(eps.lpNorm<Eigen::Infinity>());
        Vec d = (spec.w.cwiseProduct(x)).cwiseInverse();
        Mat G = A * d.asDiagonal() * A.transpose();
        Eigen::LDLT<Mat> ldlt(G);
        if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-14))
            throw Error(Errc::SingularStep, "Gram matrix is numerically singular");
        Vec mu = ldlt.solve(A * eps);
        Vec u = (A.transpose() * mu).cwiseQuotient(spec.w);
        Vec v = u.cwiseQuotient(x) - eps;
        x += u;
        y += v;
    }
    bool positive = (x.array() > 0.0).all();
    double last = positive ? eps_of().lpNorm<Eigen::Infinity>()
                           : std::numeric_limits<double>::infinity();
    res.eps_norms.push_back(last);

    res.sol.x = x;
    res.sol.lambda = recover_multipliers(spec, x);
    res.sol.f = spec.w.dot(x);
    res.sol.iterations = steps;
    res.sol.residual = last;
    res.y = y;
    return res;
}

AmgmResult amgm_closed_form(const Vec& w, const Vec& rho, double t) {
    const int n = static_cast<int>(w.size());
    if (rho.size() != n) throw Error(Errc::BadData, "weights and exponents differ in length");
    if (!(t > 0.0)) throw Error(Errc::BadData, "target must be positive");
    for (int i = 0; i < n; ++i)
        if (!(w[i] > 0.0)) throw Error(Errc::BadData, "weights must be positive");

    bool pos = false, neg = false;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        if (rho[i] > 0.0) pos = true;
        if (rho[i] < 0.0) neg = true;
        total += rho[i];
    }
    if (!pos && !neg) throw Error(Errc::BadExponent, "all exponents vanish");
    if (pos && neg)
        throw Error(Errc::BadExponent, "exponents of both signs: no minimizer exists");

    // a row of negative exponents is the same constraint with t -> 1/t
    double logf = std::log(std::abs(total)) + std::log(t) / total;
    for (int i = 0; i < n; ++i)
        if (rho[i] != 0.0)
            logf += (rho[i] / total) * std::log(w[i] / std::abs(rho[i]));

    AmgmResult res;
    res.f = std::exp(logf);
    res.x = Vec::Zero(n);
    for (int i = 0; i < n; ++i)
        if (rho[i] != 0.0) res.x[i] = rho[i] / total * res.f / w[i];
    return res;
}

Sensitivities sensitivities(const ProblemSpec& spec, const Solution& sol) {
    auto vrep = validate(spec);
    if (!vrep.nonessential.empty())
        throw Error(Errc::BadData, "sensitivities need every variable to be essential");
    const int n = spec.n(), r = spec.r();
    const Mat& A = spec.A;
    const Vec& x = sol.x;

    Vec d = (spec.w.cwiseProduct(x)).cwiseInverse();
    Mat G = A * d.asDiagonal() * A.transpose();
    Eigen::LDLT<Mat> ldlt(G);
    if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-13))
        throw Error(Errc::SingularG, "Gram matrix is not invertible");
    Mat Ginv = ldlt.solve(Mat::Identity(r, r));

    Sensitivities s;
    s.dlambda_dlogt = Ginv;
    Vec winv = spec.w.cwiseInverse();
    s.dx_dt = winv.asDiagonal() * A.transpose() * Ginv *
              spec.t.cwiseInverse().asDiagonal();
    Mat P = A.transpose() * Ginv * A;  // n x n
    s.dx_dw = winv.asDiagonal() * (P * winv.asDiagonal() - Mat(x.asDiagonal()));
    s.df_dw = x;
    (void)n;
    return s;
}

ProblemSpec normalize_weights(const ProblemSpec& spec) {
    validate(spec);
    ProblemSpec out = spec;
    Vec logw = spec.w.array().log();
    out.t = (spec.t.array().log() + (spec.A * logw).array()).exp();
    out.w = Vec::Ones(spec.n());
    return out;
}

ProblemSpec symmetry_reduce(const ProblemSpec& spec,
                            const std::vector<std::vector<int>>& orbits) {
    validate(spec);
    const int n = spec.n(), r = spec.r();
    const int m = static_cast<int>(orbits.size());
    std::vector<int> seen(n, 0);
    for (const auto& orb : orbits) {
        if (orb.empty()) throw Error(Errc::BadData, "empty orbit");
        for (int i : orb) {
            if (i < 0 || i >= n) throw Error(Errc::BadData, "orbit index out of range");
            ++seen[i];
        }
    }
    for (int i = 0; i < n; ++i)
        if (seen[i] != 1) throw Error(Errc::BadData, "orbits do not partition the variables");

    auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
    };
    // a symmetry may permute constraints, so compare each column as the
    // multiset of (exponent, log target) pairs
    auto signature = [&](int i) {
        std::vector<std::pair<double, double>> sig(r);
        for (int j = 0; j < r; ++j) sig[j] = {spec.A(j, i), std::log(spec.t[j])};
        std::sort(sig.begin(), sig.end());
        return sig;
    };
    for (const auto& orb : orbits) {
        auto s0 = signature(orb[0]);
        for (int i : orb) {
            if (!close(spec.w[i], spec.w[orb[0]]))
                throw Error(Errc::NotInvariant, "weights differ within an orbit");
            auto si = signature(i);
            for (int j = 0; j < r; ++j)
                if (!close(si[j].first, s0[j].first) || !close(si[j].second, s0[j].second))
                    throw Error(Errc::NotInvariant, "constraint columns differ within an orbit");
        }
    }

    Mat AG = Mat::Zero(r, m);
    Vec wG = Vec::Zero(m);
    for (int k = 0; k < m; ++k)
        for (int i : orbits[k]) {
            wG[k] += spec.w[i];
            AG.col(k) += spec.A.col(i);
        }
    std::vector<int> keep;
    for (int j = 0; j < r; ++j) {
        bool dup = false;
        for (int k : keep) {
            bool same = true;
            for (int c = 0; c < m && same; ++c) same = close(AG(j, c), AG(k, c));
            if (same) {
                if (!close(std::log(spec.t[j]), std::log(spec.t[k])))
                    throw Error(Errc::NotInvariant, "merged constraints have different targets");
                dup = true;
                break;
            }
        }
        if (!dup) keep.push_back(j);
    }

    ProblemSpec out;
    out.w = wG;
    out.A.resize(static_cast<Eigen::Index>(keep.size()), m);
    out.t.resize(static_cast<Eigen::Index>(keep.size()));
    for (size_t k = 0; k < keep.size(); ++k) {
        out.A.row(k) = AG.row(keep[k]);
        out.t[k] = spec.t[keep[k]];
    }
    if (!spec.names.empty())
        for (const auto& orb : orbits) {
            std::string nm;
            for (int i : orb) nm += (nm.empty() ? "" : "+") + spec.names[i];
            out.names.push_back(nm);
        }
    try {
        validate(out);
    } catch (const Error& e) {
        if (e.code() == Errc::RankDeficient)
            throw Error(Errc::NotInvariant, "reduced constraints are dependent");
        throw;
    }
    return out;
}

Vec lift_orbits(const Vec& reduced_x, const std::vector<std::vector<int>>& orbits, int n) {
    Vec x(n);
    for (size_t k = 0; k < orbits.size(); ++k)
        for (int i : orbits[k]) x[i] = reduced_x[static_cast<Eigen::Index>(k)];
    return x;
}

}  // namespace prodmin
