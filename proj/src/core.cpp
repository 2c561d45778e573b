#include "prodmin/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "simplex.hpp"

namespace prodmin {

namespace {

std::vector<int> essential_indices(const Mat& A) {
    std::vector<int> e;
    for (int i = 0; i < A.cols(); ++i)
        if ((A.col(i).array() != 0.0).any()) e.push_back(i);
    return e;
}

Mat columns(const Mat& A, const std::vector<int>& idx) {
    Mat out(A.rows(), static_cast<Eigen::Index>(idx.size()));
    for (size_t k = 0; k < idx.size(); ++k) out.col(k) = A.col(idx[k]);
    return out;
}

}  // namespace

ValidationReport validate(const ProblemSpec& spec) {
    const int n = spec.n(), r = spec.r();
    if (spec.A.cols() != n) {
        std::ostringstream os;
        os << "exponent matrix has " << spec.A.cols() << " columns, expected " << n;
        throw Error(Errc::BadData, os.str());
    }
    if (spec.t.size() != r) throw Error(Errc::BadData, "target count differs from row count");
    if (!spec.names.empty() && static_cast<int>(spec.names.size()) != n)
        throw Error(Errc::BadData, "name count differs from variable count");
    for (int i = 0; i < n; ++i)
        if (!(spec.w[i] > 0.0) || !std::isfinite(spec.w[i]))
            throw Error(Errc::BadData, "weight " + std::to_string(i) + " is not positive");
    for (int j = 0; j < r; ++j)
        if (!(spec.t[j] > 0.0) || !std::isfinite(spec.t[j]))
            throw Error(Errc::BadData, "target " + std::to_string(j) + " is not positive");
    if (!spec.A.allFinite()) throw Error(Errc::BadData, "exponent matrix has non-finite entries");

    ValidationReport rep;
    if (r > 0) {
        Eigen::JacobiSVD<Mat> svd(spec.A);
        const Vec& s = svd.singularValues();
        double smax = s.size() ? s[0] : 0.0;
        for (int k = 0; k < s.size(); ++k)
            if (smax > 0.0 && s[k] > kRankTol * smax) ++rep.rank;
        if (rep.rank < r) {
            std::ostringstream os;
            os << "constraint rows are dependent: rank " << rep.rank << " < " << r;
            throw Error(Errc::RankDeficient, os.str());
        }
    }
    for (int i = 0; i < n; ++i)
        if (!(spec.A.col(i).array() != 0.0).any()) rep.nonessential.push_back(i);
    return rep;
}

CompactnessReport check_compactness(const ProblemSpec& spec) {
    const int r = spec.r();
    CompactnessReport rep;
    if (r == 0) {
        rep.compact = true;
        rep.mu = Vec();
        rep.margin = std::numeric_limits<double>::infinity();
        return rep;
    }
    auto ess = essential_indices(spec.A);
    const int ne = static_cast<int>(ess.size());
    Mat Ae = columns(spec.A, ess);
    Vec colsum = Ae.colwise().sum().transpose();
    double big = std::max(0.0, colsum.maxCoeff()) + 1.0;

    // variables: m_j = mu_j + 1 in [0,2], e = delta + big >= 0
    Mat M = Mat::Zero(ne + r, r + 1);
    Vec b(ne + r);
    for (int i = 0; i < ne; ++i) {
        M.row(i).head(r) = -Ae.col(i).transpose();
        M(i, r) = 1.0;
        b[i] = big - colsum[i];
    }
    for (int j = 0; j < r; ++j) {
        M(ne + j, j) = 1.0;
        b[ne + j] = 2.0;
    }
    Vec c = Vec::Zero(r + 1);
    c[r] = 1.0;
    auto lp = detail::simplex_max(M, b, c);

    rep.mu = lp.x.head(r).array() - 1.0;
    rep.margin = (rep.mu.transpose() * Ae).minCoeff();
    rep.compact = rep.margin > kMarginTol;
    return rep;
}

Vec recover_multipliers(const ProblemSpec& spec, const Vec& x) {
    if (spec.r() == 0) return Vec();
    auto ess = essential_indices(spec.A);
    Mat AeT = columns(spec.A, ess).transpose();
    Vec g(ess.size());
    for (size_t k = 0; k < ess.size(); ++k) g[k] = spec.w[ess[k]] * x[ess[k]];
    return AeT.colPivHouseholderQr().solve(g);
}

double critical_residual(const ProblemSpec& spec, const Vec& x, const Vec& lambda) {
    if (spec.r() == 0) return 0.0;
    auto ess = essential_indices(spec.A);
    double scale = 1.0, res = 0.0;
    for (int i : ess) scale = std::max(scale, spec.w[i] * x[i]);
    Vec atl = spec.A.transpose() * lambda;
    for (int i : ess) res = std::max(res, std::abs(atl[i] - spec.w[i] * x[i]) / scale);
    for (int j = 0; j < spec.r(); ++j) {
        double s = -std::log(spec.t[j]);
        for (int i : ess) {
            if (!(x[i] > 0.0)) return std::numeric_limits<double>::infinity();
            s += spec.A(j, i) * std::log(x[i]);
        }
        res = std::max(res, std::abs(s));
    }
    return res;
}

Solution solve(const ProblemSpec& spec, const SolveOptions& opt) {
    auto vrep = validate(spec);
    const int n = spec.n(), r = spec.r();

    Solution sol;
    sol.nonessential = vrep.nonessential;
    sol.x = Vec::Zero(n);
    if (r == 0) {
        sol.lambda = Vec();
        return sol;
    }
    auto crep = check_compactness(spec);
    if (!crep.compact) {
        std::ostringstream os;
        os << "constraint system is not compact (margin " << crep.margin << ")";
        throw Error(Errc::NonCompact, os.str());
    }

    auto ess = essential_indices(spec.A);
    const int ne = static_cast<int>(ess.size());
    Mat Ae = columns(spec.A, ess);
    Vec we(ne);
    for (int k = 0; k < ne; ++k) we[k] = spec.w[ess[k]];
    Vec b = spec.t.array().log();

    Eigen::HouseholderQR<Mat> qr(Ae.transpose());
    Mat Q = qr.householderQ() * Mat::Identity(ne, ne);
    Mat Q1 = Q.leftCols(r);
    Mat Z = Q.rightCols(ne - r);
    Mat R = qr.matrixQR().topLeftCorner(r, r).triangularView<Eigen::Upper>();
    auto Rt = R.transpose().triangularView<Eigen::Lower>();
    Vec y = Q1 * Rt.solve(b);

    auto objective = [&](const Vec& yy) { return we.dot(yy.array().exp().matrix()); };

    auto fill = [&](Solution& s, const Vec& yy, int iters) {
        s.x.setZero();
        for (int k = 0; k < ne; ++k) s.x[ess[k]] = std::exp(yy[k]);
        Vec g = we.array() * yy.array().exp();
        s.lambda = R.triangularView<Eigen::Upper>().solve(Q1.transpose() * g);
        s.f = g.sum();
        s.iterations = iters;
        s.residual = critical_residual(spec, s.x, s.lambda);
    };

    double F = objective(y);
    for (int it = 0;; ++it) {
        fill(sol, y, it);
        if (sol.residual <= opt.tol) return sol;
        if (it >= opt.max_iter || ne == r) break;

        Vec g = we.array() * y.array().exp();
        Vec grad = Z.transpose() * g;
        Mat H = Z.transpose() * g.asDiagonal() * Z;
        Vec dz;
        Eigen::LLT<Mat> llt(H);
        if (llt.info() == Eigen::Success)
            dz = -llt.solve(grad);
        else
            dz = -H.ldlt().solve(grad);
        Vec dy = Z * dz;
        double slope = grad.dot(dz);
        if (!(slope < 0.0)) break;

        double alpha = 1.0, Fn = 0.0;
        Vec yn;
        if (-slope <= 1e-12 * F) {
            // Newton decrement below roundoff of F: the Armijo test is noise
            // here, and the full step is inside the quadratic region
            y += dy;
            F = objective(y);
            continue;
        }
        for (;;) {
            yn = y + alpha * dy;
            Fn = objective(yn);
            if (Fn <= F + 1e-4 * alpha * slope) break;
            alpha *= 0.5;
            if (alpha < 1e-14) break;
        }
        if (alpha < 1e-14) {
            // at roundoff level the Armijo test can fail; accept the full step
            // only if it does not make things worse
            yn = y + dy;
            Fn = objective(yn);
            if (!(Fn <= F * (1.0 + 1e-14))) break;
        }
        y = yn;
        F = Fn;
        if (y.minCoeff() < opt.y_floor)
            throw Error(Errc::NonCompact, "iterate diverged: log x fell below the floor");
    }
    std::ostringstream os;
    os << "no convergence after " << sol.iterations << " iterations, residual "
       << sol.residual;
    throw NoConvergenceError(os.str(), sol);
}

}  // namespace prodmin
