#include "simplex.hpp"

#include <limits>
#include <vector>

#include "prodmin/errors.hpp"

namespace prodmin::detail {

LpResult simplex_max(const Eigen::MatrixXd& M, const Eigen::VectorXd& b,
                     const Eigen::VectorXd& c) {
    const int m = static_cast<int>(M.rows());
    const int nv = static_cast<int>(M.cols());
    const int width = nv + m + 1;
    const double eps = 1e-12;

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m + 1, width);
    T.topLeftCorner(m, nv) = M;
    T.block(0, nv, m, m).setIdentity();
    T.col(width - 1).head(m) = b;
    T.row(m).head(nv) = -c.transpose();

    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = nv + i;

    const int max_pivots = 50 * (m + nv) + 1000;
    for (int it = 0; it < max_pivots; ++it) {
        int enter = -1;
        for (int j = 0; j < nv + m; ++j)
            if (T(m, j) < -eps) { enter = j; break; }
        if (enter < 0) {
            LpResult res;
            res.x = Eigen::VectorXd::Zero(nv);
            for (int i = 0; i < m; ++i)
                if (basis[i] < nv) res.x[basis[i]] = T(i, width - 1);
            res.value = T(m, width - 1);
            return res;
        }
        int leave = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            if (T(i, enter) <= eps) continue;
            double ratio = T(i, width - 1) / T(i, enter);
            if (ratio < best - eps ||
                (ratio <= best + eps && leave >= 0 && basis[i] < basis[leave])) {
                best = ratio;
                leave = i;
            }
        }
        if (leave < 0) return {false, std::numeric_limits<double>::infinity(), {}};

        T.row(leave) /= T(leave, enter);
        for (int i = 0; i <= m; ++i) {
            if (i == leave) continue;
            double f = T(i, enter);
            if (f != 0.0) T.row(i) -= f * T.row(leave);
        }
        basis[leave] = enter;
    }
    throw Error(Errc::NoConvergence, "simplex: pivot limit reached");
}

}  // namespace prodmin::detail
