#pragma once

#include <Eigen/Dense>

namespace prodmin::detail {

struct LpResult {
    bool bounded = true;
    double value = 0.0;
    Eigen::VectorXd x;
};

// max c.x  s.t.  M x <= b, x >= 0, with b >= 0 (origin feasible).
// Dense tableau, Bland's rule.
LpResult simplex_max(const Eigen::MatrixXd& M, const Eigen::VectorXd& b,
                     const Eigen::VectorXd& c);

}  // namespace prodmin::detail
