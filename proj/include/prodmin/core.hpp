#pragma once

// minimize <x,w> subject to prod_i x_i^{A_ji} = t_j, x >= 0

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "prodmin/errors.hpp"

namespace prodmin {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct ProblemSpec {
    Vec w;  // n positive weights
    Mat A;  // r x n exponents
    Vec t;  // r positive targets
    std::vector<std::string> names;

    int n() const { return static_cast<int>(w.size()); }
    int r() const { return static_cast<int>(A.rows()); }
};

struct Solution {
    Vec x;
    Vec lambda;
    double f = 0.0;
    int iterations = 0;
    // max of both critical-point defects: |A^T lambda - w.x| (relative to
    // max(1, max w_i x_i)) and |A log x - log t| over essential variables
    double residual = 0.0;
    std::vector<int> nonessential;
};

struct ValidationReport {
    int rank = 0;
    std::vector<int> nonessential;
};

struct CompactnessReport {
    bool compact = false;
    Vec mu;
    double margin = 0.0;  // +inf for an empty constraint system
};

struct SolveOptions {
    double tol = 1e-10;
    int max_iter = 200;
    double y_floor = -60.0;  // divergence guard in log coordinates
};

inline constexpr double kRankTol = 1e-10;
inline constexpr double kMarginTol = 1e-9;

class NoConvergenceError : public Error {
public:
    NoConvergenceError(const std::string& what, Solution best)
        : Error(Errc::NoConvergence, what), best_(std::move(best)) {}
    const Solution& best() const { return best_; }

private:
    Solution best_;
};

ValidationReport validate(const ProblemSpec& spec);
CompactnessReport check_compactness(const ProblemSpec& spec);
Solution solve(const ProblemSpec& spec, const SolveOptions& opt = {});

// multipliers by least squares and the residual of the critical-point system
Vec recover_multipliers(const ProblemSpec& spec, const Vec& x);
double critical_residual(const ProblemSpec& spec, const Vec& x, const Vec& lambda);

struct PhiResult {
    Solution sol;
    Vec y;
    std::vector<double> eps_norms;  // |eps|_inf before each step and after the last
};

// Newton map Phi on (x, y) with x in N_x and A y = log t
PhiResult solve_phi_iteration(const ProblemSpec& spec, const Vec& x0, const Vec& y0,
                              int steps);

struct AmgmResult {
    double f = 0.0;
    Vec x;
};

AmgmResult amgm_closed_form(const Vec& w, const Vec& rho, double t);

struct Sensitivities {
    Mat dx_dt;         // n x r
    Mat dx_dw;         // n x n
    Vec df_dw;         // n
    Mat dlambda_dlogt; // r x r, equals G^{-1}
};

Sensitivities sensitivities(const ProblemSpec& spec, const Solution& sol);

ProblemSpec normalize_weights(const ProblemSpec& spec);

// orbits: partition of 0..n-1; rows that become identical are merged
ProblemSpec symmetry_reduce(const ProblemSpec& spec,
                            const std::vector<std::vector<int>>& orbits);
Vec lift_orbits(const Vec& reduced_x, const std::vector<std::vector<int>>& orbits,
                int n);

}  // namespace prodmin
