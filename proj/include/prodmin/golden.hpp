#pragma once

#include <string>
#include <vector>

#include "prodmin/trees.hpp"

namespace prodmin {

struct GoldenRow {
    std::string label;
    std::string code;
    double m = 0.0;
    std::vector<double> leaves;  // depth-first leaf order; empty when not tabulated
};

const std::vector<GoldenRow>& golden_rows();

struct GoldenCheck {
    GoldenRow row;
    double m = 0.0;
    std::vector<double> leaves;
    double m_error = 0.0;
    double leaf_error = 0.0;
    bool ok = false;
};

struct GoldenReport {
    std::vector<GoldenCheck> rows;
    bool ok = true;
};

inline constexpr double kGoldenMinTol = 1e-6;
inline constexpr double kGoldenLeafTol = 1e-5;

// recomputes every row; throws Mismatch listing offending rows unless
// `report_only`
GoldenReport golden_table(TreeMethod method = TreeMethod::Newton, bool report_only = false);

}  // namespace prodmin
