#include "prodmin/golden.hpp"

#include <algorithm>
#include <cmath>

namespace prodmin {

const std::vector<GoldenRow>& golden_rows() {
    static const std::vector<GoldenRow> rows = {
        {"T1,1", "[]", 1.0, {1.0}},
        {"T2,1", "[[]]", 2.0, {1.0}},
        {"T3,1", "[[]^2]", 2.828427, {0.707107, 0.707107}},
        {"T3,2", "[[[]]]", 3.0, {1.0}},
        {"T4,1", "[[]^3]", 3.464102, {0.577350, 0.577350, 0.577350}},
        {"T4,2", "[[[]^2]]", 3.779763, {0.629961, 0.629961}},
        {"T4,3", "[[][[]]]", 3.799605, {0.671044, 0.819173}},
        {"T4,4", "[[[[]]]]", 4.0, {1.0}},
        {"T5,1", "[[]^4]", 4.0, {0.5, 0.5, 0.5, 0.5}},
        {"T5,2", "[[[]^3]]", 4.326749, {0.480750, 0.480750, 0.480750}},
        {"T5,3", "[[]^2[[]]]", 4.401338, {0.546097, 0.546097, 0.738984}},
        {"T5,4", "[[][[]^2]]", 4.457410, {0.593905, 0.544933, 0.544933}},
        {"T5,5", "[[[][[]]]]", 4.729032, {0.569841, 0.754877}},
        {"T5,6", "[[[[]^2]]]", 4.756828, {0.594604, 0.594604}},
        {"T5,7", "[[[]]^2]", 4.762203, {0.793701, 0.793701}},
        {"T5,8", "[[][[[]]]]", 4.787079, {0.655866, 0.868837}},
        {"T5,9", "[[[[[]]]]]", 5.0, {1.0}},
        {"T6,*", "[[][[][[]]]]", 5.377468, {0.571120, 0.484072, 0.695753}},
    };
    return rows;
}

GoldenReport golden_table(TreeMethod method, bool report_only) {
    GoldenReport rep;
    std::string bad;
    for (const auto& row : golden_rows()) {
        GoldenCheck c;
        c.row = row;
        RootedTree t = parse_tree_code(row.code);
        auto sol = m_tree(t, {}, method);
        c.m = sol.m;
        for (int v : t.leaves()) c.leaves.push_back(sol.y[v]);
        c.m_error = std::abs(c.m - row.m);
        if (!row.leaves.empty()) {
            if (row.leaves.size() != c.leaves.size()) {
                c.leaf_error = INFINITY;
            } else {
                for (std::size_t i = 0; i < c.leaves.size(); ++i)
                    c.leaf_error = std::max(c.leaf_error, std::abs(c.leaves[i] - row.leaves[i]));
            }
        }
        c.ok = c.m_error <= kGoldenMinTol && c.leaf_error <= kGoldenLeafTol;
        if (!c.ok) {
            rep.ok = false;
            bad += (bad.empty() ? "" : ", ") + row.label;
        }
        rep.rows.push_back(std::move(c));
    }
    if (!rep.ok && !report_only) throw Error(Errc::Mismatch, "golden rows differ: " + bad);
    return rep;
}

}  // namespace prodmin
