#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "prodmin/shallit.hpp"

using namespace prodmin;

TEST_CASE("patterns parse and print") {
    CHECK(parse_pattern("0..") == full_pattern());
    auto p = parse_pattern("0,2,7..");
    CHECK(p.finite == std::vector<int>{0, 2});
    CHECK(p.tail_from == 7);
    CHECK(p.contains(2));
    CHECK_FALSE(p.contains(3));
    CHECK(p.contains(100));
    CHECK(parse_pattern(to_string(p)) == p);
    CHECK(parse_pattern("5,1,1") == parse_pattern("1,5"));
    CHECK(parse_pattern("3,9,2..") == parse_pattern("2.."));
    for (const char* bad : {"", "x", "-1", "1,,2", "1..,3"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_pattern(bad), Error);
    }
}

TEST_CASE("graph builders") {
    auto g = build_shallit_graph(4);
    CHECK(g.node_count == 5);
    CHECK(g.arc_count() == 4 + 4 * 5 / 2);
    CHECK(is_strongly_connected(g));
    auto s = build_simplified_graph(6);
    CHECK(s.arc_count() == 3 * 6 - 1);
    auto p = build_pattern_graph(6, parse_pattern("1.."));
    CHECK(p.arc_count() == 6 + 5 * 6 / 2);
}

TEST_CASE("Shallit minimum agrees with direct descent on the sum") {
    for (const char* pat : {"0..", "1..", "0,2", "0,3.."}) {
        auto p = parse_pattern(pat);
        for (int n = 1; n <= 7; ++n) {
            auto r = shallit_minimum(n, p);
            auto F = [&](const Vec& u, Vec& g) {
                Vec x = u.array().exp();
                double f = shallit_sum(x, p);
                g.resize(u.size());
                for (int i = 0; i < u.size(); ++i) {
                    Vec up = u, um = u;
                    up[i] += 1e-6;
                    um[i] -= 1e-6;
                    g[i] = (shallit_sum(up.array().exp().matrix(), p) - shallit_sum(um.array().exp().matrix(), p)) / 2e-6;
                }
                return f;
            };
            Vec u = oracle::descend(F, Vec::Zero(n), 20000, 1e-9);
            Vec g;
            CAPTURE(pat);
            CAPTURE(n);
            CHECK(r.m == doctest::Approx(F(u, g)).epsilon(1e-8));
            CHECK(r.defect == doctest::Approx(r.lambda * n - r.m).epsilon(1e-12));
        }
    }
}

TEST_CASE("full pattern: simplified graph, full graph and quotient minimum agree") {
    for (int n = 1; n <= 10; ++n) {
        auto r = shallit_minimum(n, full_pattern());
        CHECK(quotient_min(build_shallit_graph(n)).f == doctest::Approx(r.m).epsilon(1e-10));
        CHECK(quotient_min(build_simplified_graph(n)).f == doctest::Approx(r.m).epsilon(1e-10));
    }
}

TEST_CASE("rates and limits") {
    auto full = pattern_roots(full_pattern());
    CHECK(std::abs(full.rho - 2.0) < 1e-12);
    CHECK(std::abs(full.lambda - 3.0) < 1e-12);
    auto one = pattern_roots(parse_pattern("1.."));
    CHECK(one.rho == doctest::Approx(1.883203506).epsilon(1e-8 / 1.9));
    CHECK(one.lambda == doctest::Approx(2.484435332).epsilon(1e-8 / 2.5));
    auto zero = pattern_roots(parse_pattern("0"));
    CHECK(zero.degenerate);
    CHECK(zero.lambda == doctest::Approx(2.0));
}

TEST_CASE("defects converge to the asymptotic constants") {
    CHECK(shallit_minimum(50, full_pattern()).defect == doctest::Approx(1.3694514).epsilon(1e-5 / 1.37));
    CHECK(shallit_minimum(60, parse_pattern("1..")).defect == doctest::Approx(2.0112096).epsilon(1e-4 / 2.0));
    auto c = asymptotic_constant(full_pattern(), 20, 40);
    CHECK(c.estimate == doctest::Approx(1.3694514).epsilon(1e-6));
    CHECK(c.diffs.back() < 1e-9);
}

TEST_CASE("tail sums match truncated series") {
    for (int k : {0, 1, 4})
        for (double x : {0.1, 0.5, 0.9}) {
            double a = 0, b = 0;
            for (int m = k; m < 2000; ++m) {
                a += (m + 1) * std::pow(x, m + 1);
                b += std::pow(x, m + 1);
            }
            CHECK(tail_weighted_sum(k, x) == doctest::Approx(a).epsilon(1e-12));
            CHECK(tail_sum(k, x) == doctest::Approx(b).epsilon(1e-12));
        }
}
