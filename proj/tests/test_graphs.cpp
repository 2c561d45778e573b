#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "prodmin/graphs.hpp"

using namespace prodmin;

TEST_CASE("strong components, condensation and final components") {
    // 0 <-> 1 -> 2 <-> 3, plus a pendant 4 -> 0
    Digraph g;
    for (int i = 0; i < 5; ++i) g.add_node();
    g.add_arc(0, 1);
    g.add_arc(1, 0);
    g.add_arc(1, 2);
    g.add_arc(2, 3);
    g.add_arc(3, 2);
    g.add_arc(4, 0);
    auto sd = strong_components(g);
    CHECK(sd.count == 3);
    CHECK(sd.component[0] == sd.component[1]);
    CHECK(sd.component[2] == sd.component[3]);
    CHECK(sd.component[0] != sd.component[2]);
    REQUIRE(sd.final_components.size() == 1);
    CHECK(sd.final_components[0] == sd.component[2]);
    std::vector<bool> relevant{true, true, false, true, true, false};
    CHECK(sd.relevant == relevant);
    CHECK_FALSE(is_strongly_connected(g));
    auto R = oracle::reachability(g);
    for (auto [c, d] : sd.dag_edges) CHECK(R[sd.members[c][0]][sd.members[d][0]]);
}

TEST_CASE("circuit bases have |A| - |V| + components members and are independent") {
    for (int k = 0; k < 30; ++k) {
        CounterRng rng(31, k);
        int n = 2 + static_cast<int>(rng.below(6));
        auto g = oracle::random_strong_graph(rng, n, static_cast<int>(rng.below(2 * n)), false);
        auto b = circuit_basis(g);
        CHECK(b.size() == g.arc_count() - g.node_count + 1);
        for (const auto& c : b.circuits) CHECK(is_circuit(g, c));
        Mat M = incidence_matrix(g, b);
        CHECK(M.fullPivLu().rank() == b.size());
        CHECK_NOTHROW(check_basis(g, b));
    }
}

TEST_CASE("circuit check") {
    auto g = fixture::double_triangle();
    CHECK(is_circuit(g, {0, 1, 2}));
    CHECK_FALSE(is_circuit(g, {0, 1}));
    CHECK_FALSE(is_circuit(g, {0, 0, 1, 2}));
    CircuitBasis bad;
    bad.circuits = {{0, 1, 2}, {0, 1, 2}};
    bad.targets = {1, 1};
    CHECK_THROWS_AS(check_basis(g, bad), Error);
}

TEST_CASE("double triangle: the listed circuits form a basis") {
    auto g = fixture::double_triangle();
    auto b = fixture::double_triangle_basis(1, 1, 1);
    CHECK_NOTHROW(check_basis(g, b));
    CHECK(circuit_basis(g).size() == 3);
}

TEST_CASE("small complete digraphs: cycle and circuit counts") {
    auto k3 = complete_digraph(3, false), k2 = complete_digraph(2, true);
    CHECK(enumerate_cycles(k3).size() == 5);
    CHECK(enumerate_cycles(k2).size() == 3);
    CHECK(enumerate_circuits(k3).size() == 9);
    CHECK(enumerate_circuits(k2).size() == 6);
    CHECK(oracle::count_arc_subsets(k3, true) == 5);
    CHECK(oracle::count_arc_subsets(k3, false) == 9);
    CHECK(oracle::count_arc_subsets(k2, false) == 6);
}

TEST_CASE("cycle enumeration matches subset enumeration on random graphs") {
    for (int k = 0; k < 25; ++k) {
        CounterRng rng(91, k);
        int n = 2 + static_cast<int>(rng.below(4));
        auto g = oracle::random_strong_graph(rng, n, static_cast<int>(rng.below(7)), false);
        CAPTURE(k);
        CHECK(enumerate_cycles(g).size() == oracle::count_arc_subsets(g, true));
        CHECK(enumerate_circuits(g).size() == oracle::count_arc_subsets(g, false));
    }
}

TEST_CASE("closed-form simple cycle count of complete digraphs") {
    for (int n = 1; n <= 7; ++n) {
        CAPTURE(n);
        CHECK(count_cycles_complete(n, false) == enumerate_cycles(complete_digraph(n, false)).size());
        CHECK(count_cycles_complete(n, true) == enumerate_cycles(complete_digraph(n, true)).size());
    }
    CHECK_THROWS_AS(enumerate_cycles(complete_digraph(6, false), 10), Error);
}

TEST_CASE("double triangle: general targets follow the closed form") {
    auto g = fixture::double_triangle();
    for (double t1 : {0.5, 1.0, 3.0})
        for (double t3 : {0.2, 1.0, 4.0}) {
            const double t2 = 1.7;
            auto s = f_gamma(g, fixture::double_triangle_basis(t1, t2, t3));
            CHECK(s.f == doctest::Approx(fixture::double_triangle_closed_form(t1, t2, t3)).epsilon(1e-10));
        }
    CHECK(f_gamma(g).f == doctest::Approx(3.0 * std::cbrt(4.0)).epsilon(1e-12));
}

TEST_CASE("double triangle: with symmetric weights the minimum over the third target sits at w_d / w_a") {
    const double wa = 1.4, wd = 0.5, wc = 0.9;
    auto g = fixture::double_triangle(wa, wa, wc, wd, wd);
    auto m = [&](double t) { return f_gamma(g, fixture::double_triangle_basis(1, 1, t)).f; };
    const double ts = wd / wa;
    CHECK(m(ts) == doctest::Approx(3.0 * std::cbrt(wc * std::pow(wa * ts + wd, 2) / ts)).epsilon(1e-10));
    for (double d : {1e-2, 1e-1}) {
        CHECK(m(ts) < m(ts * (1 + d)));
        CHECK(m(ts) < m(ts * (1 - d)));
    }
    // the saturated pair of constraints alone gives the same value at t = w_d/w_a
    CircuitBasis two;
    two.circuits = {{3, 1, 2}, {0, 4, 2}};
    two.targets = {1, 1};
    CHECK(f_gamma(g, two).f == doctest::Approx(m(ts)).epsilon(1e-9));
}

TEST_CASE("lopsided triangle: homogeneous minimum and the arc-value equation") {
    auto g = fixture::lopsided_triangle();
    auto s = f_gamma(g);
    CHECK(s.f == doctest::Approx(3.7996).epsilon(1e-3 / 3.8));
    const double xa = s.x[0];
    CHECK(xa == doctest::Approx(1.4902).epsilon(1e-3 / 1.49));
    CHECK(std::abs(xa - 1.0 / xa - 1.0 / std::sqrt(xa)) < 1e-9);
    // a and a' are not exchanged by any anti-automorphism: their values differ
    CHECK(std::abs(s.x[0] - s.x[1]) > 0.1);
    CHECK_FALSE(is_eulerian(g));
}

TEST_CASE("homogeneous minimum equals the quotient-sum minimum") {
    for (int k = 0; k < 20; ++k) {
        CounterRng rng(5, k);
        auto g = oracle::random_strong_graph(rng, 2 + static_cast<int>(rng.below(5)), 3, true);
        auto q = quotient_min(g);
        auto s = f_gamma(g, circuit_basis(g));
        CHECK(q.f == doctest::Approx(s.f).epsilon(1e-10));
        REQUIRE(q.minimizer_exists);
        CHECK(quotient_sum(g, q.y) == doctest::Approx(q.f).epsilon(1e-10));
    }
}

TEST_CASE("Nesbitt graph: complete digraph on 3 nodes with loops-free unit weights") {
    auto g = complete_digraph(3, false);
    auto q = quotient_min(g);
    CHECK(q.f == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(q.y.maxCoeff() == doctest::Approx(q.y.minCoeff()));
    CHECK(is_eulerian(g));
}

TEST_CASE("quotient minimum without a minimizer") {
    // 0 -> 1 where 1 carries a loop: the infimum is approached by y_0 -> 0
    Digraph g;
    g.add_node();
    g.add_node();
    g.add_arc(0, 1);
    g.add_arc(1, 1);
    auto q = quotient_min(g);
    CHECK(q.f == doctest::Approx(1.0));
    CHECK(q.minimizer_exists);
    g.add_arc(0, 0);
    CHECK_FALSE(quotient_min(g).minimizer_exists);
}

TEST_CASE("harmonic example") {
    auto u = fixture::harmonic_example();
    auto h0 = harmonic_min(u, {2, 3}, 0.0);
    CHECK(h0.F == doctest::Approx(3.86638136).epsilon(1e-6 / 3.9));
    const double ratio = h0.F / 4.0;
    for (double tau : {-2.0, -1.0, 1.0, 2.0})
        CHECK(harmonic_min(u, {2, 3}, tau).F / (4.0 * std::exp(tau / 2)) == doctest::Approx(ratio).epsilon(1e-10));
    CHECK(h0.F <= 4.0 * std::exp(0.0));
    CHECK_THROWS_AS(harmonic_min(u, {}, 0.0), Error);
}

TEST_CASE("expected number of cyclic nodes of a random self-map") {
    for (int n = 1; n <= 5; ++n) CHECK(expected_cyclic_nodes(n) == doctest::Approx(oracle::exhaustive_cyclic_mean(n)).epsilon(1e-12));
    const double n = 1e4;
    CHECK(std::abs(expected_cyclic_nodes(10000) / std::sqrt(M_PI * n / 2) - 1.0) < 0.02);
    auto mc = expected_cyclic_nodes_mc(50, 7, 4000);
    CHECK(std::abs(mc.mean - expected_cyclic_nodes(50)) < 5 * mc.stderr_);
    // same seed, same answer
    CHECK(expected_cyclic_nodes_mc(50, 7, 4000).mean == mc.mean);
}

TEST_CASE("functional graphs: cyclic nodes are the final components") {
    std::vector<int> map{1, 2, 0, 0, 3, 5};
    auto g = functional_graph(map);
    CHECK(cyclic_node_count(map) == 4);
    auto sd = strong_components(g);
    int cyc = 0;
    for (int c : sd.final_components) cyc += static_cast<int>(sd.members[c].size());
    CHECK(cyc == 4);
}

TEST_CASE("Eulerian check") {
    CHECK(is_eulerian(directed_cycle(5)));
    CHECK(is_eulerian(complete_digraph(4, true)));
    CHECK_FALSE(is_eulerian(fixture::double_triangle()));
}
