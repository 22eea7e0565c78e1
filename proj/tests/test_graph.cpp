#include "rolekit/graph.hpp"

#include "helpers.hpp"
#include "rolekit/errors.hpp"
#include "rolekit/io.hpp"

#include <doctest.h>

#include <sstream>

using namespace rolekit;

TEST_CASE("edge list loads the six-node trading network") {
    std::istringstream in("1 2\n1 5\n4 5\n2 3\n2 6\n5 6\n2 5\n5 2\n");
    Digraph g = load_edge_list(in, {.index_base = 1, .default_weight = 1.0});
    CHECK(g.node_count() == 6);
    CHECK(g.arc_count() == 8);
    CHECK(g.index_base() == 1);
    Digraph expected = testutil::trading6();
    CHECK(g.arcs().size() == expected.arcs().size());
    for (std::size_t i = 0; i < g.arcs().size(); ++i) {
        CHECK(g.arcs()[i].src == expected.arcs()[i].src);
        CHECK(g.arcs()[i].dst == expected.arcs()[i].dst);
    }
}

TEST_CASE("header fixes the node count of an empty stream") {
    std::istringstream in("n=3\n");
    Digraph g = load_edge_list(in);
    CHECK(g.node_count() == 3);
    CHECK(g.arc_count() == 0);
}

TEST_CASE("duplicate arcs are summed") {
    std::istringstream in("0 1 2.0\n0 1 3.0\n");
    Digraph g = load_edge_list(in);
    CHECK(g.arc_count() == 1);
    CHECK(g.arcs()[0].weight == 5.0);
}

TEST_CASE("loader rejects malformed input with line numbers") {
    auto load = [](const char* text, int base = 0) {
        std::istringstream in(text);
        return load_edge_list(in, {.index_base = base, .default_weight = 1.0});
    };
    CHECK_THROWS_WITH_AS(load("0 1\nx 2\n"), doctest::Contains("line 2"), InputError);
    CHECK_THROWS_WITH_AS(load("0 1 -2\n"), doctest::Contains("nonpositive"), InputError);
    CHECK_THROWS_WITH_AS(load("0 1\n", 1), doctest::Contains("below base"), InputError);
    CHECK_THROWS_AS(load("0\n"), InputError);
    CHECK_THROWS_AS(load("n=2\n0 5\n"), InputError);
}

TEST_CASE("comments and blank lines are ignored") {
    std::istringstream in("# a comment\n\n0 1 0.5 # trailing\n");
    Digraph g = load_edge_list(in);
    CHECK(g.arc_count() == 1);
    CHECK(g.arcs()[0].weight == 0.5);
}

TEST_CASE("degrees of the trading network") {
    DegreeInfo d = degrees(testutil::trading6());
    // Node 2 (1-based): out-arcs to 3, 5, 6; in-arcs from 1 and 5.
    CHECK(d.d_out[1] == 3.0);
    CHECK(d.d_in[1] == 2.0);
    CHECK(d.d_out[2] == 0.0);
    CHECK(d.d_in[0] == 0.0);
}

TEST_CASE("degrees of corner cases") {
    Digraph empty = Digraph::from_arcs(3, {});
    DegreeInfo d = degrees(empty);
    CHECK(d.d_in.cwiseAbs().maxCoeff() == 0.0);
    CHECK(d.d_out.cwiseAbs().maxCoeff() == 0.0);

    Digraph loop = Digraph::from_arcs(2, {{1, 1, 2.5}});
    d = degrees(loop);
    CHECK(d.d_in[1] == 2.5);
    CHECK(d.d_out[1] == 2.5);
}

TEST_CASE("strong connectivity on known graphs") {
    CHECK(is_strongly_connected(testutil::cycle(3)));
    CHECK(is_strongly_connected(testutil::single_loop()));
    CHECK(is_strongly_connected(Digraph::from_arcs(1, {})));
    CHECK_FALSE(is_strongly_connected(testutil::trading6()));
    // Loops repair degrees but not reachability.
    CHECK_FALSE(is_strongly_connected(augment_loops(testutil::trading6(), 1.0)));
}

TEST_CASE("strong connectivity agrees with brute-force closure") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        int n = 2 + static_cast<int>(seed % 5);
        Digraph g = testutil::random_digraph(n, 0.05 + 0.08 * static_cast<double>(seed % 9), seed);
        CAPTURE(seed);
        CHECK(is_strongly_connected(g) == testutil::brute_strongly_connected(g));
    }
}

TEST_CASE("component ids partition a two-cluster graph") {
    // 0 <-> 1 and 2 <-> 3 with a one-way bridge 1 -> 2.
    Digraph g = Digraph::from_arcs(4, {{0, 1, 1}, {1, 0, 1}, {2, 3, 1}, {3, 2, 1}, {1, 2, 1}});
    auto comp = strongly_connected_components(g);
    CHECK(comp[0] == comp[1]);
    CHECK(comp[2] == comp[3]);
    CHECK(comp[0] != comp[2]);
}

TEST_CASE("augment_loops adds to every diagonal entry") {
    Digraph empty2 = Digraph::from_arcs(2, {});
    Digraph looped = augment_loops(empty2, 1.0);
    DegreeInfo d = degrees(looped);
    CHECK((d.d_in - Eigen::VectorXd::Ones(2)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((d.d_out - Eigen::VectorXd::Ones(2)).cwiseAbs().maxCoeff() == 0.0);

    Digraph t6 = augment_loops(testutil::trading6(), 1.0);
    d = degrees(t6);
    CHECK(d.d_in.minCoeff() > 0.0);
    CHECK(d.d_out.minCoeff() > 0.0);

    Digraph has_loop = Digraph::from_arcs(2, {{0, 0, 2.0}});
    Digraph more = augment_loops(has_loop, 1.0);
    CHECK(more.arcs()[0].weight == 3.0);
}

TEST_CASE("augment_loops shifts degrees exactly") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Digraph g = testutil::random_digraph(5, 0.4, seed, true);
        DegreeInfo before = degrees(g);
        DegreeInfo after = degrees(augment_loops(g, 0.75));
        Eigen::VectorXd shift = Eigen::VectorXd::Constant(5, 0.75);
        CHECK((after.d_in - before.d_in - shift).cwiseAbs().maxCoeff() == 0.0);
        CHECK((after.d_out - before.d_out - shift).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("transition pair of simple graphs") {
    RowStochasticPair pq = transition_pair(testutil::cycle(2));
    Eigen::MatrixXd swap(2, 2);
    swap << 0, 1, 1, 0;
    CHECK(testutil::max_abs_diff(Eigen::MatrixXd(pq.P), swap) == 0.0);
    CHECK(testutil::max_abs_diff(Eigen::MatrixXd(pq.Q), swap) == 0.0);

    pq = transition_pair(testutil::single_loop());
    CHECK(Eigen::MatrixXd(pq.P)(0, 0) == 1.0);
    CHECK(Eigen::MatrixXd(pq.Q)(0, 0) == 1.0);
}

TEST_CASE("transition pair of the loop-augmented trading network") {
    RowStochasticPair pq = transition_pair(augment_loops(testutil::trading6(), 1.0));
    Eigen::MatrixXd P(pq.P);
    // Row of node 2 (1-based): equal mass on columns 2, 3, 5, 6.
    for (int col : {1, 2, 4, 5}) CHECK(P(1, col) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(P(1, 0) == 0.0);
    CHECK(P(1, 3) == 0.0);
}

TEST_CASE("transition pair rejects zero degrees and names the node") {
    CHECK_THROWS_WITH_AS(transition_pair(testutil::trading6()),
                         doctest::Contains("augment_loops"), InputError);
    CHECK_THROWS_WITH_AS(transition_pair(testutil::single_arc()), doctest::Contains("node"),
                         InputError);
}

TEST_CASE("rows of P and Q sum to one within 1e-12") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Digraph g = augment_loops(testutil::random_digraph(6, 0.3, seed, true), 1.0);
        RowStochasticPair pq = transition_pair(g);
        Eigen::VectorXd ones = Eigen::VectorXd::Ones(6);
        CHECK((Eigen::MatrixXd(pq.P) * ones - ones).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((Eigen::MatrixXd(pq.Q) * ones - ones).cwiseAbs().maxCoeff() <= 1e-12);
        Eigen::MatrixXd P(pq.P), Q(pq.Q);
        CHECK(P.minCoeff() >= 0.0);
        CHECK(P.maxCoeff() <= 1.0);
        CHECK(Q.minCoeff() >= 0.0);
        CHECK(Q.maxCoeff() <= 1.0);
    }
}

TEST_CASE("edge lists round-trip through the writer") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Digraph g = testutil::random_digraph(7, 0.3, seed, true);
        std::ostringstream out;
        write_edge_list(out, g);
        std::istringstream in(out.str());
        Digraph back = load_edge_list(in, {.index_base = g.index_base(), .default_weight = 1.0});
        REQUIRE(back.node_count() == g.node_count());
        REQUIRE(back.arc_count() == g.arc_count());
        for (std::size_t i = 0; i < g.arcs().size(); ++i) {
            CHECK(back.arcs()[i].src == g.arcs()[i].src);
            CHECK(back.arcs()[i].dst == g.arcs()[i].dst);
            CHECK(back.arcs()[i].weight == g.arcs()[i].weight);
        }
    }
}
