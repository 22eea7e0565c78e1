#include "rolekit/solvers.hpp"

#include "helpers.hpp"
#include "rolekit/errors.hpp"
#include "rolekit/patterns.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace rolekit;

namespace {

Eigen::MatrixXd s1_of(const RowStochasticPair& pq) {
    Eigen::MatrixXd P(pq.P), Q(pq.Q);
    return P * P.transpose() + Q * Q.transpose();
}

} // namespace

TEST_CASE("solver config validates its ranges") {
    CHECK_THROWS_AS(SolverConfig(1.0), InputError);
    CHECK_THROWS_AS(SolverConfig(-0.1), InputError);
    CHECK_THROWS_AS(SolverConfig(0.5, 0.0), InputError);
    CHECK_THROWS_AS(SolverConfig(0.5, 1e-8, 0), InputError);
    CHECK_NOTHROW(SolverConfig(0.0));
}

TEST_CASE("beta2 = 0 reduces the similarity to PP^T + QQ^T") {
    RowStochasticPair pq = transition_pair(augment_loops(testutil::trading6(), 1.0));
    auto [S, rep] = solve_rw_similarity(pq, SolverConfig(0.0, 1e-12));
    CHECK(rep.converged);
    CHECK(testutil::max_abs_diff(S.values, s1_of(pq)) <= 1e-14);
    CHECK(rep.error_bound == 0.0);
}

TEST_CASE("single node with a loop has the scalar closed form") {
    RowStochasticPair pq = transition_pair(testutil::single_loop());
    for (double b2 : {0.1, 0.5, 0.9}) {
        auto [S, rep] = solve_rw_similarity(pq, SolverConfig(b2, 1e-13, 100'000));
        CHECK(rep.converged);
        CHECK(S.values(0, 0) == doctest::Approx(2.0 / (1.0 - b2)).epsilon(1e-9));
    }
}

TEST_CASE("directed 2-cycle concentrates on the diagonal") {
    RowStochasticPair pq = transition_pair(testutil::cycle(2));
    for (double b2 : {0.25, 0.6}) {
        auto [S, rep] = solve_rw_similarity(pq, SolverConfig(b2, 1e-13, 100'000));
        Eigen::MatrixXd expect = (2.0 / (1.0 - b2)) * Eigen::MatrixXd::Identity(2, 2);
        CHECK(testutil::max_abs_diff(S.values, expect) <= 1e-10);
    }
}

TEST_CASE("residual_rw is zero at the exact solution and S1-sized at zero") {
    RowStochasticPair pq = transition_pair(testutil::single_loop());
    Eigen::MatrixXd exact(1, 1);
    exact << 2.0 / (1.0 - 0.3);
    CHECK(residual_rw(exact, pq, 0.3) <= 1e-14);

    RowStochasticPair pq6 = transition_pair(augment_loops(testutil::trading6(), 1.0));
    Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(6, 6);
    CHECK(residual_rw(zero, pq6, 0.5) ==
          doctest::Approx(s1_of(pq6).cwiseAbs().maxCoeff()).epsilon(1e-14));
}

TEST_CASE("converged runs have small residuals") {
    RowStochasticPair pq = transition_pair(testutil::random_sc_graph(8, 0.3, 4, true));
    auto [S, rep] = solve_rw_similarity(pq, SolverConfig(0.5, 1e-10, 100'000));
    CHECK(rep.converged);
    CHECK(rep.residual <= 1e-9);
    CHECK(rep.residual == doctest::Approx(residual_rw(S.values, pq, 0.5)).epsilon(1e-9));
}

TEST_CASE("iterates contract in max-norm") {
    RowStochasticPair pq = transition_pair(augment_loops(testutil::trading6(), 1.0));
    const double b2 = 0.6;
    // Re-run with increasing iteration caps to recover the iterate sequence.
    std::vector<Eigen::MatrixXd> iterates;
    for (int k = 1; k <= 25; ++k) {
        auto [S, rep] = solve_rw_similarity(pq, SolverConfig(b2, 1e-300, k));
        iterates.push_back(S.values);
    }
    for (std::size_t k = 2; k < iterates.size(); ++k) {
        double step = testutil::max_abs_diff(iterates[k], iterates[k - 1]);
        double prev = testutil::max_abs_diff(iterates[k - 1], iterates[k - 2]);
        CHECK(step <= b2 * prev + 1e-14);
    }
}

TEST_CASE("a-posteriori bound holds against a tight reference") {
    RowStochasticPair pq = transition_pair(testutil::random_sc_graph(7, 0.3, 12, true));
    const double b2 = 0.5;
    auto [ref, ref_rep] = solve_rw_similarity(pq, SolverConfig(b2, 1e-14, 1'000'000));
    REQUIRE(ref_rep.converged);
    for (double eps : {1e-10, 1e-8, 1e-6}) {
        auto [S, rep] = solve_rw_similarity(pq, SolverConfig(b2, eps, 100'000));
        CHECK(rep.converged);
        CHECK(testutil::max_abs_diff(S.values, ref.values) <= rep.error_bound + 10e-14);
        CHECK(rep.error_bound <= eps * b2 / (1.0 - b2) * (1.0 + 1e-12));
    }
}

TEST_CASE("solver agrees with long partial sums") {
    for (std::uint64_t seed : {1ull, 2ull}) {
        Digraph g = testutil::random_sc_graph(6 + static_cast<int>(seed * 2), 0.3, seed, true);
        RowStochasticPair pq = transition_pair(g);
        auto [S, rep] = solve_rw_similarity(pq, SolverConfig(0.5, 1e-14, 1'000'000));
        REQUIRE(rep.converged);
        SimilarityMatrix series = partial_sum(pq, 0.5, 60);
        CHECK(testutil::max_abs_diff(S.values, series.values) <= 1e-12);
    }
}

TEST_CASE("similarity matrices are PSD with positive entries on SC graphs") {
    for (std::uint64_t seed : {3ull, 9ull, 21ull}) {
        Digraph g = testutil::random_sc_graph(8, 0.25, seed, true);
        RowStochasticPair pq = transition_pair(g);
        auto [S, rep] = solve_rw_similarity(pq, SolverConfig(0.5, 1e-11, 100'000));
        REQUIRE(rep.converged);
        CHECK(testutil::max_abs_diff(S.values, S.values.transpose()) <= 1e-10);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S.values);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * S.values.cwiseAbs().maxCoeff());
        CHECK(S.values.minCoeff() > 0.0);
    }
}

TEST_CASE("three initializations land on the same fixed point") {
    Digraph g = testutil::random_sc_graph(6, 0.35, 17, true);
    RowStochasticPair pq = transition_pair(g);
    const double b2 = 0.5, eps = 1e-11;
    SolverConfig cfg(b2, eps, 100'000);
    auto [s_zero, r0] = solve_rw_similarity(pq, cfg);
    auto [s_eye, r1] = solve_rw_similarity(pq, cfg, Eigen::MatrixXd::Identity(6, 6));
    Eigen::MatrixXd R = Eigen::MatrixXd::Random(6, 6);
    auto [s_rand, r2] = solve_rw_similarity(pq, cfg, 0.5 * (R + R.transpose()));
    REQUIRE(r0.converged);
    REQUIRE(r1.converged);
    REQUIRE(r2.converged);
    const double cap = 2.0 * eps * b2 / (1.0 - b2);
    CHECK(testutil::max_abs_diff(s_zero.values, s_eye.values) <= cap);
    CHECK(testutil::max_abs_diff(s_zero.values, s_rand.values) <= cap);
}

TEST_CASE("iteration cap returns the best iterate, flagged") {
    RowStochasticPair pq = transition_pair(testutil::cycle(4));
    auto [S, rep] = solve_rw_similarity(pq, SolverConfig(0.9, 1e-14, 3));
    CHECK_FALSE(rep.converged);
    CHECK(rep.iterations == 3);
    CHECK(rep.final_step > 1e-14);
}

TEST_CASE("structural baseline") {
    Digraph empty = Digraph::from_arcs(3, {});
    CHECK(baseline_structural(empty).values.cwiseAbs().maxCoeff() == 0.0);

    SimilarityMatrix arc = baseline_structural(testutil::single_arc());
    Eigen::MatrixXd expect = Eigen::MatrixXd::Identity(2, 2);
    CHECK(testutil::max_abs_diff(arc.values, expect) == 0.0);

    // Nodes 1 and 4 (1-based) share one child: node 5.
    SimilarityMatrix t6 = baseline_structural(testutil::trading6());
    CHECK(t6.values(0, 3) == 1.0);
}

TEST_CASE("degree-normalized baseline") {
    SimilarityMatrix loop = baseline_degree_normalized(testutil::single_loop());
    CHECK(loop.values(0, 0) == doctest::Approx(2.0).epsilon(1e-14));

    SimilarityMatrix two = baseline_degree_normalized(testutil::cycle(2));
    CHECK(testutil::max_abs_diff(two.values, 2.0 * Eigen::MatrixXd::Identity(2, 2)) <= 1e-14);

    // 2-regular digraph: both baselines coincide up to the 1/c^2 factor.
    std::vector<Arc> arcs;
    for (int i = 0; i < 4; ++i) {
        arcs.push_back({i, (i + 1) % 4, 1.0});
        arcs.push_back({i, (i + 2) % 4, 1.0});
    }
    Digraph regular = Digraph::from_arcs(4, std::move(arcs));
    Eigen::MatrixXd scaled = baseline_structural(regular).values / 4.0;
    CHECK(testutil::max_abs_diff(baseline_degree_normalized(regular).values, scaled) <= 1e-14);
}

TEST_CASE("degree-normalized baseline flags zero degrees") {
    CHECK_THROWS_AS(baseline_degree_normalized(testutil::trading6()), InputError);
    SimilarityMatrix relaxed = baseline_degree_normalized(testutil::trading6(), true);
    CHECK(std::isfinite(relaxed.values.cwiseAbs().maxCoeff()));
}

TEST_CASE("beta2 = 0 similarity equals the degree-normalized baseline") {
    Digraph g = augment_loops(testutil::trading6(), 1.0);
    RowStochasticPair pq = transition_pair(g);
    auto [S, rep] = solve_rw_similarity(pq, SolverConfig(0.0, 1e-13));
    SimilarityMatrix base = baseline_degree_normalized(g);
    CHECK(testutil::max_abs_diff(S.values, base.values) <= 1e-12);
}

TEST_CASE("spectral bound on closed-form cases") {
    SpectralEstimate est = nps_spectral_bound(testutil::single_loop());
    CHECK(est.converged);
    CHECK(est.rho == doctest::Approx(2.0).epsilon(1e-8));

    CHECK(nps_spectral_bound(Digraph::from_arcs(3, {})).rho == 0.0);

    est = nps_spectral_bound(testutil::cycle(2));
    CHECK(est.rho == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("spectral bound matches brute-force Kronecker eigenvalues") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        Digraph g = testutil::random_digraph(3 + static_cast<int>(seed % 2), 0.5, seed, true);
        if (g.arc_count() == 0) continue;
        Eigen::MatrixXd A(g.adjacency());
        Eigen::MatrixXd K =
            testutil::kron(A, A) + testutil::kron(A.transpose().eval(), A.transpose().eval());
        Eigen::EigenSolver<Eigen::MatrixXd> eig(K);
        double brute = eig.eigenvalues().cwiseAbs().maxCoeff();
        SpectralEstimate est = nps_spectral_bound(g);
        CAPTURE(seed);
        CHECK(est.rho == doctest::Approx(brute).epsilon(1e-6));
    }
}

TEST_CASE("nps basics") {
    Digraph loop = testutil::single_loop();
    auto [S, rep] = solve_nps(loop, 0.25, SolverConfig(0.0, 1e-13, 100'000));
    CHECK(rep.converged);
    CHECK(S.values(0, 0) == doctest::Approx(4.0).epsilon(1e-10));

    Digraph g = testutil::trading6();
    auto [S0, rep0] = solve_nps(g, 0.0, SolverConfig(0.0, 1e-13));
    Eigen::MatrixXd A(g.adjacency());
    CHECK(testutil::max_abs_diff(S0.values, A * A.transpose() + A.transpose() * A) <= 1e-13);
}

TEST_CASE("nps equals the dense vectorized solve") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        int n = 3 + static_cast<int>(seed % 3);
        Digraph g = testutil::random_digraph(n, 0.5, seed + 100, true);
        if (g.arc_count() == 0) continue;
        SpectralEstimate est = nps_spectral_bound(g);
        double b2 = est.rho > 0.0 ? 0.3 / est.rho : 0.3;
        auto [S, rep] = solve_nps(g, b2, SolverConfig(0.0, 1e-13, 200'000));
        REQUIRE(rep.converged);
        Eigen::MatrixXd oracle = testutil::nps_dense_oracle(g, b2);
        CAPTURE(seed);
        CHECK(testutil::max_abs_diff(S.values, oracle) <= 1e-10);
    }
}

TEST_CASE("nps rejects beta2 at or above the spectral threshold") {
    Digraph g = testutil::random_digraph(4, 0.6, 3);
    SpectralEstimate est = nps_spectral_bound(g);
    REQUIRE(est.rho > 0.0);
    CHECK_THROWS_WITH_AS(solve_nps(g, 1.05 / est.rho, SolverConfig(0.0, 1e-10)),
                         doctest::Contains("threshold"), ConvergenceError);
}

TEST_CASE("limit weights on closed-form cases") {
    LimitWeights lw = limit_weights(transition_pair(testutil::single_loop()));
    CHECK(lw.converged);
    CHECK(lw.W(0, 0) == doctest::Approx(1.0).epsilon(1e-14));

    // On the 2-cycle both I/2 and the uniform matrix are fixed points.
    RowStochasticPair pq = transition_pair(testutil::cycle(2));
    Eigen::MatrixXd P(pq.P), Q(pq.Q);
    Eigen::MatrixXd candidate = 0.5 * Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd mapped = 0.5 * (P.transpose() * candidate * P + Q.transpose() * candidate * Q);
    CHECK(testutil::max_abs_diff(mapped, candidate) <= 1e-15);

    lw = limit_weights(pq);
    CHECK(lw.converged);
    CHECK(lw.W.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lw.residual <= 1e-10);
}

TEST_CASE("uniform matrix is the limit weight of circulant graphs") {
    Digraph g = testutil::cycle(5);
    LimitWeights lw = limit_weights(transition_pair(g));
    CHECK(lw.converged);
    CHECK(testutil::max_abs_diff(lw.W, Eigen::MatrixXd::Constant(5, 5, 1.0 / 25.0)) <= 1e-12);
}

TEST_CASE("limit weights satisfy the homogeneous equation on random SC graphs") {
    for (std::uint64_t seed : {5ull, 8ull}) {
        RowStochasticPair pq = transition_pair(testutil::random_sc_graph(9, 0.25, seed, true));
        LimitWeights lw = limit_weights(pq);
        CHECK(lw.converged);
        CHECK(lw.residual <= 1e-10);
        CHECK(lw.W.sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(lw.W.minCoeff() >= 0.0);
    }
}

TEST_CASE("verify_limit flattens toward the rank-one limit") {
    RowStochasticPair loop = transition_pair(testutil::single_loop());
    auto rows = verify_limit(loop, {0.3, 0.7});
    for (const auto& row : rows) CHECK(row.delta <= 1e-10);

    RowStochasticPair pq = transition_pair(testutil::random_sc_graph(10, 0.3, 31, true));
    auto table = verify_limit(pq, {0.9, 0.99, 0.999});
    REQUIRE(table.size() == 3);
    CHECK(table[0].delta > table[1].delta);
    CHECK(table[1].delta > table[2].delta);

    auto zero = verify_limit(pq, {0.0});
    CHECK(zero[0].delta > 1e-3); // the limit claim is only about beta2 -> 1
}
