#pragma once

#include "rolekit/graph.hpp"
#include "rolekit/patterns.hpp"
#include "rolekit/rng.hpp"

#include <Eigen/Dense>

#include <vector>

namespace testutil {

using rolekit::Arc;
using rolekit::Digraph;

// The six-node trading network (1-based labels 1..6):
// 1->2, 1->5, 4->5, 2->3, 2->6, 5->6, 2->5, 5->2.
inline Digraph trading6() {
    return Digraph::from_arcs(
        6, {{0, 1, 1}, {0, 4, 1}, {3, 4, 1}, {1, 2, 1}, {1, 5, 1}, {4, 5, 1}, {1, 4, 1}, {4, 1, 1}},
        1);
}

inline Digraph single_loop() { return Digraph::from_arcs(1, {{0, 0, 1}}); }

inline Digraph single_arc() { return Digraph::from_arcs(2, {{0, 1, 1}}); }

inline Digraph cycle(int n) {
    std::vector<Arc> arcs;
    for (int i = 0; i < n; ++i) arcs.push_back({i, (i + 1) % n, 1.0});
    return Digraph::from_arcs(n, std::move(arcs));
}

// Bernoulli(p) digraph without self-loops; dyadic weights keep sums exact.
inline Digraph random_digraph(int n, double p, std::uint64_t seed, bool weighted = false) {
    rolekit::CounterRng rng(seed);
    std::vector<Arc> arcs;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (rng.next_unit() < p) {
                double w = weighted ? 0.25 * (1.0 + static_cast<double>(rng.next_below(8))) : 1.0;
                arcs.push_back({i, j, w});
            }
        }
    return Digraph::from_arcs(n, std::move(arcs));
}

// Directed ring plus random chords: strongly connected by construction.
inline Digraph random_sc_graph(int n, double p, std::uint64_t seed, bool weighted = false) {
    rolekit::CounterRng rng(seed);
    std::vector<Arc> arcs;
    for (int i = 0; i < n; ++i) arcs.push_back({i, (i + 1) % n, 1.0});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j || j == (i + 1) % n) continue;
            if (rng.next_unit() < p) {
                double w = weighted ? 0.25 * (1.0 + static_cast<double>(rng.next_below(8))) : 1.0;
                arcs.push_back({i, j, w});
            }
        }
    return Digraph::from_arcs(n, std::move(arcs));
}

// Transitive closure by repeated squaring of the boolean relation.
inline std::vector<std::vector<bool>> reachability(const Digraph& g) {
    const int n = g.node_count();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (const Arc& a : g.arcs()) reach[a.src][a.dst] = true;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (reach[i][k])
                for (int j = 0; j < n; ++j)
                    if (reach[k][j]) reach[i][j] = true;
    return reach;
}

inline bool brute_strongly_connected(const Digraph& g) {
    const int n = g.node_count();
    if (n <= 1) return true;
    auto reach = reachability(g);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && !reach[i][j]) return false;
    return true;
}

inline std::vector<rolekit::WalkPattern> all_patterns(int ell) {
    std::vector<rolekit::WalkPattern> out;
    for (int mask = 0; mask < (1 << ell); ++mask) {
        std::vector<rolekit::Step> steps(ell);
        for (int b = 0; b < ell; ++b)
            steps[b] = (mask >> b) & 1 ? rolekit::Step::Reverse : rolekit::Step::Direct;
        out.emplace_back(std::move(steps));
    }
    return out;
}

// Layer matrix straight from its definition: the average of Psi(P,Q) Psi(P,Q)^T
// over every pattern of length ell.
inline Eigen::MatrixXd layer_by_pattern_sum(const rolekit::RowStochasticPair& pq, int ell) {
    const int n = pq.n();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd P = Eigen::MatrixXd(pq.P), Q = Eigen::MatrixXd(pq.Q);
    for (const auto& psi : all_patterns(ell)) {
        Eigen::MatrixXd op = rolekit::apply_pattern(psi, P, Q);
        acc += op * op.transpose();
    }
    return acc / std::pow(2.0, ell);
}

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    Eigen::MatrixXd out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return out;
}

// Dense vectorized solve of S - beta2 (A S A^T + A^T S A) = AA^T + A^TA.
inline Eigen::MatrixXd nps_dense_oracle(const Digraph& g, double beta2) {
    Eigen::MatrixXd A = Eigen::MatrixXd(g.adjacency());
    const Eigen::Index n = A.rows();
    Eigen::MatrixXd S1 = A * A.transpose() + A.transpose() * A;
    Eigen::MatrixXd K = kron(A, A) + kron(A.transpose(), A.transpose());
    Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n * n, n * n) - beta2 * K;
    Eigen::VectorXd vec_s1(Eigen::Map<Eigen::VectorXd>(S1.data(), n * n));
    Eigen::VectorXd vec_s = lhs.fullPivLu().solve(vec_s1);
    return Eigen::Map<Eigen::MatrixXd>(vec_s.data(), n, n);
}

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace testutil
