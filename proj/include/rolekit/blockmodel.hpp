#pragma once

#include "rolekit/graph.hpp"
#include "rolekit/solvers.hpp"

#include <cstdint>
#include <vector>

namespace rolekit {

/// Stochastic block model, optionally degree-corrected. B[p][q] is the link
/// probability from block p to block q; d1/d2 scale per-node send/receive
/// propensities (empty means all ones).
struct BlockModel {
    Eigen::MatrixXd B;
    std::vector<int> sizes;
    Eigen::VectorXd d1;
    Eigen::VectorXd d2;

    int r() const { return static_cast<int>(B.rows()); }
    int n() const;
    int block_of(int node) const;
    double correction1(int node) const { return d1.size() ? d1[node] : 1.0; }
    double correction2(int node) const { return d2.size() ? d2[node] : 1.0; }

    /// Expected weight of arc (i, j): d1[i] * B[block(i)][block(j)] * d2[j].
    double expectation(int i, int j) const;

    /// Checks shape, B entries in [0,1], no all-zero row or column of B,
    /// positive corrections; with for_sampling also every expectation in [0,1].
    void validate(bool for_sampling = false) const;

    /// Corrections of the halved-degree preset: 0.5 for the first
    /// ceil(n_b/2) nodes of each block, 1.0 for the rest, on both sides.
    static BlockModel with_halved_corrections(Eigen::MatrixXd B, std::vector<int> sizes);
};

/// Block-indicator matrix with orthonormalized columns chi^(i)/sqrt(n_i),
/// blocks laid out contiguously (block 0 first).
struct MembershipMatrix {
    Eigen::MatrixXd theta;     // n x r
    std::vector<int> block_of; // n
};

MembershipMatrix membership(const std::vector<int>& sizes);

/// The expected adjacency matrix of the ensemble as a weighted digraph;
/// zero expectations are omitted from the arc list.
Digraph average_matrix(const BlockModel& model);

/// One 0/1 adjacency draw with independent Bernoulli arcs, reproducible
/// from the seed (per-row substreams, so row order is immaterial).
Digraph sample_adjacency(const BlockModel& model, std::uint64_t seed);

/// Solution of the r-by-r reduced equation
///   X - (beta2/2)(M X M^T + N X N^T) = Theta^T (P P^T + Q Q^T) Theta
/// with M = Theta^T P Theta, N = Theta^T Q Theta built on the average matrix.
struct ReducedSolution {
    Eigen::MatrixXd X;
    Eigen::MatrixXd M;
    Eigen::MatrixXd N;
    SolveReport report;
};

ReducedSolution reduced_solve(const BlockModel& model, double beta2,
                              const SolverConfig& cfg = SolverConfig(0.5, 1e-12, 100'000));

/// Count of singular values above tau * sigma_max.
int numerical_rank(const Eigen::MatrixXd& M, double tau = 1e-8);

struct RecoveryReport {
    double gap = 0.0;                 // || S* - Theta X Theta^T ||_max
    double max_row_discrepancy = 0.0; // worst within-block row disagreement of S*
    int rank = 0;                     // numerical rank of S*
    bool pass = false;                // gap <= tolerance
    SolveReport full_report;
    SolveReport reduced_report;
};

/// Solves the full equation on the average matrix and checks it against the
/// lifted reduced solution Theta X Theta^T.
RecoveryReport verify_recovery(const BlockModel& model, double beta2,
                               double tolerance = 1e-8);

} // namespace rolekit
