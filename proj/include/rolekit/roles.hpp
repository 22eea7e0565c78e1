#pragma once

#include "rolekit/graph.hpp"

#include <cstdint>
#include <vector>

namespace rolekit {

struct RoleAssignment {
    std::vector<int> labels; // each in [0, k)
    int k = 1;

    int n() const { return static_cast<int>(labels.size()); }
};

struct KMeansResult {
    RoleAssignment assignment;
    double objective = 0.0; // within-cluster sum of squared distances
    Eigen::MatrixXd centers;
    int iterations = 0;
    bool degenerate = false; // k > 1 on all-identical rows
};

/// Lloyd's algorithm with k-means++ seeding; the best of `restarts`
/// independent runs by (objective, restart index) is returned. Empty
/// clusters are repaired by reseeding from the farthest point. Fully
/// deterministic for a fixed seed; ties break toward the lowest index.
KMeansResult kmeans(const Eigen::MatrixXd& rows, int k, std::uint64_t seed,
                    int restarts = 1, bool normalize_rows = false);

struct ConsensusReport {
    Eigen::MatrixXi counts;  // n x k: times node i received aligned role j
    RoleAssignment labels;   // per-node majority role
    int runs = 0;
};

/// Aligns every assignment to the first by greedy maximum-overlap matching
/// of the k x k contingency table, then tallies per-node role frequencies.
ConsensusReport consensus(const std::vector<RoleAssignment>& assignments);

/// Empirical role matrix of a partition: entry (p, q) is the density of the
/// (p, q) block of the adjacency. Binarized by default (arc presence); with
/// use_weights the numerator sums arc weights instead. Empty blocks yield NaN.
Eigen::MatrixXd estimate_role_matrix(const Digraph& g, const RoleAssignment& a,
                                     bool use_weights = false);

/// Adjusted Rand index between two partitions of the same node set.
double ari(const RoleAssignment& a, const RoleAssignment& b);

} // namespace rolekit
