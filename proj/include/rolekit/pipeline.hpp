#pragma once

#include "rolekit/graph.hpp"
#include "rolekit/roles.hpp"
#include "rolekit/similarity.hpp"
#include "rolekit/solvers.hpp"

#include <cstdint>
#include <string>

namespace rolekit {

/// Loop-repair policy shared by the CLI commands.
enum class LoopPolicy { Auto, Off, Explicit };

struct LoopOptions {
    LoopPolicy policy = LoopPolicy::Auto;
    double weight = 1.0;
};

/// Applies the policy: Auto adds unit loops only when some degree is zero
/// (notice printed to stderr), Explicit always adds `weight`, Off never
/// touches the graph. Returns the graph to run the solver on.
Digraph apply_loop_policy(const Digraph& g, const LoopOptions& opts);

struct RolesPipelineConfig {
    int k = 3;
    double beta2 = 0.2;
    int restarts = 20; // k-means restarts per clustering run
    int runs = 20;     // independent clusterings fed to the consensus
    std::uint64_t seed = 0;
    LoopOptions loops;
    double epsilon = 1e-8;
    int max_iters = 10'000;
};

/// Full role-extraction pipeline: similarity solve, repeated row clustering,
/// consensus, and the empirical role matrix. The role matrix is estimated on
/// the graph as given (before any loop repair), binarized.
struct RolesPipelineResult {
    SimilarityMatrix similarity;
    SolveReport report;
    ConsensusReport consensus;
    Eigen::MatrixXd role_matrix; // k x k
    std::vector<int> reorder;    // node permutation grouping roles contiguously
};

RolesPipelineResult run_roles_pipeline(const Digraph& g, const RolesPipelineConfig& cfg);

/// Writes the pipeline outputs under `prefix`: .roles.txt, .counts.csv,
/// .bhat.csv, .adjacency.pgm. Returns the list of files written.
std::vector<std::string> write_roles_outputs(const std::string& prefix, const Digraph& g,
                                             const RolesPipelineResult& result);

} // namespace rolekit
