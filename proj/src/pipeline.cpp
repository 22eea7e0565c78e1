#include "rolekit/pipeline.hpp"

#include "rolekit/errors.hpp"
#include "rolekit/io.hpp"
#include "rolekit/rng.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>

namespace rolekit {

Digraph apply_loop_policy(const Digraph& g, const LoopOptions& opts) {
    if (opts.policy == LoopPolicy::Explicit) return augment_loops(g, opts.weight);
    if (opts.policy == LoopPolicy::Off) return g;
    DegreeInfo deg = degrees(g);
    bool needs_repair = false;
    for (int i = 0; i < g.node_count(); ++i)
        if (deg.d_out[i] <= 0.0 || deg.d_in[i] <= 0.0) {
            needs_repair = true;
            break;
        }
    if (!needs_repair) return g;
    std::cerr << "notice: zero-degree nodes present; adding unit self-loops\n";
    return augment_loops(g, 1.0);
}

RolesPipelineResult run_roles_pipeline(const Digraph& g, const RolesPipelineConfig& cfg) {
    if (cfg.runs < 1) throw InputError("runs must be >= 1");
    Digraph solved_on = apply_loop_policy(g, cfg.loops);
    RowStochasticPair pq = transition_pair(solved_on);
    SolverConfig scfg(cfg.beta2, cfg.epsilon, cfg.max_iters);

    RolesPipelineResult out;
    std::tie(out.similarity, out.report) = solve_rw_similarity(pq, scfg);

    std::vector<RoleAssignment> assignments;
    assignments.reserve(cfg.runs);
    for (int run = 0; run < cfg.runs; ++run) {
        std::uint64_t run_seed = CounterRng::mix(cfg.seed ^ CounterRng::mix(run + 1));
        assignments.push_back(
            kmeans(out.similarity.values, cfg.k, run_seed, cfg.restarts).assignment);
    }
    out.consensus = consensus(assignments);
    out.role_matrix = estimate_role_matrix(g, out.consensus.labels);

    out.reorder.resize(g.node_count());
    std::iota(out.reorder.begin(), out.reorder.end(), 0);
    const auto& labels = out.consensus.labels.labels;
    std::stable_sort(out.reorder.begin(), out.reorder.end(),
                     [&](int a, int b) { return labels[a] < labels[b]; });
    return out;
}

std::vector<std::string> write_roles_outputs(const std::string& prefix, const Digraph& g,
                                             const RolesPipelineResult& result) {
    std::vector<std::string> written;
    auto open = [&](const std::string& suffix) {
        std::string path = prefix + suffix;
        std::ofstream out(path);
        if (!out) throw InputError("cannot write '" + path + "'");
        written.push_back(path);
        return out;
    };

    {
        auto out = open(".roles.txt");
        write_roles(out, result.consensus.labels, g.index_base());
    }
    {
        auto out = open(".counts.csv");
        write_counts_csv(out, result.consensus.counts, g.index_base());
    }
    {
        auto out = open(".bhat.csv");
        write_matrix_csv(out, result.role_matrix);
    }
    {
        // Adjacency pattern with nodes grouped by role.
        const int n = g.node_count();
        Eigen::MatrixXd pattern = Eigen::MatrixXd::Zero(n, n);
        Eigen::MatrixXd dense = Eigen::MatrixXd(g.adjacency());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                pattern(i, j) = dense(result.reorder[i], result.reorder[j]) != 0.0 ? 1.0 : 0.0;
        auto out = open(".adjacency.pgm");
        write_pgm_heatmap(out, pattern);
    }
    return written;
}

} // namespace rolekit
