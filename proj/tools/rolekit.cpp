// Command-line front end: similarity solves, role extraction, block-model
// experiments, and Monte-Carlo walk validation over edge-list files.

#include "rolekit/blockmodel.hpp"
#include "rolekit/errors.hpp"
#include "rolekit/graph.hpp"
#include "rolekit/io.hpp"
#include "rolekit/montecarlo.hpp"
#include "rolekit/patterns.hpp"
#include "rolekit/pipeline.hpp"
#include "rolekit/rng.hpp"
#include "rolekit/roles.hpp"
#include "rolekit/solvers.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace rolekit;
using nlohmann::ordered_json;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

Digraph load_graph(const std::string& path, int index_base, int max_n) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    LoadOptions opts;
    opts.index_base = index_base;
    Digraph g = load_edge_list(in, opts);
    if (g.node_count() > max_n)
        throw ResourceCapError("graph has " + std::to_string(g.node_count()) +
                               " nodes; dense similarity storage is capped at " +
                               std::to_string(max_n) + " (override with --max-n)");
    return g;
}

LoopOptions parse_loops(const std::string& text) {
    LoopOptions opts;
    if (text == "auto") {
        opts.policy = LoopPolicy::Auto;
    } else if (text == "off") {
        opts.policy = LoopPolicy::Off;
    } else {
        opts.policy = LoopPolicy::Explicit;
        try {
            std::size_t pos = 0;
            opts.weight = std::stod(text, &pos);
            if (pos != text.size()) throw std::invalid_argument(text);
        } catch (const std::exception&) {
            throw InputError("--loops expects auto, off, or a positive weight");
        }
        if (!(opts.weight > 0.0)) throw InputError("--loops weight must be positive");
    }
    return opts;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    return out;
}

void emit_manifest(const std::string& prefix, const std::string& command,
                   const ordered_json& params, const std::vector<std::string>& input_paths,
                   bool has_seed, std::uint64_t seed, double wall_s) {
    RunManifest m;
    m.command = command;
    m.parameters_json = params.dump();
    for (const auto& p : input_paths) m.inputs.push_back({p, file_digest_hex(p)});
    m.has_seed = has_seed;
    m.seed = seed;
    m.wall_time_s = wall_s;
    auto out = open_out(prefix + ".manifest.json");
    write_manifest(out, m);
}

int run_solve(const std::string& input, const std::string& out_prefix, const std::string& method,
              double beta2, double epsilon, int max_iters, int index_base,
              const std::string& loops, bool binarize, bool allow_zero_degrees, bool force,
              bool heatmap, int max_n) {
    Timer timer;
    Digraph g = load_graph(input, index_base, max_n);
    LoopOptions loop_opts = parse_loops(loops);

    SimilarityMatrix sim;
    SolveReport report;
    if (method == "rw") {
        Digraph repaired = apply_loop_policy(g, loop_opts);
        RowStochasticPair pq = transition_pair(repaired);
        std::tie(sim, report) = solve_rw_similarity(pq, SolverConfig(beta2, epsilon, max_iters));
    } else if (method == "nps") {
        Digraph base = loop_opts.policy == LoopPolicy::Explicit
                           ? augment_loops(g, loop_opts.weight)
                           : g;
        std::tie(sim, report) =
            solve_nps(base, beta2, SolverConfig(0.0, epsilon, max_iters), force);
    } else if (method == "structural") {
        Digraph base = loop_opts.policy == LoopPolicy::Explicit
                           ? augment_loops(g, loop_opts.weight)
                           : g;
        sim = baseline_structural(base, binarize);
        report.converged = true;
    } else if (method == "degnorm") {
        Digraph repaired = allow_zero_degrees ? g : apply_loop_policy(g, loop_opts);
        sim = baseline_degree_normalized(repaired, allow_zero_degrees);
        report.converged = true;
    } else {
        throw InputError("unknown method '" + method + "'");
    }

    {
        auto out = open_out(out_prefix + ".similarity.csv");
        write_matrix_csv(out, sim.values);
    }
    {
        auto out = open_out(out_prefix + ".report.json");
        out << report_json(report, method, beta2, sim.size()) << "\n";
    }
    if (heatmap) {
        auto out = open_out(out_prefix + ".heatmap.pgm");
        write_pgm_heatmap(out, sim.values);
    }
    if (report.max_symmetry_drift > 1e-8)
        std::cerr << "warning: symmetry drift " << report.max_symmetry_drift
                  << " exceeded 1e-8 before re-symmetrization\n";

    ordered_json params = {{"input", input},       {"method", method},
                           {"beta2", beta2},       {"epsilon", epsilon},
                           {"max_iters", max_iters}, {"index_base", index_base},
                           {"loops", loops},       {"binarize", binarize},
                           {"allow_zero_degrees", allow_zero_degrees}, {"force", force}};
    emit_manifest(out_prefix, "solve", params, {input}, false, 0, timer.seconds());

    if (!report.converged) {
        std::cerr << "error: solver did not converge in " << report.iterations
                  << " iterations (final step " << report.final_step << ")\n";
        return 2;
    }
    std::cout << "wrote " << out_prefix << ".similarity.csv (n=" << sim.size() << ", "
              << report.iterations << " iterations, residual " << report.residual << ")\n";
    return 0;
}

int run_roles(const std::string& input, const std::string& out_prefix, int k, double beta2,
              int restarts, int runs, std::uint64_t seed, double epsilon, int max_iters,
              int index_base, const std::string& loops, int max_n) {
    Timer timer;
    Digraph g = load_graph(input, index_base, max_n);

    RolesPipelineConfig cfg;
    cfg.k = k;
    cfg.beta2 = beta2;
    cfg.restarts = restarts;
    cfg.runs = runs;
    cfg.seed = seed;
    cfg.loops = parse_loops(loops);
    cfg.epsilon = epsilon;
    cfg.max_iters = max_iters;

    RolesPipelineResult result = run_roles_pipeline(g, cfg);
    write_roles_outputs(out_prefix, g, result);
    {
        auto out = open_out(out_prefix + ".report.json");
        out << report_json(result.report, "rw", beta2, result.similarity.size()) << "\n";
    }

    ordered_json params = {{"input", input},     {"k", k},           {"beta2", beta2},
                           {"restarts", restarts}, {"runs", runs},   {"epsilon", epsilon},
                           {"max_iters", max_iters}, {"index_base", index_base},
                           {"loops", loops}};
    emit_manifest(out_prefix, "roles", params, {input}, true, seed, timer.seconds());

    if (!result.report.converged) {
        std::cerr << "error: similarity solve did not converge\n";
        return 2;
    }
    std::cout << "wrote " << out_prefix << ".roles.txt (k=" << k << ", " << runs << " runs)\n";
    return 0;
}

int run_sbm(const std::string& model_path, const std::string& out_prefix, const std::string& mode,
            std::uint64_t seed, bool seed_given, int samples, double beta2) {
    Timer timer;
    std::ifstream in(model_path);
    if (!in) throw InputError("cannot open '" + model_path + "'");
    BlockModel model = read_model_file(in);

    ordered_json params = {{"model", model_path}, {"mode", mode}, {"samples", samples},
                           {"beta2", beta2}};

    int exit_code = 0;
    if (mode == "sample") {
        if (!seed_given) throw InputError("--seed is required for sampling");
        if (samples < 1) throw InputError("--samples must be >= 1");
        for (int s = 0; s < samples; ++s) {
            std::uint64_t sample_seed = CounterRng::mix(seed ^ CounterRng::mix(s + 1));
            Digraph sample = sample_adjacency(model, sample_seed);
            auto out = open_out(out_prefix + ".sample" + std::to_string(s) + ".edges");
            write_edge_list(out, sample);
        }
        std::cout << "wrote " << samples << " sampled edge list(s) under " << out_prefix << "\n";
    } else if (mode == "average") {
        Digraph avg = average_matrix(model);
        {
            auto out = open_out(out_prefix + ".average.edges");
            write_edge_list(out, avg);
        }
        {
            auto out = open_out(out_prefix + ".average.csv");
            write_matrix_csv(out, Eigen::MatrixXd(avg.adjacency()));
        }
        std::cout << "wrote average matrix (n=" << avg.node_count() << ") under " << out_prefix
                  << "\n";
    } else if (mode == "verify") {
        RecoveryReport rec = verify_recovery(model, beta2);
        ordered_json j = {{"gap", rec.gap},
                          {"max_row_discrepancy", rec.max_row_discrepancy},
                          {"rank", rec.rank},
                          {"blocks", model.r()},
                          {"pass", rec.pass}};
        {
            auto out = open_out(out_prefix + ".verify.json");
            out << j.dump(2) << "\n";
        }
        std::cout << (rec.pass ? "pass" : "FAIL") << ": gap " << rec.gap << ", rank " << rec.rank
                  << " (expected " << model.r() << "), within-block row discrepancy "
                  << rec.max_row_discrepancy << "\n";
        if (!rec.pass) exit_code = 2;
    } else {
        throw InputError("unknown mode '" + mode + "'");
    }

    emit_manifest(out_prefix, "sbm", params, {model_path}, seed_given, seed, timer.seconds());
    return exit_code;
}

int run_mc(const std::string& input, const std::string& out_prefix, int ell, long long trials,
           std::uint64_t seed, const std::string& pairs_spec, int index_base,
           const std::string& loops, int max_n) {
    Timer timer;
    Digraph g = load_graph(input, index_base, max_n);
    Digraph repaired = apply_loop_policy(g, parse_loops(loops));
    RowStochasticPair pq = transition_pair(repaired);
    PatternLayer closed = layer(pq, ell);

    std::vector<std::pair<int, int>> pairs;
    if (pairs_spec == "all") {
        for (int i = 0; i < repaired.node_count(); ++i)
            for (int j = i; j < repaired.node_count(); ++j) pairs.emplace_back(i, j);
    } else {
        std::stringstream ss(pairs_spec);
        std::string item;
        while (std::getline(ss, item, ';')) {
            if (item.empty()) continue;
            int i, j;
            char comma;
            std::istringstream ps(item);
            if (!(ps >> i >> comma >> j) || comma != ',')
                throw InputError("--pairs expects 'all' or 'i,j;i,j;...'");
            pairs.emplace_back(i - index_base, j - index_base);
        }
        if (pairs.empty()) throw InputError("--pairs list is empty");
    }

    auto out = open_out(out_prefix + ".mc.csv");
    out << "i,j,ell,estimate,stderr,closed_form,z_score\n";
    for (auto [i, j] : pairs) {
        MeetingEstimate est = meeting_probability(
            repaired, i, j, ell, trials,
            CounterRng::mix(seed ^ CounterRng::mix((static_cast<std::uint64_t>(i) << 20) ^
                                                   static_cast<std::uint64_t>(j))));
        double cf = closed.matrix(i, j);
        double z;
        if (est.stderr_ > 0.0)
            z = (est.estimate - cf) / est.stderr_;
        else
            z = est.estimate == cf ? 0.0 : std::numeric_limits<double>::infinity();
        char line[256];
        std::snprintf(line, sizeof(line), "%d,%d,%d,%.17g,%.17g,%.17g,%.17g\n", i + index_base,
                      j + index_base, ell, est.estimate, est.stderr_, cf, z);
        out << line;
    }

    ordered_json params = {{"input", input},   {"ell", ell},       {"trials", trials},
                           {"pairs", pairs_spec}, {"index_base", index_base}, {"loops", loops}};
    emit_manifest(out_prefix, "mc", params, {input}, true, seed, timer.seconds());
    std::cout << "wrote " << out_prefix << ".mc.csv (" << pairs.size() << " pairs, " << trials
              << " trials each)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random-walk node similarity and role extraction for directed graphs"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    // solve
    std::string input, out_prefix, method = "rw", loops = "auto";
    double beta2 = 0.2, epsilon = 1e-8;
    int max_iters = 10'000, index_base = 0, max_n = 5'000;
    bool binarize = false, allow_zero = false, force = false, heatmap = false;
    auto* solve = app.add_subcommand("solve", "Compute a node similarity matrix");
    solve->add_option("input", input, "edge-list file")->required();
    solve->add_option("--out", out_prefix, "output prefix")->required();
    solve->add_option("--method", method, "rw|nps|structural|degnorm")
        ->check(CLI::IsMember({"rw", "nps", "structural", "degnorm"}));
    solve->add_option("--beta2", beta2, "squared decay factor");
    solve->add_option("--epsilon", epsilon, "stepsize stopping threshold");
    solve->add_option("--max-iters", max_iters, "iteration cap");
    solve->add_option("--index-base", index_base, "0 or 1")->check(CLI::IsMember({0, 1}));
    solve->add_option("--loops", loops, "auto | off | <weight>");
    solve->add_flag("--binarize", binarize, "drop weights before structural counting");
    solve->add_flag("--allow-zero-degrees", allow_zero, "0/0 reads as 0 in degnorm");
    solve->add_flag("--force", force, "skip the nps spectral-radius check");
    solve->add_flag("--heatmap", heatmap, "also write a PGM heatmap");
    solve->add_option("--max-n", max_n, "dense-storage node cap");

    // roles
    std::string r_input, r_out, r_loops = "auto";
    int k = 0, restarts = 20, runs = 20, r_index_base = 0, r_max_iters = 10'000, r_max_n = 5'000;
    double r_beta2 = 0.2, r_epsilon = 1e-8;
    std::uint64_t r_seed = 0;
    auto* roles = app.add_subcommand("roles", "Extract node roles from the similarity matrix");
    roles->add_option("input", r_input, "edge-list file")->required();
    roles->add_option("--out", r_out, "output prefix")->required();
    roles->add_option("--k", k, "number of roles")->required();
    roles->add_option("--seed", r_seed, "clustering seed")->required();
    roles->add_option("--beta2", r_beta2, "squared decay factor");
    roles->add_option("--restarts", restarts, "k-means restarts per run");
    roles->add_option("--runs", runs, "clustering runs fed to the consensus");
    roles->add_option("--epsilon", r_epsilon, "solver stopping threshold");
    roles->add_option("--max-iters", r_max_iters, "solver iteration cap");
    roles->add_option("--index-base", r_index_base, "0 or 1")->check(CLI::IsMember({0, 1}));
    roles->add_option("--loops", r_loops, "auto | off | <weight>");
    roles->add_option("--max-n", r_max_n, "dense-storage node cap");

    // sbm
    std::string model_path, s_out, mode;
    std::uint64_t s_seed = 0;
    int samples = 1;
    double s_beta2 = 0.5;
    auto* sbm = app.add_subcommand("sbm", "Block-model sampling, averages, and verification");
    sbm->add_option("model", model_path, "model description file")->required();
    sbm->add_option("--out", s_out, "output prefix")->required();
    sbm->add_option("--mode", mode, "sample|average|verify")
        ->required()
        ->check(CLI::IsMember({"sample", "average", "verify"}));
    auto* seed_opt = sbm->add_option("--seed", s_seed, "sampling seed");
    sbm->add_option("--samples", samples, "number of sampled graphs");
    sbm->add_option("--beta2", s_beta2, "squared decay factor for verify");

    // mc
    std::string m_input, m_out, m_pairs = "all", m_loops = "auto";
    int ell = 0, m_index_base = 0, m_max_n = 5'000;
    long long trials = 0;
    std::uint64_t m_seed = 0;
    auto* mc = app.add_subcommand("mc", "Monte-Carlo meeting-probability validation");
    mc->add_option("input", m_input, "edge-list file")->required();
    mc->add_option("--out", m_out, "output prefix")->required();
    mc->add_option("--ell", ell, "pattern length")->required();
    mc->add_option("--trials", trials, "trials per pair")->required();
    mc->add_option("--seed", m_seed, "trial seed")->required();
    mc->add_option("--pairs", m_pairs, "all | 'i,j;i,j;...'");
    mc->add_option("--index-base", m_index_base, "0 or 1")->check(CLI::IsMember({0, 1}));
    mc->add_option("--loops", m_loops, "auto | off | <weight>");
    mc->add_option("--max-n", m_max_n, "dense-storage node cap");

    try {
        app.parse(argc, argv);
        if (solve->parsed())
            return run_solve(input, out_prefix, method, beta2, epsilon, max_iters, index_base,
                             loops, binarize, allow_zero, force, heatmap, max_n);
        if (roles->parsed())
            return run_roles(r_input, r_out, k, r_beta2, restarts, runs, r_seed, r_epsilon,
                             r_max_iters, r_index_base, r_loops, r_max_n);
        if (sbm->parsed())
            return run_sbm(model_path, s_out, mode, s_seed, seed_opt->count() > 0, samples,
                           s_beta2);
        if (mc->parsed())
            return run_mc(m_input, m_out, ell, trials, m_seed, m_pairs, m_index_base, m_loops,
                          m_max_n);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceCapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
