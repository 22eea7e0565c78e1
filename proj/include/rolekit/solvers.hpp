#pragma once

#include "rolekit/graph.hpp"
#include "rolekit/similarity.hpp"

#include <string>
#include <utility>
#include <vector>

namespace rolekit {

/// Parameters of the fixed-point solvers. beta2 is the squared decay factor
/// (must stay below 1), epsilon the max-norm stepsize threshold.
struct SolverConfig {
    double beta2 = 0.2;
    double epsilon = 1e-8;
    int max_iters = 10'000;

    SolverConfig() = default;
    SolverConfig(double beta2_, double epsilon_ = 1e-8, int max_iters_ = 10'000);
    void validate() const;
};

struct SolveReport {
    int iterations = 0;
    double final_step = 0.0;         // max-norm of the last update
    double residual = 0.0;           // max-norm equation residual, recomputed after the loop
    double error_bound = 0.0;        // final_step * beta2 / (1 - beta2)
    double max_symmetry_drift = 0.0; // worst asymmetry seen before re-symmetrization
    bool converged = false;
};

namespace detail {

/// Options of the shared fixed-point kernel for equations of the form
///   Z = C + coeff * (M Z M^T + N Z N^T).
struct SteinOptions {
    double coeff = 0.0;       // multiplier of the two-sided products in the sweep
    double contraction = 0.0; // factor gamma of the a-posteriori bound step*gamma/(1-gamma)
    bool identity_rhs = true; // C = M M^T + N N^T, swept as T = I + coeff Z; Z = M T M^T + N T N^T
    const Eigen::MatrixXd* rhs = nullptr; // explicit C when !identity_rhs
    double epsilon = 1e-8;
    int max_iters = 10'000;
    int divergence_window = 0; // raise after this many consecutive step growths (0 = off)
    std::string divergence_message;
};

/// Z holds the start iterate on entry and the best iterate on exit. The
/// iterate is re-symmetrized every sweep; the worst drift is reported.
/// The residual is recomputed from fresh products after the loop.
template <class Op>
SolveReport stein_fixed_point(const Op& M, const Op& N, const SteinOptions& opt,
                              Eigen::MatrixXd& Z);

} // namespace detail

/// Solves S - (beta2/2)(P S P^T + Q S Q^T) = P P^T + Q Q^T by the globally
/// convergent stepsize-stopped iteration, starting from the zero matrix.
/// On iteration exhaustion the best iterate is returned with converged=false.
std::pair<SimilarityMatrix, SolveReport> solve_rw_similarity(const RowStochasticPair& pq,
                                                             const SolverConfig& cfg);

/// Same, from a caller-supplied start iterate.
std::pair<SimilarityMatrix, SolveReport> solve_rw_similarity(const RowStochasticPair& pq,
                                                             const SolverConfig& cfg,
                                                             const Eigen::MatrixXd& initial);

/// Max-norm of S - (beta2/2)(P S P^T + Q S Q^T) - (P P^T + Q Q^T),
/// with freshly evaluated products.
double residual_rw(const Eigen::MatrixXd& S, const RowStochasticPair& pq, double beta2);

/// S = A A^T + A^T A on the stored (or binarized) adjacency.
SimilarityMatrix baseline_structural(const Digraph& g, bool binarize = false);

/// S = Dout^-1 A A^T Dout^-1 + Din^-1 A^T A Din^-1. Zero-degree nodes are an
/// error unless allow_zero_degrees is set, in which case their rows follow
/// the 0/0 = 0 convention.
SimilarityMatrix baseline_degree_normalized(const Digraph& g, bool allow_zero_degrees = false);

struct SpectralEstimate {
    double rho = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Spectral radius of the map X -> A X A^T + A^T X A, estimated by power
/// iteration on n-by-n matrices (the n^2-by-n^2 Kronecker matrix is never
/// formed). 1/rho is the convergence threshold for the beta2 of solve_nps.
SpectralEstimate nps_spectral_bound(const Digraph& g, int max_iters = 20'000);

/// Neighbourhood-pattern similarity: fixed point of
///   S = S_1 + beta2 (A S A^T + A^T S A),  S_1 = A A^T + A^T A.
/// Refuses beta2 at or above 1/rho unless skip_spectral_check is set, and
/// raises ConvergenceError when the stepsize grows for 10 straight sweeps.
/// cfg.beta2 is ignored here; the explicit beta2 argument governs.
std::pair<SimilarityMatrix, SolveReport> solve_nps(const Digraph& g, double beta2,
                                                   const SolverConfig& cfg,
                                                   bool skip_spectral_check = false);

/// Normalized solution of (P^T W P + Q^T W Q)/2 = W with unit entry sum.
struct LimitWeights {
    Eigen::MatrixXd W;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

/// Power iteration for the limit-weight matrix, damped on oscillation.
/// On non-convergence the averaged tail iterate is returned, flagged.
LimitWeights limit_weights(const RowStochasticPair& pq, double tol = 1e-12,
                           int max_iters = 200'000);

struct LimitCheckRow {
    double beta2 = 0.0;
    double delta = 0.0;      // ||(1-beta2) S(beta) - 2 trace(W) 11^T||_max
    double rel_delta = 0.0;  // delta / (2 trace(W))
};

/// Evaluates the flattening of (1-beta2) S(beta) toward 2 trace(W) 11^T
/// for each requested beta2.
std::vector<LimitCheckRow> verify_limit(const RowStochasticPair& pq,
                                        const std::vector<double>& beta2_list);

} // namespace rolekit
