#include "rolekit/solvers.hpp"

#include "rolekit/errors.hpp"
#include "rolekit/rng.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace rolekit {

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::rw_similarity: return "rw_similarity";
        case Provenance::nps: return "nps";
        case Provenance::structural: return "structural";
        case Provenance::degree_normalized: return "degree_normalized";
        case Provenance::partial_sum: return "partial_sum";
        case Provenance::layer: return "layer";
    }
    return "unknown";
}

SolverConfig::SolverConfig(double beta2_, double epsilon_, int max_iters_)
    : beta2(beta2_), epsilon(epsilon_), max_iters(max_iters_) {
    validate();
}

void SolverConfig::validate() const {
    if (!(beta2 >= 0.0 && beta2 < 1.0))
        throw InputError("beta2 must lie in [0, 1), got " + std::to_string(beta2));
    if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
    if (max_iters < 1) throw InputError("max_iters must be >= 1");
}

namespace detail {

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

double bound_from_step(double step, double gamma) {
    if (gamma <= 0.0) return 0.0;
    if (gamma >= 1.0) return std::numeric_limits<double>::infinity();
    return step * gamma / (1.0 - gamma);
}

} // namespace

template <class Op>
SolveReport stein_fixed_point(const Op& M, const Op& N, const SteinOptions& opt,
                              Eigen::MatrixXd& Z) {
    const auto n = M.rows();
    if (M.cols() != n || N.rows() != n || N.cols() != n)
        throw InputError("fixed-point operands must be square matrices of equal size");
    if (!opt.identity_rhs && (opt.rhs == nullptr || opt.rhs->rows() != n || opt.rhs->cols() != n))
        throw InputError("explicit right-hand side missing or mis-sized");
    if (Z.rows() != n || Z.cols() != n) Z = Eigen::MatrixXd::Zero(n, n);

    const Op Mt = M.transpose();
    const Op Nt = N.transpose();

    SolveReport rep;
    Eigen::MatrixXd T(n, n), Znew(n, n);
    double prev_step = std::numeric_limits<double>::infinity();
    int growth_streak = 0;

    for (int iter = 1; iter <= opt.max_iters; ++iter) {
        T = opt.coeff * Z;
        if (opt.identity_rhs) T.diagonal().array() += 1.0;
        Znew.noalias() = (M * T) * Mt;
        Znew.noalias() += (N * T) * Nt;
        if (!opt.identity_rhs) Znew += *opt.rhs;

        double drift = max_abs(Znew - Znew.transpose());
        rep.max_symmetry_drift = std::max(rep.max_symmetry_drift, drift);
        Znew = 0.5 * (Znew + Znew.transpose()).eval();

        double step = max_abs(Znew - Z);
        Z.swap(Znew);
        rep.iterations = iter;
        rep.final_step = step;
        if (step <= opt.epsilon) {
            rep.converged = true;
            break;
        }
        if (opt.divergence_window > 0) {
            growth_streak = step > prev_step ? growth_streak + 1 : 0;
            if (growth_streak >= opt.divergence_window)
                throw ConvergenceError(opt.divergence_message.empty()
                                           ? "fixed-point iteration is diverging"
                                           : opt.divergence_message);
        }
        prev_step = step;
    }

    // Residual from fresh products.
    T = opt.coeff * Z;
    Znew.noalias() = (M * T) * Mt;
    Znew.noalias() += (N * T) * Nt;
    if (opt.identity_rhs) {
        Znew.noalias() += Eigen::MatrixXd(M * Mt);
        Znew.noalias() += Eigen::MatrixXd(N * Nt);
    } else {
        Znew += *opt.rhs;
    }
    rep.residual = max_abs(Z - Znew);
    rep.error_bound = bound_from_step(rep.final_step, opt.contraction);
    return rep;
}

template SolveReport stein_fixed_point<SpMat>(const SpMat&, const SpMat&, const SteinOptions&,
                                              Eigen::MatrixXd&);
template SolveReport stein_fixed_point<Eigen::MatrixXd>(const Eigen::MatrixXd&,
                                                        const Eigen::MatrixXd&,
                                                        const SteinOptions&, Eigen::MatrixXd&);

} // namespace detail

std::pair<SimilarityMatrix, SolveReport> solve_rw_similarity(const RowStochasticPair& pq,
                                                             const SolverConfig& cfg) {
    return solve_rw_similarity(pq, cfg, Eigen::MatrixXd::Zero(pq.n(), pq.n()));
}

std::pair<SimilarityMatrix, SolveReport> solve_rw_similarity(const RowStochasticPair& pq,
                                                             const SolverConfig& cfg,
                                                             const Eigen::MatrixXd& initial) {
    cfg.validate();
    detail::SteinOptions opt;
    opt.coeff = cfg.beta2 / 2.0;
    opt.contraction = cfg.beta2;
    opt.identity_rhs = true;
    opt.epsilon = cfg.epsilon;
    opt.max_iters = cfg.max_iters;
    Eigen::MatrixXd Z = initial;
    SolveReport rep = detail::stein_fixed_point(pq.P, pq.Q, opt, Z);
    return {SimilarityMatrix{std::move(Z), Provenance::rw_similarity}, rep};
}

double residual_rw(const Eigen::MatrixXd& S, const RowStochasticPair& pq, double beta2) {
    if (S.rows() != pq.P.rows() || S.cols() != pq.P.rows())
        throw InputError("similarity matrix size does not match the transition pair");
    SpMat Pt = pq.P.transpose();
    SpMat Qt = pq.Q.transpose();
    Eigen::MatrixXd rhs = Eigen::MatrixXd(pq.P * Pt) + Eigen::MatrixXd(pq.Q * Qt);
    Eigen::MatrixXd lhs = S - (beta2 / 2.0) * ((pq.P * S) * Pt + (pq.Q * S) * Qt);
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

SimilarityMatrix baseline_structural(const Digraph& g, bool binarize) {
    Eigen::MatrixXd A = binarize ? Eigen::MatrixXd(g.binarized().adjacency())
                                 : Eigen::MatrixXd(g.adjacency());
    Eigen::MatrixXd S = A * A.transpose() + A.transpose() * A;
    S = 0.5 * (S + S.transpose()).eval();
    return {std::move(S), Provenance::structural};
}

SimilarityMatrix baseline_degree_normalized(const Digraph& g, bool allow_zero_degrees) {
    DegreeInfo deg = degrees(g);
    const int n = g.node_count();
    if (!allow_zero_degrees) {
        for (int i = 0; i < n; ++i) {
            if (deg.d_out[i] <= 0.0 || deg.d_in[i] <= 0.0)
                throw InputError("node " + std::to_string(i + g.index_base()) +
                                 " has a zero degree; pass allow_zero_degrees or augment loops");
        }
    }
    Eigen::VectorXd inv_out(n), inv_in(n);
    for (int i = 0; i < n; ++i) {
        inv_out[i] = deg.d_out[i] > 0.0 ? 1.0 / deg.d_out[i] : 0.0; // 0/0 reads as 0
        inv_in[i] = deg.d_in[i] > 0.0 ? 1.0 / deg.d_in[i] : 0.0;
    }
    Eigen::MatrixXd A = Eigen::MatrixXd(g.adjacency());
    Eigen::MatrixXd out_part = A * A.transpose();
    Eigen::MatrixXd in_part = A.transpose() * A;
    Eigen::MatrixXd S = inv_out.asDiagonal() * out_part * inv_out.asDiagonal();
    S += inv_in.asDiagonal() * in_part * inv_in.asDiagonal();
    S = 0.5 * (S + S.transpose()).eval();
    return {std::move(S), Provenance::degree_normalized};
}

namespace {

// One shifted power-iteration run for the map X -> A X A^T + A^T X A + X.
// The +X shift keeps the dominant eigenvalue simple in modulus, so norm
// ratios settle even on periodic structures; the shift is subtracted at the end.
SpectralEstimate nps_power_run(const SpMat& A, const SpMat& At, Eigen::MatrixXd X,
                               int max_iters) {
    SpectralEstimate est;
    double norm = X.norm();
    if (norm == 0.0) return est;
    X /= norm;
    double lambda_prev = std::numeric_limits<double>::quiet_NaN();
    Eigen::MatrixXd Y;
    for (int iter = 1; iter <= max_iters; ++iter) {
        Y.noalias() = (A * X) * At;
        Y.noalias() += (At * X) * A;
        Y += X;
        double lambda = Y.norm(); // ||X|| == 1
        est.iterations = iter;
        if (lambda == 0.0) {
            est.rho = 0.0;
            est.converged = true;
            return est;
        }
        X = Y / lambda;
        est.rho = lambda - 1.0;
        if (std::isfinite(lambda_prev) &&
            std::abs(lambda - lambda_prev) <= 1e-10 * std::max(1.0, std::abs(lambda))) {
            est.converged = true;
            return est;
        }
        lambda_prev = lambda;
    }
    return est;
}

} // namespace

SpectralEstimate nps_spectral_bound(const Digraph& g, int max_iters) {
    const int n = g.node_count();
    if (n == 0) throw InputError("spectral bound of an empty graph");
    const SpMat& A = g.adjacency();
    SpMat At = g.adjacency_transposed();
    if (g.arc_count() == 0) return {0.0, 0, true};

    SpectralEstimate ones = nps_power_run(A, At, Eigen::MatrixXd::Ones(n, n), max_iters);
    CounterRng rng(0x9aa2f7d1u, 7);
    Eigen::MatrixXd R(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) R(i, j) = rng.next_unit() + 0.5;
    SpectralEstimate rnd = nps_power_run(A, At, std::move(R), max_iters);

    SpectralEstimate out;
    out.rho = std::max(ones.rho, rnd.rho);
    out.iterations = ones.iterations + rnd.iterations;
    out.converged = ones.converged && rnd.converged;
    return out;
}

std::pair<SimilarityMatrix, SolveReport> solve_nps(const Digraph& g, double beta2,
                                                   const SolverConfig& cfg,
                                                   bool skip_spectral_check) {
    if (beta2 < 0.0) throw InputError("beta2 must be nonnegative");
    SpectralEstimate est = nps_spectral_bound(g);
    std::ostringstream bound_msg;
    bound_msg << "beta2 = " << beta2 << " is not below the convergence threshold 1/rho = "
              << (est.rho > 0.0 ? 1.0 / est.rho : std::numeric_limits<double>::infinity())
              << " (estimated rho = " << est.rho << ")";
    if (!skip_spectral_check && est.rho > 0.0 && beta2 >= 1.0 / est.rho)
        throw ConvergenceError(bound_msg.str());

    detail::SteinOptions opt;
    opt.coeff = beta2;
    opt.contraction = beta2 * est.rho;
    opt.identity_rhs = true;
    opt.epsilon = cfg.epsilon;
    opt.max_iters = cfg.max_iters;
    opt.divergence_window = 10;
    opt.divergence_message = "neighbourhood-pattern iteration is diverging: " + bound_msg.str();
    Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(g.node_count(), g.node_count());
    SolveReport rep = detail::stein_fixed_point(g.adjacency(), g.adjacency_transposed(), opt, Z);
    return {SimilarityMatrix{std::move(Z), Provenance::nps}, rep};
}

LimitWeights limit_weights(const RowStochasticPair& pq, double tol, int max_iters) {
    const int n = pq.n();
    SpMat Pt = pq.P.transpose();
    SpMat Qt = pq.Q.transpose();

    auto apply = [&](const Eigen::MatrixXd& W) -> Eigen::MatrixXd {
        Eigen::MatrixXd out = 0.5 * ((Pt * W) * pq.P + (Qt * W) * pq.Q);
        return out;
    };

    LimitWeights lw;
    Eigen::MatrixXd W = Eigen::MatrixXd::Constant(n, n, 1.0 / (double(n) * n));
    Eigen::MatrixXd W_prev = W, W_prev2 = W;
    bool damped = false;
    double step = std::numeric_limits<double>::infinity();

    for (int iter = 1; iter <= max_iters; ++iter) {
        W_prev2 = W_prev;
        W_prev = W;
        Eigen::MatrixXd next = apply(W);
        if (damped) next = 0.5 * (W + next);
        double sum = next.sum();
        if (sum > 0.0) next /= sum;
        W = std::move(next);
        step = (W - W_prev).cwiseAbs().maxCoeff();
        lw.iterations = iter;
        if (step <= tol) {
            lw.converged = true;
            break;
        }
        // Period-2 oscillation: successive iterates far apart while every
        // other iterate nearly repeats. Damping preserves fixed points.
        if (!damped && iter >= 3) {
            double wobble = (W - W_prev2).cwiseAbs().maxCoeff();
            if (wobble <= 0.1 * step) damped = true;
        }
    }

    if (!lw.converged) {
        Eigen::MatrixXd tail = 0.5 * (W + W_prev);
        double sum = tail.sum();
        if (sum > 0.0) tail /= sum;
        W = std::move(tail);
    }
    lw.residual = (apply(W) - W).cwiseAbs().maxCoeff();
    lw.W = std::move(W);
    return lw;
}

std::vector<LimitCheckRow> verify_limit(const RowStochasticPair& pq,
                                        const std::vector<double>& beta2_list) {
    LimitWeights lw = limit_weights(pq);
    const double target = 2.0 * lw.W.trace();
    const int n = pq.n();
    Eigen::MatrixXd limit = Eigen::MatrixXd::Constant(n, n, target);

    std::vector<LimitCheckRow> rows;
    rows.reserve(beta2_list.size());
    for (double b2 : beta2_list) {
        const double eps = 1e-10;
        int iters = 20'000;
        if (b2 > 0.0 && b2 < 1.0) {
            double need = std::log(eps / 10.0) / std::log(b2);
            iters = std::max(iters, static_cast<int>(3.0 * need));
        }
        SolverConfig cfg(b2, eps, iters);
        auto [S, rep] = solve_rw_similarity(pq, cfg);
        if (!rep.converged)
            throw ConvergenceError("similarity solve did not converge for beta2 = " +
                                   std::to_string(b2));
        double delta = ((1.0 - b2) * S.values - limit).cwiseAbs().maxCoeff();
        rows.push_back({b2, delta, target > 0.0 ? delta / target : delta});
    }
    return rows;
}

} // namespace rolekit
