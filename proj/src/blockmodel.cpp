#include "rolekit/blockmodel.hpp"

#include "rolekit/errors.hpp"
#include "rolekit/parallel.hpp"
#include "rolekit/rng.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numeric>
#include <string>

namespace rolekit {

int BlockModel::n() const { return std::accumulate(sizes.begin(), sizes.end(), 0); }

int BlockModel::block_of(int node) const {
    int acc = 0;
    for (std::size_t b = 0; b < sizes.size(); ++b) {
        acc += sizes[b];
        if (node < acc) return static_cast<int>(b);
    }
    throw InputError("node index out of range for the block layout");
}

double BlockModel::expectation(int i, int j) const {
    return correction1(i) * B(block_of(i), block_of(j)) * correction2(j);
}

void BlockModel::validate(bool for_sampling) const {
    if (B.rows() == 0 || B.rows() != B.cols()) throw InputError("role matrix B must be square");
    if (static_cast<int>(sizes.size()) != r())
        throw InputError("sizes list must have one entry per block");
    for (int s : sizes)
        if (s < 1) throw InputError("block sizes must be positive");
    if ((B.array() < 0.0).any() || (B.array() > 1.0).any())
        throw InputError("role matrix entries must lie in [0, 1]");
    for (int p = 0; p < r(); ++p) {
        if (B.row(p).sum() == 0.0) throw InputError("role matrix row " + std::to_string(p) + " vanishes");
        if (B.col(p).sum() == 0.0) throw InputError("role matrix column " + std::to_string(p) + " vanishes");
    }
    const int nn = n();
    if (d1.size() && d1.size() != nn) throw InputError("d1 must have one entry per node");
    if (d2.size() && d2.size() != nn) throw InputError("d2 must have one entry per node");
    if ((d1.size() && (d1.array() <= 0.0).any()) || (d2.size() && (d2.array() <= 0.0).any()))
        throw InputError("degree corrections must be positive");
    if (for_sampling) {
        for (int i = 0; i < nn; ++i)
            for (int j = 0; j < nn; ++j)
                if (expectation(i, j) > 1.0)
                    throw InputError("expectation of arc (" + std::to_string(i) + ", " +
                                     std::to_string(j) + ") exceeds 1; not a Bernoulli model");
    }
}

BlockModel BlockModel::with_halved_corrections(Eigen::MatrixXd B, std::vector<int> sizes) {
    int n = std::accumulate(sizes.begin(), sizes.end(), 0);
    Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
    int offset = 0;
    for (int sz : sizes) {
        int halved = (sz + 1) / 2;
        for (int i = 0; i < halved; ++i) d[offset + i] = 0.5;
        offset += sz;
    }
    BlockModel m{std::move(B), std::move(sizes), d, d};
    m.validate();
    return m;
}

MembershipMatrix membership(const std::vector<int>& sizes) {
    if (sizes.empty()) throw InputError("membership needs at least one block");
    for (int s : sizes)
        if (s < 1) throw InputError("block sizes must be positive");
    int n = std::accumulate(sizes.begin(), sizes.end(), 0);
    int r = static_cast<int>(sizes.size());
    MembershipMatrix m;
    m.theta = Eigen::MatrixXd::Zero(n, r);
    m.block_of.resize(n);
    int offset = 0;
    for (int b = 0; b < r; ++b) {
        double v = 1.0 / std::sqrt(static_cast<double>(sizes[b]));
        for (int i = 0; i < sizes[b]; ++i) {
            m.theta(offset + i, b) = v;
            m.block_of[offset + i] = b;
        }
        offset += sizes[b];
    }
    return m;
}

Digraph average_matrix(const BlockModel& model) {
    model.validate();
    const int n = model.n();
    std::vector<Arc> arcs;
    arcs.reserve(static_cast<std::size_t>(n) * n);
    std::vector<int> block(n);
    for (int i = 0; i < n; ++i) block[i] = model.block_of(i);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double w = model.correction1(i) * model.B(block[i], block[j]) * model.correction2(j);
            if (w > 0.0) arcs.push_back({i, j, w});
        }
    }
    return Digraph::from_arcs(n, std::move(arcs));
}

Digraph sample_adjacency(const BlockModel& model, std::uint64_t seed) {
    model.validate(true);
    const int n = model.n();
    std::vector<int> block(n);
    for (int i = 0; i < n; ++i) block[i] = model.block_of(i);
    std::vector<std::vector<Arc>> rows(n);
    parallel_for(0, n, [&](long long lo, long long hi) {
        for (long long i = lo; i < hi; ++i) {
            CounterRng rng(seed, static_cast<std::uint64_t>(i));
            auto& out = rows[i];
            for (int j = 0; j < n; ++j) {
                double e = model.correction1(static_cast<int>(i)) * model.B(block[i], block[j]) *
                           model.correction2(j);
                if (rng.next_unit() < e) out.push_back({static_cast<int>(i), j, 1.0});
            }
        }
    });
    std::vector<Arc> arcs;
    for (auto& row : rows) arcs.insert(arcs.end(), row.begin(), row.end());
    return Digraph::from_arcs(n, std::move(arcs));
}

ReducedSolution reduced_solve(const BlockModel& model, double beta2, const SolverConfig& cfg) {
    if (!(beta2 >= 0.0 && beta2 < 1.0)) throw InputError("beta2 must lie in [0, 1)");
    Digraph avg = average_matrix(model);
    RowStochasticPair pq = transition_pair(avg);
    MembershipMatrix mem = membership(model.sizes);
    const Eigen::MatrixXd& Th = mem.theta;

    ReducedSolution sol;
    sol.M = Th.transpose() * (pq.P * Th);
    sol.N = Th.transpose() * (pq.Q * Th);
    SpMat Pt = pq.P.transpose();
    SpMat Qt = pq.Q.transpose();
    Eigen::MatrixXd S1 = Eigen::MatrixXd(pq.P * Pt) + Eigen::MatrixXd(pq.Q * Qt);
    Eigen::MatrixXd rhs = Th.transpose() * S1 * Th;
    rhs = 0.5 * (rhs + rhs.transpose()).eval();

    detail::SteinOptions opt;
    opt.coeff = beta2 / 2.0;
    opt.contraction = beta2;
    opt.identity_rhs = false;
    opt.rhs = &rhs;
    opt.epsilon = cfg.epsilon;
    opt.max_iters = cfg.max_iters;
    sol.X = Eigen::MatrixXd::Zero(model.r(), model.r());
    sol.report = detail::stein_fixed_point(sol.M, sol.N, opt, sol.X);
    return sol;
}

int numerical_rank(const Eigen::MatrixXd& M, double tau) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] <= 0.0) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > tau * sv[0]) ++rank;
    return rank;
}

RecoveryReport verify_recovery(const BlockModel& model, double beta2, double tolerance) {
    Digraph avg = average_matrix(model);
    RowStochasticPair pq = transition_pair(avg);
    SolverConfig cfg(beta2, 1e-12, 200'000);
    auto [S, full_rep] = solve_rw_similarity(pq, cfg);

    ReducedSolution red = reduced_solve(model, beta2, cfg);
    MembershipMatrix mem = membership(model.sizes);
    Eigen::MatrixXd lifted = mem.theta * red.X * mem.theta.transpose();

    RecoveryReport rep;
    rep.full_report = full_rep;
    rep.reduced_report = red.report;
    rep.gap = (S.values - lifted).cwiseAbs().maxCoeff();
    rep.rank = numerical_rank(S.values);

    double worst = 0.0;
    int offset = 0;
    for (int sz : model.sizes) {
        for (int i = offset + 1; i < offset + sz; ++i) {
            double d = (S.values.row(i) - S.values.row(offset)).cwiseAbs().maxCoeff();
            worst = std::max(worst, d);
        }
        offset += sz;
    }
    rep.max_row_discrepancy = worst;
    rep.pass = rep.gap <= tolerance;
    return rep;
}

} // namespace rolekit
