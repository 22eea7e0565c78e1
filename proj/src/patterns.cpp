#include "rolekit/patterns.hpp"

#include "rolekit/errors.hpp"

#include <cmath>
#include <string>

namespace rolekit {

WalkPattern::WalkPattern(std::vector<Step> steps) : steps_(std::move(steps)) {
    if (steps_.empty()) throw InputError("walk pattern must be nonempty");
}

WalkPattern WalkPattern::parse(std::string_view text) {
    std::vector<Step> steps;
    steps.reserve(text.size());
    for (char c : text) {
        if (c == 'd')
            steps.push_back(Step::Direct);
        else if (c == 'r')
            steps.push_back(Step::Reverse);
        else
            throw InputError(std::string("walk pattern may contain only 'd' and 'r', got '") + c +
                             "'");
    }
    return WalkPattern(std::move(steps));
}

std::string WalkPattern::str() const {
    std::string s;
    s.reserve(steps_.size());
    for (Step st : steps_) s.push_back(st == Step::Direct ? 'd' : 'r');
    return s;
}

namespace {

template <class Op>
Eigen::MatrixXd apply_pattern_impl(const WalkPattern& psi, const Op& M, const Op& N) {
    if (M.rows() != M.cols() || N.rows() != N.cols() || M.rows() != N.rows())
        throw InputError("pattern operands must be square matrices of equal size");
    Eigen::MatrixXd acc = psi.step(0) == Step::Direct ? Eigen::MatrixXd(M) : Eigen::MatrixXd(N);
    for (std::size_t k = 1; k < psi.length(); ++k) {
        const Op& x = psi.step(k) == Step::Direct ? M : N;
        acc = acc * x;
    }
    return acc;
}

} // namespace

Eigen::MatrixXd apply_pattern(const WalkPattern& psi, const Eigen::MatrixXd& M,
                              const Eigen::MatrixXd& N) {
    return apply_pattern_impl(psi, M, N);
}

Eigen::MatrixXd apply_pattern(const WalkPattern& psi, const SpMat& M, const SpMat& N) {
    return apply_pattern_impl(psi, M, N);
}

Eigen::VectorXd apply_pattern(const WalkPattern& psi, const Eigen::MatrixXd& M,
                              const Eigen::MatrixXd& N, const Eigen::VectorXd& seed) {
    if (M.rows() != M.cols() || N.rows() != N.cols() || M.rows() != N.rows() ||
        seed.size() != M.rows())
        throw InputError("pattern operands and seed must have matching sizes");
    Eigen::VectorXd v = seed;
    for (std::size_t k = psi.length(); k-- > 0;) {
        const Eigen::MatrixXd& x = psi.step(k) == Step::Direct ? M : N;
        v = x * v;
    }
    return v;
}

Eigen::MatrixXi count_walks(const Digraph& g, const WalkPattern& psi, bool binarize) {
    Digraph work = g;
    if (!g.is_unweighted()) {
        if (!binarize)
            throw InputError("count_walks requires an unweighted graph (or the binarize flag)");
        work = g.binarized();
    }
    Eigen::MatrixXd counts =
        apply_pattern(psi, work.adjacency(), work.adjacency_transposed());
    return counts.unaryExpr([](double v) { return static_cast<int>(std::llround(v)); });
}

std::vector<std::vector<int>> enumerate_walks(const Digraph& g, const WalkPattern& psi,
                                              int source) {
    if (psi.length() > 8 || g.node_count() > 12)
        throw ResourceCapError("walk enumeration is limited to |psi| <= 8 and n <= 12");
    if (source < 0 || source >= g.node_count()) throw InputError("source node out of range");

    std::vector<std::vector<int>> walks;
    std::vector<int> current{source};
    // DFS over partial walks; neighbor sets come from the stored CSR rows.
    auto extend = [&](auto&& self, std::size_t depth) -> void {
        if (depth == psi.length()) {
            walks.push_back(current);
            return;
        }
        int at = current.back();
        std::vector<int> nexts = psi.step(depth) == Step::Direct ? g.out_neighbors(at)
                                                                 : g.in_neighbors(at);
        for (int nb : nexts) {
            current.push_back(nb);
            self(self, depth + 1);
            current.pop_back();
        }
    };
    extend(extend, 0);
    return walks;
}

PatternLayer layer(const RowStochasticPair& pq, int ell) {
    if (ell < 1) throw InputError("layer index must be >= 1");
    const int n = pq.n();
    SpMat Pt = pq.P.transpose();
    SpMat Qt = pq.Q.transpose();
    Eigen::MatrixXd S = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd scratch(n, n);
    for (int l = 0; l < ell; ++l) {
        scratch.noalias() = (pq.P * S) * Pt;
        scratch.noalias() += (pq.Q * S) * Qt;
        scratch *= 0.5;
        S = 0.5 * (scratch + scratch.transpose());
    }
    return {ell, std::move(S)};
}

SimilarityMatrix partial_sum(const RowStochasticPair& pq, double beta2, int k) {
    if (k < 1) throw InputError("partial sum order must be >= 1");
    if (beta2 < 0.0) throw InputError("beta2 must be nonnegative");
    const int n = pq.n();
    SpMat Pt = pq.P.transpose();
    SpMat Qt = pq.Q.transpose();
    Eigen::MatrixXd S1 = Eigen::MatrixXd(pq.P * Pt) + Eigen::MatrixXd(pq.Q * Qt);
    S1 = 0.5 * (S1 + S1.transpose()).eval();
    Eigen::MatrixXd S = S1;
    Eigen::MatrixXd scratch(n, n);
    for (int step = 1; step < k; ++step) {
        scratch.noalias() = (pq.P * S) * Pt;
        scratch.noalias() += (pq.Q * S) * Qt;
        S = S1 + (beta2 / 2.0) * scratch;
        S = 0.5 * (S + S.transpose()).eval();
    }
    return {std::move(S), Provenance::partial_sum};
}

} // namespace rolekit
