#pragma once

#include "rolekit/graph.hpp"
#include "rolekit/similarity.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rolekit {

/// One traversal step of a generalized walk: along the arc or against it.
enum class Step : std::uint8_t { Direct, Reverse };

/// Finite nonempty word over {d, r}; round-trips with strings like "ddrrd".
class WalkPattern {
public:
    explicit WalkPattern(std::vector<Step> steps);

    /// Parses "d"/"r" strings; any other character (or an empty string) is rejected.
    static WalkPattern parse(std::string_view text);

    std::string str() const;
    std::size_t length() const { return steps_.size(); }
    Step step(std::size_t k) const { return steps_[k]; }
    const std::vector<Step>& steps() const { return steps_; }

private:
    std::vector<Step> steps_;
};

/// The pattern operator: product X_1 X_2 ... X_l with X_k = M on 'd'
/// and X_k = N on 'r'.
Eigen::MatrixXd apply_pattern(const WalkPattern& psi, const Eigen::MatrixXd& M,
                              const Eigen::MatrixXd& N);
Eigen::MatrixXd apply_pattern(const WalkPattern& psi, const SpMat& M, const SpMat& N);

/// Seeded form: X_1 (X_2 ( ... (X_l v))), evaluated right to left as
/// matrix-vector products.
Eigen::VectorXd apply_pattern(const WalkPattern& psi, const Eigen::MatrixXd& M,
                              const Eigen::MatrixXd& N, const Eigen::VectorXd& seed);

/// Walk counts per (source, destination) for the given pattern, i.e. the
/// pattern operator evaluated on (A, A^T). The graph must be unweighted
/// unless binarize is set.
Eigen::MatrixXi count_walks(const Digraph& g, const WalkPattern& psi, bool binarize = false);

/// Exhaustive enumeration of the generalized walks from source; each entry
/// is the full node sequence i_0..i_l. Test oracle, guarded to |psi| <= 8
/// and n <= 12.
std::vector<std::vector<int>> enumerate_walks(const Digraph& g, const WalkPattern& psi,
                                              int source);

/// S^(l): the probability that two walkers sharing a uniformly random
/// length-l pattern land on a common node, as a matrix over start pairs.
struct PatternLayer {
    int ell = 0;
    Eigen::MatrixXd matrix;
};

/// Computes S^(l) by the two-sided recurrence
///   S^(l) = (P S^(l-1) P^T + Q S^(l-1) Q^T) / 2,  S^(0) = I,
/// never by summation over the 2^l patterns.
PatternLayer layer(const RowStochasticPair& pq, int ell);

/// Truncated similarity series S_k = sum_{l=1..k} beta2^(l-1) S^(l),
/// computed by the recurrence S_k = S_1 + (beta2/2)(P S_{k-1} P^T + Q S_{k-1} Q^T).
SimilarityMatrix partial_sum(const RowStochasticPair& pq, double beta2, int k);

} // namespace rolekit
