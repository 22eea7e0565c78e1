#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <iosfwd>
#include <vector>

namespace rolekit {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct Arc {
    int src = 0;
    int dst = 0;
    double weight = 1.0;
};

/// Weighted directed graph, immutable after construction.
///
/// Arcs are stored 0-based, sorted by (src, dst) with duplicates summed.
/// The adjacency matrix and its transpose are both kept in row-major form
/// so products with A and with A^T stream over contiguous rows.
class Digraph {
public:
    Digraph() = default;

    /// Builds a graph from an arc list. Duplicate (src, dst) pairs are
    /// summed; weights must be strictly positive; indices must lie in [0, n).
    /// index_base is reporting metadata only (how node ids appear in output).
    static Digraph from_arcs(int n, std::vector<Arc> arcs, int index_base = 0);

    int node_count() const { return n_; }
    std::size_t arc_count() const { return arcs_.size(); }
    const std::vector<Arc>& arcs() const { return arcs_; }
    int index_base() const { return index_base_; }

    const SpMat& adjacency() const { return adj_; }
    const SpMat& adjacency_transposed() const { return adj_t_; }

    /// Copy with every arc weight replaced by 1.
    Digraph binarized() const;

    /// True when every stored weight equals 1.
    bool is_unweighted() const;

    /// Out-neighbors of i (column indices of row i of A).
    std::vector<int> out_neighbors(int i) const;
    /// In-neighbors of i (column indices of row i of A^T).
    std::vector<int> in_neighbors(int i) const;

private:
    int n_ = 0;
    int index_base_ = 0;
    std::vector<Arc> arcs_;
    SpMat adj_, adj_t_;
};

struct LoadOptions {
    int index_base = 0;        // 0 or 1
    double default_weight = 1.0;
};

/// Parses the edge-list text format: whitespace-separated "src dst [weight]"
/// lines, '#' comments, optional first line "n=<int>". Node count is the
/// header value or 1 + the largest index seen. Malformed lines are reported
/// with their line number.
Digraph load_edge_list(std::istream& in, const LoadOptions& opts = {});

struct DegreeInfo {
    Eigen::VectorXd d_in;
    Eigen::VectorXd d_out;
};

/// Weighted in/out degree vectors, summed straight off the arc list.
DegreeInfo degrees(const Digraph& g);

/// Component id per node (Tarjan). Ids are ordered by first occurrence in
/// node order, starting at 0.
std::vector<int> strongly_connected_components(const Digraph& g);

/// True iff the graph is a single strongly connected component.
/// A single node counts as strongly connected.
bool is_strongly_connected(const Digraph& g);

/// Copy of g with weight w added to every diagonal entry.
Digraph augment_loops(const Digraph& g, double w = 1.0);

/// Row-stochastic random-walk pair P = D_out^-1 A and Q = D_in^-1 A^T.
struct RowStochasticPair {
    SpMat P;
    SpMat Q;
    int n() const { return static_cast<int>(P.rows()); }
};

/// Builds P and Q. Every in- and out-degree must be strictly positive;
/// the error for a zero-degree node names it and suggests augment_loops.
RowStochasticPair transition_pair(const Digraph& g);

} // namespace rolekit
