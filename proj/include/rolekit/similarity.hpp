#pragma once

#include <Eigen/Dense>

namespace rolekit {

/// How a similarity matrix was produced.
enum class Provenance {
    rw_similarity,      // fixed point of S - (b2/2)(PSP^T + QSQ^T) = PP^T + QQ^T
    nps,                // fixed point of S - b2(ASA^T + A^TSA) = AA^T + A^TA
    structural,         // AA^T + A^TA
    degree_normalized,  // Dout^-1 AA^T Dout^-1 + Din^-1 A^TA Din^-1
    partial_sum,        // truncated series
    layer,              // single S^(l)
};

const char* to_string(Provenance p);

/// Dense symmetric node-similarity matrix.
struct SimilarityMatrix {
    Eigen::MatrixXd values;
    Provenance provenance = Provenance::structural;

    int size() const { return static_cast<int>(values.rows()); }
};

} // namespace rolekit
