#include "rolekit/roles.hpp"

#include "rolekit/errors.hpp"
#include "rolekit/parallel.hpp"
#include "rolekit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace rolekit {

namespace {

struct LloydRun {
    std::vector<int> labels;
    Eigen::MatrixXd centers;
    double objective = std::numeric_limits<double>::infinity();
    int iterations = 0;
};

double sq_dist(const Eigen::MatrixXd& rows, int i, const Eigen::MatrixXd& centers, int c) {
    return (rows.row(i) - centers.row(c)).squaredNorm();
}

Eigen::MatrixXd seed_centers_pp(const Eigen::MatrixXd& rows, int k, CounterRng& rng) {
    const int n = static_cast<int>(rows.rows());
    Eigen::MatrixXd centers(k, rows.cols());
    centers.row(0) = rows.row(static_cast<int>(rng.next_below(n)));
    std::vector<double> d2(n);
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (int j = 0; j < c; ++j) best = std::min(best, sq_dist(rows, i, centers, j));
            d2[i] = best;
            total += best;
        }
        if (total <= 0.0) {
            centers.row(c) = rows.row(static_cast<int>(rng.next_below(n)));
            continue;
        }
        double u = rng.next_unit() * total;
        double acc = 0.0;
        int pick = n - 1;
        for (int i = 0; i < n; ++i) {
            acc += d2[i];
            if (u < acc) {
                pick = i;
                break;
            }
        }
        centers.row(c) = rows.row(pick);
    }
    return centers;
}

LloydRun lloyd(const Eigen::MatrixXd& rows, int k, CounterRng rng) {
    const int n = static_cast<int>(rows.rows());
    LloydRun run;
    run.centers = seed_centers_pp(rows, k, rng);
    run.labels.assign(n, -1);

    std::vector<int> counts(k);
    double prev_obj = std::numeric_limits<double>::infinity();
    const int max_sweeps = 1000;

    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = sq_dist(rows, i, run.centers, 0);
            for (int c = 1; c < k; ++c) {
                double d = sq_dist(rows, i, run.centers, c);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (run.labels[i] != best) {
                run.labels[i] = best;
                changed = true;
            }
        }

        std::fill(counts.begin(), counts.end(), 0);
        for (int i = 0; i < n; ++i) ++counts[run.labels[i]];

        // Empty clusters grab the point currently farthest from its center.
        std::vector<bool> taken(n, false);
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            int far = -1;
            double far_d = -1.0;
            for (int i = 0; i < n; ++i) {
                if (taken[i] || counts[run.labels[i]] <= 1) continue;
                double d = sq_dist(rows, i, run.centers, run.labels[i]);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            if (far < 0) continue;
            taken[far] = true;
            --counts[run.labels[far]];
            run.labels[far] = c;
            counts[c] = 1;
            changed = true;
        }

        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, rows.cols());
        for (int i = 0; i < n; ++i) sums.row(run.labels[i]) += rows.row(i);
        for (int c = 0; c < k; ++c)
            if (counts[c] > 0) run.centers.row(c) = sums.row(c) / counts[c];

        double obj = 0.0;
        for (int i = 0; i < n; ++i) obj += sq_dist(rows, i, run.centers, run.labels[i]);
        if (obj > prev_obj + 1e-9 * std::max(1.0, prev_obj))
            throw std::logic_error("k-means objective increased");
        run.iterations = sweep;
        run.objective = obj;
        if (!changed) break;
        prev_obj = obj;
    }
    return run;
}

} // namespace

KMeansResult kmeans(const Eigen::MatrixXd& rows_in, int k, std::uint64_t seed, int restarts,
                    bool normalize_rows) {
    const int n = static_cast<int>(rows_in.rows());
    if (k < 1) throw InputError("k must be >= 1");
    if (k > n) throw InputError("k exceeds the number of rows");
    if (restarts < 1) throw InputError("restarts must be >= 1");

    Eigen::MatrixXd rows = rows_in;
    if (normalize_rows) {
        for (int i = 0; i < n; ++i) {
            double norm = rows.row(i).norm();
            if (norm > 0.0) rows.row(i) /= norm;
        }
    }

    std::vector<LloydRun> runs(restarts);
    parallel_for(0, restarts, [&](long long lo, long long hi) {
        for (long long rix = lo; rix < hi; ++rix)
            runs[rix] = lloyd(rows, k, CounterRng(seed, static_cast<std::uint64_t>(rix)));
    });

    int best = 0;
    for (int rix = 1; rix < restarts; ++rix)
        if (runs[rix].objective < runs[best].objective) best = rix;

    KMeansResult out;
    out.assignment = {std::move(runs[best].labels), k};
    out.objective = runs[best].objective;
    out.centers = std::move(runs[best].centers);
    out.iterations = runs[best].iterations;
    out.degenerate = k > 1 && (rows.rowwise() - rows.row(0)).cwiseAbs().maxCoeff() == 0.0;
    return out;
}

ConsensusReport consensus(const std::vector<RoleAssignment>& assignments) {
    if (assignments.empty()) throw InputError("consensus needs at least one assignment");
    const int n = assignments[0].n();
    const int k = assignments[0].k;
    for (const auto& a : assignments)
        if (a.n() != n || a.k != k) throw InputError("assignments disagree on n or k");

    ConsensusReport rep;
    rep.runs = static_cast<int>(assignments.size());
    rep.counts = Eigen::MatrixXi::Zero(n, k);

    const RoleAssignment& ref = assignments[0];
    for (const auto& a : assignments) {
        // Contingency against the reference, then greedy maximum-overlap matching.
        Eigen::MatrixXi cont = Eigen::MatrixXi::Zero(k, k);
        for (int i = 0; i < n; ++i) ++cont(a.labels[i], ref.labels[i]);
        std::vector<int> map(k, -1);
        std::vector<bool> row_used(k, false), col_used(k, false);
        for (int round = 0; round < k; ++round) {
            int bp = -1, bq = -1, bv = -1;
            for (int p = 0; p < k; ++p) {
                if (row_used[p]) continue;
                for (int q = 0; q < k; ++q) {
                    if (col_used[q]) continue;
                    if (cont(p, q) > bv) {
                        bv = cont(p, q);
                        bp = p;
                        bq = q;
                    }
                }
            }
            map[bp] = bq;
            row_used[bp] = true;
            col_used[bq] = true;
        }
        for (int i = 0; i < n; ++i) ++rep.counts(i, map[a.labels[i]]);
    }

    rep.labels.k = k;
    rep.labels.labels.resize(n);
    for (int i = 0; i < n; ++i) {
        int best = 0;
        for (int j = 1; j < k; ++j)
            if (rep.counts(i, j) > rep.counts(i, best)) best = j;
        rep.labels.labels[i] = best;
    }
    return rep;
}

Eigen::MatrixXd estimate_role_matrix(const Digraph& g, const RoleAssignment& a,
                                     bool use_weights) {
    if (a.n() != g.node_count()) throw InputError("assignment length does not match the graph");
    const int k = a.k;
    std::vector<double> block_size(k, 0.0);
    for (int lab : a.labels) {
        if (lab < 0 || lab >= k) throw InputError("role label out of range");
        block_size[lab] += 1.0;
    }
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(k, k);
    for (const Arc& arc : g.arcs())
        mass(a.labels[arc.src], a.labels[arc.dst]) += use_weights ? arc.weight : 1.0;

    Eigen::MatrixXd bhat(k, k);
    for (int p = 0; p < k; ++p)
        for (int q = 0; q < k; ++q) {
            double denom = block_size[p] * block_size[q];
            bhat(p, q) = denom > 0.0 ? mass(p, q) / denom
                                     : std::numeric_limits<double>::quiet_NaN();
        }
    return bhat;
}

double ari(const RoleAssignment& a, const RoleAssignment& b) {
    const int n = a.n();
    if (b.n() != n) throw InputError("partitions must cover the same node set");
    if (n == 0) throw InputError("partitions must be nonempty");

    Eigen::MatrixXd cont = Eigen::MatrixXd::Zero(a.k, b.k);
    for (int i = 0; i < n; ++i) ++cont(a.labels[i], b.labels[i]);

    auto comb2 = [](double x) { return x * (x - 1.0) / 2.0; };
    if (comb2(static_cast<double>(n)) == 0.0) return 1.0; // single node
    double sum_ij = 0.0;
    for (int p = 0; p < a.k; ++p)
        for (int q = 0; q < b.k; ++q) sum_ij += comb2(cont(p, q));
    double sum_a = 0.0, sum_b = 0.0;
    for (int p = 0; p < a.k; ++p) sum_a += comb2(cont.row(p).sum());
    for (int q = 0; q < b.k; ++q) sum_b += comb2(cont.col(q).sum());

    double expected = sum_a * sum_b / comb2(static_cast<double>(n));
    double max_index = 0.5 * (sum_a + sum_b);
    double denom = max_index - expected;
    if (denom == 0.0) return 1.0; // both partitions trivial and equal
    return (sum_ij - expected) / denom;
}

} // namespace rolekit
