#pragma once

#include "rolekit/blockmodel.hpp"
#include "rolekit/graph.hpp"
#include "rolekit/roles.hpp"
#include "rolekit/solvers.hpp"

#include <iosfwd>
#include <string>

namespace rolekit {

inline constexpr const char* kToolVersion = "rolekit 0.1.0";

/// Writes the edge-list format accepted by load_edge_list ("n=<n>" header,
/// then "src dst weight" per arc in the graph's index base). Round-trips
/// exactly: weights use 17 significant digits.
void write_edge_list(std::ostream& out, const Digraph& g);

/// Dense matrix as comma-separated rows, 17 significant digits per value.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(std::istream& in);

/// Plain-text P2 PGM, 8-bit, min-max scaled, darker = smaller.
void write_pgm_heatmap(std::ostream& out, const Eigen::MatrixXd& m);

/// Two-column "node role" text, node ids in the given base.
void write_roles(std::ostream& out, const RoleAssignment& a, int index_base);

/// CSV of consensus counts: header "node,role0,...", one row per node.
void write_counts_csv(std::ostream& out, const Eigen::MatrixXi& counts, int index_base);

/// Block-model description file. Line-oriented keyword format:
///   r 3
///   B 0.3 0.8 0.1        (one line per row, r lines total)
///   sizes 20 30 40
///   corrections halved   (or "d1 <n values>" / "d2 <n values>")
/// '#' starts a comment. Keywords may appear in any order; B rows in order.
BlockModel read_model_file(std::istream& in);
void write_model_file(std::ostream& out, const BlockModel& model);

/// FNV-1a 64-bit digest of a file's bytes, as fixed-width hex.
std::string file_digest_hex(const std::string& path);

/// Key-value provenance block written next to every CLI output.
struct ManifestInput {
    std::string path;
    std::string digest;
};

struct RunManifest {
    std::string command;
    std::string parameters_json; // flat JSON object, pre-rendered
    std::vector<ManifestInput> inputs;
    std::uint64_t seed = 0;
    bool has_seed = false;
    std::string tool_version = kToolVersion;
    double wall_time_s = 0.0;
};

void write_manifest(std::ostream& out, const RunManifest& m);

/// SolveReport as a flat JSON document.
std::string report_json(const SolveReport& r, const std::string& method, double beta2, int n);

} // namespace rolekit
