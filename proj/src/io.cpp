#include "rolekit/io.hpp"

#include "rolekit/errors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace rolekit {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_edge_list(std::ostream& out, const Digraph& g) {
    out << "n=" << g.node_count() << "\n";
    const int base = g.index_base();
    for (const Arc& a : g.arcs())
        out << (a.src + base) << ' ' << (a.dst + base) << ' ' << fmt17(a.weight) << "\n";
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << fmt17(m(i, j));
        }
        out << "\n";
    }
}

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw InputError("bad CSV cell '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows[0].size())
            throw InputError("ragged CSV: row " + std::to_string(rows.size() + 1));
        rows.push_back(std::move(row));
    }
    Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

void write_pgm_heatmap(std::ostream& out, const Eigen::MatrixXd& m) {
    const double lo = m.size() ? m.minCoeff() : 0.0;
    const double hi = m.size() ? m.maxCoeff() : 0.0;
    const double span = hi - lo;
    out << "P2\n" << m.cols() << ' ' << m.rows() << "\n255\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            int gray = span > 0.0
                           ? static_cast<int>(std::lround(255.0 * (m(i, j) - lo) / span))
                           : 0;
            if (j) out << ' ';
            out << gray;
        }
        out << "\n";
    }
}

void write_roles(std::ostream& out, const RoleAssignment& a, int index_base) {
    for (int i = 0; i < a.n(); ++i) out << (i + index_base) << ' ' << a.labels[i] << "\n";
}

void write_counts_csv(std::ostream& out, const Eigen::MatrixXi& counts, int index_base) {
    out << "node";
    for (Eigen::Index j = 0; j < counts.cols(); ++j) out << ",role" << j;
    out << "\n";
    for (Eigen::Index i = 0; i < counts.rows(); ++i) {
        out << (i + index_base);
        for (Eigen::Index j = 0; j < counts.cols(); ++j) out << ',' << counts(i, j);
        out << "\n";
    }
}

BlockModel read_model_file(std::istream& in) {
    BlockModel model;
    std::vector<std::vector<double>> b_rows;
    std::vector<double> d1, d2;
    bool halved = false;
    long r_declared = -1;
    std::string line;
    int line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        std::string key;
        if (!(fields >> key)) continue;
        auto parse_doubles = [&](std::vector<double>& dst) {
            double v;
            while (fields >> v) dst.push_back(v);
            if (!fields.eof())
                throw InputError("model file line " + std::to_string(line_no) +
                                 ": non-numeric value");
        };
        if (key == "r") {
            if (!(fields >> r_declared) || r_declared < 1)
                throw InputError("model file line " + std::to_string(line_no) +
                                 ": bad block count");
        } else if (key == "B") {
            std::vector<double> row;
            parse_doubles(row);
            if (row.empty())
                throw InputError("model file line " + std::to_string(line_no) + ": empty B row");
            b_rows.push_back(std::move(row));
        } else if (key == "sizes") {
            std::vector<double> vals;
            parse_doubles(vals);
            for (double v : vals) {
                if (v < 1 || v != std::floor(v))
                    throw InputError("model file line " + std::to_string(line_no) +
                                     ": sizes must be positive integers");
                model.sizes.push_back(static_cast<int>(v));
            }
        } else if (key == "corrections") {
            std::string preset;
            fields >> preset;
            if (preset != "halved")
                throw InputError("model file line " + std::to_string(line_no) +
                                 ": unknown corrections preset '" + preset + "'");
            halved = true;
        } else if (key == "d1") {
            parse_doubles(d1);
        } else if (key == "d2") {
            parse_doubles(d2);
        } else {
            throw InputError("model file line " + std::to_string(line_no) + ": unknown keyword '" +
                             key + "'");
        }
    }

    if (b_rows.empty()) throw InputError("model file: missing role matrix B");
    if (model.sizes.empty()) throw InputError("model file: missing block sizes");
    std::size_t r = b_rows.size();
    if (r_declared >= 0 && static_cast<std::size_t>(r_declared) != r)
        throw InputError("model file: r declares " + std::to_string(r_declared) + " blocks but " +
                         std::to_string(r) + " B rows given");
    model.B.resize(r, r);
    for (std::size_t i = 0; i < r; ++i) {
        if (b_rows[i].size() != r)
            throw InputError("model file: B row " + std::to_string(i + 1) + " has " +
                             std::to_string(b_rows[i].size()) + " entries, expected " +
                             std::to_string(r));
        for (std::size_t j = 0; j < r; ++j) model.B(i, j) = b_rows[i][j];
    }
    if (halved && (!d1.empty() || !d2.empty()))
        throw InputError("model file: give either the halved preset or explicit d1/d2");
    if (halved) {
        BlockModel preset = BlockModel::with_halved_corrections(model.B, model.sizes);
        model.d1 = preset.d1;
        model.d2 = preset.d2;
    } else {
        if (!d1.empty())
            model.d1 = Eigen::Map<Eigen::VectorXd>(d1.data(), static_cast<Eigen::Index>(d1.size()));
        if (!d2.empty())
            model.d2 = Eigen::Map<Eigen::VectorXd>(d2.data(), static_cast<Eigen::Index>(d2.size()));
    }
    model.validate();
    return model;
}

void write_model_file(std::ostream& out, const BlockModel& model) {
    out << "r " << model.r() << "\n";
    for (int i = 0; i < model.r(); ++i) {
        out << "B";
        for (int j = 0; j < model.r(); ++j) out << ' ' << fmt17(model.B(i, j));
        out << "\n";
    }
    out << "sizes";
    for (int s : model.sizes) out << ' ' << s;
    out << "\n";
    if (model.d1.size()) {
        out << "d1";
        for (Eigen::Index i = 0; i < model.d1.size(); ++i) out << ' ' << fmt17(model.d1[i]);
        out << "\n";
    }
    if (model.d2.size()) {
        out << "d2";
        for (Eigen::Index i = 0; i < model.d2.size(); ++i) out << ' ' << fmt17(model.d2[i]);
        out << "\n";
    }
}

std::string file_digest_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "' for digest");
    std::uint64_t h = 0xCBF29CE484222325ULL;
    char buf[8192];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x00000100000001B3ULL;
        }
        if (!in) break;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

void write_manifest(std::ostream& out, const RunManifest& m) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["parameters"] = m.parameters_json.empty()
                          ? nlohmann::ordered_json::object()
                          : nlohmann::ordered_json::parse(m.parameters_json);
    if (m.has_seed) j["seed"] = m.seed;
    auto inputs = nlohmann::ordered_json::array();
    for (const auto& in : m.inputs) inputs.push_back({{"path", in.path}, {"digest", in.digest}});
    j["inputs"] = inputs;
    j["tool_version"] = m.tool_version;
    j["wall_time_s"] = m.wall_time_s;
    out << j.dump(2) << "\n";
}

std::string report_json(const SolveReport& r, const std::string& method, double beta2, int n) {
    nlohmann::ordered_json j;
    j["method"] = method;
    j["beta2"] = beta2;
    j["n"] = n;
    j["iterations"] = r.iterations;
    j["final_step"] = r.final_step;
    j["residual"] = r.residual;
    j["error_bound"] = r.error_bound;
    j["max_symmetry_drift"] = r.max_symmetry_drift;
    j["converged"] = r.converged;
    return j.dump(2);
}

} // namespace rolekit
