#include "rolekit/graph.hpp"

#include "rolekit/errors.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <string>

namespace rolekit {

namespace {

SpMat build_sparse(int n, const std::vector<Arc>& arcs, bool transposed) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(arcs.size());
    for (const Arc& a : arcs) {
        if (transposed)
            trips.emplace_back(a.dst, a.src, a.weight);
        else
            trips.emplace_back(a.src, a.dst, a.weight);
    }
    SpMat m(n, n);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
}

} // namespace

Digraph Digraph::from_arcs(int n, std::vector<Arc> arcs, int index_base) {
    if (n < 0) throw InputError("node count must be nonnegative");
    for (const Arc& a : arcs) {
        if (a.src < 0 || a.src >= n || a.dst < 0 || a.dst >= n) {
            throw InputError("arc (" + std::to_string(a.src + index_base) + ", " +
                             std::to_string(a.dst + index_base) + ") out of range for n = " +
                             std::to_string(n));
        }
        if (!(a.weight > 0.0)) {
            throw InputError("arc (" + std::to_string(a.src + index_base) + ", " +
                             std::to_string(a.dst + index_base) +
                             ") has nonpositive weight " + std::to_string(a.weight));
        }
    }
    std::sort(arcs.begin(), arcs.end(), [](const Arc& x, const Arc& y) {
        return x.src != y.src ? x.src < y.src : x.dst < y.dst;
    });
    // Collapse duplicates by summing weights.
    std::vector<Arc> merged;
    merged.reserve(arcs.size());
    for (const Arc& a : arcs) {
        if (!merged.empty() && merged.back().src == a.src && merged.back().dst == a.dst)
            merged.back().weight += a.weight;
        else
            merged.push_back(a);
    }
    Digraph g;
    g.n_ = n;
    g.index_base_ = index_base;
    g.arcs_ = std::move(merged);
    g.adj_ = build_sparse(n, g.arcs_, false);
    g.adj_t_ = build_sparse(n, g.arcs_, true);
    return g;
}

Digraph Digraph::binarized() const {
    std::vector<Arc> arcs = arcs_;
    for (Arc& a : arcs) a.weight = 1.0;
    return from_arcs(n_, std::move(arcs), index_base_);
}

bool Digraph::is_unweighted() const {
    return std::all_of(arcs_.begin(), arcs_.end(),
                       [](const Arc& a) { return a.weight == 1.0; });
}

std::vector<int> Digraph::out_neighbors(int i) const {
    std::vector<int> out;
    for (SpMat::InnerIterator it(adj_, i); it; ++it) out.push_back(static_cast<int>(it.col()));
    return out;
}

std::vector<int> Digraph::in_neighbors(int i) const {
    std::vector<int> in;
    for (SpMat::InnerIterator it(adj_t_, i); it; ++it) in.push_back(static_cast<int>(it.col()));
    return in;
}

Digraph load_edge_list(std::istream& in, const LoadOptions& opts) {
    if (opts.index_base != 0 && opts.index_base != 1)
        throw InputError("index base must be 0 or 1");
    if (!(opts.default_weight > 0.0))
        throw InputError("default weight must be positive");

    std::vector<Arc> arcs;
    long header_n = -1;
    int max_index = -1;
    std::string line;
    int line_no = 0;
    bool first_content = true;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv(line);
        if (auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
        std::string body(sv);
        std::istringstream fields(body);
        std::string tok;
        if (!(fields >> tok)) continue; // blank or comment-only

        if (first_content && tok.rfind("n=", 0) == 0) {
            first_content = false;
            try {
                header_n = std::stol(tok.substr(2));
            } catch (const std::exception&) {
                throw InputError("line " + std::to_string(line_no) + ": bad node-count header '" +
                                 tok + "'");
            }
            if (header_n < 0)
                throw InputError("line " + std::to_string(line_no) + ": negative node count");
            std::string rest;
            if (fields >> rest)
                throw InputError("line " + std::to_string(line_no) +
                                 ": unexpected token after header");
            continue;
        }
        first_content = false;

        long src_raw, dst_raw;
        double w = opts.default_weight;
        try {
            src_raw = std::stol(tok);
        } catch (const std::exception&) {
            throw InputError("line " + std::to_string(line_no) + ": bad source index '" + tok +
                             "'");
        }
        if (!(fields >> tok))
            throw InputError("line " + std::to_string(line_no) + ": missing destination index");
        try {
            dst_raw = std::stol(tok);
        } catch (const std::exception&) {
            throw InputError("line " + std::to_string(line_no) + ": bad destination index '" +
                             tok + "'");
        }
        if (fields >> tok) {
            try {
                std::size_t pos = 0;
                w = std::stod(tok, &pos);
                if (pos != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw InputError("line " + std::to_string(line_no) + ": bad weight '" + tok + "'");
            }
            std::string extra;
            if (fields >> extra)
                throw InputError("line " + std::to_string(line_no) + ": trailing token '" + extra +
                                 "'");
        }
        if (!(w > 0.0))
            throw InputError("line " + std::to_string(line_no) + ": nonpositive weight " +
                             std::to_string(w));
        if (src_raw < opts.index_base || dst_raw < opts.index_base)
            throw InputError("line " + std::to_string(line_no) + ": index below base " +
                             std::to_string(opts.index_base));
        int src = static_cast<int>(src_raw - opts.index_base);
        int dst = static_cast<int>(dst_raw - opts.index_base);
        max_index = std::max({max_index, src, dst});
        arcs.push_back({src, dst, w});
    }

    int n = header_n >= 0 ? static_cast<int>(header_n) : max_index + 1;
    if (max_index >= n)
        throw InputError("edge list references node " +
                         std::to_string(max_index + opts.index_base) +
                         " but the header declares n=" + std::to_string(n));
    return Digraph::from_arcs(n, std::move(arcs), opts.index_base);
}

DegreeInfo degrees(const Digraph& g) {
    DegreeInfo d;
    d.d_in = Eigen::VectorXd::Zero(g.node_count());
    d.d_out = Eigen::VectorXd::Zero(g.node_count());
    for (const Arc& a : g.arcs()) {
        d.d_out[a.src] += a.weight;
        d.d_in[a.dst] += a.weight;
    }
    return d;
}

std::vector<int> strongly_connected_components(const Digraph& g) {
    const int n = g.node_count();
    const SpMat& adj = g.adjacency();

    // Iterative Tarjan.
    std::vector<int> index(n, -1), lowlink(n, 0), component(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int next_index = 0, raw_comp = 0;
    std::vector<int> raw_component(n, -1);

    struct Frame {
        int node;
        SpMat::InnerIterator it;
    };

    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        std::vector<Frame> call;
        call.push_back({root, SpMat::InnerIterator(adj, root)});
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!call.empty()) {
            Frame& f = call.back();
            if (f.it) {
                int w = static_cast<int>(f.it.col());
                ++f.it;
                if (index[w] == -1) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, SpMat::InnerIterator(adj, w)});
                } else if (on_stack[w]) {
                    lowlink[f.node] = std::min(lowlink[f.node], index[w]);
                }
            } else {
                int v = f.node;
                call.pop_back();
                if (!call.empty())
                    lowlink[call.back().node] = std::min(lowlink[call.back().node], lowlink[v]);
                if (lowlink[v] == index[v]) {
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        raw_component[w] = raw_comp;
                    } while (w != v);
                    ++raw_comp;
                }
            }
        }
    }

    // Renumber by first occurrence in node order.
    std::vector<int> remap(raw_comp, -1);
    int next_id = 0;
    for (int v = 0; v < n; ++v) {
        if (remap[raw_component[v]] == -1) remap[raw_component[v]] = next_id++;
        component[v] = remap[raw_component[v]];
    }
    return component;
}

bool is_strongly_connected(const Digraph& g) {
    if (g.node_count() <= 1) return true;
    std::vector<int> comp = strongly_connected_components(g);
    return std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; });
}

Digraph augment_loops(const Digraph& g, double w) {
    if (!(w > 0.0)) throw InputError("loop weight must be positive");
    std::vector<Arc> arcs = g.arcs();
    for (int i = 0; i < g.node_count(); ++i) arcs.push_back({i, i, w});
    return Digraph::from_arcs(g.node_count(), std::move(arcs), g.index_base());
}

RowStochasticPair transition_pair(const Digraph& g) {
    DegreeInfo deg = degrees(g);
    for (int i = 0; i < g.node_count(); ++i) {
        if (deg.d_out[i] <= 0.0 || deg.d_in[i] <= 0.0) {
            const char* side = deg.d_out[i] <= 0.0 ? "out" : "in";
            throw InputError("node " + std::to_string(i + g.index_base()) + " has zero " + side +
                             "-degree; augment_loops can repair this");
        }
    }
    RowStochasticPair pq;
    pq.P = g.adjacency();
    pq.Q = g.adjacency_transposed();
    for (int i = 0; i < g.node_count(); ++i) {
        for (SpMat::InnerIterator it(pq.P, i); it; ++it) it.valueRef() /= deg.d_out[i];
        for (SpMat::InnerIterator it(pq.Q, i); it; ++it) it.valueRef() /= deg.d_in[i];
    }
    return pq;
}

} // namespace rolekit
