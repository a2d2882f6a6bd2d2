#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gti/errors.hpp"

namespace gti {

using NodeId = std::uint32_t;

struct Edge {
    NodeId u;
    NodeId v;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph on nodes 0..n-1.
///
/// Edges are stored canonically (u < v, sorted, unique) alongside sorted
/// neighbor lists. Instances are immutable once built.
class Graph {
public:
    Graph() = default;

    /// Builds from an arbitrary edge list. Orientation and duplicates are
    /// normalized; self-loops and out-of-range endpoints are rejected.
    Graph(std::size_t n_nodes, std::vector<Edge> edges) : n_(n_nodes) {
        for (auto& e : edges) {
            if (e.u == e.v) throw ArgumentError("self-loop on node " + std::to_string(e.u));
            if (e.u >= n_ || e.v >= n_)
                throw ArgumentError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                    ") out of range for " + std::to_string(n_) + " nodes");
            if (e.u > e.v) std::swap(e.u, e.v);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        edges_ = std::move(edges);

        offsets_.assign(n_ + 1, 0);
        for (const auto& e : edges_) {
            ++offsets_[e.u + 1];
            ++offsets_[e.v + 1];
        }
        for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] += offsets_[i];
        neighbors_.resize(2 * edges_.size());
        std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
        for (const auto& e : edges_) {
            neighbors_[fill[e.u]++] = e.v;
            neighbors_[fill[e.v]++] = e.u;
        }
        for (std::size_t i = 0; i < n_; ++i)
            std::sort(neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
                      neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
    }

    explicit Graph(std::size_t n_nodes) : Graph(n_nodes, {}) {}

    std::size_t n_nodes() const { return n_; }
    std::size_t n_edges() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }

    std::span<const NodeId> neighbors(NodeId v) const {
        return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }
    std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

    bool has_edge(NodeId u, NodeId v) const {
        if (u >= n_ || v >= n_ || u == v) return false;
        auto nb = neighbors(u);
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    /// Row-major dense 0/1 adjacency.
    std::vector<double> dense_adjacency() const {
        std::vector<double> a(n_ * n_, 0.0);
        for (const auto& e : edges_) {
            a[e.u * n_ + e.v] = 1.0;
            a[e.v * n_ + e.u] = 1.0;
        }
        return a;
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> neighbors_;
};

/// Dense symmetric real matrix with zero diagonal (the reconstructed re_G).
class WeightedAdjacency {
public:
    WeightedAdjacency() = default;
    explicit WeightedAdjacency(std::size_t n) : n_(n), entries_(n * n, 0.0) {}

    std::size_t n_nodes() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

    void set(std::size_t i, std::size_t j, double value) {
        if (i == j) throw ArgumentError("diagonal of a weighted adjacency is fixed at 0");
        entries_[i * n_ + j] = value;
        entries_[j * n_ + i] = value;
    }

    std::span<const double> entries() const { return entries_; }

    static WeightedAdjacency from_graph(const Graph& g) {
        WeightedAdjacency w(g.n_nodes());
        for (const auto& e : g.edges()) w.set(e.u, e.v, 1.0);
        return w;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> entries_;
};

struct Subgraph {
    Graph graph;
    std::vector<NodeId> nodes;  // slot i <-> nodes[i]
};

inline Subgraph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
    std::unordered_map<NodeId, NodeId> slot;
    slot.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] >= g.n_nodes())
            throw ArgumentError("node " + std::to_string(nodes[i]) + " out of range");
        if (!slot.emplace(nodes[i], static_cast<NodeId>(i)).second)
            throw ArgumentError("duplicate node " + std::to_string(nodes[i]));
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (NodeId w : g.neighbors(nodes[i])) {
            auto it = slot.find(w);
            if (it != slot.end() && it->second > i) edges.push_back({static_cast<NodeId>(i), it->second});
        }
    }
    return {Graph(nodes.size(), std::move(edges)), {nodes.begin(), nodes.end()}};
}

struct EdgeListFile {
    Graph graph;
    std::vector<std::int64_t> labels;  // dense id -> label in the file
    std::size_t self_loops_dropped = 0;
    std::size_t duplicate_lines = 0;
};

/// Reads a SNAP-style edge list. Lines starting with '#' are comments.
/// With `node_relabel`, ids are compacted to 0..N-1 in first-appearance order;
/// otherwise the file ids are used directly and N = max id + 1.
inline EdgeListFile load_edge_list(const std::string& path, bool node_relabel) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    std::vector<std::pair<std::int64_t, std::int64_t>> raw;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a >> b) || (ls >> extra && !extra.empty() && extra[0] != '#'))
            throw ParseError(path, line_no, "expected two integer node ids");
        auto parse = [&](const std::string& tok) {
            std::size_t used = 0;
            long long v = 0;
            try {
                v = std::stoll(tok, &used);
            } catch (const std::exception&) {
                throw ParseError(path, line_no, "invalid node id '" + tok + "'");
            }
            if (used != tok.size() || v < 0) throw ParseError(path, line_no, "invalid node id '" + tok + "'");
            return static_cast<std::int64_t>(v);
        };
        raw.emplace_back(parse(a), parse(b));
    }
    if (raw.empty()) throw EmptyGraphError(path + ": no edges");

    EdgeListFile out;
    std::unordered_map<std::int64_t, NodeId> ids;
    auto id_of = [&](std::int64_t label) -> NodeId {
        if (!node_relabel) return static_cast<NodeId>(label);
        auto [it, inserted] = ids.emplace(label, static_cast<NodeId>(out.labels.size()));
        if (inserted) out.labels.push_back(label);
        return it->second;
    };

    std::vector<Edge> edges;
    edges.reserve(raw.size());
    std::int64_t max_label = -1;
    for (auto [a, b] : raw) {
        NodeId u = id_of(a);
        NodeId v = id_of(b);
        max_label = std::max({max_label, a, b});
        if (u == v) {
            ++out.self_loops_dropped;
            continue;
        }
        edges.push_back({std::min(u, v), std::max(u, v)});
    }
    std::size_t n = node_relabel ? out.labels.size() : static_cast<std::size_t>(max_label + 1);
    if (!node_relabel) {
        out.labels.resize(n);
        for (std::size_t i = 0; i < n; ++i) out.labels[i] = static_cast<std::int64_t>(i);
    }
    std::size_t before = edges.size();
    out.graph = Graph(n, std::move(edges));
    out.duplicate_lines = before - out.graph.n_edges();
    return out;
}

/// One "u v" line per edge, u < v, ascending.
inline void write_edge_list(const Graph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
    if (!out) throw IoError("write failed: " + path);
}

inline std::vector<NodeId> degrees(const Graph& g) {
    std::vector<NodeId> d(g.n_nodes());
    for (NodeId v = 0; v < g.n_nodes(); ++v) d[v] = static_cast<NodeId>(g.degree(v));
    return d;
}

}  // namespace gti
