#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "gti/errors.hpp"
#include "gti/graph.hpp"
#include "gti/rng.hpp"

namespace gti {

using CommunityId = std::uint32_t;

/// Newman modularity of a node -> community assignment.
inline double modularity(const Graph& g, std::span<const CommunityId> assignment) {
    if (assignment.size() != g.n_nodes())
        throw ArgumentError("assignment covers " + std::to_string(assignment.size()) + " of " +
                            std::to_string(g.n_nodes()) + " nodes");
    if (g.n_edges() == 0) throw ArgumentError("modularity undefined on an edgeless graph");
    CommunityId top = 0;
    for (auto c : assignment) top = std::max(top, c);
    std::vector<double> internal(top + 1, 0.0), degree(top + 1, 0.0);
    for (const auto& e : g.edges())
        if (assignment[e.u] == assignment[e.v]) internal[assignment[e.u]] += 1.0;
    for (NodeId v = 0; v < g.n_nodes(); ++v) degree[assignment[v]] += static_cast<double>(g.degree(v));
    const double m = static_cast<double>(g.n_edges());
    double q = 0.0;
    for (std::size_t c = 0; c <= top; ++c) q += internal[c] / m - (degree[c] / (2 * m)) * (degree[c] / (2 * m));
    return q;
}

struct HierarchyLevel {
    std::vector<CommunityId> assignment;  // over original nodes, ids dense 0..count-1
    std::size_t count = 0;
    double modularity = 0.0;
    std::vector<NodeId> visit_order;  // seeded local-move order used at this level
};

/// Finest level first.
struct HierarchyDecomposition {
    std::vector<HierarchyLevel> levels;

    std::size_t n_levels() const { return levels.size(); }
    std::vector<std::size_t> counts() const {
        std::vector<std::size_t> c;
        for (const auto& l : levels) c.push_back(l.count);
        return c;
    }
};

namespace detail {

// Weighted graph used across aggregation rounds. `loops[i]` is the total
// weight of original edges folded inside super-node i.
struct LouvainGraph {
    std::vector<std::vector<std::pair<NodeId, double>>> adj;
    std::vector<double> loops;

    std::size_t size() const { return adj.size(); }
    double weighted_degree(NodeId i) const {
        double k = 2.0 * loops[i];
        for (auto [_, w] : adj[i]) k += w;
        return k;
    }
};

inline LouvainGraph to_louvain_graph(const Graph& g) {
    LouvainGraph lg;
    lg.adj.resize(g.n_nodes());
    lg.loops.assign(g.n_nodes(), 0.0);
    for (const auto& e : g.edges()) {
        lg.adj[e.u].emplace_back(e.v, 1.0);
        lg.adj[e.v].emplace_back(e.u, 1.0);
    }
    return lg;
}

inline double louvain_modularity(const LouvainGraph& lg, std::span<const CommunityId> comm, double two_m) {
    CommunityId top = 0;
    for (auto c : comm) top = std::max(top, c);
    std::vector<double> in(top + 1, 0.0), tot(top + 1, 0.0);
    for (NodeId i = 0; i < lg.size(); ++i) {
        tot[comm[i]] += lg.weighted_degree(i);
        in[comm[i]] += 2.0 * lg.loops[i];
        for (auto [j, w] : lg.adj[i])
            if (comm[j] == comm[i]) in[comm[i]] += w;
    }
    double q = 0.0;
    for (std::size_t c = 0; c <= top; ++c) q += in[c] / two_m - (tot[c] / two_m) * (tot[c] / two_m);
    return q;
}

// One local-move phase; returns dense community ids (first-appearance order).
inline std::vector<CommunityId> local_moves(const LouvainGraph& lg, std::span<const NodeId> order, double two_m,
                                            double min_gain) {
    const std::size_t n = lg.size();
    std::vector<CommunityId> comm(n);
    std::iota(comm.begin(), comm.end(), 0);
    std::vector<double> k(n), tot(n);
    for (NodeId i = 0; i < n; ++i) tot[i] = k[i] = lg.weighted_degree(i);

    std::vector<double> link(n, 0.0);
    std::vector<CommunityId> touched;
    double q = louvain_modularity(lg, comm, two_m);
    for (;;) {
        std::size_t moves = 0;
        for (NodeId i : order) {
            const CommunityId own = comm[i];
            touched.clear();
            for (auto [j, w] : lg.adj[i]) {
                CommunityId c = comm[j];
                if (link[c] == 0.0) touched.push_back(c);
                link[c] += w;
            }
            tot[own] -= k[i];
            // Gain (scaled by m) of inserting i into c: k_ic - tot_c * k_i / 2m.
            auto gain = [&](CommunityId c) { return link[c] - tot[c] * k[i] / two_m; };
            CommunityId best = own;
            double best_gain = gain(own);
            std::sort(touched.begin(), touched.end());
            for (CommunityId c : touched) {
                double gc = gain(c);
                if (gc > best_gain + 1e-12 || (std::abs(gc - best_gain) <= 1e-12 && c < best)) {
                    best = c;
                    best_gain = gc;
                }
            }
            tot[best] += k[i];
            if (best != own) {
                comm[i] = best;
                ++moves;
            }
            for (CommunityId c : touched) link[c] = 0.0;
            link[own] = 0.0;
        }
        double next_q = louvain_modularity(lg, comm, two_m);
        bool improved = next_q - q > min_gain;
        q = next_q;
        if (moves == 0 || !improved) break;
    }

    std::vector<CommunityId> dense(n, static_cast<CommunityId>(-1));
    CommunityId next = 0;
    for (NodeId i = 0; i < n; ++i) {
        if (dense[comm[i]] == static_cast<CommunityId>(-1)) dense[comm[i]] = next++;
        comm[i] = dense[comm[i]];
    }
    return comm;
}

inline LouvainGraph aggregate(const LouvainGraph& lg, std::span<const CommunityId> comm, std::size_t count) {
    LouvainGraph out;
    out.adj.resize(count);
    out.loops.assign(count, 0.0);
    std::vector<std::vector<std::pair<NodeId, double>>> acc(count);
    for (NodeId i = 0; i < lg.size(); ++i) {
        out.loops[comm[i]] += lg.loops[i];
        for (auto [j, w] : lg.adj[i]) {
            if (comm[i] == comm[j]) {
                if (i < j) out.loops[comm[i]] += w;
            } else {
                acc[comm[i]].emplace_back(comm[j], w);
            }
        }
    }
    for (std::size_t c = 0; c < count; ++c) {
        auto& a = acc[c];
        std::sort(a.begin(), a.end());
        for (const auto& [d, w] : a) {
            if (!out.adj[c].empty() && out.adj[c].back().first == d)
                out.adj[c].back().second += w;
            else
                out.adj[c].emplace_back(d, w);
        }
    }
    return out;
}

}  // namespace detail

/// Multi-level Louvain. Each aggregation round that raises modularity by at
/// least `min_mod_gain` is recorded as one level, expressed over the original
/// nodes. The first round is always recorded.
inline HierarchyDecomposition louvain_decompose(const Graph& g, std::uint64_t seed, double min_mod_gain = 1e-7) {
    if (g.n_edges() == 0) throw ArgumentError("louvain: graph has no edges, modularity undefined");
    Rng rng = make_rng(seed, streams::louvain);
    const double two_m = 2.0 * static_cast<double>(g.n_edges());

    HierarchyDecomposition out;
    detail::LouvainGraph lg = detail::to_louvain_graph(g);
    std::vector<CommunityId> node_to_super(g.n_nodes());
    std::iota(node_to_super.begin(), node_to_super.end(), 0);
    std::vector<CommunityId> identity(lg.size());
    std::iota(identity.begin(), identity.end(), 0);
    double q = detail::louvain_modularity(lg, identity, two_m);

    for (;;) {
        std::vector<NodeId> order(lg.size());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        auto comm = detail::local_moves(lg, order, two_m, min_mod_gain);
        std::size_t count = comm.empty() ? 0 : *std::max_element(comm.begin(), comm.end()) + 1;
        double next_q = detail::louvain_modularity(lg, comm, two_m);

        bool progressed = count < lg.size() && next_q - q >= min_mod_gain;
        if (!progressed && !out.levels.empty()) break;

        HierarchyLevel level;
        level.assignment.resize(g.n_nodes());
        for (NodeId v = 0; v < g.n_nodes(); ++v) level.assignment[v] = comm[node_to_super[v]];
        level.count = count;
        level.modularity = modularity(g, level.assignment);
        level.visit_order = std::move(order);
        node_to_super = level.assignment;
        out.levels.push_back(std::move(level));
        if (!progressed) break;

        lg = detail::aggregate(lg, comm, count);
        q = next_q;
    }
    return out;
}

}  // namespace gti
