#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "gti/errors.hpp"
#include "gti/graph.hpp"
#include "gti/hierarchy.hpp"
#include "gti/rng.hpp"

namespace gti {

using PartId = std::uint32_t;

inline std::size_t edge_cut(const Graph& g, std::span<const PartId> part) {
    std::size_t cut = 0;
    for (const auto& e : g.edges()) cut += part[e.u] != part[e.v];
    return cut;
}

struct BalancedPartition {
    std::vector<PartId> assignment;
    std::size_t parts = 0;
    std::size_t cut_after_growth = 0;
    std::size_t cut = 0;
};

namespace detail {

inline std::vector<NodeId> spread_seeds(const Graph& g, std::size_t parts, Rng& rng) {
    const std::size_t n = g.n_nodes();
    constexpr auto kFar = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> dist(n, kFar);
    std::vector<char> chosen(n, 0);
    std::vector<NodeId> seeds;
    NodeId next = static_cast<NodeId>(uniform_index(rng, n));
    std::deque<NodeId> queue;
    while (seeds.size() < parts) {
        seeds.push_back(next);
        chosen[next] = 1;
        dist[next] = 0;
        queue.assign(1, next);
        while (!queue.empty()) {
            NodeId v = queue.front();
            queue.pop_front();
            for (NodeId w : g.neighbors(v))
                if (dist[v] + 1 < dist[w]) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
        }
        // Farthest unchosen node from every seed so far; unreachable counts as farthest.
        std::size_t best = 0;
        bool found = false;
        for (NodeId v = 0; v < n; ++v) {
            if (chosen[v]) continue;
            if (!found || dist[v] > best) {
                best = dist[v];
                next = v;
                found = true;
            }
        }
        if (!found) break;
    }
    return seeds;
}

// Round-robin BFS region growing up to each part's target size.
inline std::vector<PartId> grow_regions(const Graph& g, std::span<const NodeId> seeds,
                                        std::span<const std::size_t> target) {
    const std::size_t n = g.n_nodes();
    constexpr auto kNone = std::numeric_limits<PartId>::max();
    std::vector<PartId> part(n, kNone);
    std::vector<std::size_t> size(seeds.size(), 0);
    std::vector<std::deque<NodeId>> frontier(seeds.size());
    for (std::size_t p = 0; p < seeds.size(); ++p) frontier[p].push_back(seeds[p]);
    std::size_t assigned = 0;
    NodeId scan = 0;  // lowest possibly-unassigned node, fallback when a frontier dries up

    auto take = [&](std::size_t p, NodeId v) {
        part[v] = static_cast<PartId>(p);
        ++size[p];
        ++assigned;
        for (NodeId w : g.neighbors(v))
            if (part[w] == kNone) frontier[p].push_back(w);
    };

    while (assigned < n) {
        for (std::size_t p = 0; p < seeds.size() && assigned < n; ++p) {
            if (size[p] >= target[p]) continue;
            NodeId pick = static_cast<NodeId>(n);
            while (!frontier[p].empty()) {
                NodeId v = frontier[p].front();
                frontier[p].pop_front();
                if (part[v] == kNone) {
                    pick = v;
                    break;
                }
            }
            if (pick == n) {
                while (part[scan] != kNone) ++scan;
                pick = scan;
            }
            take(p, pick);
        }
    }
    return part;
}

// Pairwise swaps between parts; a swap is applied only when it strictly lowers the cut.
inline void refine_swaps(const Graph& g, std::vector<PartId>& part, std::size_t parts, std::size_t max_passes) {
    const std::size_t n = g.n_nodes();
    std::vector<std::uint32_t> links(n * parts, 0);  // links[v*parts+p] = neighbors of v in p
    for (NodeId v = 0; v < n; ++v)
        for (NodeId w : g.neighbors(v)) ++links[v * parts + part[w]];
    std::vector<std::vector<NodeId>> members(parts);
    for (NodeId v = 0; v < n; ++v) members[part[v]].push_back(v);

    auto move_links = [&](NodeId v, PartId from, PartId to) {
        for (NodeId w : g.neighbors(v)) {
            --links[w * parts + from];
            ++links[w * parts + to];
        }
    };

    for (std::size_t pass = 0; pass < max_passes; ++pass) {
        std::size_t swaps = 0;
        for (NodeId u = 0; u < n; ++u) {
            const PartId a = part[u];
            const auto* lu = &links[u * parts];
            PartId best_part = 0;
            NodeId best_v = 0;
            long best_gain = 0;
            for (PartId b = 0; b < parts; ++b) {
                if (b == a || lu[b] == 0) continue;
                const long gain_u = static_cast<long>(lu[b]) - static_cast<long>(lu[a]);
                for (NodeId v : members[b]) {
                    const auto* lv = &links[v * parts];
                    long gain = gain_u + static_cast<long>(lv[a]) - static_cast<long>(lv[b]);
                    if (gain <= best_gain) continue;
                    if (g.has_edge(u, v)) gain -= 2;
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_part = b;
                        best_v = v;
                    }
                }
            }
            if (best_gain <= 0) continue;
            const PartId b = best_part;
            move_links(u, a, b);
            move_links(best_v, b, a);
            part[u] = b;
            part[best_v] = a;
            std::replace(members[a].begin(), members[a].end(), u, best_v);
            std::replace(members[b].begin(), members[b].end(), best_v, u);
            ++swaps;
        }
        if (swaps == 0) break;
    }
}

}  // namespace detail

/// Splits `g` into `parts` blocks whose sizes differ by at most one:
/// seeded region growing from spread-out seeds, then cut-decreasing swaps.
inline BalancedPartition balanced_partition(const Graph& g, std::size_t parts, std::uint64_t seed,
                                            std::size_t max_passes = 20) {
    const std::size_t n = g.n_nodes();
    if (parts < 1 || parts > n)
        throw ArgumentError("balanced_partition: need 1 <= M <= N (M=" + std::to_string(parts) +
                            ", N=" + std::to_string(n) + ")");
    Rng rng = make_rng(seed, streams::partition);
    std::vector<std::size_t> target(parts, n / parts);
    for (std::size_t p = 0; p < n % parts; ++p) ++target[p];

    BalancedPartition out;
    out.parts = parts;
    auto seeds = detail::spread_seeds(g, parts, rng);
    out.assignment = detail::grow_regions(g, seeds, target);
    out.cut_after_growth = edge_cut(g, out.assignment);
    if (parts > 1) detail::refine_swaps(g, out.assignment, parts, max_passes);
    out.cut = edge_cut(g, out.assignment);
    return out;
}

inline std::size_t tile_size_for(std::size_t n_nodes, std::size_t parts) {
    std::size_t per = (n_nodes + parts - 1) / parts;
    return std::max<std::size_t>(4, (per + 3) / 4 * 4);
}

struct LayerPlan {
    std::size_t level = 0;
    std::size_t n_nodes = 0;
    std::size_t parts = 0;  // M
    std::size_t k = 0;      // padded tile size
    std::vector<std::vector<NodeId>> slots;  // per part, degree-descending
    std::vector<PartId> part_of;             // node -> part
    std::vector<std::uint32_t> slot_of;      // node -> slot within its part

    std::size_t pad_count(std::size_t p) const { return k - slots[p].size(); }
};

struct InterEdgeSet {
    std::size_t level = 0;
    std::vector<Edge> edges;
};

/// Slot ordering: degree descending, ties by node id.
inline LayerPlan make_layer_plan(const Graph& g, std::size_t level, std::span<const PartId> assignment,
                                 std::size_t parts) {
    LayerPlan plan;
    plan.level = level;
    plan.n_nodes = g.n_nodes();
    plan.parts = parts;
    plan.k = tile_size_for(g.n_nodes(), parts);
    plan.slots.resize(parts);
    for (NodeId v = 0; v < g.n_nodes(); ++v) plan.slots[assignment[v]].push_back(v);
    plan.part_of.assign(assignment.begin(), assignment.end());
    plan.slot_of.assign(g.n_nodes(), 0);
    for (auto& s : plan.slots) {
        if (s.size() > plan.k) throw ArgumentError("part larger than tile size");
        std::sort(s.begin(), s.end(), [&](NodeId a, NodeId b) {
            return g.degree(a) != g.degree(b) ? g.degree(a) > g.degree(b) : a < b;
        });
        for (std::size_t i = 0; i < s.size(); ++i) plan.slot_of[s[i]] = static_cast<std::uint32_t>(i);
    }
    return plan;
}

inline InterEdgeSet inter_edges(const Graph& g, const LayerPlan& plan) {
    InterEdgeSet out;
    out.level = plan.level;
    for (const auto& e : g.edges())
        if (plan.part_of[e.u] != plan.part_of[e.v]) out.edges.push_back(e);
    return out;
}

struct LayerPlanResult {
    LayerPlan plan;
    InterEdgeSet inter;
    BalancedPartition partition;
};

inline LayerPlanResult build_layer_plan(const Graph& g, const HierarchyDecomposition& decomposition,
                                        std::size_t level, std::uint64_t seed) {
    if (level >= decomposition.n_levels())
        throw ArgumentError("level " + std::to_string(level) + " >= L=" +
                            std::to_string(decomposition.n_levels()));
    const std::size_t parts = decomposition.levels[level].count;
    auto partition = balanced_partition(g, parts, seed ^ (0x9e3779b97f4a7c15ULL * (level + 1)));
    LayerPlanResult out;
    out.plan = make_layer_plan(g, level, partition.assignment, parts);
    out.inter = inter_edges(g, out.plan);
    out.partition = std::move(partition);
    return out;
}

}  // namespace gti
