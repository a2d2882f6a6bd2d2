#pragma once

#include <algorithm>
#include <deque>
#include <string>
#include <vector>

#include "gti/errors.hpp"
#include "gti/graph.hpp"
#include "gti/metrics.hpp"
#include "gti/rng.hpp"

namespace gti {

enum class SamplerMethod { RandomWalk, ForestFire, RandomJump };

inline std::string to_string(SamplerMethod m) {
    switch (m) {
        case SamplerMethod::RandomWalk: return "random_walk";
        case SamplerMethod::ForestFire: return "forest_fire";
        case SamplerMethod::RandomJump: return "random_jump";
    }
    return "?";
}

inline SamplerMethod parse_sampler_method(const std::string& s) {
    if (s == "random_walk" || s == "rw") return SamplerMethod::RandomWalk;
    if (s == "forest_fire" || s == "ff") return SamplerMethod::ForestFire;
    if (s == "random_jump" || s == "rj") return SamplerMethod::RandomJump;
    throw ArgumentError("unknown sampler '" + s + "' (random_walk, forest_fire, random_jump)");
}

struct SamplerSpec {
    SamplerMethod method = SamplerMethod::RandomWalk;
    std::size_t target_nodes = 1;
    double restart_p = 0.15;
    double jump_p = 0.15;
    double burn_p = 0.35;
    std::uint64_t seed = 1;
    long start = -1;  // fixed start node, or -1 for a seeded random one

    void validate(std::size_t n_nodes) const {
        auto prob = [](double p, const char* name) {
            if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError(std::string(name) + " must be in [0,1]");
        };
        prob(restart_p, "restart_p");
        prob(jump_p, "jump_p");
        prob(burn_p, "burn_p");
        if (target_nodes < 1) throw ArgumentError("target_nodes must be >= 1");
        if (target_nodes > n_nodes)
            throw ArgumentError("target_nodes " + std::to_string(target_nodes) + " exceeds graph size " +
                                std::to_string(n_nodes));
        if (start >= static_cast<long>(n_nodes)) throw ArgumentError("start node out of range");
    }
};

struct Sample {
    Graph graph;                // induced on `nodes`, relabeled to 0..|nodes|-1
    std::vector<NodeId> nodes;  // in collection order
};

namespace detail {

class Collector {
public:
    Collector(std::size_t n, std::size_t target) : seen_(n, false), target_(target) {}
    bool add(NodeId v) {
        if (seen_[v] || done()) return false;
        seen_[v] = true;
        nodes_.push_back(v);
        return true;
    }
    bool seen(NodeId v) const { return seen_[v]; }
    bool done() const { return nodes_.size() >= target_; }
    std::vector<NodeId>& nodes() { return nodes_; }

    NodeId random_unseen(Rng& rng) const {
        std::vector<NodeId> pool;
        for (NodeId v = 0; v < seen_.size(); ++v)
            if (!seen_[v]) pool.push_back(v);
        return pool[uniform_index(rng, pool.size())];
    }

private:
    std::vector<bool> seen_;
    std::vector<NodeId> nodes_;
    std::size_t target_;
};

inline NodeId pick_start(const Graph& g, const SamplerSpec& spec, Rng& rng) {
    if (spec.start >= 0) return static_cast<NodeId>(spec.start);
    std::vector<NodeId> active;
    for (NodeId v = 0; v < g.n_nodes(); ++v)
        if (g.degree(v) > 0) active.push_back(v);
    if (active.empty()) return static_cast<NodeId>(uniform_index(rng, g.n_nodes()));
    return active[uniform_index(rng, active.size())];
}

// Walk with restart (RW) or jump (RJ). A walk that finds nothing new for
// 100*N steps, or sits on an isolated node, restarts from an unseen node.
inline void walk(const Graph& g, const SamplerSpec& spec, Rng& rng, Collector& c) {
    const bool jump = spec.method == SamplerMethod::RandomJump;
    const double p = jump ? spec.jump_p : spec.restart_p;
    NodeId start = pick_start(g, spec, rng);
    NodeId cur = start;
    c.add(cur);
    const std::size_t patience = 100 * g.n_nodes();
    std::size_t idle = 0;
    while (!c.done()) {
        const bool stuck = g.degree(cur) == 0 || idle > patience;
        if (stuck) {
            start = c.random_unseen(rng);
            cur = start;
            idle = 0;
        } else if (uniform01(rng) < p) {
            cur = jump ? static_cast<NodeId>(uniform_index(rng, g.n_nodes())) : start;
        } else {
            auto nb = g.neighbors(cur);
            cur = nb[uniform_index(rng, nb.size())];
        }
        idle = c.add(cur) ? 0 : idle + 1;
    }
}

inline void forest_fire(const Graph& g, const SamplerSpec& spec, Rng& rng, Collector& c) {
    std::deque<NodeId> front;
    NodeId seed = pick_start(g, spec, rng);
    c.add(seed);
    front.push_back(seed);
    while (!c.done()) {
        if (front.empty()) {
            seed = c.random_unseen(rng);
            c.add(seed);
            front.push_back(seed);
            continue;
        }
        const NodeId x = front.front();
        front.pop_front();
        // Geometric(1 - burn_p) number of neighbors, mean burn_p / (1 - burn_p).
        std::size_t burns = 0;
        while (burns < g.degree(x) && uniform01(rng) < spec.burn_p) ++burns;
        std::vector<NodeId> fresh;
        for (auto y : g.neighbors(x))
            if (!c.seen(y)) fresh.push_back(y);
        for (std::size_t i = 0; i < burns && !fresh.empty() && !c.done(); ++i) {
            const std::size_t j = uniform_index(rng, fresh.size());
            const NodeId y = fresh[j];
            fresh[j] = fresh.back();
            fresh.pop_back();
            c.add(y);
            front.push_back(y);
        }
    }
}

}  // namespace detail

inline Sample sample(const Graph& g, const SamplerSpec& spec) {
    spec.validate(g.n_nodes());
    Rng rng = make_rng(spec.seed, streams::sampling, static_cast<std::uint64_t>(spec.method));
    detail::Collector c(g.n_nodes(), spec.target_nodes);
    if (spec.method == SamplerMethod::ForestFire) detail::forest_fire(g, spec, rng, c);
    else detail::walk(g, spec, rng, c);
    Sample s;
    s.nodes = std::move(c.nodes());
    s.graph = induced_subgraph(g, s.nodes).graph;
    return s;
}

struct SamplingRow {
    std::string method;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    double hubs_retained = 0.0;  // fraction of the original top-degree nodes present
    double mean_cc = 0.0;
};

/// The `top` highest-degree nodes, ties broken by lower id.
inline std::vector<NodeId> top_hubs(const Graph& g, std::size_t top) {
    std::vector<NodeId> order(g.n_nodes());
    for (NodeId v = 0; v < order.size(); ++v) order[v] = v;
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });
    order.resize(std::min(top, order.size()));
    return order;
}

inline SamplingRow sampling_row(const std::string& method, const Graph& original, const Graph& induced,
                                const std::vector<NodeId>& nodes, std::size_t top = 10) {
    SamplingRow r;
    r.method = method;
    r.nodes = nodes.size();
    r.edges = induced.n_edges();
    const auto hubs = top_hubs(original, top);
    std::vector<NodeId> sorted(nodes);
    std::sort(sorted.begin(), sorted.end());
    std::size_t kept = 0;
    for (auto h : hubs) kept += std::binary_search(sorted.begin(), sorted.end(), h);
    r.hubs_retained = hubs.empty() ? 0.0 : static_cast<double>(kept) / static_cast<double>(hubs.size());
    r.mean_cc = clustering_distribution(induced).mean;
    return r;
}

/// GTI reference row plus one row per sampler, each sampler sized to the
/// reference node count.
inline std::vector<SamplingRow> sampling_report(const Graph& original, const Graph& reference,
                                                const std::vector<SamplerSpec>& samplers) {
    std::vector<NodeId> ref_nodes;
    for (NodeId v = 0; v < reference.n_nodes(); ++v)
        if (reference.degree(v) > 0) ref_nodes.push_back(v);
    if (ref_nodes.empty()) throw EmptyGraphError("sampling_report: reference graph has no edges");
    std::vector<SamplingRow> rows;
    rows.push_back(sampling_row("gti_stage1", original, induced_subgraph(reference, ref_nodes).graph, ref_nodes));
    for (auto spec : samplers) {
        spec.target_nodes = ref_nodes.size();
        auto s = sample(original, spec);
        rows.push_back(sampling_row(to_string(spec.method), original, s.graph, s.nodes));
    }
    return rows;
}

}  // namespace gti
