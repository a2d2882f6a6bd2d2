#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gti/errors.hpp"
#include "gti/graph.hpp"
#include "gti/rng.hpp"

namespace gti {

enum class GraphModel { ER, BA, WS, Kronecker };

inline std::string_view to_string(GraphModel m) {
    switch (m) {
        case GraphModel::ER: return "er";
        case GraphModel::BA: return "ba";
        case GraphModel::WS: return "ws";
        case GraphModel::Kronecker: return "kronecker";
    }
    return "?";
}

inline std::optional<GraphModel> parse_graph_model(std::string_view s) {
    if (s == "er" || s == "ER") return GraphModel::ER;
    if (s == "ba" || s == "BA") return GraphModel::BA;
    if (s == "ws" || s == "WS") return GraphModel::WS;
    if (s == "kronecker" || s == "Kronecker") return GraphModel::Kronecker;
    return std::nullopt;
}

struct GeneratorSpec {
    GraphModel model = GraphModel::BA;
    std::size_t n = 500;
    double p = 0.1;          // ER edge probability / WS rewiring probability
    std::size_t m = 2;       // BA attachments per new node
    std::size_t k_ring = 2;  // WS lattice degree, even
    std::array<std::array<double, 2>, 2> initiator{{{0.9, 0.5}, {0.5, 0.1}}};
    std::size_t power = 9;
    std::uint64_t seed = 1;

    void validate() const {
        auto prob = [](double x, const char* what) {
            if (!(x >= 0.0 && x <= 1.0)) throw ArgumentError(std::string(what) + " must lie in [0,1]");
        };
        switch (model) {
            case GraphModel::ER:
                prob(p, "p");
                break;
            case GraphModel::BA:
                if (m < 1) throw ArgumentError("BA requires m >= 1");
                if (m >= n) throw ArgumentError("BA requires m < n");
                break;
            case GraphModel::WS:
                prob(p, "p");
                if (k_ring % 2 != 0 || k_ring == 0) throw ArgumentError("WS k_ring must be even and positive");
                if (k_ring >= n) throw ArgumentError("WS requires k_ring < n");
                break;
            case GraphModel::Kronecker:
                for (const auto& row : initiator)
                    for (double x : row) prob(x, "initiator entries");
                if (power < 1) throw ArgumentError("Kronecker power must be >= 1");
                if (power > 24) throw ArgumentError("Kronecker power too large");
                break;
        }
    }
};

namespace detail {

inline Graph erdos_renyi(std::size_t n, double p, Rng& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (coin(rng)) edges.push_back({u, v});
    return Graph(n, std::move(edges));
}

// m seed nodes with no edges among them; the first arriving node links to all
// seeds, later ones pick m distinct targets proportional to degree. Gives
// exactly m*(n-m) edges.
inline Graph barabasi_albert(std::size_t n, std::size_t m, Rng& rng) {
    std::vector<Edge> edges;
    edges.reserve(m * (n - m));
    std::vector<NodeId> repeated;  // node appears once per incident edge end
    repeated.reserve(2 * m * (n - m));
    std::vector<NodeId> targets(m);
    for (std::size_t i = 0; i < m; ++i) targets[i] = static_cast<NodeId>(i);

    for (std::size_t source = m; source < n; ++source) {
        for (NodeId t : targets) {
            edges.push_back({t, static_cast<NodeId>(source)});
            repeated.push_back(t);
            repeated.push_back(static_cast<NodeId>(source));
        }
        targets.clear();
        while (targets.size() < m) {
            NodeId pick = repeated[uniform_index(rng, repeated.size())];
            if (std::find(targets.begin(), targets.end(), pick) == targets.end()) targets.push_back(pick);
        }
        std::sort(targets.begin(), targets.end());
    }
    return Graph(n, std::move(edges));
}

inline Graph watts_strogatz(std::size_t n, std::size_t k_ring, double p, Rng& rng) {
    std::vector<std::vector<NodeId>> adj(n);
    auto linked = [&](NodeId a, NodeId b) {
        return std::find(adj[a].begin(), adj[a].end(), b) != adj[a].end();
    };
    auto unlink = [&](NodeId a, NodeId b) {
        adj[a].erase(std::find(adj[a].begin(), adj[a].end(), b));
        adj[b].erase(std::find(adj[b].begin(), adj[b].end(), a));
    };
    for (std::size_t j = 1; j <= k_ring / 2; ++j)
        for (std::size_t u = 0; u < n; ++u) {
            auto v = static_cast<NodeId>((u + j) % n);
            adj[u].push_back(v);
            adj[v].push_back(static_cast<NodeId>(u));
        }
    // Rewire lattice edge (u, u+j) to (u, w) with probability p.
    for (std::size_t j = 1; j <= k_ring / 2; ++j)
        for (std::size_t u = 0; u < n; ++u) {
            auto v = static_cast<NodeId>((u + j) % n);
            if (uniform01(rng) >= p) continue;
            if (adj[u].size() >= n - 1) continue;
            NodeId w;
            do {
                w = static_cast<NodeId>(uniform_index(rng, n));
            } while (w == u || linked(static_cast<NodeId>(u), w));
            unlink(static_cast<NodeId>(u), v);
            adj[u].push_back(w);
            adj[w].push_back(static_cast<NodeId>(u));
        }
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v : adj[u])
            if (u < v) edges.push_back({u, v});
    return Graph(n, std::move(edges));
}

inline Graph stochastic_kronecker(const std::array<std::array<double, 2>, 2>& init, std::size_t power,
                                  Rng& rng) {
    const std::size_t n = std::size_t{1} << power;
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) {
            double prob = 1.0;
            for (std::size_t bit = 0; bit < power; ++bit) prob *= init[(u >> bit) & 1U][(v >> bit) & 1U];
            if (uniform01(rng) < prob) edges.push_back({u, v});
        }
    return Graph(n, std::move(edges));
}

}  // namespace detail

/// Deterministic for a fixed spec (seed included).
inline Graph generate(const GeneratorSpec& spec) {
    spec.validate();
    Rng rng = make_rng(spec.seed);
    switch (spec.model) {
        case GraphModel::ER: return detail::erdos_renyi(spec.n, spec.p, rng);
        case GraphModel::BA: return detail::barabasi_albert(spec.n, spec.m, rng);
        case GraphModel::WS: return detail::watts_strogatz(spec.n, spec.k_ring, spec.p, rng);
        case GraphModel::Kronecker: return detail::stochastic_kronecker(spec.initiator, spec.power, rng);
    }
    throw ArgumentError("unknown model");
}

}  // namespace gti
