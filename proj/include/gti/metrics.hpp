#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "gti/errors.hpp"
#include "gti/graph.hpp"
#include "gti/reconstruct.hpp"

namespace gti {

/// Discrete distribution over ascending support values.
struct Distribution {
    std::vector<double> values;
    std::vector<double> density;
    double mean = 0.0;  // mean of the underlying per-node quantity

    double total() const {
        double s = 0.0;
        for (double d : density) s += d;
        return s;
    }
};

namespace detail {

inline Distribution histogram(const std::vector<double>& samples) {
    Distribution d;
    if (samples.empty()) return d;
    std::map<double, std::size_t> counts;
    double sum = 0.0;
    for (double s : samples) {
        ++counts[s];
        sum += s;
    }
    const double n = static_cast<double>(samples.size());
    for (const auto& [v, c] : counts) {
        d.values.push_back(v);
        d.density.push_back(static_cast<double>(c) / n);
    }
    d.mean = sum / n;
    return d;
}

}  // namespace detail

inline Distribution degree_distribution(const Graph& g) {
    std::vector<double> deg(g.n_nodes());
    for (NodeId v = 0; v < g.n_nodes(); ++v) deg[v] = static_cast<double>(g.degree(v));
    return detail::histogram(deg);
}

/// Per-node local clustering coefficient; 0 for degree < 2.
inline std::vector<double> local_clustering(const Graph& g) {
    std::vector<double> c(g.n_nodes(), 0.0);
    for (NodeId v = 0; v < g.n_nodes(); ++v) {
        auto nb = g.neighbors(v);
        const std::size_t d = nb.size();
        if (d < 2) continue;
        std::size_t links = 0;
        for (std::size_t i = 0; i < d; ++i) {
            auto nbi = g.neighbors(nb[i]);
            // count neighbors of nb[i] inside nb that come after it
            std::size_t a = 0, b = i + 1;
            while (a < nbi.size() && b < d) {
                if (nbi[a] < nb[b]) ++a;
                else if (nb[b] < nbi[a]) ++b;
                else { ++links; ++a; ++b; }
            }
        }
        c[v] = 2.0 * static_cast<double>(links) / static_cast<double>(d * (d - 1));
    }
    return c;
}

/// Coefficients binned by rounding to two decimals. `mean` is the unbinned mean.
inline Distribution clustering_distribution(const Graph& g) {
    auto c = local_clustering(g);
    double sum = 0.0;
    for (double& x : c) {
        sum += x;
        x = std::round(x * 100.0) / 100.0;
    }
    auto d = detail::histogram(c);
    if (!c.empty()) d.mean = sum / static_cast<double>(c.size());
    return d;
}

/// Kolmogorov-Smirnov distance: max |F1(x) - F2(x)| over the joint support.
inline double ks_distance(const Distribution& a, const Distribution& b) {
    std::size_t i = 0, j = 0;
    double fa = 0.0, fb = 0.0, best = 0.0;
    while (i < a.values.size() || j < b.values.size()) {
        double x;
        if (j >= b.values.size() || (i < a.values.size() && a.values[i] <= b.values[j])) x = a.values[i];
        else x = b.values[j];
        while (i < a.values.size() && a.values[i] == x) fa += a.density[i++];
        while (j < b.values.size() && b.values[j] == x) fb += b.density[j++];
        best = std::max(best, std::abs(fa - fb));
    }
    return best;
}

inline double frobenius_distance(const WeightedAdjacency& a, const WeightedAdjacency& b) {
    if (a.n_nodes() != b.n_nodes())
        throw ArgumentError("frobenius_distance: " + std::to_string(a.n_nodes()) + " vs " +
                            std::to_string(b.n_nodes()) + " nodes");
    double s = 0.0;
    auto ea = a.entries(), eb = b.entries();
    for (std::size_t i = 0; i < ea.size(); ++i) s += (ea[i] - eb[i]) * (ea[i] - eb[i]);
    return std::sqrt(s);
}

/// Binary case: sqrt(2 * |E1 symmetric-difference E2|).
inline double frobenius_distance(const Graph& a, const Graph& b) {
    if (a.n_nodes() != b.n_nodes())
        throw ArgumentError("frobenius_distance: " + std::to_string(a.n_nodes()) + " vs " +
                            std::to_string(b.n_nodes()) + " nodes");
    std::vector<Edge> diff;
    std::set_symmetric_difference(a.edges().begin(), a.edges().end(), b.edges().begin(), b.edges().end(),
                                  std::back_inserter(diff));
    return std::sqrt(2.0 * static_cast<double>(diff.size()));
}

inline double frobenius_distance(const WeightedAdjacency& a, const Graph& b) {
    return frobenius_distance(a, WeightedAdjacency::from_graph(b));
}

struct SimilarityConfig {
    double lambda = 1.0;
    double tol = 1e-6;
    std::size_t max_iter = 200;
    bool diagonal = false;  // score = trace(S) / sum(S) instead of sum(S) / n
};

struct SimilarityMatrix {
    Eigen::MatrixXd s;
    std::size_t iterations = 0;
    bool converged = false;
    bool collapsed = false;  // every entry clamped to 0; S stays 0 and score is 0
    double score = 0.0;
};

/// Coupled node-node similarity with a complement-adjacency mismatch penalty:
///   S <- normalize_F(max(0, A1 S A2' + A1' S A2 - lambda (C1 S A2' + A1 S C2')))
/// with C = J - I - A, starting from uniform S. Convergence is tested on
/// even steps.
inline SimilarityMatrix node_similarity(const Graph& g1, const Graph& g2, const SimilarityConfig& cfg = {}) {
    const std::size_t n = g1.n_nodes();
    if (g2.n_nodes() != n) throw ArgumentError("node_similarity: graphs differ in node count");
    if (cfg.lambda < 0.0) throw ArgumentError("node_similarity: lambda must be >= 0");
    if (n == 0) throw EmptyGraphError("node_similarity: empty graph");

    using Sp = Eigen::SparseMatrix<double, Eigen::RowMajor>;
    auto sparse = [n](const Graph& g) {
        std::vector<Eigen::Triplet<double>> t;
        for (const auto& e : g.edges()) {
            t.emplace_back(e.u, e.v, 1.0);
            t.emplace_back(e.v, e.u, 1.0);
        }
        Sp a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        a.setFromTriplets(t.begin(), t.end());
        return a;
    };
    const Sp a1 = sparse(g1), a2 = sparse(g2);
    const Eigen::Index N = static_cast<Eigen::Index>(n);

    auto step = [&](const Eigen::MatrixXd& s) {
        // Undirected graphs: A' = A, so the two coupling terms coincide.
        const Eigen::MatrixXd sa2 = s * a2;               // S A2
        const Eigen::MatrixXd a1sa2 = a1 * sa2;            // A1 S A2
        const Eigen::MatrixXd a1s = a1 * s;                // A1 S
        // C1 S A2 = J S A2 - S A2 - A1 S A2
        Eigen::MatrixXd c1sa2 = (-sa2 - a1sa2);
        c1sa2.rowwise() += sa2.colwise().sum();
        // A1 S C2 = A1 S J - A1 S - A1 S A2
        Eigen::MatrixXd a1sc2 = (-a1s - a1sa2);
        a1sc2.colwise() += a1s.rowwise().sum();
        Eigen::MatrixXd next = 2.0 * a1sa2 - cfg.lambda * (c1sa2 + a1sc2);
        next = next.cwiseMax(0.0);
        const double norm = next.norm();
        if (norm > 0.0) next /= norm;
        return next;
    };

    SimilarityMatrix out;
    Eigen::MatrixXd s = Eigen::MatrixXd::Constant(N, N, 1.0 / static_cast<double>(n));
    while (out.iterations + 2 <= cfg.max_iter) {
        Eigen::MatrixXd next = step(step(s));
        out.iterations += 2;
        const double delta = (next - s).norm();
        s = std::move(next);
        if (s.isZero(0.0)) {
            out.collapsed = true;
            out.converged = true;
            break;
        }
        if (delta < cfg.tol) {
            out.converged = true;
            break;
        }
    }
    const double total = s.sum();
    if (cfg.diagonal) out.score = total > 0.0 ? s.trace() / total : 0.0;
    else out.score = total / static_cast<double>(n);
    out.s = std::move(s);
    return out;
}

inline std::vector<double> retained_percentages(const StageSet& stages) {
    if (stages.stages.empty()) throw ArgumentError("retained_percentages: empty stage set");
    const double total = static_cast<double>(stages.stages.back().n_edges());
    std::vector<double> out;
    for (const auto& s : stages.stages) out.push_back(std::round(10000.0 * static_cast<double>(s.n_edges()) / total) / 100.0);
    return out;
}

}  // namespace gti
