#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "gti/errors.hpp"
#include "gti/graph.hpp"

namespace gti {

struct SumupConfig {
    std::size_t iters = 500;
    double lr = 0.1;
    double epsilon = 1e-6;
};

/// (w_1..w_L, w_E, b). The bias only applies on the support mask: entries
/// where some layer or the inter-edge set is nonzero.
struct SumupParams {
    std::vector<double> layer_weights;
    double inter_weight = 1.0;
    double bias = 0.0;

    std::vector<double> flat() const {
        std::vector<double> v = layer_weights;
        v.push_back(inter_weight);
        v.push_back(bias);
        return v;
    }
    static SumupParams from_flat(const std::vector<double>& v) {
        SumupParams p;
        p.layer_weights.assign(v.begin(), v.end() - 2);
        p.inter_weight = v[v.size() - 2];
        p.bias = v.back();
        return p;
    }
};

/// Fixed inputs of the weighted sum: regenerated layers, the inter-edge set
/// and the original graph, indexed by support pair.
class SumupProblem {
public:
    SumupProblem(std::vector<Graph> layers, Graph inter, const Graph& original)
        : layers_(std::move(layers)), inter_(std::move(inter)), n_(original.n_nodes()) {
        if (layers_.empty()) throw ArgumentError("sum-up needs at least one layer");
        for (const auto& l : layers_)
            if (l.n_nodes() != n_) throw ArgumentError("layer node count differs from the original graph");
        if (inter_.n_nodes() != n_) throw ArgumentError("inter-edge set node count differs from the original graph");

        std::map<Edge, std::size_t> index;
        auto touch = [&](const Edge& e) {
            auto [it, inserted] = index.emplace(e, support_.size());
            if (inserted) {
                support_.push_back(e);
                features_.emplace_back(layers_.size() + 2, 0.0);
                features_.back().back() = 1.0;  // bias mask
            }
            return it->second;
        };
        for (std::size_t l = 0; l < layers_.size(); ++l)
            for (const auto& e : layers_[l].edges()) features_[touch(e)][l] = 1.0;
        for (const auto& e : inter_.edges()) features_[touch(e)][layers_.size()] = 1.0;

        // Keep support in canonical edge order.
        std::vector<std::size_t> order(support_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return support_[a] < support_[b]; });
        std::vector<Edge> s;
        std::vector<std::vector<double>> f;
        for (auto i : order) {
            s.push_back(support_[i]);
            f.push_back(std::move(features_[i]));
        }
        support_ = std::move(s);
        features_ = std::move(f);

        target_.resize(support_.size());
        std::size_t covered = 0;
        for (std::size_t i = 0; i < support_.size(); ++i) {
            target_[i] = original.has_edge(support_[i].u, support_[i].v) ? 1.0 : 0.0;
            covered += target_[i] > 0.0;
        }
        uncovered_edges_ = original.n_edges() - covered;
    }

    std::size_t n_nodes() const { return n_; }
    std::size_t n_layers() const { return layers_.size(); }
    std::size_t n_params() const { return layers_.size() + 2; }
    const std::vector<Graph>& layers() const { return layers_; }
    const Graph& inter() const { return inter_; }
    const std::vector<Edge>& support() const { return support_; }
    const std::vector<double>& target() const { return target_; }
    std::size_t uncovered_edges() const { return uncovered_edges_; }

    double value(std::size_t i, const std::vector<double>& theta) const {
        double v = 0.0;
        for (std::size_t j = 0; j < theta.size(); ++j) v += theta[j] * features_[i][j];
        return v;
    }

    /// Loss over all N^2 entries and its gradient. Off-support entries are
    /// zero in re_G: non-edges there contribute eps*log(1) = 0 and original
    /// edges a constant. Each support pair stands for two symmetric entries.
    std::pair<double, std::vector<double>> objective(const std::vector<double>& theta, double eps) const {
        double loss = 2.0 * static_cast<double>(uncovered_edges_) * (1.0 + eps) * std::log((1.0 + eps) / eps);
        std::vector<double> grad(theta.size(), 0.0);
        for (std::size_t i = 0; i < support_.size(); ++i) {
            const double g = target_[i] + eps;
            const double raw = value(i, theta);
            const double re = std::max(raw, 0.0);
            loss += 2.0 * g * std::log(g / (re + eps));
            if (raw > 0.0) {
                const double coef = -2.0 * g / (re + eps);
                for (std::size_t j = 0; j < theta.size(); ++j) grad[j] += coef * features_[i][j];
            }
        }
        return {loss, grad};
    }

    /// re_G as a dense matrix for the given parameters.
    WeightedAdjacency compose(const SumupParams& p) const {
        const auto theta = p.flat();
        WeightedAdjacency re(n_);
        for (std::size_t i = 0; i < support_.size(); ++i) re.set(support_[i].u, support_[i].v, value(i, theta));
        return re;
    }

private:
    std::vector<Graph> layers_;
    Graph inter_;
    std::size_t n_;
    std::vector<Edge> support_;
    std::vector<std::vector<double>> features_;  // per support pair: [layer bits..., inter bit, 1]
    std::vector<double> target_;
    std::size_t uncovered_edges_ = 0;
};

/// Sum over all N^2 entries of (G+eps) * log((G+eps) / (max(re_G,0)+eps)).
inline double sumup_loss(const WeightedAdjacency& re, const Graph& g, double eps) {
    if (re.n_nodes() != g.n_nodes())
        throw ArgumentError("sumup_loss: re_G has " + std::to_string(re.n_nodes()) + " nodes, G has " +
                            std::to_string(g.n_nodes()));
    if (!(eps > 0.0)) throw ArgumentError("sumup_loss: epsilon must be positive");
    const std::size_t n = g.n_nodes();
    const auto dense = g.dense_adjacency();
    double loss = 0.0;
    for (std::size_t i = 0; i < n * n; ++i) {
        const double t = dense[i] + eps;
        loss += t * std::log(t / (std::max(re.entries()[i], 0.0) + eps));
    }
    return loss;
}

struct WeightedReconstruction {
    WeightedAdjacency re_g;
    SumupParams params;
    double epsilon = 1e-6;
    std::vector<double> loss_curve;  // loss before each update, then the final loss
    double final_loss = 0.0;
    bool diverged = false;
    std::vector<Edge> support;
    std::vector<double> support_values;  // re_G on each support pair
};

/// Full-batch gradient descent on the layer weights, inter-edge weight and
/// bias. Stops early, keeping the last finite parameters, if the loss stops
/// being finite.
inline WeightedReconstruction fit_sumup(const SumupProblem& problem, const SumupConfig& config) {
    if (!(config.epsilon > 0.0)) throw ArgumentError("fit_sumup: epsilon must be positive");
    SumupParams init;
    init.layer_weights.assign(problem.n_layers(), 1.0 / static_cast<double>(problem.n_layers()));
    init.inter_weight = 1.0;
    init.bias = 0.0;
    std::vector<double> theta = init.flat();

    WeightedReconstruction out;
    out.epsilon = config.epsilon;
    for (std::size_t it = 0; it < config.iters; ++it) {
        auto [loss, grad] = problem.objective(theta, config.epsilon);
        if (!std::isfinite(loss)) {
            out.diverged = true;
            break;
        }
        out.loss_curve.push_back(loss);
        std::vector<double> next = theta;
        for (std::size_t j = 0; j < theta.size(); ++j) next[j] -= config.lr * grad[j];
        bool finite = true;
        for (double v : next) finite = finite && std::isfinite(v);
        if (!finite) {
            out.diverged = true;
            break;
        }
        theta = std::move(next);
    }
    out.final_loss = problem.objective(theta, config.epsilon).first;
    out.loss_curve.push_back(out.final_loss);
    out.params = SumupParams::from_flat(theta);
    out.re_g = problem.compose(out.params);
    out.support = problem.support();
    for (std::size_t i = 0; i < out.support.size(); ++i) out.support_values.push_back(problem.value(i, theta));
    return out;
}

struct StageSet {
    std::vector<double> cut_values;  // descending
    std::vector<Graph> stages;       // stage i keeps support entries >= cut_values[i]
    std::vector<std::size_t> edge_counts;
    std::vector<double> retained_pct;
};

/// Stages from the distinct positive support weights, rounded to
/// `round_decimals`, largest cut value first.
inline StageSet extract_stages(std::size_t n_nodes, const std::vector<Edge>& support,
                               const std::vector<double>& values, int round_decimals = 6) {
    if (support.size() != values.size()) throw ArgumentError("extract_stages: support/value length mismatch");
    const double scale = std::pow(10.0, round_decimals);
    std::vector<std::int64_t> keys(values.size());
    std::vector<std::int64_t> distinct;
    for (std::size_t i = 0; i < values.size(); ++i) {
        keys[i] = std::llround(values[i] * scale);
        if (keys[i] > 0) distinct.push_back(keys[i]);
    }
    if (distinct.empty()) throw EmptyGraphError("extract_stages: reconstruction has no positive support");
    std::sort(distinct.begin(), distinct.end(), std::greater<>());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    StageSet out;
    for (auto cut : distinct) {
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < keys.size(); ++i)
            if (keys[i] >= cut) edges.push_back(support[i]);
        out.cut_values.push_back(static_cast<double>(cut) / scale);
        out.edge_counts.push_back(edges.size());
        out.stages.emplace_back(n_nodes, std::move(edges));
    }
    const double total = static_cast<double>(out.edge_counts.back());
    for (auto c : out.edge_counts) out.retained_pct.push_back(std::round(10000.0 * static_cast<double>(c) / total) / 100.0);
    return out;
}

inline StageSet extract_stages(const WeightedReconstruction& rec, int round_decimals = 6) {
    return extract_stages(rec.re_g.n_nodes(), rec.support, rec.support_values, round_decimals);
}

}  // namespace gti
