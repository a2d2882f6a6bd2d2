#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "gti/errors.hpp"
#include "gti/nn/layers.hpp"

namespace gti::nn {

struct AdamConfig {
    double lr = 0.0002;
    double beta1 = 0.5;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Moment accumulators for one parameter set, with bias correction.
class AdamState {
public:
    AdamState() = default;
    AdamState(std::span<Param* const> params, AdamConfig config) : config_(config) {
        for (const auto* p : params) {
            m_.emplace_back(p->value.size(), 0.0);
            v_.emplace_back(p->value.size(), 0.0);
        }
    }

    const AdamConfig& config() const { return config_; }
    std::size_t step() const { return step_; }

    void apply(std::span<Param* const> params) {
        if (params.size() != m_.size()) throw ShapeError("adam: parameter list changed since construction");
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (params[i]->value.size() != m_[i].size()) throw ShapeError("adam: shape of " + params[i]->name + " changed");
            for (double g : params[i]->grad)
                if (!std::isfinite(g)) throw NumericError("adam: non-finite gradient in " + params[i]->name);
        }
        ++step_;
        const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
        const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
        for (std::size_t i = 0; i < params.size(); ++i) {
            Param& p = *params[i];
            if (!p.trainable) continue;
            auto& m = m_[i];
            auto& v = v_[i];
            for (std::size_t j = 0; j < p.value.size(); ++j) {
                const double g = p.grad[j];
                m[j] = config_.beta1 * m[j] + (1.0 - config_.beta1) * g;
                v[j] = config_.beta2 * v[j] + (1.0 - config_.beta2) * g * g;
                p.value[j] -= config_.lr * (m[j] / c1) / (std::sqrt(v[j] / c2) + config_.eps);
            }
        }
    }

private:
    AdamConfig config_{};
    std::size_t step_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

inline void adam_step(AdamState& state, std::span<Param* const> params) { state.apply(params); }

inline void sgd_step(std::span<Param* const> params, double lr) {
    for (auto* p : params) {
        if (!p->trainable) continue;
        for (std::size_t j = 0; j < p->value.size(); ++j) {
            if (!std::isfinite(p->grad[j])) throw NumericError("sgd: non-finite gradient in " + p->name);
            p->value[j] -= lr * p->grad[j];
        }
    }
}

}  // namespace gti::nn
