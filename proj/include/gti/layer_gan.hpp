#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "gti/errors.hpp"
#include "gti/graph.hpp"
#include "gti/nn/checkpoint.hpp"
#include "gti/nn/layers.hpp"
#include "gti/nn/optim.hpp"
#include "gti/partition.hpp"
#include "gti/rng.hpp"

namespace gti {

/// Binary k x k adjacency image of one subgraph. Slots >= `active` are padding.
struct Tile {
    std::size_t k = 0;
    std::size_t active = 0;
    std::vector<std::uint8_t> bits;

    Tile() = default;
    Tile(std::size_t size, std::size_t active_slots) : k(size), active(active_slots), bits(size * size, 0) {}

    std::uint8_t operator()(std::size_t i, std::size_t j) const { return bits[i * k + j]; }
    void set(std::size_t i, std::size_t j, std::uint8_t v) {
        bits[i * k + j] = v;
        bits[j * k + i] = v;
    }
    std::size_t edge_count() const {
        std::size_t c = 0;
        for (auto b : bits) c += b;
        return c / 2;
    }
    std::vector<std::size_t> degrees() const {
        std::vector<std::size_t> d(k, 0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) d[i] += bits[i * k + j];
        return d;
    }
    bool is_valid_adjacency() const {
        for (std::size_t i = 0; i < k; ++i) {
            if (bits[i * k + i] != 0) return false;
            for (std::size_t j = 0; j < k; ++j) {
                if (bits[i * k + j] > 1 || bits[i * k + j] != bits[j * k + i]) return false;
                if ((i >= active || j >= active) && bits[i * k + j] != 0) return false;
            }
        }
        return true;
    }
    friend bool operator==(const Tile&, const Tile&) = default;
};

inline std::size_t hamming(const Tile& a, const Tile& b) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.bits.size(); ++i) d += a.bits[i] != b.bits[i];
    return d;
}

/// Canonical tiles of one level, in part order.
struct SubgraphBatch {
    std::size_t level = 0;
    std::size_t k = 0;
    std::vector<Tile> tiles;
};

inline SubgraphBatch make_subgraph_batch(const Graph& g, const LayerPlan& plan) {
    SubgraphBatch batch;
    batch.level = plan.level;
    batch.k = plan.k;
    for (const auto& slots : plan.slots) {
        auto sub = induced_subgraph(g, slots);
        Tile t(plan.k, slots.size());
        for (const auto& e : sub.graph.edges()) t.set(e.u, e.v, 1);
        batch.tiles.push_back(std::move(t));
    }
    return batch;
}

/// Simultaneous row/column permutation of the active slots.
inline Tile permute_tile(const Tile& t, const std::vector<std::size_t>& perm) {
    Tile out(t.k, t.active);
    for (std::size_t i = 0; i < t.active; ++i)
        for (std::size_t j = 0; j < t.active; ++j) out.bits[perm[i] * t.k + perm[j]] = t(i, j);
    return out;
}

/// Each canonical tile followed by `augment` randomly permuted copies.
inline std::vector<Tile> make_training_set(const SubgraphBatch& batch, std::size_t augment, std::uint64_t seed) {
    Rng rng = make_rng(seed, streams::augment, batch.level);
    std::vector<Tile> out;
    out.reserve(batch.tiles.size() * (augment + 1));
    for (const auto& t : batch.tiles) {
        out.push_back(t);
        std::vector<std::size_t> perm(t.active);
        for (std::size_t a = 0; a < augment; ++a) {
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            out.push_back(permute_tile(t, perm));
        }
    }
    return out;
}

/// Default augmentation: ceil(1000/M) - 1 copies per tile.
inline std::size_t default_augment(std::size_t parts) { return (1000 + parts - 1) / parts - 1; }

struct GanConfig {
    std::size_t iters = 1000;
    double lr = 0.0002;
    double beta1 = 0.5;
    double beta2 = 0.999;
    std::size_t batch_size = 16;
    std::size_t z_dim = 100;
    std::size_t channels_high = 128;  // generator: FC -> high -> low -> 1
    std::size_t channels_low = 64;
    std::uint64_t seed = 1;
};

/// Generator and discriminator for one level, plus the training log.
///
/// Generator: z -> FC -> (high, k/4, k/4) -> BN -> LR -> deconv -> (low, k/2, k/2)
///            -> BN -> LR -> deconv -> (1, k, k) -> sigmoid.
/// Discriminator: (1, k, k) -> conv -> LR -> conv -> BN -> LR -> FC -> logit.
class GanModel {
public:
    GanModel(std::size_t k, const GanConfig& config) : k_(k), config_(config) {
        if (k < 4 || k % 4 != 0) throw ArgumentError("tile size must be a positive multiple of 4, got " + std::to_string(k));
        const std::size_t q = k / 4, hi = config.channels_high, lo = config.channels_low;
        generator_.add<nn::Linear>(config.z_dim, hi * q * q, "g.fc");
        generator_.add<nn::Reshape>(hi, q, q);
        generator_.add<nn::BatchNorm>(hi, "g.bn1");
        generator_.add<nn::LeakyReLU>(0.2);
        generator_.add<nn::Deconv2d>(hi, lo, "g.deconv1");
        generator_.add<nn::BatchNorm>(lo, "g.bn2");
        generator_.add<nn::LeakyReLU>(0.2);
        generator_.add<nn::Deconv2d>(lo, 1, "g.deconv2");
        generator_.add<nn::Sigmoid>();

        discriminator_.add<nn::Conv2d>(1, lo, "d.conv1");
        discriminator_.add<nn::LeakyReLU>(0.2);
        discriminator_.add<nn::Conv2d>(lo, hi, "d.conv2");
        discriminator_.add<nn::BatchNorm>(hi, "d.bn1");
        discriminator_.add<nn::LeakyReLU>(0.2);
        discriminator_.add<nn::Linear>(hi * q * q, 1, "d.fc");

        Rng rng = make_rng(config.seed, streams::gan, 0);
        generator_.init(rng);
        discriminator_.init(rng);
    }

    std::size_t k() const { return k_; }
    const GanConfig& config() const { return config_; }
    bool trained() const { return iterations_ > 0; }
    std::size_t iterations() const { return iterations_; }
    const std::vector<double>& d_loss() const { return d_loss_; }
    const std::vector<double>& g_loss() const { return g_loss_; }
    nn::Sequential& generator() { return generator_; }
    nn::Sequential& discriminator() { return discriminator_; }

    nn::Tensor noise(std::size_t n, Rng& rng) const {
        nn::Tensor z({n, config_.z_dim, 1, 1});
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (auto& v : z.values()) v = u(rng);
        return z;
    }

    /// Generator outputs in (0,1), shape (n, 1, k, k). Batch-norm layers use
    /// running statistics.
    nn::Tensor sample(std::size_t n, Rng& rng) {
        if (!trained()) throw StateError("GAN has not been trained or loaded");
        return generator_.forward(noise(n, rng), false);
    }

    void record(double d, double g) {
        d_loss_.push_back(d);
        g_loss_.push_back(g);
        ++iterations_;
    }

    std::map<std::string, std::string> meta() const {
        return {{"k", std::to_string(k_)},
                {"z_dim", std::to_string(config_.z_dim)},
                {"channels_high", std::to_string(config_.channels_high)},
                {"channels_low", std::to_string(config_.channels_low)},
                {"iterations", std::to_string(iterations_)}};
    }

    void save(const std::string& path) {
        auto params = generator_.params();
        for (auto* p : discriminator_.params()) params.push_back(p);
        nn::write_checkpoint(path, meta(), params);
    }

    static GanModel load(const std::string& path) {
        auto ck = nn::read_checkpoint(path);
        GanConfig cfg;
        cfg.z_dim = std::stoul(ck.require("z_dim"));
        cfg.channels_high = std::stoul(ck.require("channels_high"));
        cfg.channels_low = std::stoul(ck.require("channels_low"));
        GanModel model(std::stoul(ck.require("k")), cfg);
        auto params = model.generator_.params();
        for (auto* p : model.discriminator_.params()) params.push_back(p);
        nn::load_params(ck, params);
        model.iterations_ = std::stoul(ck.require("iterations"));
        return model;
    }

private:
    std::size_t k_;
    GanConfig config_;
    nn::Sequential generator_;
    nn::Sequential discriminator_;
    std::size_t iterations_ = 0;
    std::vector<double> d_loss_, g_loss_;
};

inline nn::Tensor tiles_to_tensor(const std::vector<Tile>& tiles, const std::vector<std::size_t>& pick) {
    const std::size_t k = tiles.front().k;
    nn::Tensor t({pick.size(), 1, k, k});
    for (std::size_t b = 0; b < pick.size(); ++b) {
        const auto& bits = tiles[pick[b]].bits;
        std::copy(bits.begin(), bits.end(), t.data() + b * k * k);
    }
    return t;
}

/// Alternating DCGAN updates: one discriminator step (real vs fake), then one
/// generator step against the "real" label. Minibatches drawn with replacement.
inline GanModel train_layer_gan(const std::vector<Tile>& tiles, const GanConfig& config) {
    if (tiles.empty()) throw ArgumentError("train_layer_gan: no tiles");
    const std::size_t k = tiles.front().k;
    for (const auto& t : tiles)
        if (t.k != k) throw ArgumentError("train_layer_gan: mixed tile sizes");

    GanModel model(k, config);
    auto& gen = model.generator();
    auto& disc = model.discriminator();
    auto gen_params = gen.params();
    auto disc_params = disc.params();
    const nn::AdamConfig adam{config.lr, config.beta1, config.beta2, 1e-8};
    nn::AdamState gen_opt(gen_params, adam), disc_opt(disc_params, adam);

    Rng rng = make_rng(config.seed, streams::gan, 1);
    std::vector<std::size_t> pick(config.batch_size);
    for (std::size_t it = 0; it < config.iters; ++it) {
        for (auto& p : pick) p = uniform_index(rng, tiles.size());
        nn::Tensor real = tiles_to_tensor(tiles, pick);
        nn::Tensor fake = gen.forward(model.noise(config.batch_size, rng), true);

        disc.zero_grad();
        auto on_real = nn::bce_with_logits(disc.forward(real, true), 1.0);
        disc.backward(on_real.grad);
        auto on_fake = nn::bce_with_logits(disc.forward(fake, true), 0.0);
        disc.backward(on_fake.grad);
        const double d_loss = on_real.loss + on_fake.loss;
        if (!std::isfinite(d_loss))
            throw NumericError("GAN training diverged at iteration " + std::to_string(it) +
                               ": d_loss=" + std::to_string(d_loss));
        nn::adam_step(disc_opt, disc_params);

        gen.zero_grad();
        disc.zero_grad();
        auto fooled = nn::bce_with_logits(disc.forward(fake, true), 1.0);
        gen.backward(disc.backward(fooled.grad));
        if (!std::isfinite(fooled.loss))
            throw NumericError("GAN training diverged at iteration " + std::to_string(it) +
                               ": d_loss=" + std::to_string(d_loss) + " g_loss=" + std::to_string(fooled.loss));
        nn::adam_step(gen_opt, gen_params);
        model.record(d_loss, fooled.loss);
    }
    return model;
}

/// Threshold at 0.5, symmetrize by elementwise max, clear the diagonal.
inline Tile binarize_output(const double* probs, std::size_t k) {
    Tile t(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (probs[i * k + j] > 0.5 || probs[j * k + i] > 0.5) t.set(i, j, 1);
    return t;
}

// Distance once `a` has its slots >= active cleared (b is already clear there).
inline std::size_t hamming_active(const Tile& a, const Tile& b, std::size_t active) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < active; ++i)
        for (std::size_t j = 0; j < active; ++j) d += a(i, j) != b(i, j);
    return d;
}

inline Tile restrict_to_active(const Tile& t, std::size_t active) {
    Tile out(t.k, active);
    for (std::size_t i = 0; i < active; ++i)
        for (std::size_t j = 0; j < active; ++j) out.bits[i * t.k + j] = t(i, j);
    return out;
}

struct LayerRegeneration {
    Graph layer;                         // G'_l over the original N nodes
    std::size_t pool_size = 0;
    std::vector<std::size_t> pool_index;  // per part
    std::vector<std::size_t> distance;    // Hamming distance to the canonical tile, per part
};

/// Draws pool_factor * M generator tiles and gives every part the closest
/// unused one (greedy by ascending Hamming distance), writing intra-part
/// edges back through the slot maps.
inline LayerRegeneration regenerate_layer(GanModel& model, const Graph& g, const LayerPlan& plan,
                                          std::size_t pool_factor, std::uint64_t seed) {
    if (!model.trained()) throw StateError("regenerate_layer: model is untrained");
    if (model.k() != plan.k) throw ArgumentError("regenerate_layer: model tile size differs from plan");
    if (pool_factor < 1) throw ArgumentError("regenerate_layer: pool_factor must be >= 1");
    const std::size_t parts = plan.parts, k = plan.k;
    const std::size_t pool_size = pool_factor * parts;
    auto canonical = make_subgraph_batch(g, plan);

    Rng rng = make_rng(seed, streams::regenerate, plan.level);
    std::vector<Tile> pool;
    pool.reserve(pool_size);
    constexpr std::size_t kChunk = 64;
    for (std::size_t done = 0; done < pool_size; done += kChunk) {
        const std::size_t n = std::min(kChunk, pool_size - done);
        auto out = model.sample(n, rng);
        for (std::size_t i = 0; i < n; ++i) pool.push_back(binarize_output(out.data() + i * k * k, k));
    }

    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> pairs;  // (distance, part, pool)
    pairs.reserve(parts * pool_size);
    for (std::size_t p = 0; p < parts; ++p)
        for (std::size_t s = 0; s < pool_size; ++s)
            pairs.emplace_back(hamming_active(pool[s], canonical.tiles[p], plan.slots[p].size()), p, s);
    std::sort(pairs.begin(), pairs.end());

    LayerRegeneration out;
    out.pool_size = pool_size;
    out.pool_index.assign(parts, pool_size);
    out.distance.assign(parts, 0);
    std::vector<char> used(pool_size, 0);
    std::size_t assigned = 0;
    for (const auto& [d, p, s] : pairs) {
        if (assigned == parts) break;
        if (out.pool_index[p] != pool_size || used[s]) continue;
        out.pool_index[p] = s;
        out.distance[p] = d;
        used[s] = 1;
        ++assigned;
    }

    std::vector<Edge> edges;
    for (std::size_t p = 0; p < parts; ++p) {
        const auto& slots = plan.slots[p];
        const Tile& t = pool[out.pool_index[p]];
        for (std::size_t i = 0; i < slots.size(); ++i)
            for (std::size_t j = i + 1; j < slots.size(); ++j)
                if (t(i, j)) edges.push_back({slots[i], slots[j]});
    }
    out.layer = Graph(plan.n_nodes, std::move(edges));
    return out;
}

}  // namespace gti
