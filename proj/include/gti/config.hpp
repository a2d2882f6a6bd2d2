#pragma once

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gti/errors.hpp"
#include "gti/generators.hpp"
#include "gti/layer_gan.hpp"
#include "gti/metrics.hpp"
#include "gti/reconstruct.hpp"
#include "gti/sampling.hpp"

namespace gti {

/// Every pipeline knob. Defaults: GAN 1000 iterations at lr 2e-4, sum-up
/// 500 iterations at lr 0.1, epsilon 1e-6.
struct RunConfig {
    std::string input;  // edge-list path; empty means use `generator`
    bool relabel = true;
    GeneratorSpec generator;
    std::uint64_t seed = 1;

    GanConfig gan;
    long augment = -1;  // -1: ceil(1000/M) - 1
    std::size_t pool_factor = 10;

    SumupConfig sumup;
    int round_decimals = 6;

    std::vector<SamplerMethod> samplers{SamplerMethod::RandomWalk, SamplerMethod::ForestFire,
                                        SamplerMethod::RandomJump};
    double restart_p = 0.15;
    double jump_p = 0.15;
    double burn_p = 0.35;
    std::size_t hub_count = 10;

    std::size_t ensemble_size = 100;
    std::size_t similarity_ensemble_size = 10;
    SimilarityConfig similarity;
    std::size_t similarity_max_nodes = 2000;

    std::size_t workers = 0;  // 0: hardware concurrency
    std::string out = "gti_out";

    std::size_t resolved_workers() const {
        if (workers > 0) return workers;
        return std::max<unsigned>(1, std::thread::hardware_concurrency());
    }

    void validate() const {
        if (input.empty()) generator.validate();
        if (gan.iters < 1) throw ArgumentError("gan_iters must be >= 1");
        if (!(gan.lr > 0.0)) throw ArgumentError("gan_lr must be > 0");
        if (gan.batch_size < 1) throw ArgumentError("gan_batch_size must be >= 1");
        if (gan.z_dim < 1 || gan.channels_high < 1 || gan.channels_low < 1)
            throw ArgumentError("z_dim and channel counts must be >= 1");
        if (augment < -1) throw ArgumentError("augment must be >= 0 or auto");
        if (pool_factor < 1) throw ArgumentError("pool_factor must be >= 1");
        if (!(sumup.lr > 0.0)) throw ArgumentError("sumup_lr must be > 0");
        if (!(sumup.epsilon > 0.0)) throw ArgumentError("epsilon must be > 0");
        if (round_decimals < 0 || round_decimals > 12) throw ArgumentError("round_decimals must be in [0,12]");
        for (double p : {restart_p, jump_p, burn_p})
            if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("sampler probabilities must be in [0,1]");
        if (similarity.lambda < 0.0) throw ArgumentError("similarity_lambda must be >= 0");
        if (out.empty()) throw ArgumentError("out must not be empty");
    }
};

namespace detail {

inline std::string fmt_double(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline double parse_double(const std::string& key, const std::string& s) {
    double v = 0.0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw ArgumentError("config key '" + key + "': expected a number, got '" + s + "'");
    return v;
}

template <class T>
T parse_uint(const std::string& key, const std::string& s) {
    T v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw ArgumentError("config key '" + key + "': expected a non-negative integer, got '" + s + "'");
    return v;
}

inline bool parse_bool(const std::string& key, const std::string& s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ArgumentError("config key '" + key + "': expected true/false, got '" + s + "'");
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

}  // namespace detail

struct ConfigField {
    std::string key;
    std::function<std::string()> get;
    std::function<void(const std::string&)> set;
};

/// Key table for the flat key=value format, in output order.
inline std::vector<ConfigField> config_fields(RunConfig& c) {
    using namespace detail;
    std::vector<ConfigField> f;
    auto str = [&f](std::string key, std::string& ref) {
        f.push_back({key, [&ref] { return ref; }, [&ref](const std::string& v) { ref = v; }});
    };
    auto real = [&f](std::string key, double& ref) {
        f.push_back({key, [&ref] { return fmt_double(ref); },
                     [&ref, key](const std::string& v) { ref = parse_double(key, v); }});
    };
    auto count = [&f](std::string key, std::size_t& ref) {
        f.push_back({key, [&ref] { return std::to_string(ref); },
                     [&ref, key](const std::string& v) { ref = parse_uint<std::size_t>(key, v); }});
    };
    auto u64 = [&f](std::string key, std::uint64_t& ref) {
        f.push_back({key, [&ref] { return std::to_string(ref); },
                     [&ref, key](const std::string& v) { ref = parse_uint<std::uint64_t>(key, v); }});
    };

    str("input", c.input);
    f.push_back({"relabel", [&c] { return std::string(c.relabel ? "true" : "false"); },
                 [&c](const std::string& v) { c.relabel = parse_bool("relabel", v); }});
    f.push_back({"model", [&c] { return std::string(to_string(c.generator.model)); },
                 [&c](const std::string& v) {
                     auto m = parse_graph_model(v);
                     if (!m) throw ArgumentError("config key 'model': unknown model '" + v + "' (er, ba, ws, kronecker)");
                     c.generator.model = *m;
                 }});
    count("n", c.generator.n);
    real("p", c.generator.p);
    count("m", c.generator.m);
    count("k_ring", c.generator.k_ring);
    f.push_back({"initiator",
                 [&c] {
                     const auto& a = c.generator.initiator;
                     return fmt_double(a[0][0]) + "," + fmt_double(a[0][1]) + "," + fmt_double(a[1][0]) + "," +
                            fmt_double(a[1][1]);
                 },
                 [&c](const std::string& v) {
                     auto parts = split(v, ',');
                     if (parts.size() != 4) throw ArgumentError("config key 'initiator': expected 4 comma-separated values");
                     for (int i = 0; i < 4; ++i) c.generator.initiator[i / 2][i % 2] = parse_double("initiator", parts[i]);
                 }});
    count("power", c.generator.power);
    u64("graph_seed", c.generator.seed);
    u64("seed", c.seed);

    count("gan_iters", c.gan.iters);
    real("gan_lr", c.gan.lr);
    real("gan_beta1", c.gan.beta1);
    real("gan_beta2", c.gan.beta2);
    count("gan_batch_size", c.gan.batch_size);
    count("z_dim", c.gan.z_dim);
    count("channels_high", c.gan.channels_high);
    count("channels_low", c.gan.channels_low);
    f.push_back({"augment", [&c] { return c.augment < 0 ? std::string("auto") : std::to_string(c.augment); },
                 [&c](const std::string& v) {
                     c.augment = v == "auto" ? -1 : static_cast<long>(parse_uint<std::size_t>("augment", v));
                 }});
    count("pool_factor", c.pool_factor);

    count("sumup_iters", c.sumup.iters);
    real("sumup_lr", c.sumup.lr);
    real("epsilon", c.sumup.epsilon);
    f.push_back({"round_decimals", [&c] { return std::to_string(c.round_decimals); },
                 [&c](const std::string& v) { c.round_decimals = static_cast<int>(parse_uint<unsigned>("round_decimals", v)); }});

    f.push_back({"samplers",
                 [&c] {
                     std::string s;
                     for (auto m : c.samplers) s += (s.empty() ? "" : ",") + to_string(m);
                     return s;
                 },
                 [&c](const std::string& v) {
                     c.samplers.clear();
                     for (const auto& p : split(v, ','))
                         if (!p.empty()) c.samplers.push_back(parse_sampler_method(p));
                 }});
    real("restart_p", c.restart_p);
    real("jump_p", c.jump_p);
    real("burn_p", c.burn_p);
    count("hub_count", c.hub_count);

    count("ensemble_size", c.ensemble_size);
    count("similarity_ensemble_size", c.similarity_ensemble_size);
    real("similarity_lambda", c.similarity.lambda);
    real("similarity_tol", c.similarity.tol);
    count("similarity_max_iter", c.similarity.max_iter);
    f.push_back({"similarity_diagonal", [&c] { return std::string(c.similarity.diagonal ? "true" : "false"); },
                 [&c](const std::string& v) { c.similarity.diagonal = parse_bool("similarity_diagonal", v); }});
    count("similarity_max_nodes", c.similarity_max_nodes);

    count("workers", c.workers);
    str("out", c.out);
    return f;
}

inline void set_config_value(RunConfig& c, const std::string& key, const std::string& value) {
    for (auto& f : config_fields(c))
        if (f.key == key) {
            f.set(value);
            return;
        }
    throw ArgumentError("unknown config key '" + key + "'");
}

/// Applies "key=value" lines; '#' starts a comment.
inline void apply_config_text(RunConfig& c, const std::string& text, const std::string& source = "<config>") {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(source, lineno, "expected key=value");
        try {
            set_config_value(c, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
        } catch (const ArgumentError& e) {
            throw ParseError(source, lineno, e.what());
        }
    }
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    RunConfig c;
    apply_config_text(c, ss.str(), path);
    return c;
}

inline std::string format_config(const RunConfig& config) {
    RunConfig copy = config;
    std::string out;
    for (auto& f : config_fields(copy)) out += f.key + "=" + f.get() + "\n";
    return out;
}

}  // namespace gti
