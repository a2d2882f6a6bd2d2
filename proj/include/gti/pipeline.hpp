#pragma once

#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "gti/config.hpp"
#include "gti/generators.hpp"
#include "gti/graph.hpp"
#include "gti/hierarchy.hpp"
#include "gti/layer_gan.hpp"
#include "gti/metrics.hpp"
#include "gti/partition.hpp"
#include "gti/reconstruct.hpp"
#include "gti/sampling.hpp"

namespace gti {

/// An error raised inside a named pipeline phase.
struct PhaseError : Error {
    PhaseError(std::string phase, const std::string& what)
        : Error(phase + ": " + what), phase_(std::move(phase)) {}
    const std::string& phase() const { return phase_; }

private:
    std::string phase_;
};

struct StageReport {
    double cut_value = 0.0;
    std::size_t edges = 0;
    double retained_pct = 0.0;
    double modularity = 0.0;
    double ks_degree = 0.0;  // vs the original degree distribution
    double mean_cc = 0.0;
    std::string degree_csv;
    std::string cc_csv;
};

struct RunReport {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t levels = 0;
    std::vector<std::size_t> parts;  // M per level
    std::vector<std::size_t> tile_sizes;  // k per level
    std::vector<StageReport> stages;
    std::vector<double> retained_pct;
    double final_loss = 0.0;
    bool sumup_diverged = false;
    SumupParams weights;
};

namespace fs = std::filesystem;

namespace io {

inline void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

inline std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string fmt(double v) { return detail::fmt_double(v); }

inline std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

/// Edge list with a "# nodes N" header so isolated trailing nodes survive.
inline void write_graph(const fs::path& path, const Graph& g) {
    std::string s = "# nodes " + std::to_string(g.n_nodes()) + " edges " + std::to_string(g.n_edges()) + "\n";
    for (const auto& e : g.edges()) s += std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
    write_text(path, s);
}

inline Graph read_graph(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string first;
    std::getline(in, first);
    std::size_t n = 0;
    if (std::sscanf(first.c_str(), "# nodes %zu", &n) != 1)
        throw ParseError(path.string(), 1, "expected '# nodes N' header");
    std::vector<Edge> edges;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        unsigned long u = 0, v = 0;
        if (std::sscanf(line.c_str(), "%lu %lu", &u, &v) != 2) throw ParseError(path.string(), lineno, "expected 'u v'");
        edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
    }
    return Graph(n, std::move(edges));
}

inline void write_distribution(const fs::path& path, const Distribution& d) {
    std::string s = "value,density\n";
    for (std::size_t i = 0; i < d.values.size(); ++i) s += fmt(d.values[i]) + "," + fmt(d.density[i]) + "\n";
    write_text(path, s);
}

}  // namespace io

/// Seed for (run seed, purpose, index), independent of scheduling.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    Rng r = make_rng(seed, stream, index);
    return r();
}

/// Runs `task(i)` for i in [0, n) on up to `workers` threads. Results are
/// written by index by the task itself; the first failing index is rethrown.
template <class Task>
void parallel_for(std::size_t n, std::size_t workers, Task task) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min(workers, n);
    if (threads <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// One run directory. Each phase reads what earlier phases produced (from
/// memory, or from disk when started standalone) and persists its outputs.
class Run {
public:
    explicit Run(RunConfig config) : config_(std::move(config)), dir_(config_.out) {
        config_.validate();
    }

    const RunConfig& config() const { return config_; }
    const fs::path& dir() const { return dir_; }
    fs::path path(const std::string& name) const { return dir_ / name; }

    void prepare() {
        fs::create_directories(dir_);
        fs::remove(path("FAILED"));
        io::write_text(path("config.resolved"), format_config(config_));
    }

    // ---- input -------------------------------------------------------------
    const Graph& input() {
        if (!graph_) {
            if (fs::exists(path("input.edges"))) graph_ = io::read_graph(path("input.edges"));
            else load_input();
        }
        return *graph_;
    }

    void load_input() {
        if (config_.input.empty()) {
            graph_ = generate(config_.generator);
        } else {
            auto file = load_edge_list(config_.input, config_.relabel);
            graph_ = std::move(file.graph);
        }
        if (graph_->n_edges() == 0) throw EmptyGraphError("input graph has no edges");
        io::write_graph(path("input.edges"), *graph_);
    }

    // ---- hierarchy + plans -------------------------------------------------
    const HierarchyDecomposition& hierarchy() {
        if (!hierarchy_) {
            if (fs::exists(path("communities.csv"))) read_hierarchy();
            else decompose();
        }
        return *hierarchy_;
    }

    void decompose() {
        const Graph& g = input();
        hierarchy_ = louvain_decompose(g, derive_seed(config_.seed, streams::louvain, 0));
        std::string h = "level,communities,modularity\n";
        for (std::size_t l = 0; l < hierarchy_->n_levels(); ++l)
            h += std::to_string(l) + "," + std::to_string(hierarchy_->levels[l].count) + "," +
                 io::fmt(hierarchy_->levels[l].modularity) + "\n";
        io::write_text(path("hierarchy.csv"), h);

        std::string c = "node,level,community\n";
        for (NodeId v = 0; v < g.n_nodes(); ++v)
            for (std::size_t l = 0; l < hierarchy_->n_levels(); ++l)
                c += std::to_string(v) + "," + std::to_string(l) + "," +
                     std::to_string(hierarchy_->levels[l].assignment[v]) + "\n";
        io::write_text(path("communities.csv"), c);
        plans_.clear();
        plans();
    }

    void read_hierarchy() {
        const Graph& g = input();
        const auto file = path("communities.csv").string();
        std::istringstream in(io::read_text(file));
        std::string line;
        std::getline(in, line);
        HierarchyDecomposition dec;
        std::vector<std::vector<char>> seen;
        std::size_t row = 1;
        while (std::getline(in, line)) {
            ++row;
            if (line.empty()) continue;
            auto cells = detail::split(line, ',');
            if (cells.size() != 3) throw ParseError(file, row, "expected node,level,community");
            const auto v = detail::parse_uint<NodeId>("node", cells[0]);
            const auto l = detail::parse_uint<std::size_t>("level", cells[1]);
            if (v >= g.n_nodes()) throw ParseError(file, row, "node out of range");
            if (l >= dec.levels.size()) {
                dec.levels.resize(l + 1);
                seen.resize(l + 1);
            }
            auto& level = dec.levels[l];
            if (level.assignment.empty()) {
                level.assignment.assign(g.n_nodes(), 0);
                seen[l].assign(g.n_nodes(), 0);
            }
            level.assignment[v] = detail::parse_uint<CommunityId>("community", cells[2]);
            seen[l][v] = 1;
        }
        if (dec.levels.empty()) throw ParseError(file, row, "no levels");
        for (std::size_t l = 0; l < dec.levels.size(); ++l) {
            auto& level = dec.levels[l];
            if (seen[l].empty() || std::find(seen[l].begin(), seen[l].end(), 0) != seen[l].end())
                throw ParseError(file, row, "level " + std::to_string(l) + " does not cover every node");
            level.count = *std::max_element(level.assignment.begin(), level.assignment.end()) + 1;
            level.modularity = modularity(g, level.assignment);
        }
        hierarchy_ = std::move(dec);
    }

    const std::vector<LayerPlanResult>& plans() {
        if (plans_.empty()) {
            const auto& dec = hierarchy();
            const Graph& g = input();
            for (std::size_t l = 0; l < dec.n_levels(); ++l) {
                plans_.push_back(build_layer_plan(g, dec, l, derive_seed(config_.seed, streams::partition, l)));
                const auto& p = plans_.back();
                std::string s = "node,part,slot\n";
                for (NodeId v = 0; v < g.n_nodes(); ++v)
                    s += std::to_string(v) + "," + std::to_string(p.plan.part_of[v]) + "," +
                         std::to_string(p.plan.slot_of[v]) + "\n";
                io::write_text(path("plan_" + std::to_string(l) + ".csv"), s);
                io::write_graph(path("inter_" + std::to_string(l) + ".edges"), Graph(g.n_nodes(), p.inter.edges));
            }
        }
        return plans_;
    }

    // ---- GAN training ------------------------------------------------------
    GanConfig level_gan_config(std::size_t level) const {
        GanConfig c = config_.gan;
        c.seed = derive_seed(config_.seed, streams::gan, level);
        return c;
    }

    std::size_t level_augment(std::size_t parts) const {
        return config_.augment < 0 ? default_augment(parts) : static_cast<std::size_t>(config_.augment);
    }

    /// Trains the listed levels (all when empty) on the worker pool.
    void train(std::vector<std::size_t> levels = {}) {
        const auto& ps = plans();
        const Graph& g = input();
        if (levels.empty())
            for (std::size_t l = 0; l < ps.size(); ++l) levels.push_back(l);
        for (auto l : levels)
            if (l >= ps.size()) throw ArgumentError("level " + std::to_string(l) + " out of range");
        models_.resize(ps.size());
        parallel_for(levels.size(), config_.resolved_workers(), [&](std::size_t i) {
            const std::size_t l = levels[i];
            const auto& plan = ps[l].plan;
            auto batch = make_subgraph_batch(g, plan);
            auto tiles = make_training_set(batch, level_augment(plan.parts), derive_seed(config_.seed, streams::augment, l));
            GanModel model = train_layer_gan(tiles, level_gan_config(l));
            model.save(path("gan_level_" + std::to_string(l) + ".ckpt").string());
            std::string s = "iteration,d_loss,g_loss\n";
            for (std::size_t it = 0; it < model.d_loss().size(); ++it)
                s += std::to_string(it) + "," + io::fmt(model.d_loss()[it]) + "," + io::fmt(model.g_loss()[it]) + "\n";
            io::write_text(path("gan_loss_" + std::to_string(l) + ".csv"), s);
            models_[l] = std::make_unique<GanModel>(std::move(model));
        });
    }

    GanModel& model(std::size_t level) {
        models_.resize(plans().size());
        if (!models_[level]) {
            const auto p = path("gan_level_" + std::to_string(level) + ".ckpt");
            if (!fs::exists(p)) throw StateError("no trained model for level " + std::to_string(level) + " (" + p.string() + ")");
            models_[level] = std::make_unique<GanModel>(GanModel::load(p.string()));
        }
        return *models_[level];
    }

    // ---- regeneration + sum-up ---------------------------------------------
    void regenerate() {
        const auto& ps = plans();
        const Graph& g = input();
        layers_.assign(ps.size(), Graph());
        for (std::size_t l = 0; l < ps.size(); ++l) model(l);  // load serially
        parallel_for(ps.size(), config_.resolved_workers(), [&](std::size_t l) {
            auto regen = regenerate_layer(*models_[l], g, ps[l].plan, config_.pool_factor,
                                          derive_seed(config_.seed, streams::regenerate, l));
            io::write_graph(path("layer_" + std::to_string(l) + ".edges"), regen.layer);
            std::string s = "part,pool_index,hamming\n";
            for (std::size_t p = 0; p < regen.pool_index.size(); ++p)
                s += std::to_string(p) + "," + std::to_string(regen.pool_index[p]) + "," + std::to_string(regen.distance[p]) + "\n";
            io::write_text(path("regen_" + std::to_string(l) + ".csv"), s);
            layers_[l] = std::move(regen.layer);
        });
    }

    const std::vector<Graph>& layers() {
        if (layers_.empty()) {
            for (std::size_t l = 0; l < plans().size(); ++l) {
                const auto p = path("layer_" + std::to_string(l) + ".edges");
                if (!fs::exists(p)) {
                    layers_.clear();
                    regenerate();
                    break;
                }
                layers_.push_back(io::read_graph(p));
            }
        }
        return layers_;
    }

    /// Union of inter-part edges over all levels.
    Graph inter_union() {
        std::vector<Edge> all;
        for (const auto& p : plans()) all.insert(all.end(), p.inter.edges.begin(), p.inter.edges.end());
        return Graph(input().n_nodes(), std::move(all));
    }

    const WeightedReconstruction& sumup() {
        if (!reconstruction_) {
            SumupProblem problem(layers(), inter_union(), input());
            reconstruction_ = fit_sumup(problem, config_.sumup);
            const auto& r = *reconstruction_;
            std::string w = "term,weight\n";
            for (std::size_t l = 0; l < r.params.layer_weights.size(); ++l)
                w += "layer_" + std::to_string(l) + "," + io::fmt(r.params.layer_weights[l]) + "\n";
            w += "inter," + io::fmt(r.params.inter_weight) + "\n";
            w += "bias," + io::fmt(r.params.bias) + "\n";
            io::write_text(path("weights.csv"), w);
            std::string c = "iteration,loss\n";
            for (std::size_t i = 0; i < r.loss_curve.size(); ++i) c += std::to_string(i) + "," + io::fmt(r.loss_curve[i]) + "\n";
            io::write_text(path("sumup_loss.csv"), c);
            std::string s = "u,v,weight\n";
            for (std::size_t i = 0; i < r.support.size(); ++i)
                s += std::to_string(r.support[i].u) + "," + std::to_string(r.support[i].v) + "," + io::fmt(r.support_values[i]) + "\n";
            io::write_text(path("reconstruction.csv"), s);
            io::write_text(path("sumup_status.txt"), std::string(r.diverged ? "diverged\n" : "ok\n") +
                                                         "final_loss " + io::fmt(r.final_loss) + "\n");
        }
        return *reconstruction_;
    }

    // ---- stages ------------------------------------------------------------
    const StageSet& stages() {
        if (!stages_) {
            std::vector<Edge> support;
            std::vector<double> values;
            if (reconstruction_ || !fs::exists(path("reconstruction.csv"))) {
                const auto& r = sumup();
                support = r.support;
                values = r.support_values;
            } else {
                std::istringstream in(io::read_text(path("reconstruction.csv")));
                std::string line;
                std::getline(in, line);
                while (std::getline(in, line)) {
                    if (line.empty()) continue;
                    auto cells = detail::split(line, ',');
                    if (cells.size() != 3) throw ParseError(path("reconstruction.csv").string(), 0, "malformed row");
                    support.push_back({detail::parse_uint<NodeId>("u", cells[0]), detail::parse_uint<NodeId>("v", cells[1])});
                    values.push_back(detail::parse_double("weight", cells[2]));
                }
            }
            stages_ = extract_stages(input().n_nodes(), support, values, config_.round_decimals);
            for (const auto& entry : fs::directory_iterator(dir_)) {
                const auto name = entry.path().filename().string();
                if (name.rfind("stage_", 0) == 0 || name.rfind("degree_dist_stage_", 0) == 0 ||
                    name.rfind("cc_dist_stage_", 0) == 0)
                    fs::remove(entry.path());
            }
            for (std::size_t i = 0; i < stages_->stages.size(); ++i)
                io::write_graph(path("stage_" + std::to_string(i + 1) + ".edges"), stages_->stages[i]);
            stage_reports_.clear();
        }
        return *stages_;
    }

    // ---- metrics -----------------------------------------------------------
    const std::vector<StageReport>& metrics() {
        if (!stage_reports_.empty()) return stage_reports_;
        const Graph& g = input();
        const auto& st = stages();
        const auto deg0 = degree_distribution(g);
        io::write_distribution(path("degree_dist_original.csv"), deg0);
        io::write_distribution(path("cc_dist_original.csv"), clustering_distribution(g));
        const auto pct = retained_percentages(st);
        for (std::size_t i = 0; i < st.stages.size(); ++i) {
            const Graph& s = st.stages[i];
            StageReport r;
            r.cut_value = st.cut_values[i];
            r.edges = s.n_edges();
            r.retained_pct = pct[i];
            r.modularity = louvain_decompose(s, derive_seed(config_.seed, streams::stage_modularity, i)).levels.back().modularity;
            const auto dd = degree_distribution(s);
            const auto cc = clustering_distribution(s);
            r.ks_degree = ks_distance(dd, deg0);
            r.mean_cc = cc.mean;
            r.degree_csv = "degree_dist_stage_" + std::to_string(i + 1) + ".csv";
            r.cc_csv = "cc_dist_stage_" + std::to_string(i + 1) + ".csv";
            io::write_distribution(path(r.degree_csv), dd);
            io::write_distribution(path(r.cc_csv), cc);
            stage_reports_.push_back(r);
        }
        write_stages_json();
        write_comparison_reports();
        return stage_reports_;
    }

    /// Graphs from the input's own model (or ER at equal density for files).
    std::vector<Graph> ensemble(std::size_t count) {
        const Graph& g = input();
        GeneratorSpec spec = config_.generator;
        if (!config_.input.empty()) {
            spec = GeneratorSpec{};
            spec.model = GraphModel::ER;
            spec.n = g.n_nodes();
            const double pairs = 0.5 * static_cast<double>(g.n_nodes()) * static_cast<double>(g.n_nodes() - 1);
            spec.p = static_cast<double>(g.n_edges()) / pairs;
        }
        std::vector<Graph> out;
        for (std::size_t i = 0; i < count; ++i) {
            spec.seed = derive_seed(config_.seed, streams::ensemble, i);
            Graph e = generate(spec);
            if (e.n_nodes() != g.n_nodes()) break;  // Kronecker sizes need not match
            out.push_back(std::move(e));
        }
        return out;
    }

    // ---- sampling ----------------------------------------------------------
    std::vector<SamplingRow> sampling() {
        const Graph& g = input();
        const auto& st = stages();
        std::vector<SamplerSpec> specs;
        for (auto m : config_.samplers) {
            SamplerSpec s;
            s.method = m;
            s.restart_p = config_.restart_p;
            s.jump_p = config_.jump_p;
            s.burn_p = config_.burn_p;
            s.seed = derive_seed(config_.seed, streams::sampling, static_cast<std::uint64_t>(m));
            specs.push_back(s);
        }
        auto rows = sampling_report(g, st.stages.front(), specs);
        std::size_t target = rows.front().nodes;
        for (auto s : specs) {
            s.target_nodes = target;
            auto smp = sample(g, s);
            std::vector<Edge> edges;
            for (const auto& e : smp.graph.edges()) edges.push_back({smp.nodes[e.u], smp.nodes[e.v]});
            io::write_graph(path("sample_" + to_string(s.method) + ".edges"), Graph(g.n_nodes(), edges));
        }
        std::string csv = "method,nodes,edges,hubs_retained,mean_cc\n";
        for (const auto& r : rows)
            csv += r.method + "," + std::to_string(r.nodes) + "," + std::to_string(r.edges) + "," + io::fmt(r.hubs_retained) +
                   "," + io::fmt(r.mean_cc) + "\n";
        io::write_text(path("sampling_report.csv"), csv);
        return rows;
    }

    // ---- summary -----------------------------------------------------------
    RunReport report() {
        const Graph& g = input();
        RunReport r;
        r.nodes = g.n_nodes();
        r.edges = g.n_edges();
        r.levels = plans().size();
        for (const auto& p : plans()) {
            r.parts.push_back(p.plan.parts);
            r.tile_sizes.push_back(p.plan.k);
        }
        r.stages = metrics();
        r.retained_pct = retained_percentages(stages());
        if (reconstruction_) {
            r.final_loss = reconstruction_->final_loss;
            r.sumup_diverged = reconstruction_->diverged;
            r.weights = reconstruction_->params;
        } else if (fs::exists(path("sumup_status.txt"))) {
            std::istringstream in(io::read_text(path("sumup_status.txt")));
            std::string status, key, loss;
            in >> status >> key >> loss;
            if (key != "final_loss") throw ParseError(path("sumup_status.txt").string(), 2, "expected final_loss");
            r.sumup_diverged = status == "diverged";
            r.final_loss = detail::parse_double("final_loss", loss);
        }
        return r;
    }

    void write_summary(const RunReport& r) {
        nlohmann::ordered_json j;
        j["graph"] = config_.input.empty() ? std::string(to_string(config_.generator.model)) : fs::path(config_.input).filename().string();
        j["nodes"] = r.nodes;
        j["edges"] = r.edges;
        j["levels"] = r.levels;
        j["parts"] = r.parts;
        j["tile_sizes"] = r.tile_sizes;
        j["stages"] = r.stages.size();
        std::vector<std::string> pct;
        for (double p : r.retained_pct) pct.push_back(io::fixed(p, 2));
        j["retained_pct"] = pct;
        j["final_sumup_loss"] = io::fmt(r.final_loss);
        j["sumup_diverged"] = r.sumup_diverged;
        std::vector<double> mod;
        for (const auto& s : r.stages) mod.push_back(s.modularity);
        j["stage_modularity"] = mod;
        io::write_text(path("summary.json"), j.dump(2) + "\n");
    }

    /// Runs `fn`; on failure writes FAILED naming the phase and rethrows as
    /// PhaseError. Earlier artifacts are left in place.
    template <class Fn>
    void phase(const char* name, Fn&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            std::error_code ec;
            fs::create_directories(dir_, ec);
            std::ofstream(path("FAILED")) << name << ": " << e.what() << "\n";
            throw PhaseError(name, e.what());
        }
    }

    /// Full pipeline.
    RunReport run_all() {
        phase("prepare", [&] { prepare(); });
        phase("input", [&] { load_input(); });
        phase("hierarchy", [&] { decompose(); });
        phase("train", [&] { train(); });
        phase("regenerate", [&] { regenerate(); });
        phase("sumup", [&] { sumup(); });
        phase("stages", [&] { stages(); });
        phase("metrics", [&] { metrics(); });
        phase("sampling", [&] { sampling(); });
        RunReport report;
        phase("summary", [&] {
            report = this->report();
            write_summary(report);
        });
        return report;
    }

private:
    void write_stages_json() {
        nlohmann::ordered_json j = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < stage_reports_.size(); ++i) {
            const auto& r = stage_reports_[i];
            j.push_back({{"stage", i + 1},
                         {"cut_value", r.cut_value},
                         {"edges", r.edges},
                         {"retained_pct", io::fixed(r.retained_pct, 2)},
                         {"modularity", r.modularity},
                         {"ks_degree", r.ks_degree},
                         {"mean_cc", r.mean_cc},
                         {"degree_csv", r.degree_csv},
                         {"cc_csv", r.cc_csv}});
        }
        io::write_text(path("stages.json"), j.dump(2) + "\n");
    }

    void write_comparison_reports() {
        const Graph& g = input();
        const auto& st = stages();
        const std::string name = config_.input.empty() ? std::string(to_string(config_.generator.model))
                                                       : fs::path(config_.input).filename().string();

        auto ens = ensemble(config_.ensemble_size);
        double lo = 0, hi = 0, mean = 0;
        for (std::size_t i = 0; i < ens.size(); ++i) {
            const double d = frobenius_distance(ens[i], g);
            lo = i == 0 ? d : std::min(lo, d);
            hi = i == 0 ? d : std::max(hi, d);
            mean += d / static_cast<double>(ens.size());
        }
        std::string f = "graph,stage,fnorm,ensemble_min,ensemble_mean,ensemble_max\n";
        for (std::size_t i = 0; i < st.stages.size(); ++i)
            f += name + "," + std::to_string(i + 1) + "," + io::fmt(frobenius_distance(st.stages[i], g)) + "," +
                 io::fmt(lo) + "," + io::fmt(mean) + "," + io::fmt(hi) + "\n";
        io::write_text(path("fnorm_report.csv"), f);

        std::string s = "graph,stage,score,ensemble_min,ensemble_mean,ensemble_max\n";
        if (g.n_nodes() <= config_.similarity_max_nodes) {
            const std::size_t pick = st.stages.size() >= 2 ? st.stages.size() - 2 : 0;  // penultimate
            const double score = node_similarity(st.stages[pick], g, config_.similarity).score;
            ens.resize(std::min(ens.size(), config_.similarity_ensemble_size));
            double slo = 0, shi = 0, smean = 0;
            for (std::size_t i = 0; i < ens.size(); ++i) {
                const double d = node_similarity(ens[i], g, config_.similarity).score;
                slo = i == 0 ? d : std::min(slo, d);
                shi = i == 0 ? d : std::max(shi, d);
                smean += d / static_cast<double>(ens.size());
            }
            s += name + "," + std::to_string(pick + 1) + "," + io::fmt(score) + "," + io::fmt(slo) + "," + io::fmt(smean) +
                 "," + io::fmt(shi) + "\n";
        }
        io::write_text(path("similarity_report.csv"), s);
    }

    RunConfig config_;
    fs::path dir_;
    std::optional<Graph> graph_;
    std::optional<HierarchyDecomposition> hierarchy_;
    std::vector<LayerPlanResult> plans_;
    std::vector<std::unique_ptr<GanModel>> models_;
    std::vector<Graph> layers_;
    std::optional<WeightedReconstruction> reconstruction_;
    std::optional<StageSet> stages_;
    std::vector<StageReport> stage_reports_;
};

inline RunReport run_pipeline(const RunConfig& config) {
    Run run(config);
    return run.run_all();
}

}  // namespace gti
