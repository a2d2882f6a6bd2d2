#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gti/config.hpp"
#include "gti/pipeline.hpp"

namespace {

// Flags shared by every run-directory subcommand. Values are applied on top
// of --config (or the run directory's config.resolved) in the order below.
struct RunFlags {
    std::string config;
    std::vector<std::string> sets;
    std::vector<std::pair<std::string, std::string>> direct;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
    cmd->add_option("--config", f.config, "key=value config file");
    cmd->add_option("--set", f.sets, "override any config key (key=value), repeatable");
    const std::vector<std::pair<std::string, std::string>> mirrored = {
        {"--input", "input"},         {"--model", "model"},
        {"--n", "n"},                 {"--p", "p"},
        {"--m", "m"},                 {"--k-ring", "k_ring"},
        {"--graph-seed", "graph_seed"}, {"--seed", "seed"},
        {"--gan-iters", "gan_iters"}, {"--gan-lr", "gan_lr"},
        {"--batch-size", "gan_batch_size"}, {"--augment", "augment"},
        {"--pool-factor", "pool_factor"}, {"--sumup-iters", "sumup_iters"},
        {"--sumup-lr", "sumup_lr"},   {"--epsilon", "epsilon"},
        {"--round-decimals", "round_decimals"}, {"--workers", "workers"},
        {"--out", "out"},
    };
    for (const auto& [flag, key] : mirrored) {
        cmd->add_option_function<std::string>(
            flag, [&f, key = key](const std::string& v) { f.direct.emplace_back(key, v); },
            "config key '" + key + "'");
    }
}

gti::RunConfig resolve(const RunFlags& f) {
    gti::RunConfig c;
    std::string out_override;
    for (const auto& [k, v] : f.direct)
        if (k == "out") out_override = v;
    if (!f.config.empty()) {
        c = gti::load_config(f.config);
    } else {
        const std::string dir = out_override.empty() ? c.out : out_override;
        const auto resolved = std::filesystem::path(dir) / "config.resolved";
        if (std::filesystem::exists(resolved)) c = gti::load_config(resolved.string());
    }
    for (const auto& [k, v] : f.direct) gti::set_config_value(c, k, v);
    for (const auto& s : f.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw gti::ArgumentError("--set expects key=value, got '" + s + "'");
        gti::set_config_value(c, s.substr(0, eq), s.substr(eq + 1));
    }
    return c;
}

void print_report(const gti::RunReport& r) {
    std::printf("nodes %zu edges %zu levels %zu\n", r.nodes, r.edges, r.levels);
    for (std::size_t l = 0; l < r.levels; ++l) std::printf("  level %zu: M=%zu k=%zu\n", l, r.parts[l], r.tile_sizes[l]);
    std::printf("stages %zu, final sum-up loss %.6g%s\n", r.stages.size(), r.final_loss,
                r.sumup_diverged ? " (diverged)" : "");
    for (std::size_t i = 0; i < r.stages.size(); ++i) {
        const auto& s = r.stages[i];
        std::printf("  stage %zu: cut %.6f edges %zu retained %.2f%% modularity %.4f ks %.4f mean_cc %.4f\n", i + 1,
                    s.cut_value, s.edges, s.retained_pct, s.modularity, s.ks_degree, s.mean_cc);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gti: hierarchical GAN graph reconstruction and staging"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "write a synthetic graph as an edge list");
    gti::GeneratorSpec spec;
    std::string model = "ba", output, initiator;
    gen->add_option("--model", model, "er, ba, ws or kronecker")->capture_default_str();
    gen->add_option("--n", spec.n, "node count (er, ba, ws)")->capture_default_str();
    gen->add_option("--p", spec.p, "edge probability (er) or rewiring probability (ws)")->capture_default_str();
    gen->add_option("--m", spec.m, "attachments per node (ba)")->capture_default_str();
    gen->add_option("--k-ring", spec.k_ring, "ring degree (ws)")->capture_default_str();
    gen->add_option("--power", spec.power, "Kronecker power")->capture_default_str();
    gen->add_option("--initiator", initiator, "Kronecker initiator a,b,c,d");
    gen->add_option("--seed", spec.seed, "RNG seed")->capture_default_str();
    gen->add_option("-o,--output", output, "output edge list")->required();

    RunFlags decompose_f, train_f, reconstruct_f, stages_f, metrics_f, sample_f, pipeline_f;
    auto* decompose = app.add_subcommand("decompose", "load input, run the hierarchy and partition plans");
    add_run_flags(decompose, decompose_f);
    auto* train = app.add_subcommand("train", "train the per-level GANs");
    add_run_flags(train, train_f);
    std::vector<std::size_t> train_levels;
    train->add_option("--level", train_levels, "train only these levels (repeatable)");
    auto* reconstruct = app.add_subcommand("reconstruct", "regenerate layers and fit the sum-up weights");
    add_run_flags(reconstruct, reconstruct_f);
    auto* stages = app.add_subcommand("stages", "extract reconstruction stages");
    add_run_flags(stages, stages_f);
    auto* metrics = app.add_subcommand("metrics", "distribution, F-norm and similarity reports");
    add_run_flags(metrics, metrics_f);
    auto* samplecmd = app.add_subcommand("sample", "sampling baselines against stage 1");
    add_run_flags(samplecmd, sample_f);
    auto* pipeline = app.add_subcommand("pipeline", "run every phase end to end");
    add_run_flags(pipeline, pipeline_f);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            auto m = gti::parse_graph_model(model);
            if (!m) throw gti::ArgumentError("unknown model '" + model + "'");
            spec.model = *m;
            if (!initiator.empty()) {
                gti::RunConfig tmp;
                gti::set_config_value(tmp, "initiator", initiator);
                spec.initiator = tmp.generator.initiator;
            }
            auto g = gti::generate(spec);
            gti::io::write_graph(output, g);
            std::printf("%s: %zu nodes, %zu edges\n", output.c_str(), g.n_nodes(), g.n_edges());
            return 0;
        }
        if (pipeline->parsed()) {
            gti::Run run(resolve(pipeline_f));
            print_report(run.run_all());
            std::printf("artifacts in %s\n", run.dir().string().c_str());
            return 0;
        }

        const RunFlags& f = decompose->parsed() ? decompose_f
                            : train->parsed()   ? train_f
                            : reconstruct->parsed() ? reconstruct_f
                            : stages->parsed()  ? stages_f
                            : metrics->parsed() ? metrics_f
                                                : sample_f;
        gti::Run run(resolve(f));
        run.phase("prepare", [&] { run.prepare(); });
        if (decompose->parsed()) {
            run.phase("input", [&] { run.load_input(); });
            run.phase("hierarchy", [&] { run.decompose(); });
            for (const auto& p : run.plans())
                std::printf("level %zu: M=%zu k=%zu inter-edges %zu\n", p.plan.level, p.plan.parts, p.plan.k,
                            p.inter.edges.size());
        } else if (train->parsed()) {
            run.phase("train", [&] { run.train(train_levels); });
        } else if (reconstruct->parsed()) {
            run.phase("regenerate", [&] { run.regenerate(); });
            run.phase("sumup", [&] {
                const auto& r = run.sumup();
                std::printf("final sum-up loss %.6g%s\n", r.final_loss, r.diverged ? " (diverged)" : "");
            });
        } else if (stages->parsed()) {
            run.phase("stages", [&] {
                const auto& st = run.stages();
                for (std::size_t i = 0; i < st.stages.size(); ++i)
                    std::printf("stage %zu: cut %.6f edges %zu retained %.2f%%\n", i + 1, st.cut_values[i],
                                st.edge_counts[i], st.retained_pct[i]);
            });
        } else if (metrics->parsed()) {
            run.phase("metrics", [&] { run.metrics(); });
            run.phase("summary", [&] {
                auto r = run.report();
                run.write_summary(r);
                print_report(r);
            });
        } else {
            run.phase("sampling", [&] {
                for (const auto& r : run.sampling())
                    std::printf("%-12s nodes %zu edges %zu hubs %.2f mean_cc %.4f\n", r.method.c_str(), r.nodes, r.edges,
                                r.hubs_retained, r.mean_cc);
            });
        }
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
