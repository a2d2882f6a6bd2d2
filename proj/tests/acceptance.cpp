// Acceptance suite: one PASS/FAIL line per criterion.
//
// Exit status is 0 once every criterion has been evaluated, whatever the
// outcome, so the suite can sit in ctest as a report. Pass --strict to exit
// with the number of failed criteria instead.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>

#include "gti/nn/layers.hpp"
#include "gti/pipeline.hpp"

using namespace gti;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string format(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Graph random_graph(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    std::vector<Edge> e;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (coin(rng)) e.push_back({u, v});
    return Graph(n, e);
}

Graph permuted(const Graph& g, std::uint64_t seed) {
    std::vector<NodeId> p(g.n_nodes());
    for (NodeId i = 0; i < p.size(); ++i) p[i] = i;
    std::mt19937_64 rng(seed);
    std::shuffle(p.begin(), p.end(), rng);
    std::vector<Edge> e;
    for (const auto& x : g.edges()) e.push_back({p[x.u], p[x.v]});
    return Graph(g.n_nodes(), e);
}

template <class A, class B>
double rel_error(const A& a, const B& b) {
    double diff = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff += (a[i] - b[i]) * (a[i] - b[i]);
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), 1e-12});
}

// Empirical degree CDF over 0..max, computed from the edge list.
double ks_degrees(const Graph& a, const Graph& b) {
    auto counts = [](const Graph& g) {
        std::vector<std::size_t> deg(g.n_nodes(), 0);
        for (const auto& e : g.edges()) ++deg[e.u], ++deg[e.v];
        return deg;
    };
    auto da = counts(a), db = counts(b);
    std::size_t top = 0;
    for (auto d : da) top = std::max(top, d);
    for (auto d : db) top = std::max(top, d);
    std::vector<double> ha(top + 1, 0), hb(top + 1, 0);
    for (auto d : da) ha[d] += 1.0 / static_cast<double>(da.size());
    for (auto d : db) hb[d] += 1.0 / static_cast<double>(db.size());
    double fa = 0, fb = 0, best = 0;
    for (std::size_t d = 0; d <= top; ++d) {
        fa += ha[d];
        fb += hb[d];
        best = std::max(best, std::abs(fa - fb));
    }
    return best;
}

std::size_t triangle_nodes(const Graph& g) {
    std::size_t nodes = 0;
    for (NodeId v = 0; v < g.n_nodes(); ++v) {
        auto nb = g.neighbors(v);
        bool found = false;
        for (std::size_t i = 0; i < nb.size() && !found; ++i)
            for (std::size_t j = i + 1; j < nb.size() && !found; ++j) found = g.has_edge(nb[i], nb[j]);
        nodes += found;
    }
    return nodes;
}

std::vector<Graph> read_stages(const fs::path& dir) {
    std::vector<Graph> out;
    for (std::size_t i = 1; fs::exists(dir / ("stage_" + std::to_string(i) + ".edges")); ++i)
        out.push_back(io::read_graph(dir / ("stage_" + std::to_string(i) + ".edges")));
    return out;
}

fs::path run_root() { return fs::current_path() / "acceptance_runs"; }

RunConfig default_run(const std::string& name, GraphModel model) {
    RunConfig c;
    c.generator.model = model;
    c.out = (run_root() / name).string();
    fs::remove_all(c.out);
    return c;
}

// Every pipeline run performed by this suite, for the stage-structure check.
std::vector<fs::path> g_runs;

double run_and_time(const RunConfig& c) {
    const auto t0 = std::chrono::steady_clock::now();
    run_pipeline(c);
    g_runs.push_back(c.out);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Outcome generator_fidelity() {
    std::string bad;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        GeneratorSpec ba;
        ba.seed = seed;
        if (auto e = generate(ba).n_edges(); e != 996) bad += format(" BA seed %llu: %zu edges;", (unsigned long long)seed, e);
        for (double p : {0.0, 0.1, 0.5, 1.0}) {
            GeneratorSpec ws;
            ws.model = GraphModel::WS;
            ws.p = p;
            ws.seed = seed;
            if (auto e = generate(ws).n_edges(); e != 500) bad += format(" WS p=%g: %zu edges;", p, e);
        }
    }
    GeneratorSpec er;
    er.model = GraphModel::ER;
    er.p = 0.2012;
    const double pairs = 500.0 * 499.0 / 2.0, sigma = std::sqrt(pairs * er.p * (1 - er.p));
    double total = 0;
    std::size_t within = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        er.seed = seed;
        const double e = static_cast<double>(generate(er).n_edges());
        total += e;
        within += std::abs(e - 25100.0) <= 3 * sigma;
    }
    const double mean = total / 200.0;
    const bool er_ok = std::abs(mean - 25100.0) <= 3 * sigma / std::sqrt(200.0);
    if (!er_ok) bad += format(" ER mean %.1f outside 3 standard errors;", mean);
    return {bad.empty(), format("BA 996 and WS 500 edges on 5 seeds; ER mean %.1f over 200 seeds (sigma %.1f), %zu/200 within 3 sigma%s",
                                mean, sigma, within, bad.c_str())};
}

Outcome gradient_suite() {
    using namespace gti::nn;
    std::mt19937_64 rng(11);
    auto rnd = [&](Shape4 s, double scale = 1.0) {
        Tensor t(s);
        std::normal_distribution<double> d(0.0, scale);
        for (auto& v : t.values()) v = d(rng);
        return t;
    };
    double worst_layer = 0.0;
    std::string worst_name;
    auto check = [&](Layer& layer, Tensor x, bool training) {
        const double h = 1e-5;
        Tensor r = rnd(layer.forward(x, training).shape());
        for (auto* p : layer.params()) p->zero_grad();
        layer.forward(x, training);
        Tensor dx = layer.backward(r);
        auto f = [&] { return dot(layer.forward(x, training), r); };
        auto note = [&](double e, const std::string& what) {
            if (e > worst_layer) {
                worst_layer = e;
                worst_name = what;
            }
        };
        std::vector<double> num(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double s = x.data()[i];
            x.data()[i] = s + h;
            const double up = f();
            x.data()[i] = s - h;
            const double down = f();
            x.data()[i] = s;
            num[i] = (up - down) / (2 * h);
        }
        note(rel_error(dx.values(), num), std::string(to_string(layer.kind())) + " input");
        for (auto* p : layer.params()) {
            if (!p->trainable) continue;
            std::vector<double> pn(p->value.size());
            for (std::size_t i = 0; i < p->value.size(); ++i) {
                const double s = p->value[i];
                p->value[i] = s + h;
                const double up = f();
                p->value[i] = s - h;
                const double down = f();
                p->value[i] = s;
                pn[i] = (up - down) / (2 * h);
            }
            note(rel_error(p->grad, pn), p->name);
        }
    };
    for (std::size_t trial = 0; trial < 3; ++trial) {
        Rng init(trial + 1);
        const std::size_t c1 = 1 + trial, c2 = 2 + trial, hw = 4 + 2 * trial;
        Linear fc(c1 * 4, 3 + trial);
        fc.init(init);
        check(fc, rnd({2, c1, 2, 2}), true);
        Conv2d conv(c1, c2);
        conv.init(init);
        check(conv, rnd({2, c1, hw, hw}), true);
        Deconv2d deconv(c2, c1);
        deconv.init(init);
        check(deconv, rnd({2, c2, 2 + trial, 2 + trial}), true);
        BatchNorm bn(c2);
        bn.init(init);
        check(bn, rnd({4, c2, 2, 3}, 2.0), true);
        check(bn, rnd({4, c2, 2, 3}, 2.0), false);
        LeakyReLU lr;
        Sigmoid sig;
        Tanh th;
        Reshape rs(c1, 2, 2);
        check(lr, rnd({2, c2, 3, 3}), true);
        check(sig, rnd({2, c2, 3, 3}), true);
        check(th, rnd({2, c2, 3, 3}), true);
        check(rs, rnd({2, c1 * 4, 1, 1}), true);
        Tensor z = rnd({5, 1, 1, 1}, 3.0);
        for (double label : {0.0, 1.0}) {
            auto res = bce_with_logits(z, label);
            std::vector<double> num(z.size());
            for (std::size_t i = 0; i < z.size(); ++i) {
                Tensor up = z, down = z;
                up.data()[i] += 1e-5;
                down.data()[i] -= 1e-5;
                num[i] = (bce_with_logits(up, label).loss - bce_with_logits(down, label).loss) / 2e-5;
            }
            const double e = rel_error(res.grad.values(), num);
            if (e > worst_layer) {
                worst_layer = e;
                worst_name = "bce_with_logits";
            }
        }
    }

    double worst_sumup = 0.0;
    std::uniform_real_distribution<double> u(0.2, 1.5);
    const double eps = 1e-6, h = 1e-6;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t n = 6 + seed % 7, levels = 1 + seed % 4;
        auto g = random_graph(n, 0.35, seed + 1);
        std::vector<Graph> layers;
        for (std::size_t l = 0; l < levels; ++l) layers.push_back(random_graph(n, 0.3, 100 * seed + l));
        SumupProblem prob(layers, random_graph(n, 0.2, seed + 5000), g);
        std::vector<double> theta;
        for (std::size_t j = 0; j < levels + 1; ++j) theta.push_back(u(rng));
        theta.push_back(0.05);
        auto grad = prob.objective(theta, eps).second;
        std::vector<double> num(theta.size());
        for (std::size_t j = 0; j < theta.size(); ++j) {
            auto up = theta, down = theta;
            up[j] += h;
            down[j] -= h;
            num[j] = (sumup_loss(prob.compose(SumupParams::from_flat(up)), g, eps) -
                      sumup_loss(prob.compose(SumupParams::from_flat(down)), g, eps)) /
                     (2 * h);
        }
        worst_sumup = std::max(worst_sumup, rel_error(grad, num));
    }
    return {worst_layer < 1e-4 && worst_sumup < 1e-5,
            format("worst layer rel-error %.2e (%s, limit 1e-4); worst sum-up rel-error %.2e (limit 1e-5)", worst_layer,
                   worst_name.c_str(), worst_sumup)};
}

Outcome gan_memorization() {
    const std::size_t k = 16;
    Tile star(k, k);
    for (std::size_t j = 1; j < k; ++j) star.set(0, j, 1);
    GanConfig cfg;  // default architecture, 1000 iterations, lr 2e-4
    auto model = train_layer_gan({star}, cfg);
    Rng rng = make_rng(cfg.seed, streams::regenerate, 99);
    auto out = model.sample(16, rng);
    std::size_t close = 0, worst = 0;
    for (std::size_t b = 0; b < 16; ++b) {
        const double* p = out.data() + b * k * k;
        std::size_t d = 0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                const bool on = i != j && (p[i * k + j] > 0.5 || p[j * k + i] > 0.5);
                d += on != static_cast<bool>(star(i, j));
            }
        worst = std::max(worst, d);
        close += static_cast<double>(d) <= 0.02 * k * k;
    }
    return {close >= 9, format("%zu/16 draws within %.2f of the tile; worst Hamming %zu", close, 0.02 * k * k, worst)};
}

Outcome sumup_recovery() {
    GeneratorSpec spec;
    const Graph g = generate(spec);
    auto dec = louvain_decompose(g, 1);
    auto plan = build_layer_plan(g, dec, 0, 1);
    std::vector<Edge> intra;
    for (const auto& e : g.edges())
        if (plan.plan.part_of[e.u] == plan.plan.part_of[e.v]) intra.push_back(e);
    SumupProblem prob({Graph(g.n_nodes(), intra)}, Graph(g.n_nodes(), plan.inter.edges), g);
    auto fit = fit_sumup(prob, SumupConfig{});
    auto stages = extract_stages(fit);
    const bool exact = stages.stages.back() == g;
    return {fit.final_loss < 1e-3 && exact,
            format("final loss %.4g (limit 1e-3); %zu intra + %zu inter edges; final stage %s E(G) (%zu stages)",
                   fit.final_loss, intra.size(), plan.inter.edges.size(), exact ? "equals" : "differs from",
                   stages.stages.size())};
}

Outcome stage_structure() {
    std::string bad;
    for (const auto& dir : g_runs) {
        const auto stages = read_stages(dir);
        // Distinct positive weights, rounded to 6 decimals by printf.
        std::set<std::string> distinct;
        std::istringstream in(io::read_text(dir / "reconstruction.csv"));
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const double w = std::stod(line.substr(line.rfind(',') + 1));
            if (std::round(w * 1e6) > 0) distinct.insert(format("%.6f", w));
        }
        const auto name = dir.filename().string();
        if (stages.size() != distinct.size())
            bad += format(" %s: %zu stages vs %zu distinct weights;", name.c_str(), stages.size(), distinct.size());
        for (std::size_t i = 1; i < stages.size(); ++i) {
            for (const auto& e : stages[i - 1].edges())
                if (!stages[i].has_edge(e.u, e.v)) {
                    bad += format(" %s: stage %zu not inside stage %zu;", name.c_str(), i, i + 1);
                    break;
                }
            if (stages[i - 1].n_edges() >= stages[i].n_edges())
                bad += format(" %s: retained share not increasing at stage %zu;", name.c_str(), i + 1);
        }
        const auto summary = nlohmann::json::parse(io::read_text(dir / "summary.json"));
        if (summary["retained_pct"].back().get<std::string>() != "100.00")
            bad += format(" %s: last stage not at 100%%;", name.c_str());
    }
    return {bad.empty() && !g_runs.empty(), format("checked %zu pipeline runs%s", g_runs.size(), bad.c_str())};
}

Outcome ws_zero_clustering() {
    auto cfg = default_run("ws", GraphModel::WS);
    const double secs = run_and_time(cfg);
    const auto stages = read_stages(cfg.out);
    std::size_t offending = 0, worst_nodes = 0;
    for (const auto& s : stages) {
        const std::size_t t = triangle_nodes(s);
        offending += t > 0;
        worst_nodes = std::max(worst_nodes, t);
    }
    const auto original = io::read_graph(fs::path(cfg.out) / "input.edges");
    return {offending == 0 && secs < 600,
            format("%zu stages, %zu with a nonzero clustering coefficient (at most %zu nodes); original %zu; %.0f s (limit 600)",
                   stages.size(), offending, worst_nodes, triangle_nodes(original), secs)};
}

Outcome degree_retention() {
    auto cfg = default_run("ba", GraphModel::BA);
    const double secs = run_and_time(cfg);
    const auto stages = read_stages(cfg.out);
    const auto original = io::read_graph(fs::path(cfg.out) / "input.edges");
    std::vector<double> ks;
    for (const auto& s : stages) ks.push_back(ks_degrees(s, original));
    std::size_t down = 0;
    for (std::size_t i = 1; i < ks.size(); ++i) down += ks[i] <= ks[i - 1];
    const double share = ks.size() > 1 ? static_cast<double>(down) / static_cast<double>(ks.size() - 1) : 1.0;
    const double best = *std::min_element(ks.begin(), ks.end());
    const auto final_edges = stages.back().n_edges();
    return {ks.back() <= 0.05 && share >= 0.7 && secs < 900,
            format("final-stage KS %.3f (limit 0.05; %zu edges vs %zu original; best stage KS %.3f); "
                   "non-increasing in %zu/%zu adjacent pairs (%.0f%%, need 70%%); %.0f s (limit 900)",
                   ks.back(), final_edges, original.n_edges(), best, down, ks.size() - 1, 100 * share, secs)};
}

Outcome metrics_oracles() {
    std::string bad;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 2.0);
    double worst = 0.0;
    for (std::uint64_t t = 0; t < 100; ++t) {
        const std::size_t n = 5 + t % 20;
        auto a = random_graph(n, 0.3, 2 * t), b = random_graph(n, 0.3, 2 * t + 1);
        WeightedAdjacency wa(n), wb(n);
        double s = 0, ws = 0;
        for (NodeId i = 0; i < n; ++i)
            for (NodeId j = 0; j < n; ++j) {
                if (i < j) {
                    wa.set(i, j, u(rng));
                    wb.set(i, j, u(rng));
                }
                const double d = (a.has_edge(i, j) ? 1.0 : 0.0) - (b.has_edge(i, j) ? 1.0 : 0.0);
                s += d * d;
            }
        for (NodeId i = 0; i < n; ++i)
            for (NodeId j = 0; j < n; ++j) ws += (wa(i, j) - wb(i, j)) * (wa(i, j) - wb(i, j));
        worst = std::max({worst, std::abs(frobenius_distance(a, b) - std::sqrt(s)),
                          std::abs(frobenius_distance(wa, wb) - std::sqrt(ws))});
    }
    if (worst > 1e-9) bad += format(" Frobenius off by %.2e;", worst);

    std::size_t range_bad = 0, perm_bad = 0;
    for (std::uint64_t t = 0; t < 30; ++t) {
        auto a = random_graph(12, 0.2 + 0.02 * t, t), b = random_graph(12, 0.5, t + 77);
        for (double lambda : {0.0, 0.3, 1.0}) {
            SimilarityConfig cfg;
            cfg.lambda = lambda;
            const double s = node_similarity(a, b, cfg).score;
            range_bad += !(s >= 0.0 && s <= 1.0 + 1e-12);
            const double sp = node_similarity(permuted(a, t + 9), permuted(b, t + 9), cfg).score;
            perm_bad += std::abs(s - sp) > 1e-9;
        }
    }
    if (range_bad) bad += format(" %zu scores outside [0,1];", range_bad);
    if (perm_bad) bad += format(" %zu permutation mismatches;", perm_bad);

    std::size_t deletions = 0, raised = 0;
    for (const char* name : {"fixture10_a.edges", "fixture10_b.edges", "fixture10_c.edges"}) {
        const Graph g = load_edge_list(std::string(GTI_TEST_DATA) + "/" + name, false).graph;
        const double self = node_similarity(g, g).score;
        for (std::size_t i = 0; i < g.n_edges(); ++i) {
            auto e = g.edges();
            e.erase(e.begin() + static_cast<std::ptrdiff_t>(i));
            raised += node_similarity(Graph(g.n_nodes(), e), g).score > self + 1e-12;
            ++deletions;
        }
    }
    if (raised) bad += format(" %zu/%zu deletions raised the score;", raised, deletions);
    return {bad.empty(), format("Frobenius max deviation %.1e over 100 pairs; 90 similarity scores in range and "
                                "permutation-invariant; %zu single-edge deletions on 3 fixtures%s",
                                worst, deletions, bad.c_str())};
}

Outcome sampling_baselines() {
    std::string bad;
    GeneratorSpec spec;
    const Graph g = generate(spec);
    for (auto m : {SamplerMethod::RandomWalk, SamplerMethod::ForestFire, SamplerMethod::RandomJump})
        for (std::size_t target : {1u, 25u, 100u, 400u}) {
            SamplerSpec s;
            s.method = m;
            s.target_nodes = target;
            s.seed = target + 5;
            auto a = sample(g, s), b = sample(g, s);
            if (a.nodes.size() != target) bad += format(" %s returned %zu/%zu;", std::string(to_string(m)).c_str(), a.nodes.size(), target);
            if (a.nodes != b.nodes) bad += format(" %s not deterministic;", std::string(to_string(m)).c_str());
        }
    Graph star(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    std::size_t walks = 0, missing = 0;
    for (NodeId start = 0; start < 5; ++start)
        for (std::size_t target = 2; target <= 5; ++target)
            for (std::uint64_t seed = 0; seed < 25; ++seed) {
                SamplerSpec s;
                s.method = SamplerMethod::RandomWalk;
                s.target_nodes = target;
                s.start = static_cast<long>(start);
                s.seed = seed;
                auto smp = sample(star, s);
                missing += std::find(smp.nodes.begin(), smp.nodes.end(), 0u) == smp.nodes.end();
                ++walks;
            }
    if (missing) bad += format(" %zu/%zu star walks missed the hub;", missing, walks);

    // Reports through the pipeline with a short GAN schedule.
    const char* env = std::getenv("GTI_FACEBOOK_EDGES");
    const std::string fb = env ? env : std::string(GTI_TEST_DATA) + "/facebook_format.txt";
    std::string rows;
    for (const std::string input : {std::string(), fb}) {
        auto cfg = default_run(input.empty() ? "sampling_ba" : "sampling_file", GraphModel::BA);
        cfg.input = input;
        cfg.gan.iters = 20;
        cfg.gan.channels_high = 16;
        cfg.gan.channels_low = 8;
        cfg.ensemble_size = 5;
        cfg.similarity_ensemble_size = 2;
        run_and_time(cfg);
        std::istringstream in(io::read_text(fs::path(cfg.out) / "sampling_report.csv"));
        std::string line;
        std::size_t n = 0;
        std::getline(in, line);
        while (std::getline(in, line)) n += !line.empty();
        if (n != 4) bad += format(" report for %s has %zu rows;", input.empty() ? "BA" : fb.c_str(), n);
        rows += format(" %s %zu rows;", input.empty() ? "BA" : fs::path(fb).filename().c_str(), n);
    }
    return {bad.empty(), format("exact sizes and determinism for 3 samplers; hub in %zu/%zu star walks; reports:%s%s",
                                walks - missing, walks, rows.c_str(), bad.c_str())};
}

Outcome determinism() {
    auto a = default_run("determinism_a", GraphModel::BA), b = default_run("determinism_b", GraphModel::BA);
    for (auto* c : {&a, &b}) c->gan.iters = 100;
    a.workers = 1;
    b.workers = 4;
    run_and_time(a);
    run_and_time(b);
    std::vector<std::string> files{"summary.json", "weights.csv"};
    for (const auto& e : fs::directory_iterator(a.out))
        if (e.path().filename().string().rfind("stage_", 0) == 0) files.push_back(e.path().filename().string());
    std::size_t differ = 0;
    std::string which;
    for (const auto& f : files) {
        const auto pb = fs::path(b.out) / f;
        if (!fs::exists(pb) || io::read_text(fs::path(a.out) / f) != io::read_text(pb)) {
            ++differ;
            which += " " + f;
        }
    }
    const std::size_t count_b = read_stages(b.out).size();
    const bool same_count = count_b == files.size() - 2;
    return {differ == 0 && same_count,
            format("%zu files compared (summary, weights, %zu stages), %zu differ%s; 1 vs 4 workers, 100 GAN iterations",
                   files.size(), files.size() - 2, differ, which.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
    bool strict = false;
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--strict") strict = true;
        else only.insert(std::atoi(a.c_str()));
    }
    fs::create_directories(run_root());

    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> fn;
    };
    // Stage structure runs last so it sees every pipeline run.
    const std::vector<Criterion> order{
        {1, "generator fidelity", generator_fidelity},
        {2, "gradient suite", gradient_suite},
        {3, "GAN memorization", gan_memorization},
        {4, "sum-up recovery", sumup_recovery},
        {8, "metrics oracles", metrics_oracles},
        {9, "sampling baselines", sampling_baselines},
        {6, "WS zero clustering", ws_zero_clustering},
        {7, "degree-distribution retention", degree_retention},
        {10, "determinism", determinism},
        {5, "stage structure", stage_structure},
    };
    std::map<int, std::string> lines;
    int failed = 0;
    for (const auto& c : order) {
        if (!only.empty() && !only.count(c.id)) continue;
        std::fprintf(stderr, "running %d %s...\n", c.id, c.name);
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        lines[c.id] = format("%s  %2d %-30s %7.1f s  ", o.pass ? "PASS" : "FAIL", c.id, c.name, secs) + o.detail;
        std::fprintf(stderr, "%s\n", lines[c.id].c_str());
    }
    std::FILE* report = std::fopen("acceptance_report.txt", "w");
    for (const auto& [id, line] : lines) {
        std::printf("%s\n", line.c_str());
        if (report) std::fprintf(report, "%s\n", line.c_str());
    }
    std::printf("%zu criteria, %d failed\n", lines.size(), failed);
    if (report) {
        std::fprintf(report, "%zu criteria, %d failed\n", lines.size(), failed);
        std::fclose(report);
    }
    return strict ? failed : 0;
}
