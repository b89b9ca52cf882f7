#include "hawkeslab/experiments.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "hawkeslab/cluster.hpp"
#include "hawkeslab/embedding.hpp"
#include "hawkeslab/errors.hpp"
#include "hawkeslab/genealogy.hpp"
#include "hawkeslab/hawkes_sim.hpp"
#include "hawkeslab/inar.hpp"
#include "hawkeslab/renewal_calc.hpp"
#include "hawkeslab/stats.hpp"
#include "hawkeslab/walks.hpp"

namespace hawkeslab {

namespace {

using json = nlohmann::ordered_json;

constexpr std::uint32_t kBootstrapTag = 3;

json to_json(const MeanSe& m) { return json{{"mean", m.mean}, {"se", m.se}, {"n", m.n}}; }

std::vector<double> parse_double_list(const std::string& raw, const std::string& field) {
    std::vector<double> out;
    std::istringstream in(raw);
    std::string tok;
    while (in >> tok) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("field '" + field + "' has a non-numeric entry: " + tok);
        }
    }
    if (out.empty()) throw ConfigError("field '" + field + "' is empty");
    return out;
}

class ArtifactWriter {
  public:
    ArtifactWriter(const ExperimentConfig& cfg, json& summary) : summary_(summary) {
        if (!cfg.out.empty()) {
            dir_ = cfg.out;
            std::filesystem::create_directories(dir_);
        }
    }

    bool enabled() const { return !dir_.empty(); }

    template <typename Fn>
    void write(const std::string& name, Fn&& fn) {
        if (!enabled()) return;
        std::ofstream out(dir_ / name);
        fn(out);
        summary_["artifacts"].push_back(name);
    }

    void finalize() const {
        if (!enabled()) return;
        std::ofstream out(dir_ / "summary.json");
        out << summary_.dump(2) << "\n";
    }

  private:
    std::filesystem::path dir_;
    json& summary_;
};

json base_summary(const ExperimentConfig& cfg) {
    json j;
    j["kind"] = cfg.kind;
    j["seed"] = cfg.seed;
    j["replications"] = cfg.replications;
    j["config_hash"] = cfg.config_hash();
    j["version"] = kLabVersion;
    j["metadata"] = json::object();
    j["estimates"] = json::object();
    j["artifacts"] = json::array();
    return j;
}

MeanSe pool(const std::vector<double>& values) { return mean_se(values); }

// ---------------------------------------------------------------------------
// cluster_iterate

json run_cluster_iterate(const ExperimentConfig& cfg, const RunOptions& opt) {
    const KvSection& p = cfg.params;
    const double eta = p.get_double("eta");
    const double m = p.get_double("m");
    const DisplacementSpec disp = p.get_distribution("displacement");
    const double window_len = p.get_double("window");
    const double buffer = p.get_double("buffer");
    const int g_max = static_cast<int>(p.get_int("generations"));
    const auto budget = static_cast<std::uint64_t>(p.get_int("point_budget", 200'000'000));
    const int blocks = static_cast<int>(p.get_int("intensity_blocks", 20));
    p.reject_unknown(cfg.kind);
    if (m < 0.0 || m > 1.0) throw ConfigError("cluster field needs m in [0, 1]");
    if (m == 1.0 && g_max < 0) throw ConfigError("m = 1 requires a finite generation count");

    const Window window{0.0, window_len, buffer};
    const ClusterField field{disp, m};

    struct PerRep {
        double lambda_hat = 0.0;
        std::vector<double> gen_counts;
        PointConfiguration points;
    };
    std::vector<PerRep> reps(cfg.replications);
    parallel_replicates(cfg.replications, resolve_threads(opt.threads), [&](std::uint64_t r) {
        RngStream stream = split_stream(cfg.seed, static_cast<std::uint32_t>(r));
        PerRep& rep = reps[r];
        rep.gen_counts.assign(static_cast<std::size_t>(g_max) + 1, 0.0);
        auto observer = [&](int g, const PointConfiguration& gen) {
            rep.gen_counts[static_cast<std::size_t>(g)] = static_cast<double>(gen.count_window());
        };
        rep.points = iterate_generations(eta, field, g_max, window, stream, budget, observer);
        RngStream boot = stream.substream(kBootstrapTag);
        rep.lambda_hat = estimate_intensity(rep.points, blocks, 200, boot).lambda_hat;
    });

    std::vector<double> lambda_hats;
    for (const auto& rep : reps) lambda_hats.push_back(rep.lambda_hat);

    json j = base_summary(cfg);
    j["metadata"]["escaped_mass_bound"] = 1.0 - disp.cdf(buffer);
    j["metadata"]["point_budget"] = budget;
    if (m < 1.0) j["metadata"]["expected_lambda"] = eta / (1.0 - m);
    j["estimates"]["lambda_hat"] = to_json(pool(lambda_hats));
    json gens = json::array();
    for (int g = 0; g <= g_max; ++g) {
        std::vector<double> counts;
        for (const auto& rep : reps) counts.push_back(rep.gen_counts[static_cast<std::size_t>(g)]);
        const MeanSe ms = pool(counts);
        gens.push_back(json{{"g", g}, {"mean_count", ms.mean}, {"se", ms.se}});
    }
    j["estimates"]["generation_counts"] = gens;

    ArtifactWriter artifacts(cfg, j);
    if (!reps.empty())
        artifacts.write("points.txt", [&](std::ostream& out) { reps[0].points.write_plaintext(out); });
    artifacts.finalize();
    return j;
}

// ---------------------------------------------------------------------------
// renewal_hawkes

json run_renewal_hawkes(const ExperimentConfig& cfg, const RunOptions& opt) {
    const KvSection& p = cfg.params;
    RenewalImmigrationSpec spec;
    spec.displacement = p.get_distribution("displacement");
    spec.m = p.get_double("m");
    spec.target_lambda = p.get_double("target_lambda", 1.0);
    spec.horizon = p.get_double("horizon");
    spec.burn_in = p.get_double("burn_in", 0.0);
    spec.family_budget = static_cast<std::uint64_t>(p.get_int("family_budget", 1'000'000));
    const int blocks = static_cast<int>(p.get_int("intensity_blocks", 20));
    p.reject_unknown(cfg.kind);

    struct PerRep {
        double lambda_hat = 0.0;
        double immigrant_rate = 0.0;
        double interarrival_mean = 0.0;
        std::uint64_t censored = 0;
        bool conserved = false;
        PointConfiguration points;
    };
    std::vector<PerRep> reps(cfg.replications);
    parallel_replicates(cfg.replications, resolve_threads(opt.threads), [&](std::uint64_t r) {
        RngStream stream = split_stream(cfg.seed, static_cast<std::uint32_t>(r));
        RenewalHawkesResult res = simulate_renewal_hawkes(spec, stream);
        PerRep& rep = reps[r];
        RngStream boot = stream.substream(kBootstrapTag);
        rep.lambda_hat = estimate_intensity(res.points, blocks, 200, boot).lambda_hat;
        rep.immigrant_rate = static_cast<double>(res.immigrants_in_window) / spec.horizon;
        rep.interarrival_mean = res.interarrival_mean;
        rep.censored = res.censored_families;
        rep.conserved = res.points.count_window() ==
                        res.immigrants_in_window + res.family_points_in_window;
        rep.points = std::move(res.points);
    });

    std::vector<double> lambda_hats, rates, gaps;
    std::uint64_t censored = 0;
    bool conserved = true;
    for (const auto& rep : reps) {
        lambda_hats.push_back(rep.lambda_hat);
        rates.push_back(rep.immigrant_rate);
        gaps.push_back(rep.interarrival_mean);
        censored += rep.censored;
        conserved = conserved && rep.conserved;
    }

    json j = base_summary(cfg);
    j["metadata"]["burn_in"] = spec.burn_in;
    j["metadata"]["family_budget"] = spec.family_budget;
    j["metadata"]["censored_families"] = censored;
    j["metadata"]["count_conserved"] = conserved;
    j["metadata"]["truncation_level"] = spec.displacement.truncation_for_branching(spec.m);
    j["metadata"]["expected_immigrant_rate"] = spec.target_lambda * (1.0 - spec.m);
    j["estimates"]["lambda_hat"] = to_json(pool(lambda_hats));
    j["estimates"]["immigrant_rate"] = to_json(pool(rates));
    j["estimates"]["interarrival_mean"] = to_json(pool(gaps));

    ArtifactWriter artifacts(cfg, j);
    if (!reps.empty())
        artifacts.write("points.txt", [&](std::ostream& out) { reps[0].points.write_plaintext(out); });
    artifacts.finalize();
    return j;
}

// ---------------------------------------------------------------------------
// two_index

json run_two_index(const ExperimentConfig& cfg, const RunOptions& opt) {
    const KvSection& p = cfg.params;
    TwoIndexSpec spec{pareto_for_tail(TailSpec{p.get_double("alpha1"), p.get_double("ell1", 1.0)}),
                      pareto_for_tail(TailSpec{p.get_double("alpha2"), p.get_double("ell2", 1.0)}),
                      p.get_double("horizon"),
                      static_cast<std::uint64_t>(p.get_int("family_budget", 100'000))};
    p.reject_unknown(cfg.kind);

    struct PerRep {
        double rate = 0.0;
        std::uint64_t epochs = 0;
        std::uint64_t censored = 0;
    };
    std::vector<PerRep> reps(cfg.replications);
    parallel_replicates(cfg.replications, resolve_threads(opt.threads), [&](std::uint64_t r) {
        RngStream stream = split_stream(cfg.seed, static_cast<std::uint32_t>(r));
        TwoIndexResult res = simulate_two_index(spec, stream);
        reps[r] = PerRep{static_cast<double>(res.points.count_window()) / spec.horizon, res.epochs,
                         res.censored_families};
    });

    std::vector<double> rates;
    std::uint64_t censored = 0, epochs = 0;
    for (const auto& rep : reps) {
        rates.push_back(rep.rate);
        censored += rep.censored;
        epochs += rep.epochs;
    }

    json j = base_summary(cfg);
    j["metadata"]["family_budget"] = spec.family_budget;
    j["metadata"]["censored_families"] = censored;
    j["metadata"]["total_epochs"] = epochs;
    j["estimates"]["count_rate"] = to_json(pool(rates));  // C(horizon) / horizon
    ArtifactWriter artifacts(cfg, j);
    artifacts.finalize();
    return j;
}

// ---------------------------------------------------------------------------
// embedding

json run_embedding(const ExperimentConfig& cfg, const RunOptions& opt) {
    const KvSection& p = cfg.params;
    EmbeddingConfig ecfg;
    ecfg.lambda = p.get_double("lambda");
    ecfg.displacement = p.get_distribution("displacement");
    const double window_len = p.get_double("window");
    const double buffer = p.get_double("buffer");
    ecfg.window = Window{0.0, window_len, buffer};
    ecfg.cell_width = p.get_double("cell_width", 1.0);
    ecfg.near_bins = static_cast<int>(p.get_int("near_bins", 64));
    ecfg.hard_cap = p.get_double("hard_cap", 1e6);
    const int g_max = static_cast<int>(p.get_int("generations"));
    const double inner_lo = p.get_double("inner_lo", 0.0);
    const double inner_hi = p.get_double("inner_hi", window_len);
    const int stable = static_cast<int>(p.get_int("stable_consecutive", 3));
    p.reject_unknown(cfg.kind);

    std::vector<ConvergenceReport> reports(cfg.replications);
    parallel_replicates(cfg.replications, resolve_threads(opt.threads), [&](std::uint64_t r) {
        EmbeddingState state =
            init_embedding(ecfg, split_stream(cfg.seed, static_cast<std::uint32_t>(r)));
        reports[r] = run_embedding(state, g_max, inner_lo, inner_hi, stable);
    });

    const double inner_len = inner_hi - inner_lo;
    json j = base_summary(cfg);
    j["metadata"]["escaped_mass_bound"] =
        reports.empty() ? 1.0 - ecfg.displacement.cdf(buffer) : reports[0].escaped_mass_bound;
    j["metadata"]["inner_window"] = json::array({inner_lo, inner_hi});

    json gens = json::array();
    for (int g = 0; g <= g_max; ++g) {
        std::vector<double> counts, diffs;
        for (const auto& rep : reports) {
            counts.push_back(static_cast<double>(rep.generations[static_cast<std::size_t>(g)].count_inner));
            diffs.push_back(static_cast<double>(rep.generations[static_cast<std::size_t>(g)].sym_diff_inner));
        }
        const MeanSe mc = pool(counts);
        const MeanSe md = pool(diffs);
        gens.push_back(json{{"g", g},
                            {"mean_count", mc.mean},
                            {"se_count", mc.se},
                            {"mean_intensity", mc.mean / inner_len},
                            {"se_intensity", mc.se / inner_len},
                            {"mean_sym_diff", md.mean}});
    }
    j["estimates"]["generations"] = gens;
    std::size_t stabilized = 0;
    for (const auto& rep : reports) stabilized += rep.stabilized ? 1 : 0;
    j["estimates"]["stabilized_fraction"] =
        cfg.replications == 0 ? 0.0
                              : static_cast<double>(stabilized) / static_cast<double>(cfg.replications);

    ArtifactWriter artifacts(cfg, j);
    artifacts.write("report.jsonl", [&](std::ostream& out) {
        for (std::size_t r = 0; r < reports.size(); ++r) {
            for (const GenerationRecord& rec : reports[r].generations) {
                json line{{"seed", cfg.seed},          {"replicate", r},
                          {"g", rec.g},                {"count", rec.count_inner},
                          {"sym_diff", rec.sym_diff_inner}, {"height_max", rec.lambda_max}};
                out << line.dump() << "\n";
            }
        }
    });
    artifacts.finalize();
    return j;
}

// ---------------------------------------------------------------------------
// palm_backward

json run_palm_backward(const ExperimentConfig& cfg, const RunOptions& opt) {
    const KvSection& p = cfg.params;
    const DisplacementSpec disp = p.get_distribution("displacement");
    const int spine_depth = static_cast<int>(p.get_int("spine_depth", 64));
    const auto family_budget = static_cast<std::uint64_t>(p.get_int("family_budget", 100'000));
    const double halfwidth = p.get_double("halfwidth", 10.0);
    p.reject_unknown(cfg.kind);

    const Window window{-halfwidth, halfwidth, 0.0};
    const auto n_cells = static_cast<std::size_t>(2.0 * halfwidth);

    struct PerRep {
        std::vector<double> hist;
        std::uint64_t censored = 0;
        double spine_end = 0.0;
    };
    std::vector<PerRep> reps(cfg.replications);
    parallel_replicates(cfg.replications, resolve_threads(opt.threads), [&](std::uint64_t r) {
        RngStream stream = split_stream(cfg.seed, static_cast<std::uint32_t>(r));
        BackwardPalmResult res = backward_palm_simulate(disp, spine_depth, family_budget, window, stream);
        PerRep& rep = reps[r];
        rep.hist.resize(n_cells);
        for (std::size_t c = 0; c < n_cells; ++c) {
            const double a = -halfwidth + static_cast<double>(c);
            rep.hist[c] = static_cast<double>(res.points.count_between(a, a + 1.0));
        }
        rep.censored = res.censored_families;
        rep.spine_end = res.spine_end;
    });

    json j = base_summary(cfg);
    std::uint64_t censored = 0;
    std::vector<double> spine_ends;
    for (const auto& rep : reps) {
        censored += rep.censored;
        spine_ends.push_back(rep.spine_end);
    }
    j["metadata"]["censored_families"] = censored;
    j["metadata"]["spine_depth"] = spine_depth;
    j["metadata"]["family_budget"] = family_budget;
    j["estimates"]["spine_end"] = to_json(pool(spine_ends));
    json cells = json::array();
    for (std::size_t c = 0; c < n_cells; ++c) {
        std::vector<double> values;
        for (const auto& rep : reps) values.push_back(rep.hist[c]);
        const MeanSe ms = pool(values);
        cells.push_back(json{{"cell_lo", -halfwidth + static_cast<double>(c)},
                             {"mean_count", ms.mean},
                             {"se", ms.se}});
    }
    j["estimates"]["unit_cells"] = cells;

    ArtifactWriter artifacts(cfg, j);
    artifacts.write("histogram.csv", [&](std::ostream& out) {
        out << "cell_lo,mean_count,se\n";
        for (const auto& cell : cells)
            out << cell["cell_lo"].dump() << "," << cell["mean_count"].dump() << ","
                << cell["se"].dump() << "\n";
    });
    artifacts.finalize();
    return j;
}

// ---------------------------------------------------------------------------
// kesten

json run_kesten(const ExperimentConfig& cfg, const RunOptions& opt) {
    const KvSection& p = cfg.params;
    const auto node_budget = static_cast<std::uint64_t>(p.get_int("node_budget"));
    const std::string label = p.get_string("label", "none");
    DisplacementSpec f1 = DisplacementSpec::deterministic(1.0);
    DisplacementSpec f2 = DisplacementSpec::deterministic(1.0);
    if (label == "renewal") {
        f1 = p.get_distribution("f1");
        f2 = p.get_distribution("f2");
    } else if (label == "backward") {
        f1 = p.get_distribution("displacement");
    } else if (label != "none") {
        throw ConfigError("label must be none, renewal, or backward");
    }
    p.reject_unknown(cfg.kind);

    constexpr std::size_t kBins = 11;  // offspring 0..9 and >= 10
    struct PerRep {
        double special_sum = 0.0, special_sq = 0.0;
        double normal_sum = 0.0, normal_sq = 0.0;
        std::uint64_t special_n = 0, normal_n = 0;
        std::array<std::uint64_t, kBins> hist{};
        std::uint64_t depth = 0, spine_len = 0;
        bool truncated = false;
    };
    std::vector<PerRep> reps(cfg.replications);
    parallel_replicates(cfg.replications, resolve_threads(opt.threads), [&](std::uint64_t r) {
        RngStream stream = split_stream(cfg.seed, static_cast<std::uint32_t>(r));
        const KestenTree tree = grow_kesten(node_budget, stream);
        PerRep& rep = reps[r];
        for (const GenealogyNode& node : tree.nodes) {
            rep.depth = std::max<std::uint64_t>(rep.depth, static_cast<std::uint64_t>(node.depth));
            if (!node.children_complete) continue;
            const auto k = static_cast<double>(node.offspring);
            if (node.kind == NodeKind::special) {
                rep.special_sum += k;
                rep.special_sq += k * k;
                ++rep.special_n;
            } else {
                rep.normal_sum += k;
                rep.normal_sq += k * k;
                ++rep.normal_n;
                ++rep.hist[std::min<std::size_t>(node.offspring, kBins - 1)];
            }
        }
        rep.spine_len = tree.spine.size();
        rep.truncated = tree.truncated;
    });

    double s_sum = 0, s_sq = 0, n_sum = 0, n_sq = 0;
    std::uint64_t s_n = 0, n_n = 0;
    std::array<std::uint64_t, kBins> hist{};
    for (const auto& rep : reps) {
        s_sum += rep.special_sum;
        s_sq += rep.special_sq;
        s_n += rep.special_n;
        n_sum += rep.normal_sum;
        n_sq += rep.normal_sq;
        n_n += rep.normal_n;
        for (std::size_t b = 0; b < kBins; ++b) hist[b] += rep.hist[b];
    }
    auto pooled_mean_se = [](double sum, double sq, std::uint64_t n) {
        MeanSe ms;
        ms.n = n;
        if (n == 0) return ms;
        ms.mean = sum / static_cast<double>(n);
        if (n > 1) {
            const double var = std::max(0.0, sq / static_cast<double>(n) - ms.mean * ms.mean);
            ms.se = std::sqrt(var / static_cast<double>(n));
        }
        return ms;
    };

    // Pois(1) pmf over bins 0..9 plus the tail
    std::vector<double> expected(kBins, 0.0);
    double pmf = std::exp(-1.0), cum = 0.0;
    for (std::size_t b = 0; b + 1 < kBins; ++b) {
        expected[b] = pmf * static_cast<double>(n_n);
        cum += pmf;
        pmf /= static_cast<double>(b + 1);
    }
    expected[kBins - 1] = (1.0 - cum) * static_cast<double>(n_n);
    const double chi = chi_square(std::span<const std::uint64_t>(hist.data(), kBins),
                                  std::span<const double>(expected.data(), kBins));

    json j = base_summary(cfg);
    j["metadata"]["node_budget"] = node_budget;
    j["estimates"]["special_offspring"] = to_json(pooled_mean_se(s_sum, s_sq, s_n));
    j["estimates"]["normal_offspring"] = to_json(pooled_mean_se(n_sum, n_sq, n_n));
    j["estimates"]["normal_chi_square"] = chi;
    j["estimates"]["chi_square_crit_99"] = chi_square_99(static_cast<int>(kBins) - 1);

    ArtifactWriter artifacts(cfg, j);
    if (cfg.replications > 0 && artifacts.enabled()) {
        RngStream stream = split_stream(cfg.seed, 0);
        const KestenTree tree = grow_kesten(node_budget, stream);
        std::vector<double> positions;
        RngStream label_stream = stream.substream(1);
        if (label == "renewal") positions = label_renewal(tree, f1, f2, label_stream);
        else if (label == "backward") positions = label_backward(tree, f1, label_stream);
        else positions.assign(tree.nodes.size(), 0.0);
        artifacts.write("tree.csv", [&](std::ostream& out) { write_tree(out, tree, positions); });
    }
    artifacts.finalize();
    return j;
}

// ---------------------------------------------------------------------------
// walk

json run_walk(const ExperimentConfig& cfg, const RunOptions&) {
    const KvSection& p = cfg.params;
    const std::string step_kind = p.get_string("step", "symmetrized");
    WalkSpec spec;
    if (step_kind == "symmetrized") {
        spec.step = SymmetrizedSpec{p.get_distribution("displacement")};
    } else if (step_kind == "inar_lattice") {
        InarSpec inar = heavy_tail_weights(static_cast<std::size_t>(p.get_int("k_max", 1000)),
                                           p.get_double("exponent", 1.4), 1.0);
        std::int64_t k_min = 0;
        std::vector<double> probs = symmetrized_lattice_step(inar, k_min);
        spec.step = LatticeLaw{k_min, std::move(probs)};
    } else {
        throw ConfigError("step must be symmetrized or inar_lattice");
    }
    spec.n_steps = static_cast<std::uint64_t>(p.get_int("n_steps", 1 << 16));
    spec.interval_halfwidth = p.get_double("halfwidth", 1.0);
    spec.replications = cfg.replications;
    TransienceThresholds thr;
    thr.slope_lo = p.get_double("slope_lo", thr.slope_lo);
    thr.slope_hi = p.get_double("slope_hi", thr.slope_hi);
    thr.flat_tol = p.get_double("flat_tol", thr.flat_tol);
    p.reject_unknown(cfg.kind);

    RngStream stream = split_stream(cfg.seed, 0);
    const OccupationCurve curve = occupation_curve(spec, stream);
    const WalkVerdict verdict = classify_transience(curve, thr);

    json j = base_summary(cfg);
    j["estimates"]["verdict"] = to_string(verdict);
    j["estimates"]["tail_slope"] = occupation_tail_slope(curve);
    j["estimates"]["final_mean_visits"] = curve.mean_visits.back();
    json points = json::array();
    for (std::size_t i = 0; i < curve.checkpoints.size(); ++i)
        points.push_back(json{{"n", curve.checkpoints[i]},
                              {"mean_visits", curve.mean_visits[i]},
                              {"stderr", curve.stderr_visits[i]}});
    j["estimates"]["curve"] = points;

    ArtifactWriter artifacts(cfg, j);
    artifacts.write("curve.csv", [&](std::ostream& out) {
        out << "n,mean_visits,stderr\n";
        for (std::size_t i = 0; i < curve.checkpoints.size(); ++i)
            out << curve.checkpoints[i] << "," << curve.mean_visits[i] << ","
                << curve.stderr_visits[i] << "\n";
    });
    artifacts.finalize();
    return j;
}

// ---------------------------------------------------------------------------
// inar

json run_inar(const ExperimentConfig& cfg, const RunOptions& opt) {
    const KvSection& p = cfg.params;
    InarSpec spec;
    const std::string weights = p.get_string("weights", "heavy_tail");
    if (weights == "heavy_tail") {
        spec = heavy_tail_weights(static_cast<std::size_t>(p.get_int("k_max", 100)),
                                  p.get_double("exponent", 1.4), p.get_double("lambda", 1.0));
    } else if (weights == "list") {
        spec.alpha = parse_double_list(p.get_string("alpha"), "alpha");
        spec.target_lambda = p.get_double("lambda", 1.0);
    } else {
        throw ConfigError("weights must be heavy_tail or list");
    }
    const auto n_steps = static_cast<std::size_t>(p.get_int("n_steps", 10'000));
    const auto burnin = static_cast<std::size_t>(p.get_int("burnin", 0));
    const auto event_cap = static_cast<std::uint64_t>(p.get_int("event_cap", 100'000'000));
    const int lags = static_cast<int>(p.get_int("lags", 5));
    const auto thinning_reps = static_cast<std::uint64_t>(p.get_int("thinning_reps", 100'000));
    p.reject_unknown(cfg.kind);

    struct PerRep {
        double mean_u = 0.0;
        double mean_x = 0.0;
        std::vector<double> lag_corr;
        bool extinct = false;
        std::uint64_t events = 0;
    };
    std::vector<PerRep> reps(cfg.replications);
    std::vector<InarPath> sample_path(1);
    parallel_replicates(cfg.replications, resolve_threads(opt.threads), [&](std::uint64_t r) {
        RngStream stream = split_stream(cfg.seed, static_cast<std::uint32_t>(r));
        const InarPath path = simulate_inar(spec, n_steps, burnin, stream, event_cap);
        const std::vector<double> u = innovations(path, spec);
        PerRep& rep = reps[r];
        rep.events = path.total_events;

        const std::size_t start = path.burnin;
        const std::size_t len = u.size() - start;
        double su = 0.0, sx = 0.0;
        for (std::size_t i = start; i < u.size(); ++i) {
            su += u[i];
            sx += static_cast<double>(path.at(static_cast<std::ptrdiff_t>(i)));
        }
        rep.mean_u = su / static_cast<double>(len);
        rep.mean_x = sx / static_cast<double>(len);
        double var = 0.0;
        for (std::size_t i = start; i < u.size(); ++i)
            var += (u[i] - rep.mean_u) * (u[i] - rep.mean_u);
        var /= static_cast<double>(len);
        rep.lag_corr.resize(static_cast<std::size_t>(lags), 0.0);
        for (int lag = 1; lag <= lags; ++lag) {
            double cov = 0.0;
            for (std::size_t i = start; i + static_cast<std::size_t>(lag) < u.size(); ++i)
                cov += (u[i] - rep.mean_u) * (u[i + static_cast<std::size_t>(lag)] - rep.mean_u);
            cov /= static_cast<double>(len - static_cast<std::size_t>(lag));
            rep.lag_corr[static_cast<std::size_t>(lag - 1)] = var > 0.0 ? cov / var : 0.0;
        }
        std::int64_t tail_sum = 0;
        const auto fl = static_cast<std::ptrdiff_t>(path.forward_length());
        for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(0, fl - 100); i < fl; ++i)
            tail_sum += path.at(i);
        rep.extinct = tail_sum == 0;
        if (r == 0) sample_path[0] = path;
    });

    std::vector<double> mean_us, mean_xs;
    std::vector<std::vector<double>> corr(static_cast<std::size_t>(lags));
    std::size_t extinct = 0;
    for (const auto& rep : reps) {
        mean_us.push_back(rep.mean_u);
        mean_xs.push_back(rep.mean_x);
        for (int lag = 0; lag < lags; ++lag)
            corr[static_cast<std::size_t>(lag)].push_back(rep.lag_corr[static_cast<std::size_t>(lag)]);
        extinct += rep.extinct ? 1 : 0;
    }

    RngStream thin_stream(cfg.seed, static_cast<std::uint32_t>(cfg.replications) + 1, 0);
    const ThinningReport thinning = thinning_counts_check(spec, thinning_reps, thin_stream);

    json j = base_summary(cfg);
    j["metadata"]["k_max"] = spec.k_max();
    j["metadata"]["weight_sum"] = spec.weight_sum();
    j["metadata"]["truncated_tail"] = spec.truncated_tail;
    j["metadata"]["extinct_fraction"] =
        cfg.replications == 0 ? 0.0 : static_cast<double>(extinct) / static_cast<double>(cfg.replications);
    j["estimates"]["innovation_mean"] = to_json(pool(mean_us));
    j["estimates"]["sample_mean_x"] = to_json(pool(mean_xs));
    json lag_json = json::array();
    for (int lag = 1; lag <= lags; ++lag) {
        const MeanSe ms = pool(corr[static_cast<std::size_t>(lag - 1)]);
        lag_json.push_back(json{{"lag", lag}, {"mean", ms.mean}, {"se", ms.se}});
    }
    j["estimates"]["innovation_lag_corr"] = lag_json;
    j["estimates"]["thinning"] = json{{"replications", thinning.replications},
                                      {"mean_xi1", thinning.mean_xi1},
                                      {"se_xi1", thinning.se_xi1},
                                      {"alpha1", spec.alpha[0]},
                                      {"cov_xi1_xi2", thinning.cov_xi1_xi2},
                                      {"se_cov", thinning.se_cov},
                                      {"zero_k_draws", thinning.zero_k_draws},
                                      {"zero_k_all_zero", thinning.zero_k_all_zero},
                                      {"chi_square_xi1", thinning.chi_square_xi1},
                                      {"chi_square_crit_99", chi_square_99(2)}};

    ArtifactWriter artifacts(cfg, j);
    if (cfg.replications > 0) {
        artifacts.write("path.csv", [&](std::ostream& out) {
            const InarPath& path = sample_path[0];
            const std::vector<double> u = innovations(path, spec);
            out << "n,X,u\n";
            for (std::size_t i = 0; i < u.size(); ++i)
                out << i << "," << path.at(static_cast<std::ptrdiff_t>(i)) << "," << u[i] << "\n";
        });
    }
    artifacts.finalize();
    return j;
}

// ---------------------------------------------------------------------------
// grid_oracle

json run_grid_oracle(const ExperimentConfig& cfg, const RunOptions&) {
    const KvSection& p = cfg.params;
    const std::string mode = p.get_string("mode");
    const double h = p.get_double("h", 0.01);

    json j = base_summary(cfg);
    ArtifactWriter artifacts(cfg, j);

    if (mode == "renewal") {
        const DisplacementSpec disp = p.get_distribution("displacement");
        const double x_max = p.get_double("x_max");
        p.reject_unknown(cfg.kind);
        const GridMeasure f = GridMeasure::from_distribution(disp, h, x_max);
        const GridMeasure u = renewal_function(f, x_max);
        j["metadata"]["truncated_mass"] = f.truncated_mass();
        j["estimates"]["u_at_xmax"] = u.cumulative_from_zero(x_max);
        artifacts.write("grid.csv", [&](std::ostream& out) { u.write_csv(out); });
    } else if (mode == "two_index") {
        const double a1 = p.get_double("alpha1"), a2 = p.get_double("alpha2");
        const double e1 = p.get_double("ell1", 1.0), e2 = p.get_double("ell2", 1.0);
        const double x_max = p.get_double("x_max");
        p.reject_unknown(cfg.kind);
        auto rate_at = [&](double step) {
            const GridMeasure f1 =
                GridMeasure::from_distribution(pareto_for_tail(TailSpec{a1, e1}), step, x_max);
            const GridMeasure f2 =
                GridMeasure::from_distribution(pareto_for_tail(TailSpec{a2, e2}), step, x_max);
            const GridMeasure ub = two_index_mean(f1, f2, x_max);
            return ub.cumulative_from_zero(x_max) / x_max;
        };
        const double rate = rate_at(h);
        const double rate_half = rate_at(h / 2.0);
        j["estimates"]["mean_rate"] = rate;  // U-bar(x_max) / x_max
        j["estimates"]["mean_rate_half_step"] = rate_half;
        j["estimates"]["step_halving_rel_change"] = std::abs(rate_half - rate) / std::max(1e-300, rate);
        j["metadata"]["expected_rate"] = 1.0 / (e1 * e2);
    } else if (mode == "palm") {
        const DisplacementSpec disp = p.get_distribution("displacement");
        const double x_max = p.get_double("x_max");
        p.reject_unknown(cfg.kind);
        const GridMeasure f = GridMeasure::from_distribution(disp, h, x_max);
        const GridMeasure u0 = palm_mean_measure(f, x_max);
        j["estimates"]["atom0"] = u0.atom0();
        j["estimates"]["u0_unit"] = u0.cumulative_from_zero(1.0);
        double asym = 0.0;
        for (std::int64_t k = 1; k <= u0.k_hi(); ++k)
            asym = std::max(asym, std::abs(u0.site(k) - u0.site(-k)));
        j["estimates"]["max_asymmetry"] = asym;
        artifacts.write("grid.csv", [&](std::ostream& out) { u0.write_csv(out); });
    } else if (mode == "scan") {
        ScanOptions opts;
        opts.h = h;
        const std::vector<double> alphas = parse_double_list(p.get_string("alphas"), "alphas");
        if (p.has("ranges")) opts.ranges = parse_double_list(p.get_string("ranges", ""), "ranges");
        p.reject_unknown(cfg.kind);
        json entries = json::array();
        for (const ScanEntry& entry : palm_local_finiteness_scan(alphas, opts)) {
            entries.push_back(json{{"alpha", entry.alpha},
                                   {"verdict", to_string(entry.verdict)},
                                   {"values", entry.values}});
        }
        j["estimates"]["scan"] = entries;
    } else {
        throw ConfigError("grid_oracle mode must be renewal, two_index, palm, or scan");
    }

    artifacts.finalize();
    return j;
}

}  // namespace

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("LAB_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_replicates(std::uint64_t n, int threads,
                         const std::function<void(std::uint64_t)>& fn) {
    if (n == 0) return;
    const auto workers = static_cast<std::uint64_t>(std::max(1, threads));
    if (workers <= 1 || n == 1) {
        for (std::uint64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::uint64_t w = 0; w < std::min<std::uint64_t>(workers, n); ++w)
        pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::vector<KindInfo> experiment_kinds() {
    return {
        {"cluster_iterate", "iterated clustering of a Poisson field; intensity eta/(1-m)"},
        {"renewal_hawkes", "Hawkes process with truncated-law renewal immigration"},
        {"two_index", "critical families on renewal epochs with two tail indices"},
        {"embedding", "shared-driving-field Poisson embedding recursion"},
        {"palm_backward", "backward ancestral construction of a Palm version"},
        {"kesten", "size-biased Galton-Watson trees and their labelings"},
        {"walk", "occupation curves and transience classification"},
        {"inar", "critical INAR(infinity) thinning recursion diagnostics"},
        {"grid_oracle", "deterministic grid-measure renewal calculus"},
    };
}

nlohmann::ordered_json run_experiment(const ExperimentConfig& cfg, const RunOptions& opt) {
    using Runner = json (*)(const ExperimentConfig&, const RunOptions&);
    static const std::map<std::string, Runner> dispatch = {
        {"cluster_iterate", run_cluster_iterate},
        {"renewal_hawkes", run_renewal_hawkes},
        {"two_index", run_two_index},
        {"embedding", run_embedding},
        {"palm_backward", run_palm_backward},
        {"kesten", run_kesten},
        {"walk", run_walk},
        {"inar", run_inar},
        {"grid_oracle", run_grid_oracle},
    };
    const auto it = dispatch.find(cfg.kind);
    if (it == dispatch.end()) throw ConfigError("unknown experiment kind '" + cfg.kind + "'");
    return it->second(cfg, opt);
}

}  // namespace hawkeslab
