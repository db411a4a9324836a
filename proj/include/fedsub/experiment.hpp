#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fedsub/csv.hpp"
#include "fedsub/federation.hpp"
#include "fedsub/synthetic.hpp"

namespace fedsub {

/// Full description of one experiment scenario. Parsed from a single JSON
/// document; unrecognized keys are rejected so that typos in scenario
/// grids fail loudly.
struct ExperimentConfig {
    std::string name;  // optional label; defaults to <aggregator>_<attack>_b<pct>
    std::uint64_t seed = 1;
    int n_clients = 30;
    int rank = 5;
    int rounds = 100;
    double eta = 0.01;
    int n_samples = 10;
    double beta = 0.0;
    AttackSpec attack;
    Aggregator aggregator = Aggregator::mean;
    ParticipationPolicy participation = ParticipationPolicy::full();
    double coreset_q = kDefaultCoresetFraction;
    double dirichlet_alpha = 0.5;
    DistanceMetric metric = DistanceMetric::cosine;
    int repeats = 1;
    bool normalize = true;
    SyntheticParams data;
    std::string features_csv;  // when set, replaces the synthetic generator

    int malicious_count() const {
        return static_cast<int>(std::floor(beta * static_cast<double>(n_clients)));
    }

    std::string scenario_label() const {
        if (!name.empty()) return name;
        const int pct = static_cast<int>(std::llround(beta * 100.0));
        return to_string(aggregator) + "_" + to_string(attack.kind) + "_b" + std::to_string(pct);
    }

    void validate() const {
        if (n_clients < 1) throw std::invalid_argument("config: n_clients must be >= 1");
        if (rank < 1) throw std::invalid_argument("config: rank must be >= 1");
        if (rounds < 1) throw std::invalid_argument("config: rounds must be >= 1");
        if (repeats < 1) throw std::invalid_argument("config: repeats must be >= 1");
        if (!(beta >= 0.0 && beta < 0.5)) throw std::invalid_argument("config: beta in [0, 0.5)");
        if (beta > 0.0 && attack.kind == AttackKind::none) {
            throw std::invalid_argument("config: beta > 0 requires an attack kind");
        }
        if (!(dirichlet_alpha > 0.0)) {
            throw std::invalid_argument("config: dirichlet_alpha must be positive");
        }
        if (!(coreset_q > 0.5 && coreset_q < 1.0)) {
            throw std::invalid_argument("config: coreset_q must be in (0.5, 1)");
        }
        if (participation.mode == ParticipationPolicy::Mode::partial &&
            participation.k > n_clients) {
            throw std::invalid_argument("config: participation k exceeds n_clients");
        }
        GreedyConfig{eta, rounds, n_samples}.validate();
        if (features_csv.empty()) data.validate();
    }
};

/// Mean value of the rounded global solution across the ground-truth
/// honest clients.
template <SetObjective F>
double quality_metric(const ElementSubset& solution, const std::vector<F>& objectives,
                      const std::vector<int>& honest_ids) {
    if (honest_ids.empty()) throw std::invalid_argument("quality_metric: no honest clients");
    double total = 0.0;
    for (int id : honest_ids) {
        total += objective_value(objectives[static_cast<std::size_t>(id)], solution);
    }
    return total / static_cast<double>(honest_ids.size());
}

/// Affine rescale of a raw quality between a random-subset floor and a
/// no-attack ceiling. Deliberately not clamped: values outside [0,1] are
/// informative. Degenerate references return 0 with a warning.
inline double normalize_quality(double raw, double min_ref, double max_ref) {
    if (!(max_ref > min_ref)) {
        std::cerr << "warning: normalize_quality with max_ref <= min_ref, returning 0\n";
        return 0.0;
    }
    return (raw - min_ref) / (max_ref - min_ref);
}

/// One row of the per-round metrics CSV.
struct MetricRow {
    int round = 0;
    double f_raw = 0.0;
    double f_norm = 0.0;
    double bad_frac_sim = -1.0;  // fraction of malicious clients in each coreset; -1 = n/a
    double bad_frac_div = -1.0;
    std::vector<int> coreset_sim;
    std::vector<int> coreset_div;
    int committed = -1;
};

struct RepeatResult {
    std::uint64_t seed = 0;
    double min_ref = 0.0;
    double max_ref = 0.0;
    std::vector<MetricRow> rows;
    double final_raw = 0.0;
    double final_norm = 0.0;
    double mean_bad_frac_sim = -1.0;  // mean over rounds; -1 = n/a
    double mean_bad_frac_div = -1.0;
    ElementSubset solution;
};

struct ScenarioOutcome {
    ExperimentConfig config;
    std::string scenario;
    std::vector<RepeatResult> repeats;
    double final_norm_mean = 0.0;
    double final_norm_std = 0.0;
    double final_raw_mean = 0.0;
};

/// Runs scenarios against shared per-seed state: dataset, partition,
/// client objectives, and the two normalization references (no-attack
/// FedCG ceiling, random-subset floor). Scenarios sharing a seed reuse
/// that state, which keeps grids cheap and guarantees every cell is
/// normalized against the same references. All scenarios given to one
/// runner must share the data configuration; the grid expander only
/// varies attack, beta, and aggregator, so grids satisfy this by
/// construction.
class ExperimentRunner {
public:
    using Objective = FacilityLocationObjective;

    ScenarioOutcome run_scenario(const ExperimentConfig& cfg) {
        cfg.validate();
        ScenarioOutcome outcome;
        outcome.config = cfg;
        outcome.scenario = cfg.scenario_label();
        for (int j = 0; j < cfg.repeats; ++j) {
            outcome.repeats.push_back(run_repeat(cfg, cfg.seed + static_cast<std::uint64_t>(j)));
        }
        double mean = 0.0;
        for (const auto& r : outcome.repeats) {
            mean += r.final_norm;
            outcome.final_raw_mean += r.final_raw;
        }
        mean /= static_cast<double>(outcome.repeats.size());
        outcome.final_raw_mean /= static_cast<double>(outcome.repeats.size());
        double var = 0.0;
        for (const auto& r : outcome.repeats) {
            var += (r.final_norm - mean) * (r.final_norm - mean);
        }
        outcome.final_norm_mean = mean;
        outcome.final_norm_std = std::sqrt(var / static_cast<double>(outcome.repeats.size()));
        return outcome;
    }

private:
    struct SeedContext {
        std::vector<Objective> objectives;  // one per client
        ElementSubset max_solution;         // no-attack FedCG final solution
        std::vector<ElementSubset> random_subsets;
        MatroidConstraint constraint{MatroidConstraint::Kind::uniform, 1, 1};
    };

    static constexpr int kMinRefSamples = 100;

    const SeedContext& context_for(const ExperimentConfig& cfg, std::uint64_t seed) {
        if (auto it = cache_.find(seed); it != cache_.end()) return it->second;

        SeedContext ctx;
        std::vector<std::vector<double>> data;
        std::vector<int> data_category;
        GroundSet ground;
        double diameter = 0.0;
        if (!cfg.features_csv.empty()) {
            auto rows = load_feature_csv(cfg.features_csv);
            int n_categories = 0;
            for (const auto& row : rows) n_categories = std::max(n_categories, row.category + 1);
            std::vector<double> weights(static_cast<std::size_t>(n_categories), 0.0);
            for (auto& row : rows) {
                weights[static_cast<std::size_t>(row.category)] += 1.0;
                data.push_back(std::move(row.features));
                data_category.push_back(row.category);
            }
            for (std::size_t i = 0; i < data.size(); ++i) {
                for (std::size_t j = i + 1; j < data.size(); ++j) {
                    double sq = 0.0;
                    for (std::size_t d = 0; d < data[i].size(); ++d) {
                        const double diff = data[i][d] - data[j][d];
                        sq += diff * diff;
                    }
                    diameter = std::max(diameter, sq);
                }
            }
            diameter = std::sqrt(diameter);

            // stratified ground sample mirroring the empirical proportions
            double total = 0.0;
            for (double w : weights) total += w;
            for (double& w : weights) w /= total;
            const auto counts = detail::apportion(
                weights, std::min<int>(cfg.data.n_ground, static_cast<int>(data.size())));
            Rng rng(derive_seed(seed, {stream::dataset}));
            std::vector<std::vector<double>> ground_features;
            for (int cat = 0; cat < n_categories; ++cat) {
                std::vector<int> members;
                for (std::size_t i = 0; i < data.size(); ++i) {
                    if (data_category[i] == cat) members.push_back(static_cast<int>(i));
                }
                const int avail = static_cast<int>(members.size());
                const int want = std::min(counts[static_cast<std::size_t>(cat)], avail);
                for (int i : rng.sample_without_replacement(avail, want)) {
                    ground_features.push_back(
                        data[static_cast<std::size_t>(members[static_cast<std::size_t>(i)])]);
                }
            }
            ground = GroundSet(std::move(ground_features));
        } else {
            SyntheticDataset ds = generate_synthetic_dataset(cfg.data, seed);
            data = std::move(ds.data);
            data_category = std::move(ds.data_category);
            ground = std::move(ds.ground);
            diameter = ds.diameter;
        }

        const int n_categories =
            1 + *std::max_element(data_category.begin(), data_category.end());
        Rng part_rng(derive_seed(seed, {stream::partition}));
        const auto shards =
            dirichlet_partition(data_category, n_categories, cfg.n_clients, cfg.dirichlet_alpha,
                                part_rng);

        ctx.constraint = MatroidConstraint::uniform(cfg.rank, static_cast<int>(ground.size()));
        ctx.objectives.reserve(shards.size());
        for (const auto& shard : shards) {
            std::vector<std::vector<double>> demand;
            demand.reserve(shard.size());
            for (int item : shard) demand.push_back(data[static_cast<std::size_t>(item)]);
            ctx.objectives.emplace_back(demand, ground, cfg.metric, diameter);
        }

        // normalization references
        FedConfig ref_cfg;
        ref_cfg.greedy = GreedyConfig{cfg.eta, cfg.rounds, cfg.n_samples};
        ref_cfg.participation = cfg.participation;
        ref_cfg.aggregator = Aggregator::mean;
        std::vector<ClientState<Objective>> ref_clients;
        for (std::size_t i = 0; i < ctx.objectives.size(); ++i) {
            ref_clients.push_back({static_cast<int>(i), ctx.objectives[i], AttackSpec{}});
        }
        ctx.max_solution = run_fedcg(ref_clients, ctx.constraint, ref_cfg, seed).solution;

        Rng min_rng(derive_seed(seed, {stream::min_ref}));
        for (int k = 0; k < kMinRefSamples; ++k) {
            ctx.random_subsets.push_back(ElementSubset(
                min_rng.sample_without_replacement(static_cast<int>(ground.size()), cfg.rank)));
        }

        return cache_.emplace(seed, std::move(ctx)).first->second;
    }

    RepeatResult run_repeat(const ExperimentConfig& cfg, std::uint64_t seed) {
        const SeedContext& ctx = context_for(cfg, seed);
        const int n = cfg.n_clients;

        Rng adv_rng(derive_seed(seed, {stream::adversary}));
        const std::vector<int> malicious =
            adv_rng.sample_without_replacement(n, cfg.malicious_count());
        std::vector<bool> is_bad(static_cast<std::size_t>(n), false);
        for (int id : malicious) is_bad[static_cast<std::size_t>(id)] = true;
        std::vector<int> honest_ids;
        for (int i = 0; i < n; ++i) {
            if (!is_bad[static_cast<std::size_t>(i)]) honest_ids.push_back(i);
        }

        std::vector<ClientState<Objective>> clients;
        clients.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            AttackSpec spec;  // honest
            if (is_bad[static_cast<std::size_t>(i)]) spec = cfg.attack;
            clients.push_back({i, ctx.objectives[static_cast<std::size_t>(i)], spec});
        }

        FedConfig fed_cfg;
        fed_cfg.greedy = GreedyConfig{cfg.eta, cfg.rounds, cfg.n_samples};
        fed_cfg.participation = cfg.participation;
        fed_cfg.aggregator = cfg.aggregator;
        fed_cfg.coreset_q = cfg.coreset_q;
        const auto run = run_fedcg(clients, ctx.constraint, fed_cfg, seed);

        RepeatResult rep;
        rep.seed = seed;
        rep.solution = run.solution;
        rep.max_ref = quality_metric(ctx.max_solution, ctx.objectives, honest_ids);
        double floor_total = 0.0;
        for (const auto& s : ctx.random_subsets) {
            floor_total += quality_metric(s, ctx.objectives, honest_ids);
        }
        rep.min_ref = floor_total / static_cast<double>(ctx.random_subsets.size());

        double bad_sim_total = 0.0, bad_div_total = 0.0;
        int bad_sim_rounds = 0, bad_div_rounds = 0;
        for (const auto& rec : run.rounds) {
            MetricRow row;
            row.round = rec.round;
            row.f_raw = quality_metric(round_to_subset(rec.x_after, ctx.constraint),
                                       ctx.objectives, honest_ids);
            row.f_norm = cfg.normalize ? normalize_quality(row.f_raw, rep.min_ref, rep.max_ref)
                                       : row.f_raw;
            row.coreset_sim = rec.coreset_sim;
            row.coreset_div = rec.coreset_div;
            row.committed = rec.committed;
            if (!rec.coreset_sim.empty()) {
                row.bad_frac_sim = bad_fraction(rec.coreset_sim, is_bad);
                bad_sim_total += row.bad_frac_sim;
                ++bad_sim_rounds;
            }
            if (!rec.coreset_div.empty()) {
                row.bad_frac_div = bad_fraction(rec.coreset_div, is_bad);
                bad_div_total += row.bad_frac_div;
                ++bad_div_rounds;
            }
            rep.rows.push_back(std::move(row));
        }
        if (bad_sim_rounds > 0) rep.mean_bad_frac_sim = bad_sim_total / bad_sim_rounds;
        if (bad_div_rounds > 0) rep.mean_bad_frac_div = bad_div_total / bad_div_rounds;
        rep.final_raw = rep.rows.back().f_raw;
        rep.final_norm = rep.rows.back().f_norm;
        return rep;
    }

    static double bad_fraction(const std::vector<int>& ids, const std::vector<bool>& is_bad) {
        int bad = 0;
        for (int id : ids) bad += is_bad[static_cast<std::size_t>(id)] ? 1 : 0;
        return static_cast<double>(bad) / static_cast<double>(ids.size());
    }

    std::map<std::uint64_t, SeedContext> cache_;
};

// ---------------------------------------------------------------------------
// CSV emission

inline void write_run_csv(const std::filesystem::path& dir, const std::string& scenario,
                          const RepeatResult& rep) {
    std::ofstream out(dir / ("run_" + scenario + "_" + std::to_string(rep.seed) + ".csv"));
    out << "round,f_raw,f_norm,bad_frac_sim,bad_frac_div,coreset_sim,coreset_div,committed\n";
    for (const MetricRow& row : rep.rows) {
        out << row.round << ',' << format_num(row.f_raw) << ',' << format_num(row.f_norm) << ',';
        if (row.bad_frac_sim >= 0.0) out << format_num(row.bad_frac_sim);
        out << ',';
        if (row.bad_frac_div >= 0.0) out << format_num(row.bad_frac_div);
        out << ',' << join_ids(row.coreset_sim) << ',' << join_ids(row.coreset_div) << ',';
        if (row.committed >= 0) out << row.committed;
        out << '\n';
    }
}

inline void write_summary_csv(const std::filesystem::path& dir,
                              const std::vector<ScenarioOutcome>& outcomes) {
    std::ofstream out(dir / "summary.csv");
    out << "scenario,aggregator,attack,beta,repeats,final_f_norm_mean,final_f_norm_std,"
           "final_f_raw_mean,mean_bad_frac_sim,mean_bad_frac_div\n";
    for (const ScenarioOutcome& sc : outcomes) {
        double bad_sim = 0.0, bad_div = 0.0;
        int n_sim = 0, n_div = 0;
        for (const auto& rep : sc.repeats) {
            if (rep.mean_bad_frac_sim >= 0.0) {
                bad_sim += rep.mean_bad_frac_sim;
                ++n_sim;
            }
            if (rep.mean_bad_frac_div >= 0.0) {
                bad_div += rep.mean_bad_frac_div;
                ++n_div;
            }
        }
        out << sc.scenario << ',' << to_string(sc.config.aggregator) << ','
            << to_string(sc.config.attack.kind) << ',' << format_num(sc.config.beta) << ','
            << sc.repeats.size() << ',' << format_num(sc.final_norm_mean) << ','
            << format_num(sc.final_norm_std) << ',' << format_num(sc.final_raw_mean) << ',';
        if (n_sim > 0) out << format_num(bad_sim / n_sim);
        out << ',';
        if (n_div > 0) out << format_num(bad_div / n_div);
        out << '\n';
    }
}

/// Long-format per-round aggregates, one row per (scenario, round), shaped
/// for direct plotting by external tools.
inline void write_plot_csv(const std::filesystem::path& dir,
                           const std::vector<ScenarioOutcome>& outcomes) {
    std::ofstream out(dir / "plot.csv");
    out << "scenario,round,f_norm_mean,f_norm_std\n";
    for (const ScenarioOutcome& sc : outcomes) {
        if (sc.repeats.empty()) continue;
        const std::size_t rounds = sc.repeats.front().rows.size();
        for (std::size_t t = 0; t < rounds; ++t) {
            double mean = 0.0;
            for (const auto& rep : sc.repeats) mean += rep.rows[t].f_norm;
            mean /= static_cast<double>(sc.repeats.size());
            double var = 0.0;
            for (const auto& rep : sc.repeats) {
                var += (rep.rows[t].f_norm - mean) * (rep.rows[t].f_norm - mean);
            }
            out << sc.scenario << ',' << (t + 1) << ',' << format_num(mean) << ','
                << format_num(std::sqrt(var / static_cast<double>(sc.repeats.size()))) << '\n';
        }
    }
}

inline void write_outcome_files(const std::filesystem::path& dir,
                                const std::vector<ScenarioOutcome>& outcomes) {
    std::filesystem::create_directories(dir);
    for (const ScenarioOutcome& sc : outcomes) {
        for (const RepeatResult& rep : sc.repeats) write_run_csv(dir, sc.scenario, rep);
    }
    write_summary_csv(dir, outcomes);
    write_plot_csv(dir, outcomes);
}

// ---------------------------------------------------------------------------
// JSON configuration

namespace detail {

inline void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                       const std::string& where) {
    if (!j.is_object()) throw std::invalid_argument(where + ": expected a JSON object");
    for (const auto& item : j.items()) {
        if (!allowed.contains(item.key())) {
            throw std::invalid_argument(where + ": unknown key '" + item.key() + "'");
        }
    }
}

}  // namespace detail

inline CategoryWeights weights_from_json(const nlohmann::json& w, const std::string& where) {
    detail::check_keys(w, {"kind", "exponent", "weights"}, where);
    CategoryWeights out;
    const std::string kind = w.at("kind").get<std::string>();
    if (kind == "uniform") {
        out.kind = CategoryWeights::Kind::uniform;
    } else if (kind == "zipf") {
        out.kind = CategoryWeights::Kind::zipf;
        if (w.contains("exponent")) out.zipf_exponent = w.at("exponent").get<double>();
    } else if (kind == "explicit") {
        out.kind = CategoryWeights::Kind::explicit_weights;
        out.weights = w.at("weights").get<std::vector<double>>();
    } else {
        throw std::invalid_argument(where + ".kind: unknown value '" + kind + "'");
    }
    return out;
}

inline AttackSpec attack_from_json(const nlohmann::json& j) {
    detail::check_keys(j, {"kind", "target_policy", "targets", "refresh"}, "attack");
    AttackSpec spec;
    spec.kind = parse_attack_kind(j.at("kind").get<std::string>());
    if (j.contains("target_policy")) {
        const std::string p = j.at("target_policy").get<std::string>();
        if (p == "worst_r") spec.target_policy = TargetPolicy::worst_r;
        else if (p == "top_r") spec.target_policy = TargetPolicy::top_r;
        else if (p == "explicit") spec.target_policy = TargetPolicy::explicit_set;
        else throw std::invalid_argument("attack.target_policy: unknown value '" + p + "'");
    } else if (spec.kind == AttackKind::exclude) {
        spec.target_policy = TargetPolicy::top_r;  // per the adversary setting in use
    }
    if (j.contains("targets")) {
        spec.explicit_targets = j.at("targets").get<std::vector<int>>();
    }
    if (j.contains("refresh")) {
        const std::string r = j.at("refresh").get<std::string>();
        if (r == "frozen") spec.refresh = TargetRefresh::frozen;
        else if (r == "per_round") spec.refresh = TargetRefresh::per_round;
        else throw std::invalid_argument("attack.refresh: unknown value '" + r + "'");
    }
    return spec;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    detail::check_keys(j,
                       {"name", "seed", "n_clients", "rank", "rounds", "eta", "n_samples", "beta",
                        "attack", "aggregator", "participation", "coreset_q", "dirichlet_alpha",
                        "metric", "repeats", "normalize", "data"},
                       "config");
    ExperimentConfig cfg;
    if (j.contains("name")) cfg.name = j.at("name").get<std::string>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("n_clients")) cfg.n_clients = j.at("n_clients").get<int>();
    if (j.contains("rank")) cfg.rank = j.at("rank").get<int>();
    if (j.contains("rounds")) cfg.rounds = j.at("rounds").get<int>();
    if (j.contains("eta")) cfg.eta = j.at("eta").get<double>();
    if (j.contains("n_samples")) cfg.n_samples = j.at("n_samples").get<int>();
    if (j.contains("beta")) cfg.beta = j.at("beta").get<double>();
    if (j.contains("attack")) cfg.attack = attack_from_json(j.at("attack"));
    if (j.contains("aggregator")) {
        cfg.aggregator = parse_aggregator(j.at("aggregator").get<std::string>());
    }
    if (j.contains("participation")) {
        const auto& p = j.at("participation");
        detail::check_keys(p, {"mode", "k"}, "participation");
        const std::string mode = p.at("mode").get<std::string>();
        if (mode == "full") {
            cfg.participation = ParticipationPolicy::full();
        } else if (mode == "partial") {
            cfg.participation = ParticipationPolicy::partial(p.at("k").get<int>());
        } else {
            throw std::invalid_argument("participation.mode: unknown value '" + mode + "'");
        }
    }
    if (j.contains("coreset_q")) cfg.coreset_q = j.at("coreset_q").get<double>();
    if (j.contains("dirichlet_alpha")) cfg.dirichlet_alpha = j.at("dirichlet_alpha").get<double>();
    if (j.contains("metric")) cfg.metric = parse_metric(j.at("metric").get<std::string>());
    if (j.contains("repeats")) cfg.repeats = j.at("repeats").get<int>();
    if (j.contains("normalize")) cfg.normalize = j.at("normalize").get<bool>();
    if (j.contains("data")) {
        const auto& d = j.at("data");
        detail::check_keys(d,
                           {"n_data", "n_ground", "feature_dim", "n_categories",
                            "category_weights", "ground_weights", "cluster_spread",
                            "features_csv"},
                           "data");
        if (d.contains("n_data")) cfg.data.n_data = d.at("n_data").get<int>();
        if (d.contains("n_ground")) cfg.data.n_ground = d.at("n_ground").get<int>();
        if (d.contains("feature_dim")) cfg.data.feature_dim = d.at("feature_dim").get<int>();
        if (d.contains("n_categories")) cfg.data.n_categories = d.at("n_categories").get<int>();
        if (d.contains("cluster_spread")) {
            cfg.data.cluster_spread = d.at("cluster_spread").get<double>();
        }
        if (d.contains("features_csv")) cfg.features_csv = d.at("features_csv").get<std::string>();
        if (d.contains("category_weights")) {
            cfg.data.category_weights =
                weights_from_json(d.at("category_weights"), "data.category_weights");
        }
        if (d.contains("ground_weights")) {
            cfg.data.ground_weights =
                weights_from_json(d.at("ground_weights"), "data.ground_weights");
        }
    }
    cfg.validate();
    return cfg;
}

inline nlohmann::json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

inline ExperimentConfig load_config(const std::string& path) {
    return config_from_json(parse_json_file(path));
}

/// Expand a grid document {"base": <config>, "vary": {...}} into the cross
/// product of scenarios. Recognized axes: attack (kind strings), beta,
/// aggregator.
inline std::vector<ExperimentConfig> expand_grid(const nlohmann::json& j) {
    detail::check_keys(j, {"base", "vary"}, "grid");
    const ExperimentConfig base = config_from_json(j.at("base"));
    std::vector<std::string> attacks{to_string(base.attack.kind)};
    std::vector<double> betas{base.beta};
    std::vector<std::string> aggregators{to_string(base.aggregator)};
    if (j.contains("vary")) {
        const auto& v = j.at("vary");
        detail::check_keys(v, {"attack", "beta", "aggregator"}, "vary");
        if (v.contains("attack")) attacks = v.at("attack").get<std::vector<std::string>>();
        if (v.contains("beta")) betas = v.at("beta").get<std::vector<double>>();
        if (v.contains("aggregator")) {
            aggregators = v.at("aggregator").get<std::vector<std::string>>();
        }
    }
    std::vector<ExperimentConfig> cells;
    for (const std::string& agg : aggregators) {
        for (const std::string& atk : attacks) {
            for (double beta : betas) {
                ExperimentConfig cfg = base;
                cfg.name.clear();  // force derived labels in grid mode
                cfg.aggregator = parse_aggregator(agg);
                cfg.attack.kind = parse_attack_kind(atk);
                if (cfg.attack.kind == AttackKind::exclude &&
                    cfg.attack.target_policy == TargetPolicy::worst_r) {
                    cfg.attack.target_policy = TargetPolicy::top_r;
                }
                cfg.beta = cfg.attack.kind == AttackKind::none ? 0.0 : beta;
                cfg.validate();
                cells.push_back(std::move(cfg));
            }
        }
    }
    return cells;
}

/// Execute one configured scenario (plus its reference runs) and emit the
/// per-round, summary, and plot CSVs into out_dir.
inline ScenarioOutcome run_experiment(const ExperimentConfig& cfg,
                                      const std::filesystem::path& out_dir) {
    ExperimentRunner runner;
    ScenarioOutcome outcome = runner.run_scenario(cfg);
    write_outcome_files(out_dir, {outcome});
    return outcome;
}

/// Execute every cell of a scenario grid with shared per-seed references
/// and emit one combined set of CSVs.
inline std::vector<ScenarioOutcome> run_grid(const std::vector<ExperimentConfig>& cells,
                                             const std::filesystem::path& out_dir) {
    ExperimentRunner runner;
    std::vector<ScenarioOutcome> outcomes;
    outcomes.reserve(cells.size());
    for (const ExperimentConfig& cfg : cells) {
        outcomes.push_back(runner.run_scenario(cfg));
    }
    write_outcome_files(out_dir, outcomes);
    return outcomes;
}

}  // namespace fedsub
