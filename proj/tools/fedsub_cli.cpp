// Command-line front end: run single scenarios, scenario grids, and the
// small-instance oracle utilities.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fedsub/fedsub.hpp"

namespace {

struct OracleInputs {
    std::string features_csv;
    std::string demand_csv;  // optional; defaults to the feature file
    int rank = 1;
    std::string metric = "cosine";
};

struct OracleInstance {
    fedsub::GroundSet ground;
    fedsub::FacilityLocationObjective objective;
    fedsub::MatroidConstraint constraint;
};

OracleInstance load_oracle_instance(const OracleInputs& in) {
    const auto rows = fedsub::load_feature_csv(in.features_csv);
    std::vector<std::vector<double>> ground_features;
    ground_features.reserve(rows.size());
    for (const auto& row : rows) ground_features.push_back(row.features);

    std::vector<std::vector<double>> demand = ground_features;
    if (!in.demand_csv.empty()) {
        demand.clear();
        for (const auto& row : fedsub::load_feature_csv(in.demand_csv)) {
            demand.push_back(row.features);
        }
    }

    double diameter = 0.0;
    for (std::size_t i = 0; i < ground_features.size(); ++i) {
        for (std::size_t j = i + 1; j < ground_features.size(); ++j) {
            double sq = 0.0;
            for (std::size_t d = 0; d < ground_features[i].size(); ++d) {
                const double diff = ground_features[i][d] - ground_features[j][d];
                sq += diff * diff;
            }
            diameter = std::max(diameter, sq);
        }
    }
    diameter = std::sqrt(diameter);

    fedsub::GroundSet ground(std::move(ground_features));
    fedsub::FacilityLocationObjective objective(demand, ground, fedsub::parse_metric(in.metric),
                                                diameter);
    auto constraint = fedsub::MatroidConstraint::uniform(in.rank, static_cast<int>(ground.size()));
    return OracleInstance{std::move(ground), std::move(objective), constraint};
}

void print_solution(const std::string& label, const fedsub::ElementSubset& s, double value) {
    std::cout << label << "," << fedsub::format_num(value) << ","
              << fedsub::join_ids(s.members()) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Federated submodular maximization simulator"};
    app.require_subcommand(1);

    // ---- run ----
    std::string run_config;
    std::string run_out = "out";
    std::optional<int> run_repeats;
    std::optional<std::uint64_t> run_seed;
    auto* run_cmd = app.add_subcommand("run", "Run one configured scenario");
    run_cmd->add_option("--config", run_config, "JSON scenario config")->required();
    run_cmd->add_option("--out", run_out, "Output directory");
    run_cmd->add_option("--repeats", run_repeats, "Override config repeats");
    run_cmd->add_option("--seed", run_seed, "Override config seed");

    // ---- grid ----
    std::string grid_config;
    std::string grid_out = "out";
    auto* grid_cmd = app.add_subcommand("grid", "Run a scenario grid (base + vary axes)");
    grid_cmd->add_option("--config", grid_config, "JSON grid config")->required();
    grid_cmd->add_option("--out", grid_out, "Output directory");

    // ---- oracle ----
    auto* oracle_cmd = app.add_subcommand("oracle", "Small-instance reference solvers");
    oracle_cmd->require_subcommand(1);
    OracleInputs oin;
    fedsub::GreedyConfig ocfg;
    std::uint64_t oracle_seed = 1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--features", oin.features_csv, "Ground-set feature CSV (id,category,f0..)")
            ->required();
        cmd->add_option("--demand", oin.demand_csv, "Demand feature CSV (defaults to --features)");
        cmd->add_option("--rank", oin.rank, "Cardinality constraint")->required();
        cmd->add_option("--metric", oin.metric, "cosine | scaled-euclidean");
    };
    auto* bf_cmd = oracle_cmd->add_subcommand("bruteforce", "Exhaustive optimum (|E| <= 20)");
    add_common(bf_cmd);
    auto* greedy_cmd = oracle_cmd->add_subcommand("greedy", "Discrete forward greedy");
    add_common(greedy_cmd);
    auto* cont_cmd = oracle_cmd->add_subcommand("continuous", "Centralized continuous greedy");
    add_common(cont_cmd);
    cont_cmd->add_option("--eta", ocfg.eta, "Learning rate");
    cont_cmd->add_option("--rounds", ocfg.rounds, "Number of steps");
    cont_cmd->add_option("--samples", ocfg.n_samples, "Gradient samples per step");
    cont_cmd->add_option("--seed", oracle_seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            fedsub::ExperimentConfig cfg = fedsub::load_config(run_config);
            if (run_repeats) cfg.repeats = *run_repeats;
            if (run_seed) cfg.seed = *run_seed;
            cfg.validate();
            const auto outcome = fedsub::run_experiment(cfg, run_out);
            std::cout << "scenario " << outcome.scenario << ": final normalized f* = "
                      << fedsub::format_num(outcome.final_norm_mean) << " +/- "
                      << fedsub::format_num(outcome.final_norm_std) << " over "
                      << outcome.repeats.size() << " repeats\n";
            std::cout << "wrote " << run_out << "/summary.csv\n";
        } else if (grid_cmd->parsed()) {
            const auto cells = fedsub::expand_grid(fedsub::parse_json_file(grid_config));
            const auto outcomes = fedsub::run_grid(cells, grid_out);
            for (const auto& outcome : outcomes) {
                std::cout << outcome.scenario << ","
                          << fedsub::format_num(outcome.final_norm_mean) << ","
                          << fedsub::format_num(outcome.final_norm_std) << "\n";
            }
            std::cout << "wrote " << grid_out << "/summary.csv (" << outcomes.size()
                      << " scenarios)\n";
        } else if (bf_cmd->parsed()) {
            const auto inst = load_oracle_instance(oin);
            const auto [subset, value] = fedsub::brute_force_opt(inst.objective, inst.constraint);
            print_solution("bruteforce", subset, value);
        } else if (greedy_cmd->parsed()) {
            const auto inst = load_oracle_instance(oin);
            const auto subset = fedsub::discrete_greedy(inst.objective, inst.constraint);
            print_solution("greedy", subset, fedsub::objective_value(inst.objective, subset));
        } else if (cont_cmd->parsed()) {
            const auto inst = load_oracle_instance(oin);
            const auto result =
                fedsub::run_continuous_greedy(inst.objective, ocfg, inst.constraint, oracle_seed);
            print_solution("continuous", result.solution,
                           fedsub::objective_value(inst.objective, result.solution));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
