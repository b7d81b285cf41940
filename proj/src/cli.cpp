#include "donq/cli.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "donq/common.hpp"
#include "donq/game.hpp"
#include "donq/harness.hpp"
#include "donq/io.hpp"
#include "donq/matrix_game.hpp"
#include "donq/oracle.hpp"

namespace donq {
namespace {

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file: " + out_path);
    out << text;
  }
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"DONQ-learning simulator for average-reward zero-sum stochastic games"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random communicating game");
  GameGenSpec gen_spec;
  std::string gen_reward_law = "uniform01";
  std::string gen_out;
  gen->add_option("--S", gen_spec.S, "number of states")->required();
  gen->add_option("--A", gen_spec.A, "max-player actions")->required();
  gen->add_option("--B", gen_spec.B, "min-player actions")->required();
  gen->add_option("--eps", gen_spec.mixing_epsilon, "uniform mixing weight in (0,1]");
  gen->add_option("--reward-law", gen_reward_law, "uniform01 or bernoulli=<p>");
  gen->add_option("--seed", gen_spec.seed, "generator seed");
  gen->add_option("--out", gen_out, "output game file (default stdout)");

  // validate
  auto* validate = app.add_subcommand("validate", "check a game file against its invariants");
  std::string validate_path;
  validate->add_option("file", validate_path, "game JSON file")->required();

  // nash
  auto* nash = app.add_subcommand("nash", "solve a zero-sum matrix game");
  std::string nash_path, nash_out;
  double nash_tol = 1e-9;
  nash->add_option("file", nash_path, "matrix JSON file {\"M\":[[...]]}")->required();
  nash->add_option("--tol", nash_tol, "duality gap tolerance");
  nash->add_option("--out", nash_out, "output file (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "average-reward game value via vanishing discount");
  std::string solve_path, solve_out;
  double solve_target_err = 1e-6;
  std::optional<double> solve_d_bound;
  solve->add_option("file", solve_path, "game JSON file")->required();
  solve->add_option("--target-err", solve_target_err, "error budget for J*");
  solve->add_option("--d-bound", solve_d_bound, "diameter upper bound (default: estimate)");
  solve->add_option("--out", solve_out, "output file (default stdout)");

  // diameter
  auto* diameter = app.add_subcommand("diameter", "estimate the game diameter");
  std::string diameter_path, diameter_out;
  std::uint64_t diameter_cap = 1'000'000;
  diameter->add_option("file", diameter_path, "game JSON file")->required();
  diameter->add_option("--cap", diameter_cap, "max number of enumerated opponent policies");
  diameter->add_option("--out", diameter_out, "output file (default stdout)");

  // run
  auto* run = app.add_subcommand("run", "single episode, CSV trace");
  std::string run_config, run_out;
  std::optional<std::uint64_t> run_seed;
  run->add_option("config", run_config, "experiment config JSON")->required();
  run->add_option("--seed", run_seed, "override the config's first seed");
  run->add_option("--out", run_out, "output CSV file (default stdout)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "all (T, seed) pairs, JSON summary");
  std::string sweep_config, sweep_out;
  int sweep_threads = 0;
  sweep->add_option("config", sweep_config, "experiment config JSON")->required();
  sweep->add_option("--threads", sweep_threads, "worker threads (0 = hardware)");
  sweep->add_option("--out", sweep_out, "output JSON file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (gen->parsed()) {
    if (gen_reward_law == "uniform01") {
      gen_spec.reward_law.kind = RewardLaw::Kind::kUniform01;
    } else if (gen_reward_law.rfind("bernoulli=", 0) == 0) {
      gen_spec.reward_law.kind = RewardLaw::Kind::kBernoulli;
      gen_spec.reward_law.p = std::stod(gen_reward_law.substr(10));
    } else {
      throw ValidationError("gen: --reward-law must be uniform01 or bernoulli=<p>");
    }
    StochasticGame game = generate_random_communicating_game(gen_spec);
    if (gen_out.empty()) throw ValidationError("gen: --out is required");
    save_game(game, gen_out);
  } else if (validate->parsed()) {
    // The loader itself rejects hard violations; surface those as a failed
    // report rather than a bare error.
    try {
      StochasticGame game = load_game(validate_path);
      ValidationReport report = validate_game(game);
      std::cout << validation_report_to_json(report);
      if (!report.ok()) return 1;
    } catch (const ValidationError& e) {
      nlohmann::ordered_json j;
      j["ok"] = false;
      j["violations"] = {std::string(e.what())};
      std::cout << j.dump(2) << "\n";
      return 1;
    }
  } else if (nash->parsed()) {
    auto [data, rows, cols] = load_matrix(nash_path);
    MatrixGameSolution sol = solve_matrix_game({data.data(), rows, cols}, nash_tol);
    emit(matrix_solution_to_json(sol), nash_out);
  } else if (solve->parsed()) {
    StochasticGame game = load_game(solve_path);
    const double d =
        solve_d_bound ? *solve_d_bound : estimate_diameter(game).d_hat;
    AverageRewardSolution sol = average_nash_value(game, solve_target_err, d);
    emit(average_value_to_json(sol), solve_out);
  } else if (diameter->parsed()) {
    StochasticGame game = load_game(diameter_path);
    emit(diameter_to_json(estimate_diameter(game, diameter_cap)), diameter_out);
  } else if (run->parsed()) {
    ExperimentConfig config = load_config(run_config);
    const std::uint64_t seed = run_seed ? *run_seed : config.seeds.front();
    RegretRecord rec = run_episode(config, seed);
    std::ostringstream csv;
    write_episode_csv(rec, csv);
    emit(csv.str(), run_out);
  } else if (sweep->parsed()) {
    ExperimentConfig config = load_config(sweep_config);
    SweepSummary summary = run_sweep(config, sweep_threads);
    emit(sweep_summary_to_json(summary), sweep_out);
  }
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  try {
    return run_cli(argc, argv);
  } catch (const ConvergenceError& e) {
    std::cerr << "error (non-convergence): " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace donq
