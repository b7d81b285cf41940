#pragma once

#include <iosfwd>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "donq/game.hpp"
#include "donq/harness.hpp"
#include "donq/matrix_game.hpp"
#include "donq/oracle.hpp"

namespace donq {

// Game files: {"S":int,"A":int,"B":int,"r":[[[...]]],"P":[[[[...]]]]} with
// r[s][a][b] and P[s][a][b][s']. Rows whose sum is within kProbTolerance of 1
// are renormalized on load; anything further off is rejected with the index.
StochasticGame load_game(const std::string& path);
void save_game(const StochasticGame& game, const std::string& path);

// Policy files: {"owner":"max"|"min","dist":[[...]]}.
MarkovPolicy load_policy(const std::string& path);
void save_policy(const MarkovPolicy& policy, const std::string& path);

// Matrix files for the nash subcommand: {"M":[[...]]}. Returns (entries, rows, cols).
std::tuple<std::vector<double>, int, int> load_matrix(const std::string& path);

// Experiment configs, strict: unknown keys are fatal, referenced files are
// loaded at parse time.
ExperimentConfig load_config(const std::string& path);

// Episode CSV: header t,s,a,b,reward,cum_regret; floats carry 17 significant
// digits so they round-trip.
void write_episode_csv(const RegretRecord& record, std::ostream& out);

std::string sweep_summary_to_json(const SweepSummary& summary);
std::string diameter_to_json(const DiameterEstimate& estimate);
std::string average_value_to_json(const AverageRewardSolution& solution);
std::string matrix_solution_to_json(const MatrixGameSolution& solution);
std::string validation_report_to_json(const ValidationReport& report);

}  // namespace donq
