#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "donq/game.hpp"
#include "donq/opponents.hpp"
#include "donq/schedule.hpp"

namespace donq {

struct HMode {
  enum class Kind { kExplicit, kHighProb, kExpected };
  Kind kind = Kind::kExplicit;
  double value = 2.0;  // used for kExplicit
};

struct DeltaMode {
  enum class Kind { kExplicit, kOneOverT };
  Kind kind = Kind::kExplicit;
  double value = 0.1;
};

struct DSource {
  enum class Kind { kUserSupplied, kEstimator };
  Kind kind = Kind::kEstimator;
  double value = 0.0;
};

// Everything one experiment needs. horizons carries one entry for a single
// run, several for a sweep; presets are re-derived per horizon.
struct ExperimentConfig {
  StochasticGame game;
  std::string game_desc;
  HMode h_mode;
  DeltaMode delta_mode;
  DSource d_source;
  OpponentSpec opponent;
  std::vector<long long> horizons;
  std::vector<std::uint64_t> seeds;
  double oracle_target_err = 1e-6;
  int initial_state = 0;

  void validate() const;  // throws ValidationError
};

// Ground truth shared by all episodes of an experiment: the average-reward
// game value and the diameter bound actually used.
struct ResolvedOracle {
  double j_star = 0.0;
  double j_star_error_bound = 0.0;
  double gamma_used = 0.0;
  double d_used = 0.0;
  std::string d_source_name;  // "user_supplied" or "estimator"
};

ResolvedOracle resolve_oracle(const ExperimentConfig& config);

// Agent parameters for one horizon, after applying the H/delta presets.
DonqConfig build_agent_config(const ExperimentConfig& config, long long T, double d_used);

struct EpisodeMeta {
  long long T = 0;
  std::uint64_t seed = 0;
  double H = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double d_used = 0.0;
  std::string d_source_name;
  double j_star = 0.0;
  double j_star_error_bound = 0.0;
  double steps_per_second = 0.0;
};

// Full trace of one episode plus its regret accounting.
struct RegretRecord {
  std::vector<int> states;       // s_t
  std::vector<int> actions_max;  // a_t
  std::vector<int> actions_min;  // b_t
  std::vector<double> rewards;   // r(s_t,a_t,b_t)
  double j_star = 0.0;
  std::vector<double> cum_regret;  // prefix sums of (j_star - r_t)
  EpisodeMeta meta;
};

// Prefix sums of (j_star - r_t).
std::vector<double> regret_series(std::span<const double> rewards, double j_star);

// Plays exactly T steps of the decentralized loop: agent draw, opponent draw,
// reward lookup, transition sample, agent update, opponent update. Agent,
// opponent and environment each use their own stream split from the seed, so
// swapping the opponent leaves the environment noise untouched.
// Bit-reproducible given (config, T, seed).
RegretRecord run_episode(const ExperimentConfig& config, long long T, std::uint64_t seed,
                         const ResolvedOracle& oracle);

// Convenience: resolves the oracle and runs horizons.front().
RegretRecord run_episode(const ExperimentConfig& config, std::uint64_t seed);

struct SweepEntry {
  long long T = 0;
  std::uint64_t seed = 0;
  double final_regret = 0.0;
};

struct SweepSummary {
  std::string game_desc;
  std::vector<SweepEntry> entries;  // ordered by (horizon index, seed index)
  struct PerHorizon {
    long long T = 0;
    double H = 0.0;
    double mean_final_regret = 0.0;
    double stderr_final_regret = 0.0;
    double mean_regret_per_step = 0.0;
  };
  std::vector<PerHorizon> means;
  double j_star = 0.0;
  double steps_per_second = 0.0;  // aggregate over all episodes
};

// All (T, seed) pairs, optionally across worker threads (0 = auto). Results
// are keyed by job slot, so they do not depend on the worker count. The first
// failing episode aborts the sweep, annotated with its (T, seed).
SweepSummary run_sweep(const ExperimentConfig& config, int threads = 0);

}  // namespace donq
