#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "donq/rng.hpp"

namespace donq {

// Two-player zero-sum stochastic game over finite states and actions.
// The max-player picks a in [0, A), the min-player picks b in [0, B);
// reward(s,a,b) in [0,1] is paid to the max-player and the next state is
// drawn from transition(.|s,a,b). Immutable after construction, safe for
// concurrent reads.
struct StochasticGame {
  int num_states = 0;       // S
  int num_actions_max = 0;  // A
  int num_actions_min = 0;  // B
  std::vector<double> reward;      // [s][a][b], size S*A*B
  std::vector<double> transition;  // [s][a][b][s'], size S*A*B*S

  int reward_index(int s, int a, int b) const {
    return (s * num_actions_max + a) * num_actions_min + b;
  }
  double r(int s, int a, int b) const { return reward[reward_index(s, a, b)]; }

  std::span<const double> transition_row(int s, int a, int b) const {
    return {transition.data() + static_cast<std::size_t>(reward_index(s, a, b)) * num_states,
            static_cast<std::size_t>(num_states)};
  }

  // Reward slice r(s,.,.) as a contiguous A*B block.
  std::span<const double> reward_slice(int s) const {
    return {reward.data() + static_cast<std::size_t>(s) * num_actions_max * num_actions_min,
            static_cast<std::size_t>(num_actions_max) * num_actions_min};
  }
};

enum class PlayerSide { kMax, kMin };

// Per-state action distribution for one side.
struct MarkovPolicy {
  PlayerSide owner = PlayerSide::kMax;
  int num_states = 0;
  int num_actions = 0;
  std::vector<double> dist;  // [s][action]

  std::span<const double> row(int s) const {
    return {dist.data() + static_cast<std::size_t>(s) * num_actions,
            static_cast<std::size_t>(num_actions)};
  }
  std::span<double> mutable_row(int s) {
    return {dist.data() + static_cast<std::size_t>(s) * num_actions,
            static_cast<std::size_t>(num_actions)};
  }

  static MarkovPolicy uniform(PlayerSide owner, int num_states, int num_actions);
  // Point mass on one action in every state.
  static MarkovPolicy pure(PlayerSide owner, int num_states, int num_actions, int action);

  bool valid() const;
};

struct RewardLaw {
  enum class Kind { kUniform01, kBernoulli };
  Kind kind = Kind::kUniform01;
  double p = 0.5;  // Bernoulli success probability
};

// Recipe for a random game in which every transition row mixes a random
// simplex point with the uniform distribution: P = (1-eps)*Dirichlet + eps/S.
// Any eps > 0 makes every state reachable in one step under any policy pair,
// so generated games are always communicating.
struct GameGenSpec {
  int S = 1;
  int A = 1;
  int B = 1;
  double mixing_epsilon = 0.1;  // in (0, 1]
  RewardLaw reward_law;
  std::uint64_t seed = 0;
};

struct GameViolation {
  enum class Kind { kRewardRange, kNegativeProbability, kRowSum, kBadDimensions };
  Kind kind;
  int s = -1, a = -1, b = -1;
  double value = 0.0;
  std::string describe() const;
};

struct ValidationReport {
  std::vector<GameViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks every invariant; never throws. One violation entry per offending cell/row.
ValidationReport validate_game(const StochasticGame& game);

// Draws s' ~ P(.|s,a,b). Consumes exactly one rng draw.
int sample_transition(const StochasticGame& game, int s, int a, int b, RandomStream& rng);

StochasticGame generate_random_communicating_game(const GameGenSpec& spec, RandomStream& rng);

// Convenience overload seeding a generator stream from spec.seed.
StochasticGame generate_random_communicating_game(const GameGenSpec& spec);

// Max-player reward table flipped to the other side's viewpoint: the returned
// game has actions (B, A) and reward 1 - r(s,a,b) indexed [s][b][a]. Used to
// run a learner as the min-player of the original game.
StochasticGame mirror_game(const StochasticGame& game);

}  // namespace donq
