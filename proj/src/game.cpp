#include "donq/game.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "donq/common.hpp"

namespace donq {

MarkovPolicy MarkovPolicy::uniform(PlayerSide owner, int num_states, int num_actions) {
  MarkovPolicy p{owner, num_states, num_actions, {}};
  p.dist.assign(static_cast<std::size_t>(num_states) * num_actions, 1.0 / num_actions);
  return p;
}

MarkovPolicy MarkovPolicy::pure(PlayerSide owner, int num_states, int num_actions, int action) {
  if (action < 0 || action >= num_actions)
    throw std::invalid_argument("MarkovPolicy::pure: action out of range");
  MarkovPolicy p{owner, num_states, num_actions, {}};
  p.dist.assign(static_cast<std::size_t>(num_states) * num_actions, 0.0);
  for (int s = 0; s < num_states; ++s) p.dist[static_cast<std::size_t>(s) * num_actions + action] = 1.0;
  return p;
}

bool MarkovPolicy::valid() const {
  if (num_states < 1 || num_actions < 1) return false;
  if (dist.size() != static_cast<std::size_t>(num_states) * num_actions) return false;
  for (int s = 0; s < num_states; ++s) {
    double sum = 0.0;
    for (double x : row(s)) {
      if (!(x >= 0.0)) return false;
      sum += x;
    }
    if (!prob_sum_within_tolerance(sum)) return false;
  }
  return true;
}

std::string GameViolation::describe() const {
  char buf[160];
  switch (kind) {
    case Kind::kRewardRange:
      std::snprintf(buf, sizeof buf, "reward out of [0,1] at (s=%d,a=%d,b=%d): %.17g", s, a, b, value);
      break;
    case Kind::kNegativeProbability:
      std::snprintf(buf, sizeof buf, "negative transition probability in row (s=%d,a=%d,b=%d): %.17g",
                    s, a, b, value);
      break;
    case Kind::kRowSum:
      std::snprintf(buf, sizeof buf, "transition row (s=%d,a=%d,b=%d) sums to %.17g", s, a, b, value);
      break;
    case Kind::kBadDimensions:
      std::snprintf(buf, sizeof buf, "inconsistent dimensions (S=%d,A=%d,B=%d)", s, a, b);
      break;
  }
  return buf;
}

ValidationReport validate_game(const StochasticGame& game) {
  ValidationReport report;
  const int S = game.num_states, A = game.num_actions_max, B = game.num_actions_min;
  if (S < 1 || A < 1 || B < 1 ||
      game.reward.size() != static_cast<std::size_t>(S) * A * B ||
      game.transition.size() != static_cast<std::size_t>(S) * A * B * S) {
    report.violations.push_back({GameViolation::Kind::kBadDimensions, S, A, B, 0.0});
    return report;
  }
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < A; ++a)
      for (int b = 0; b < B; ++b) {
        const double rv = game.r(s, a, b);
        if (!(rv >= 0.0 && rv <= 1.0))
          report.violations.push_back({GameViolation::Kind::kRewardRange, s, a, b, rv});
        double sum = 0.0;
        bool negative = false;
        for (double p : game.transition_row(s, a, b)) {
          if (p < 0.0 && !negative) {
            report.violations.push_back({GameViolation::Kind::kNegativeProbability, s, a, b, p});
            negative = true;
          }
          sum += p;
        }
        if (!prob_sum_within_tolerance(sum))
          report.violations.push_back({GameViolation::Kind::kRowSum, s, a, b, sum});
      }
  return report;
}

int sample_transition(const StochasticGame& game, int s, int a, int b, RandomStream& rng) {
  if (s < 0 || s >= game.num_states || a < 0 || a >= game.num_actions_max || b < 0 ||
      b >= game.num_actions_min)
    throw std::out_of_range("sample_transition: index out of range");
  return rng.sample(game.transition_row(s, a, b));
}

StochasticGame generate_random_communicating_game(const GameGenSpec& spec, RandomStream& rng) {
  if (spec.S < 1 || spec.A < 1 || spec.B < 1)
    throw ValidationError("GameGenSpec: S, A, B must be positive");
  if (!(spec.mixing_epsilon > 0.0 && spec.mixing_epsilon <= 1.0))
    throw ValidationError("GameGenSpec: mixing_epsilon must be in (0,1]");
  if (spec.reward_law.kind == RewardLaw::Kind::kBernoulli &&
      !(spec.reward_law.p >= 0.0 && spec.reward_law.p <= 1.0))
    throw ValidationError("GameGenSpec: bernoulli p must be in [0,1]");

  StochasticGame game;
  game.num_states = spec.S;
  game.num_actions_max = spec.A;
  game.num_actions_min = spec.B;
  game.reward.resize(static_cast<std::size_t>(spec.S) * spec.A * spec.B);
  game.transition.resize(game.reward.size() * spec.S);

  for (double& r : game.reward) {
    if (spec.reward_law.kind == RewardLaw::Kind::kUniform01)
      r = rng.next_double();
    else
      r = rng.next_double() < spec.reward_law.p ? 1.0 : 0.0;
  }

  const double eps = spec.mixing_epsilon;
  std::vector<double> raw(spec.S);
  for (std::size_t row = 0; row < game.reward.size(); ++row) {
    // Dirichlet(1,...,1) point via normalized exponentials, then eps-mixed
    // with uniform. Every entry is at least eps/S by construction; the row
    // sum is 1 up to a few ulps, well inside kProbTolerance, so no
    // renormalization (which would break the exact eps/S floor).
    double total = 0.0;
    for (double& x : raw) {
      x = rng.exponential();
      total += x;
    }
    double* out = game.transition.data() + row * spec.S;
    for (int sp = 0; sp < spec.S; ++sp)
      out[sp] = (1.0 - eps) * (raw[sp] / total) + eps / spec.S;
    if (spec.S == 1) out[0] = 1.0;
  }
  return game;
}

StochasticGame generate_random_communicating_game(const GameGenSpec& spec) {
  RandomStream rng(spec.seed, RandomStream::Role::kGenerator);
  return generate_random_communicating_game(spec, rng);
}

StochasticGame mirror_game(const StochasticGame& game) {
  StochasticGame m;
  m.num_states = game.num_states;
  m.num_actions_max = game.num_actions_min;
  m.num_actions_min = game.num_actions_max;
  m.reward.resize(game.reward.size());
  m.transition.resize(game.transition.size());
  const int S = game.num_states;
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < game.num_actions_max; ++a)
      for (int b = 0; b < game.num_actions_min; ++b) {
        const int src = game.reward_index(s, a, b);
        const int dst = m.reward_index(s, b, a);
        m.reward[dst] = 1.0 - game.reward[src];
        auto row = game.transition_row(s, a, b);
        std::copy(row.begin(), row.end(),
                  m.transition.begin() + static_cast<std::size_t>(dst) * S);
      }
  return m;
}

}  // namespace donq
