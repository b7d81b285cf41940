#pragma once

#include <vector>

#include "donq/game.hpp"
#include "donq/matrix_game.hpp"
#include "donq/rng.hpp"
#include "donq/schedule.hpp"

namespace donq {

// What one observe() did, for logging: visit count of the cell after the
// update, the rate and bonus applied, and the refreshed state value.
struct UpdateReport {
  long long tau = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double v_down = 0.0;
};

// Optimistic Nash Q-learning agent for the max-player. Keeps an optimistic
// Q-estimate q_bar, its running minimum q_bar_down (non-increasing per cell),
// and the state values v_bar_down; all initialized to H. After each observed
// step the visited cell is re-estimated in the artificial gamma-discounted
// game (gamma = 1 - 1/H), the policy at the visited state is recomputed as
// the Nash mixture of q_bar_down(s,.,.), and v_bar_down(s) becomes that
// matrix game's value. Everything else stays untouched, so a step costs one
// matrix-game solve regardless of the state-space size.
//
// Single-owner: one run mutates one agent.
class DonqAgent {
 public:
  DonqAgent(const DonqConfig& config, int num_states, int num_actions_max, int num_actions_min);

  // Samples an action from the current policy at s. Does not mutate.
  int act(int s, RandomStream& rng) const;

  // Processes one transition (s,a,b) -> s_next with the given reward, in the
  // fixed order: count, q_bar re-estimate (reading v_bar_down(s_next) before
  // any write), clip into q_bar_down, Nash recompute at s, value refresh.
  UpdateReport observe(int s, int a, int b, double reward, int s_next);

  const DonqConfig& config() const { return config_; }
  long long step() const { return step_; }
  int num_states() const { return S_; }
  int num_actions_max() const { return A_; }
  int num_actions_min() const { return B_; }

  const std::vector<double>& q_bar() const { return q_bar_; }
  const std::vector<double>& q_bar_down() const { return q_bar_down_; }
  const std::vector<double>& v_bar_down() const { return v_bar_down_; }
  const std::vector<long long>& visits() const { return visits_; }
  const MarkovPolicy& policy() const { return mu_; }
  // Internal minimizing mixture from the last Nash recompute per state; never
  // played against anyone, kept for consistency checks.
  const MarkovPolicy& internal_min_mixture() const { return nu_tilde_; }

  std::span<const double> q_bar_down_slice(int s) const {
    return {q_bar_down_.data() + static_cast<std::size_t>(s) * A_ * B_,
            static_cast<std::size_t>(A_) * B_};
  }

 private:
  int index(int s, int a, int b) const { return (s * A_ + a) * B_ + b; }

  DonqConfig config_;
  int S_, A_, B_;
  double gamma_;
  std::vector<double> q_bar_;
  std::vector<double> q_bar_down_;
  std::vector<double> v_bar_down_;
  std::vector<long long> visits_;
  MarkovPolicy mu_;
  MarkovPolicy nu_tilde_;
  long long step_ = 1;
};

}  // namespace donq
