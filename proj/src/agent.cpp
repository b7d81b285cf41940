#include "donq/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "donq/common.hpp"

namespace donq {

namespace {
constexpr double kLpTol = 1e-9;
}

DonqAgent::DonqAgent(const DonqConfig& config, int num_states, int num_actions_max,
                     int num_actions_min)
    : config_(config), S_(num_states), A_(num_actions_max), B_(num_actions_min) {
  config_.validate();
  if (S_ < 1 || A_ < 1 || B_ < 1) throw ValidationError("DonqAgent: dimensions must be positive");
  gamma_ = config_.gamma();
  const std::size_t cells = static_cast<std::size_t>(S_) * A_ * B_;
  q_bar_.assign(cells, config_.H);
  q_bar_down_.assign(cells, config_.H);
  v_bar_down_.assign(S_, config_.H);
  visits_.assign(cells, 0);
  mu_ = MarkovPolicy::uniform(PlayerSide::kMax, S_, A_);
  nu_tilde_ = MarkovPolicy::uniform(PlayerSide::kMin, S_, B_);
}

int DonqAgent::act(int s, RandomStream& rng) const {
  if (s < 0 || s >= S_) throw std::out_of_range("DonqAgent::act: state out of range");
  return rng.sample(mu_.row(s));
}

UpdateReport DonqAgent::observe(int s, int a, int b, double reward, int s_next) {
  if (s < 0 || s >= S_ || a < 0 || a >= A_ || b < 0 || b >= B_ || s_next < 0 || s_next >= S_)
    throw std::out_of_range("DonqAgent::observe: index out of range");
  if (!(reward >= 0.0 && reward <= 1.0))
    throw std::invalid_argument("DonqAgent::observe: reward outside [0,1]");

  const int cell = index(s, a, b);
  const long long tau = ++visits_[cell];
  const double alpha = learning_rate(config_.H, tau);
  const double beta = bonus(config_.d_bound, config_.H, config_.horizon_T, config_.delta, tau);

  // v_bar_down(s_next) read before any write this step (s_next may equal s).
  const double next_value = v_bar_down_[s_next];
  q_bar_[cell] = (1.0 - alpha) * q_bar_[cell] + alpha * (reward + gamma_ * next_value + beta);

  const double old_down = q_bar_down_[cell];
  q_bar_down_[cell] = std::min(q_bar_down_[cell], q_bar_[cell]);

  // Cheap always-on invariants: the clipped estimate never rises and stays
  // inside [0, H].
  if (q_bar_down_[cell] > old_down)
    throw std::logic_error("DonqAgent: q_bar_down increased");
  if (!(q_bar_down_[cell] >= 0.0 && q_bar_down_[cell] <= config_.H))
    throw std::logic_error("DonqAgent: q_bar_down left [0, H]");

  const MatrixView slice{q_bar_down_.data() + static_cast<std::size_t>(s) * A_ * B_, A_, B_};
  MatrixGameSolution nash = solve_matrix_game(slice, kLpTol);
  std::copy(nash.max_policy.begin(), nash.max_policy.end(), mu_.mutable_row(s).begin());
  std::copy(nash.min_policy.begin(), nash.min_policy.end(), nu_tilde_.mutable_row(s).begin());
  v_bar_down_[s] = nash.value;

  ++step_;
  return {tau, alpha, beta, nash.value};
}

}  // namespace donq
