#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "donq/game.hpp"

namespace donq {

// Nash solution of the gamma-discounted game: q_star is [s][a][b], v_star(s)
// is the matrix-game value of q_star(s,.,.), and (mu, nu) the per-state Nash
// pair of those matrix games. residual is the achieved Bellman residual
// max |q - r - gamma*P v| measured after the final iterate.
struct DiscountedNashSolution {
  double gamma = 0.0;
  std::vector<double> q_star;  // S*A*B
  std::vector<double> v_star;  // S
  MarkovPolicy mu;
  MarkovPolicy nu;
  double residual = 0.0;
  long long iterations = 0;
  // Sup-norm change per iteration, for contraction diagnostics.
  std::vector<double> sup_change_trace;
};

// Fixed-point iteration Q <- r + gamma * P val(Q) from Q = 0. Stops once the
// value error is certified below tol: either the plain contraction criterion
// (sup change <= tol*(1-gamma)/(2*gamma)) or, earlier, the span criterion
// gamma*sp(delta)/(2*(1-gamma)) <= tol/2 with a midpoint offset correction.
// The span rule fires no later than the plain one (sp <= 2*sup) and makes
// discounts near 1 tractable on mixing games, where the iterate's shape
// converges long before its level. Guarantees ||Q - Q*||_inf <= tol.
DiscountedNashSolution shapley_iteration(const StochasticGame& game, double gamma, double tol,
                                         long long max_iters = 1'000'000);

struct AverageRewardSolution {
  double j_star = 0.0;
  double gamma_used = 0.0;
  double error_bound = 0.0;        // |j_star - true game value| is at most this
  std::vector<double> v_star_ref;  // discounted V* the value was scaled from
};

// Average-reward game value by vanishing discount: picks gamma so the
// discount bias (1-gamma)*d_bound stays below target_err/2, solves the
// discounted game to the matching tolerance, and returns (1-gamma)*V*(s0).
// d_bound must upper-bound the game diameter (0 is legal for single-state
// games, where the bias vanishes for any discount).
AverageRewardSolution average_nash_value(const StochasticGame& game, double target_err,
                                         double d_bound);

// max(v) - min(v); throws on empty input.
double span(std::span<const double> v);

struct DiameterEstimate {
  enum class Method { kUserSupplied, kDeterministicEnumeration };
  struct PairEntry {
    int from = 0;
    int to = 0;
    std::uint64_t worst_opponent = 0;  // index of the worst deterministic min-policy
    double hitting_time = 0.0;         // min-over-max-player expected time, at that opponent
  };
  double d_hat = 0.0;
  Method method = Method::kDeterministicEnumeration;
  std::vector<PairEntry> pairs;  // one entry per (from, to)
};

// Upper envelope of expected hitting times: for every deterministic min-player
// policy (enumerated; there are B^S) and every target state, solves the
// max-player's hitting-time minimization as a stochastic-shortest-path value
// iteration, then takes the max over (start, target, policy). Hitting time of
// a state from itself is 0. Enumeration beyond `enumeration_cap` is refused.
DiameterEstimate estimate_diameter(const StochasticGame& game,
                                   std::uint64_t enumeration_cap = 1'000'000);

// Min-player policy minimizing the discounted value against a fixed mu, via
// value iteration on the induced MDP; the returned deterministic policy has
// Bellman residual at most tol. Ties break to the lowest action index.
MarkovPolicy discounted_best_response_min(const StochasticGame& game, const MarkovPolicy& mu,
                                          double gamma, double tol,
                                          long long max_iters = 10'000'000);

}  // namespace donq
