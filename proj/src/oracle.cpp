#include "donq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "donq/common.hpp"
#include "donq/matrix_game.hpp"

namespace donq {
namespace {

void check_game_dims(const StochasticGame& game) {
  if (!validate_game(game).ok()) throw ValidationError("oracle: invalid game instance");
}

// One Shapley backup: q(s,a,b) = r + gamma * sum_s' P(s'|s,a,b) v(s'),
// v_out(s) = val(q(s,.,.)). Policies are optionally captured.
void shapley_backup(const StochasticGame& game, double gamma, const std::vector<double>& v,
                    std::vector<double>& q, std::vector<double>& v_out, MarkovPolicy* mu,
                    MarkovPolicy* nu, double lp_tol) {
  const int S = game.num_states, A = game.num_actions_max, B = game.num_actions_min;
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a)
      for (int b = 0; b < B; ++b) {
        auto row = game.transition_row(s, a, b);
        double ev = 0.0;
        for (int sp = 0; sp < S; ++sp) ev += row[sp] * v[sp];
        q[game.reward_index(s, a, b)] = game.r(s, a, b) + gamma * ev;
      }
    const MatrixView slice{q.data() + static_cast<std::size_t>(s) * A * B, A, B};
    MatrixGameSolution sol = solve_matrix_game(slice, lp_tol);
    v_out[s] = sol.value;
    if (mu) std::copy(sol.max_policy.begin(), sol.max_policy.end(), mu->mutable_row(s).begin());
    if (nu) std::copy(sol.min_policy.begin(), sol.min_policy.end(), nu->mutable_row(s).begin());
  }
}

}  // namespace

DiscountedNashSolution shapley_iteration(const StochasticGame& game, double gamma, double tol,
                                         long long max_iters) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("shapley_iteration: gamma in (0,1)");
  if (!(tol > 0.0)) throw std::invalid_argument("shapley_iteration: tol must be positive");
  check_game_dims(game);
  const int S = game.num_states, A = game.num_actions_max, B = game.num_actions_min;
  // Matrix entries grow like 1/(1-gamma); the per-solve gap tolerance has to
  // scale with them or pivot rounding alone would trip it near gamma = 1.
  const double lp_tol = 1e-11 * std::max(1.0, 1.0 / (1.0 - gamma));

  DiscountedNashSolution out;
  out.gamma = gamma;
  out.q_star.assign(static_cast<std::size_t>(S) * A * B, 0.0);
  out.v_star.assign(S, 0.0);
  out.mu = MarkovPolicy::uniform(PlayerSide::kMax, S, A);
  out.nu = MarkovPolicy::uniform(PlayerSide::kMin, S, B);

  std::vector<double> v(S, 0.0), v_next(S, 0.0);
  const double plain_threshold = tol * (1.0 - gamma) / (2.0 * gamma);
  bool converged = false;
  double lo = 0.0, hi = 0.0;
  for (long long k = 1; k <= max_iters; ++k) {
    shapley_backup(game, gamma, v, out.q_star, v_next, nullptr, nullptr, lp_tol);
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (int s = 0; s < S; ++s) {
      const double d = v_next[s] - v[s];
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    const double sup = std::max(std::abs(lo), std::abs(hi));
    out.sup_change_trace.push_back(sup);
    out.iterations = k;
    v.swap(v_next);
    // Midpoint-corrected error bound: V* lies between V_k + gamma/(1-gamma)*lo
    // and V_k + gamma/(1-gamma)*hi, so after adding the midpoint offset the
    // remaining error is gamma*(hi-lo)/(2*(1-gamma)).
    const double span_err = gamma * (hi - lo) / (2.0 * (1.0 - gamma));
    if (span_err <= 0.5 * tol || sup <= plain_threshold) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw ConvergenceError("shapley_iteration: no convergence within max_iters",
                           gamma * (hi - lo) / (2.0 * (1.0 - gamma)));

  const double offset = gamma / (1.0 - gamma) * 0.5 * (hi + lo);
  for (double& x : v) x += offset;

  // Final backup from the corrected value: q and v stay mutually consistent
  // (v(s) is exactly the matrix value of q(s,.,.)), and the contraction step
  // keeps ||q - Q*|| <= gamma * tol/2.
  shapley_backup(game, gamma, v, out.q_star, out.v_star, &out.mu, &out.nu, lp_tol);
  ++out.iterations;

  // Achieved Bellman residual, measured independently of the loop above.
  double residual = 0.0;
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < A; ++a)
      for (int b = 0; b < B; ++b) {
        auto row = game.transition_row(s, a, b);
        double ev = 0.0;
        for (int sp = 0; sp < S; ++sp) ev += row[sp] * out.v_star[sp];
        residual = std::max(residual, std::abs(out.q_star[game.reward_index(s, a, b)] -
                                               game.r(s, a, b) - gamma * ev));
      }
  out.residual = residual;
  return out;
}

AverageRewardSolution average_nash_value(const StochasticGame& game, double target_err,
                                         double d_bound) {
  if (!(target_err > 0.0)) throw std::invalid_argument("average_nash_value: target_err > 0");
  if (!(d_bound >= 0.0)) throw std::invalid_argument("average_nash_value: d_bound >= 0");

  // Bias budget target_err/2 goes to the discount gap (1-gamma)*d_bound, the
  // other half to the solve tolerance in (1-gamma)-scaled units.
  double gamma;
  if (d_bound == 0.0) {
    gamma = 0.5;  // any discount is exact when the diameter is 0
  } else {
    gamma = std::clamp(1.0 - target_err / (2.0 * d_bound), 0.5, 1.0 - 1e-12);
  }
  const double bias = (1.0 - gamma) * d_bound;
  const double vi_tol_abs = 0.5 * target_err / (1.0 - gamma);

  DiscountedNashSolution sol = shapley_iteration(game, gamma, vi_tol_abs);

  AverageRewardSolution avg;
  avg.gamma_used = gamma;
  avg.j_star = (1.0 - gamma) * sol.v_star[0];
  // bias <= target_err/2 whenever the discount formula was not capped, so the
  // reported bound is normally exactly the requested budget.
  avg.error_bound = std::max(target_err, bias + 0.5 * target_err);
  avg.v_star_ref = std::move(sol.v_star);
  return avg;
}

double span(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("span: empty vector");
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

namespace {

// Expected-hitting-time value iteration for one (deterministic min-policy,
// target) pair. h(target) = 0; elsewhere h(s) = min_a 1 + sum_{s'!=target}
// P(s'|s,a,nu(s)) h(s'). Monotone from h = 0; divergence means the target is
// unreachable under some action-forced region.
std::vector<double> hitting_times(const StochasticGame& game, const std::vector<int>& nu,
                                  int target) {
  const int S = game.num_states, A = game.num_actions_max;
  std::vector<double> h(S, 0.0), h_next(S, 0.0);
  const double tol = 1e-12;
  const long long cap = 2'000'000;
  for (long long k = 0; k < cap; ++k) {
    double change = 0.0;
    for (int s = 0; s < S; ++s) {
      if (s == target) continue;
      double best = std::numeric_limits<double>::infinity();
      for (int a = 0; a < A; ++a) {
        auto row = game.transition_row(s, a, nu[s]);
        double v = 1.0;
        for (int sp = 0; sp < S; ++sp)
          if (sp != target) v += row[sp] * h[sp];
        best = std::min(best, v);
      }
      h_next[s] = best;
      change = std::max(change, std::abs(best - h[s]));
    }
    h.swap(h_next);
    if (change <= tol) return h;
    if (*std::max_element(h.begin(), h.end()) > 1e12)
      throw ConvergenceError("estimate_diameter: hitting time diverges (game not communicating?)",
                             change);
  }
  throw ConvergenceError("estimate_diameter: hitting-time iteration hit the cap", 0.0);
}

}  // namespace

DiameterEstimate estimate_diameter(const StochasticGame& game, std::uint64_t enumeration_cap) {
  check_game_dims(game);
  const int S = game.num_states, B = game.num_actions_min;

  double policy_count = std::pow(static_cast<double>(B), static_cast<double>(S));
  if (policy_count > static_cast<double>(enumeration_cap))
    throw ValidationError(
        "estimate_diameter: B^S exceeds the enumeration cap; supply the diameter bound directly "
        "(user_supplied mode)");
  const std::uint64_t num_policies = static_cast<std::uint64_t>(policy_count + 0.5);

  DiameterEstimate est;
  est.method = DiameterEstimate::Method::kDeterministicEnumeration;
  est.pairs.resize(static_cast<std::size_t>(S) * S);
  for (int s = 0; s < S; ++s)
    for (int t = 0; t < S; ++t) {
      auto& e = est.pairs[static_cast<std::size_t>(s) * S + t];
      e.from = s;
      e.to = t;
      e.hitting_time = -1.0;
    }

  std::vector<int> nu(S, 0);
  for (std::uint64_t idx = 0; idx < num_policies; ++idx) {
    std::uint64_t code = idx;
    for (int s = 0; s < S; ++s) {
      nu[s] = static_cast<int>(code % B);
      code /= B;
    }
    for (int target = 0; target < S; ++target) {
      std::vector<double> h = hitting_times(game, nu, target);
      for (int s = 0; s < S; ++s) {
        auto& e = est.pairs[static_cast<std::size_t>(s) * S + target];
        if (h[s] > e.hitting_time) {
          e.hitting_time = h[s];
          e.worst_opponent = idx;
        }
      }
    }
  }
  est.d_hat = 0.0;
  for (const auto& e : est.pairs) est.d_hat = std::max(est.d_hat, e.hitting_time);
  return est;
}

MarkovPolicy discounted_best_response_min(const StochasticGame& game, const MarkovPolicy& mu,
                                          double gamma, double tol, long long max_iters) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("discounted_best_response_min: gamma in (0,1)");
  if (!(tol > 0.0)) throw std::invalid_argument("discounted_best_response_min: tol > 0");
  check_game_dims(game);
  const int S = game.num_states, A = game.num_actions_max, B = game.num_actions_min;
  if (mu.owner != PlayerSide::kMax || mu.num_states != S || mu.num_actions != A || !mu.valid())
    throw ValidationError("discounted_best_response_min: mu is not a valid max-player policy");

  // Induced min-player MDP under fixed mu.
  std::vector<double> r_mu(static_cast<std::size_t>(S) * B, 0.0);
  std::vector<double> p_mu(static_cast<std::size_t>(S) * B * S, 0.0);
  for (int s = 0; s < S; ++s) {
    auto mrow = mu.row(s);
    for (int b = 0; b < B; ++b) {
      double* prow = p_mu.data() + (static_cast<std::size_t>(s) * B + b) * S;
      double rv = 0.0;
      for (int a = 0; a < A; ++a) {
        const double w = mrow[a];
        if (w == 0.0) continue;
        rv += w * game.r(s, a, b);
        auto row = game.transition_row(s, a, b);
        for (int sp = 0; sp < S; ++sp) prow[sp] += w * row[sp];
      }
      r_mu[static_cast<std::size_t>(s) * B + b] = rv;
    }
  }

  std::vector<double> v(S, 0.0), v_next(S, 0.0);
  bool converged = false;
  double change = 0.0;
  // Stop tight enough that a greedy policy against the final iterate is
  // tol-optimal: suboptimality <= 2*gamma*change/(1-gamma).
  const double threshold = tol * (1.0 - gamma) / (2.0 * gamma);
  for (long long k = 0; k < max_iters; ++k) {
    change = 0.0;
    for (int s = 0; s < S; ++s) {
      double best = std::numeric_limits<double>::infinity();
      for (int b = 0; b < B; ++b) {
        const double* prow = p_mu.data() + (static_cast<std::size_t>(s) * B + b) * S;
        double q = r_mu[static_cast<std::size_t>(s) * B + b];
        for (int sp = 0; sp < S; ++sp) q += gamma * prow[sp] * v[sp];
        best = std::min(best, q);
      }
      v_next[s] = best;
      change = std::max(change, std::abs(best - v[s]));
    }
    v.swap(v_next);
    if (change <= threshold) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw ConvergenceError("discounted_best_response_min: no convergence within max_iters",
                           change);

  MarkovPolicy nu{PlayerSide::kMin, S, B, {}};
  nu.dist.assign(static_cast<std::size_t>(S) * B, 0.0);
  for (int s = 0; s < S; ++s) {
    double best = std::numeric_limits<double>::infinity();
    int best_b = 0;
    for (int b = 0; b < B; ++b) {
      const double* prow = p_mu.data() + (static_cast<std::size_t>(s) * B + b) * S;
      double q = r_mu[static_cast<std::size_t>(s) * B + b];
      for (int sp = 0; sp < S; ++sp) q += gamma * prow[sp] * v[sp];
      if (q < best) {
        best = q;
        best_b = b;
      }
    }
    nu.dist[static_cast<std::size_t>(s) * B + best_b] = 1.0;
  }
  return nu;
}

}  // namespace donq
