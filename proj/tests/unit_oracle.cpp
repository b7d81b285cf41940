#include "donq/oracle.hpp"

#include <cmath>
#include <doctest.h>

#include "donq/common.hpp"
#include "donq/matrix_game.hpp"
#include "support/test_util.hpp"

using namespace donq;
using donq::testing::evaluate_policy_pair;
using donq::testing::matrix_as_game;
using donq::testing::rps_game;
using donq::testing::rps_matrix;

TEST_CASE("shapley iteration on single-state games is a geometric series") {
  RandomStream rng(3);
  auto m = donq::testing::random_matrix(3, 4, rng);
  StochasticGame g = matrix_as_game(m, 3, 4);
  const double gamma = 0.8;
  auto sol = shapley_iteration(g, gamma, 1e-10);
  const double val = solve_matrix_game(make_view(m, 3, 4)).value;
  CHECK(sol.v_star[0] == doctest::Approx(val / (1.0 - gamma)).epsilon(1e-9));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 4; ++b)
      CHECK(sol.q_star[g.reward_index(0, a, b)] ==
            doctest::Approx(m[static_cast<std::size_t>(a) * 4 + b] + gamma * val / (1.0 - gamma))
                .epsilon(1e-9));
}

TEST_CASE("constant rewards give the constant value everywhere") {
  StochasticGame g;
  g.num_states = 3;
  g.num_actions_max = 2;
  g.num_actions_min = 2;
  g.reward.assign(12, 0.5);
  g.transition.assign(36, 1.0 / 3);
  auto sol = shapley_iteration(g, 0.9, 1e-10);
  for (double v : sol.v_star) CHECK(v == doctest::Approx(0.5 / 0.1).epsilon(1e-9));
}

TEST_CASE("shapley residual, bounds and contraction trace") {
  GameGenSpec spec{2, 2, 2, 0.2, {}, 3};
  StochasticGame g = generate_random_communicating_game(spec);
  const double gamma = 0.9, tol = 1e-8;
  auto sol = shapley_iteration(g, gamma, tol);

  // residual recomputed independently of the solver's own bookkeeping
  double residual = 0.0;
  for (int s = 0; s < 2; ++s)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        auto row = g.transition_row(s, a, b);
        double ev = 0.0;
        for (int sp = 0; sp < 2; ++sp) ev += row[sp] * sol.v_star[sp];
        residual = std::max(residual, std::abs(sol.q_star[g.reward_index(s, a, b)] -
                                               g.r(s, a, b) - gamma * ev));
      }
  CHECK(residual <= tol);
  CHECK(residual <= sol.residual + 1e-15);

  // v_star is the matrix value of each q slice
  for (int s = 0; s < 2; ++s) {
    const MatrixView slice{sol.q_star.data() + static_cast<std::size_t>(s) * 4, 2, 2};
    CHECK(solve_matrix_game(slice).value == doctest::Approx(sol.v_star[s]).epsilon(1e-10));
  }

  // 0 <= Q <= 1/(1-gamma), up to the solve tolerance
  for (double q : sol.q_star) {
    CHECK(q >= -tol);
    CHECK(q <= 1.0 / (1.0 - gamma) + tol);
  }

  // successive value changes contract at rate gamma (plus matrix-solve noise)
  for (std::size_t k = 1; k < sol.sup_change_trace.size(); ++k)
    CHECK(sol.sup_change_trace[k] <= gamma * sol.sup_change_trace[k - 1] + 1e-9);
}

TEST_CASE("shapley near gamma=1 stays cheap on mixing games") {
  GameGenSpec spec{3, 2, 2, 0.3, {}, 17};
  StochasticGame g = generate_random_communicating_game(spec);
  const double gamma = 1.0 - 1e-7;
  auto sol = shapley_iteration(g, gamma, /*tol=*/10.0);
  CHECK(sol.iterations < 2000);
  // scaled values must collapse to (almost) a single number in [0,1]
  double lo = 1e300, hi = -1e300;
  for (double v : sol.v_star) {
    lo = std::min(lo, (1.0 - gamma) * v);
    hi = std::max(hi, (1.0 - gamma) * v);
  }
  CHECK(hi - lo <= 1e-6);
  CHECK(hi <= 1.0 + 1e-6);
  CHECK(lo >= -1e-6);
}

TEST_CASE("average_nash_value matches single-state matrix values") {
  SUBCASE("rock-paper-scissors value is one half") {
    auto avg = average_nash_value(rps_game(), 1e-6, 0.0);
    CHECK(std::abs(avg.j_star - 0.5) <= 1e-6);
    CHECK(avg.error_bound == doctest::Approx(1e-6));
  }

  SUBCASE("constant reward game") {
    StochasticGame g;
    g.num_states = 2;
    g.num_actions_max = 2;
    g.num_actions_min = 1;
    g.reward.assign(4, 0.37);
    g.transition.assign(8, 0.5);
    auto est = estimate_diameter(g);
    auto avg = average_nash_value(g, 1e-6, est.d_hat);
    CHECK(std::abs(avg.j_star - 0.37) <= 1e-6);
  }

  SUBCASE("scaled values agree across states on a generated game") {
    GameGenSpec spec{3, 2, 2, 0.2, {}, 9};
    StochasticGame g = generate_random_communicating_game(spec);
    const double target = 1e-4;
    auto est = estimate_diameter(g);
    auto avg = average_nash_value(g, target, est.d_hat);
    for (double v : avg.v_star_ref) {
      CHECK(std::abs((1.0 - avg.gamma_used) * v - avg.j_star) <= 2 * target);
    }
  }
}

TEST_CASE("span") {
  std::vector<double> constant{0.3, 0.3, 0.3};
  CHECK(span(constant) == 0.0);
  std::vector<double> pair{0.0, 1.0};
  CHECK(span(pair) == 1.0);
  CHECK_THROWS_AS(span(std::span<const double>{}), std::invalid_argument);
}

TEST_CASE("diameter estimation") {
  SUBCASE("single state has diameter 0") {
    auto est = estimate_diameter(rps_game());
    CHECK(est.d_hat == 0.0);
    REQUIRE(est.pairs.size() == 1);
    CHECK(est.pairs[0].hitting_time == 0.0);
  }

  SUBCASE("deterministic two-state swap has diameter 1") {
    StochasticGame g;
    g.num_states = 2;
    g.num_actions_max = 2;
    g.num_actions_min = 2;
    g.reward.assign(8, 0.0);
    g.transition.assign(16, 0.0);
    for (int s = 0; s < 2; ++s)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          g.transition[static_cast<std::size_t>(g.reward_index(s, a, b)) * 2 + (1 - s)] = 1.0;
    auto est = estimate_diameter(g);
    CHECK(est.d_hat == doctest::Approx(1.0).epsilon(1e-9));
  }

  SUBCASE("mixing floor bounds the diameter: eps=0.5, S=2 gives d <= 4") {
    GameGenSpec spec{2, 2, 2, 0.5, {}, 31};
    StochasticGame g = generate_random_communicating_game(spec);
    auto est = estimate_diameter(g);
    CHECK(est.d_hat >= 0.0);
    CHECK(est.d_hat <= 4.0 + 1e-9);
  }

  SUBCASE("span of discounted values is below the diameter estimate") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      GameGenSpec spec{3, 2, 2, 0.25, {}, seed};
      StochasticGame g = generate_random_communicating_game(spec);
      auto est = estimate_diameter(g);
      auto sol = shapley_iteration(g, 0.99, 1e-9);
      CHECK(span(sol.v_star) <= est.d_hat + 1e-6);
    }
  }

  SUBCASE("enumeration cap is enforced") {
    GameGenSpec spec{4, 2, 3, 0.3, {}, 5};
    StochasticGame g = generate_random_communicating_game(spec);
    CHECK_THROWS_AS(estimate_diameter(g, 10), ValidationError);
  }
}

TEST_CASE("discounted best response for the min player") {
  SUBCASE("uniform max policy in RPS: any pure reply works, lowest index returned") {
    StochasticGame g = rps_game();
    MarkovPolicy mu = MarkovPolicy::uniform(PlayerSide::kMax, 1, 3);
    MarkovPolicy nu = discounted_best_response_min(g, mu, 0.9, 1e-9);
    CHECK(nu.row(0)[0] == 1.0);
    auto v = evaluate_policy_pair(g, mu, nu, 0.9);
    CHECK(v[0] == doctest::Approx(0.5 / 0.1).epsilon(1e-8));
  }

  SUBCASE("pure rock gets punished by paper") {
    StochasticGame g = rps_game();
    MarkovPolicy mu = MarkovPolicy::pure(PlayerSide::kMax, 1, 3, 0);
    MarkovPolicy nu = discounted_best_response_min(g, mu, 0.9, 1e-9);
    CHECK(nu.row(0)[1] == 1.0);  // paper holds rock to zero
    auto v = evaluate_policy_pair(g, mu, nu, 0.9);
    CHECK(v[0] == doctest::Approx(0.0).epsilon(1e-8));
  }

  SUBCASE("no random stationary reply does better, by Monte-Carlo cross-check") {
    GameGenSpec spec{2, 2, 3, 0.2, {}, 41};
    StochasticGame g = generate_random_communicating_game(spec);
    RandomStream rng(4);
    MarkovPolicy mu{PlayerSide::kMax, 2, 2, {}};
    mu.dist.resize(4);
    for (int s = 0; s < 2; ++s) {
      const double u = rng.next_double();
      mu.dist[static_cast<std::size_t>(s) * 2] = u;
      mu.dist[static_cast<std::size_t>(s) * 2 + 1] = 1.0 - u;
    }
    const double gamma = 0.9, tol = 1e-8;
    MarkovPolicy nu = discounted_best_response_min(g, mu, gamma, tol);
    auto v_br = evaluate_policy_pair(g, mu, nu, gamma);
    for (int trial = 0; trial < 100; ++trial) {
      MarkovPolicy other{PlayerSide::kMin, 2, 3, {}};
      other.dist.resize(6);
      for (int s = 0; s < 2; ++s) {
        double sum = 0.0;
        for (int b = 0; b < 3; ++b) {
          const double e = rng.exponential();
          other.dist[static_cast<std::size_t>(s) * 3 + b] = e;
          sum += e;
        }
        for (int b = 0; b < 3; ++b) other.dist[static_cast<std::size_t>(s) * 3 + b] /= sum;
      }
      auto v_other = evaluate_policy_pair(g, mu, other, gamma);
      for (int s = 0; s < 2; ++s) CHECK(v_br[s] <= v_other[s] + tol);
    }
  }
}

TEST_CASE("scaled-value consistency between two discounts") {
  GameGenSpec spec{3, 2, 2, 0.25, {}, 77};
  StochasticGame g = generate_random_communicating_game(spec);
  auto est = estimate_diameter(g);
  auto s1 = shapley_iteration(g, 0.9, 1e-9);
  auto s2 = shapley_iteration(g, 0.999, 1e-7);
  for (int s = 0; s < 3; ++s) {
    const double a = (1.0 - 0.9) * s1.v_star[s];
    const double b = (1.0 - 0.999) * s2.v_star[s];
    CHECK(std::abs(a - b) <= (2.0 - 0.9 - 0.999) * est.d_hat + 1e-6);
  }
}
