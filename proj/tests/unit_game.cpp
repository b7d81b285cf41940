#include "donq/game.hpp"

#include <cmath>
#include <doctest.h>

#include "donq/common.hpp"
#include "support/test_util.hpp"

using namespace donq;

namespace {

StochasticGame uniform_game(int S, int A, int B, double reward_value) {
  StochasticGame g;
  g.num_states = S;
  g.num_actions_max = A;
  g.num_actions_min = B;
  g.reward.assign(static_cast<std::size_t>(S) * A * B, reward_value);
  g.transition.assign(g.reward.size() * S, 1.0 / S);
  return g;
}

}  // namespace

TEST_CASE("validate_game accepts uniform rows and rejects broken cells") {
  StochasticGame g = uniform_game(3, 2, 2, 0.5);
  CHECK(validate_game(g).ok());

  SUBCASE("row summing to 0.9 is flagged at its index") {
    g.transition[0] = 1.0 / 3 - 0.1;  // row (0,0,0) now sums to 0.9
    auto report = validate_game(g);
    REQUIRE_FALSE(report.ok());
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].kind == GameViolation::Kind::kRowSum);
    CHECK(report.violations[0].s == 0);
    CHECK(report.violations[0].a == 0);
    CHECK(report.violations[0].b == 0);
  }

  SUBCASE("reward 1.2 is a range violation") {
    g.reward[0] = 1.2;
    auto report = validate_game(g);
    REQUIRE_FALSE(report.ok());
    CHECK(report.violations[0].kind == GameViolation::Kind::kRewardRange);
  }

  SUBCASE("negative probability is flagged") {
    g.transition[0] = -0.1;
    g.transition[1] = 1.0 / 3 + 0.1 + 1.0 / 3;
    g.transition[2] = 0.0;
    auto report = validate_game(g);
    REQUIRE_FALSE(report.ok());
    CHECK(report.violations[0].kind == GameViolation::Kind::kNegativeProbability);
  }
}

TEST_CASE("sample_transition follows point masses and is deterministic") {
  StochasticGame g = uniform_game(4, 1, 1, 0.0);
  // point mass on state 3
  g.transition = {0.0, 0.0, 0.0, 1.0};
  RandomStream rng(1);
  for (int i = 0; i < 50; ++i) CHECK(sample_transition(g, 0, 0, 0, rng) == 3);

  SUBCASE("out-of-range index is a hard error") {
    CHECK_THROWS_AS(sample_transition(g, 4, 0, 0, rng), std::out_of_range);
    CHECK_THROWS_AS(sample_transition(g, 0, 1, 0, rng), std::out_of_range);
  }

  SUBCASE("fixed seed gives an identical sample sequence") {
    StochasticGame h = uniform_game(5, 2, 2, 0.25);
    RandomStream r1(42, RandomStream::Role::kEnvironment);
    RandomStream r2(42, RandomStream::Role::kEnvironment);
    for (int i = 0; i < 1000; ++i)
      CHECK(sample_transition(h, i % 5, i % 2, (i / 2) % 2, r1) ==
            sample_transition(h, i % 5, i % 2, (i / 2) % 2, r2));
  }
}

TEST_CASE("sample_transition empirical frequency matches the row") {
  StochasticGame g = uniform_game(2, 1, 1, 0.0);
  g.transition = {0.5, 0.5, 0.5, 0.5};
  RandomStream rng(7, RandomStream::Role::kEnvironment);
  const int n = 1'000'000;
  long long count0 = 0;
  for (int i = 0; i < n; ++i)
    if (sample_transition(g, 0, 0, 0, rng) == 0) ++count0;
  const double freq = static_cast<double>(count0) / n;
  CHECK(freq >= 0.497);
  CHECK(freq <= 0.503);
}

TEST_CASE("sample_transition empirical law passes a chi-square check") {
  // 4-state row, significance 1e-3: chi2 quantile at df=3 is 16.2662...
  GameGenSpec spec{4, 1, 1, 0.3, {}, 99};
  StochasticGame g = generate_random_communicating_game(spec);
  RandomStream rng(5, RandomStream::Role::kEnvironment);
  const int n = 1'000'000;
  std::vector<long long> counts(4, 0);
  for (int i = 0; i < n; ++i) ++counts[sample_transition(g, 0, 0, 0, rng)];
  auto row = g.transition_row(0, 0, 0);
  double chi2 = 0.0;
  for (int sp = 0; sp < 4; ++sp) {
    const double expected = row[sp] * n;
    const double d = counts[sp] - expected;
    chi2 += d * d / expected;
  }
  CHECK(chi2 < 16.266236196238129);
}

TEST_CASE("generator respects the mixing floor and degenerate cases") {
  SUBCASE("S=1 rows are exactly (1.0)") {
    GameGenSpec spec{1, 3, 2, 0.4, {}, 11};
    StochasticGame g = generate_random_communicating_game(spec);
    for (double p : g.transition) CHECK(p == 1.0);
  }

  SUBCASE("eps=1 rows are exactly uniform") {
    GameGenSpec spec{4, 2, 2, 1.0, {}, 3};
    StochasticGame g = generate_random_communicating_game(spec);
    for (double p : g.transition) CHECK(p == 0.25);
  }

  SUBCASE("spec (S=3,A=2,B=2,eps=0.1,seed=7): every entry at least eps/S") {
    GameGenSpec spec{3, 2, 2, 0.1, {}, 7};
    StochasticGame g = generate_random_communicating_game(spec);
    double lo = 1.0;
    for (double p : g.transition) lo = std::min(lo, p);
    CHECK(lo >= 0.1 / 3);
  }

  SUBCASE("bernoulli rewards are 0/1") {
    GameGenSpec spec{2, 2, 2, 0.5, {RewardLaw::Kind::kBernoulli, 0.4}, 13};
    StochasticGame g = generate_random_communicating_game(spec);
    for (double r : g.reward) CHECK((r == 0.0 || r == 1.0));
  }
}

TEST_CASE("1000 random generator specs all validate") {
  RandomStream meta(2024);
  for (int i = 0; i < 1000; ++i) {
    GameGenSpec spec;
    spec.S = 1 + meta.next_index(5);
    spec.A = 1 + meta.next_index(4);
    spec.B = 1 + meta.next_index(4);
    spec.mixing_epsilon = 0.01 + 0.99 * meta.next_double();
    spec.seed = meta.next_u64();
    if (meta.next_double() < 0.3) spec.reward_law = {RewardLaw::Kind::kBernoulli, meta.next_double()};
    StochasticGame g = generate_random_communicating_game(spec);
    REQUIRE(validate_game(g).ok());
    double lo = 1.0;
    for (double p : g.transition) lo = std::min(lo, p);
    REQUIRE(lo >= spec.mixing_epsilon / spec.S);
  }
}

TEST_CASE("mirror_game swaps roles and complements the payoff") {
  GameGenSpec spec{3, 2, 4, 0.2, {}, 21};
  StochasticGame g = generate_random_communicating_game(spec);
  StochasticGame m = mirror_game(g);
  CHECK(m.num_actions_max == 4);
  CHECK(m.num_actions_min == 2);
  for (int s = 0; s < 3; ++s)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 4; ++b) {
        CHECK(m.r(s, b, a) == 1.0 - g.r(s, a, b));
        auto orig = g.transition_row(s, a, b);
        auto mirrored = m.transition_row(s, b, a);
        for (int sp = 0; sp < 3; ++sp) CHECK(mirrored[sp] == orig[sp]);
      }
  CHECK(validate_game(m).ok());
}

TEST_CASE("markov policy helpers") {
  MarkovPolicy u = MarkovPolicy::uniform(PlayerSide::kMin, 3, 4);
  CHECK(u.valid());
  CHECK(u.row(2)[3] == 0.25);
  MarkovPolicy p = MarkovPolicy::pure(PlayerSide::kMax, 2, 3, 1);
  CHECK(p.valid());
  CHECK(p.row(0)[1] == 1.0);
  CHECK(p.row(1)[0] == 0.0);
  p.dist[0] = 0.5;  // row no longer sums to 1
  CHECK_FALSE(p.valid());
}
