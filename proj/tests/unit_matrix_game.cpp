#include "donq/matrix_game.hpp"

#include <cmath>
#include <doctest.h>

#include "donq/common.hpp"
#include "donq/rng.hpp"
#include "support/fictitious_play.hpp"
#include "support/test_util.hpp"

using namespace donq;
using donq::testing::fictitious_play_value;

namespace {

// The guarantee the solver promises: the max policy secures value - slack
// against every pure column, the min policy concedes at most value + slack
// against every pure row.
void check_guarantees(MatrixView m, const MatrixGameSolution& sol, double slack) {
  for (int j = 0; j < m.cols; ++j) {
    double v = 0.0;
    for (int i = 0; i < m.rows; ++i) v += sol.max_policy[i] * m.at(i, j);
    CHECK(v >= sol.value - slack);
  }
  for (int i = 0; i < m.rows; ++i) {
    double v = 0.0;
    for (int j = 0; j < m.cols; ++j) v += sol.min_policy[j] * m.at(i, j);
    CHECK(v <= sol.value + slack);
  }
}

}  // namespace

TEST_CASE("singleton and symmetric games") {
  SUBCASE("1x1") {
    std::vector<double> m{0.37};
    auto sol = solve_matrix_game(make_view(m, 1, 1));
    CHECK(sol.value == doctest::Approx(0.37).epsilon(1e-12));
    CHECK(sol.max_policy[0] == doctest::Approx(1.0));
    CHECK(sol.min_policy[0] == doctest::Approx(1.0));
  }

  SUBCASE("matching pennies on [0,1]") {
    std::vector<double> m{1.0, 0.0, 0.0, 1.0};
    auto sol = solve_matrix_game(make_view(m, 2, 2));
    CHECK(sol.value == doctest::Approx(0.5).epsilon(1e-10));
    for (double x : sol.max_policy) CHECK(x == doctest::Approx(0.5).epsilon(1e-10));
    for (double x : sol.min_policy) CHECK(x == doctest::Approx(0.5).epsilon(1e-10));
  }

  SUBCASE("rock-paper-scissors") {
    auto m = donq::testing::rps_matrix();
    auto sol = solve_matrix_game(make_view(m, 3, 3));
    CHECK(sol.value == doctest::Approx(0.5).epsilon(1e-10));
    for (double x : sol.max_policy) CHECK(x == doctest::Approx(1.0 / 3).epsilon(1e-9));
    for (double x : sol.min_policy) CHECK(x == doctest::Approx(1.0 / 3).epsilon(1e-9));
  }
}

TEST_CASE("random 4x5 matrix agrees with the fictitious-play oracle") {
  RandomStream rng(11);
  auto m = donq::testing::random_matrix(4, 5, rng);
  const MatrixView view = make_view(m, 4, 5);
  auto fp = fictitious_play_value(view, 1e-6);
  REQUIRE(fp.converged);
  auto sol = solve_matrix_game(view);
  CHECK(std::abs(sol.value - fp.mid()) < 1e-5);
  check_guarantees(view, sol, 1e-8);
}

TEST_CASE("non-finite entries are rejected") {
  std::vector<double> m{0.1, std::nan(""), 0.3, 0.4};
  CHECK_THROWS_AS(solve_matrix_game(make_view(m, 2, 2)), std::invalid_argument);
  m[1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(solve_matrix_game(make_view(m, 2, 2)), std::invalid_argument);
}

TEST_CASE("guarantee property on random matrices of many shapes") {
  RandomStream rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 1 + rng.next_index(6);
    const int cols = 1 + rng.next_index(6);
    auto m = donq::testing::random_matrix(rows, cols, rng);
    const MatrixView view = make_view(m, rows, cols);
    auto sol = solve_matrix_game(view);
    CHECK(sol.duality_gap <= 1e-9);
    check_guarantees(view, sol, 1e-8);
    double sum_max = 0.0, sum_min = 0.0;
    for (double x : sol.max_policy) {
      CHECK(x >= 0.0);
      sum_max += x;
    }
    for (double x : sol.min_policy) {
      CHECK(x >= 0.0);
      sum_min += x;
    }
    CHECK(sum_max == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sum_min == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("zero-sum complement identity") {
  // Flipping the matrix to the other side's view (1 - M, transposed) must
  // complement the value.
  RandomStream rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const int rows = 1 + rng.next_index(5);
    const int cols = 1 + rng.next_index(5);
    auto m = donq::testing::random_matrix(rows, cols, rng);
    std::vector<double> flipped(m.size());
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        flipped[static_cast<std::size_t>(j) * rows + i] = 1.0 - m[static_cast<std::size_t>(i) * cols + j];
    auto sol = solve_matrix_game(make_view(m, rows, cols));
    auto sol_flipped = solve_matrix_game(make_view(flipped, cols, rows));
    CHECK(sol.value + sol_flipped.value == doctest::Approx(1.0).epsilon(2e-9));
  }
}

TEST_CASE("shift and scale equivariance") {
  RandomStream rng(31);
  auto m = donq::testing::random_matrix(4, 4, rng);
  auto base = solve_matrix_game(make_view(m, 4, 4));
  const double alpha = 3.5, beta = -1.25;
  std::vector<double> scaled(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) scaled[i] = alpha * m[i] + beta;
  const MatrixView view = make_view(scaled, 4, 4);
  auto sol = solve_matrix_game(view);
  CHECK(sol.value == doctest::Approx(alpha * base.value + beta).epsilon(1e-9));
  // Returned policies must stay near-optimal in the transformed game even if
  // the equilibrium picked differs.
  check_guarantees(view, sol, 1e-7);
}

TEST_CASE("best_response_value picks the argmax row, lowest index on ties") {
  std::vector<double> id{1.0, 0.0, 0.0, 1.0};
  std::vector<double> y{1.0, 0.0};
  auto [row, value] = best_response_value(make_view(id, 2, 2), y);
  CHECK(row == 0);
  CHECK(value == doctest::Approx(1.0));

  std::vector<double> flat{0.5, 0.5, 0.5, 0.5};
  auto [row2, value2] = best_response_value(make_view(flat, 2, 2), y);
  CHECK(row2 == 0);
  CHECK(value2 == doctest::Approx(0.5));

  SUBCASE("matches an exhaustive scan on a random matrix") {
    RandomStream rng(5);
    auto m = donq::testing::random_matrix(3, 3, rng);
    std::vector<double> uniform{1.0 / 3, 1.0 / 3, 1.0 / 3};
    auto [r, v] = best_response_value(make_view(m, 3, 3), uniform);
    int expect_row = 0;
    double expect_val = -1e300;
    for (int i = 0; i < 3; ++i) {
      double acc = 0.0;
      for (int j = 0; j < 3; ++j) acc += uniform[j] * m[static_cast<std::size_t>(i) * 3 + j];
      if (acc > expect_val) {
        expect_val = acc;
        expect_row = i;
      }
    }
    CHECK(r == expect_row);
    CHECK(v == doctest::Approx(expect_val).epsilon(1e-14));
  }

  SUBCASE("dimension mismatch is a hard error") {
    std::vector<double> bad{0.5, 0.5, 0.0};
    CHECK_THROWS_AS(best_response_value(make_view(id, 2, 2), bad), std::invalid_argument);
  }
}
