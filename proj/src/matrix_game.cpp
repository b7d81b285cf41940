#include "donq/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "donq/common.hpp"

namespace donq {
namespace {

constexpr double kPivotTol = 1e-10;

// Primal simplex on: maximize sum(w) subject to M'w <= 1, w >= 0, where
// M' = M + shift has all entries >= 1. This is the min-player's problem in
// scaled form (w = y / v'); the max-player's policy is read off the duals,
// i.e. the objective-row entries of the slack columns. The all-slack basis is
// feasible, so no phase 1 is needed.
struct Tableau {
  int rows;       // A constraints
  int structural; // B variables
  int cols;       // B + A + 1 (structurals, slacks, rhs)
  std::vector<double> t;      // (rows+1) x cols; last row = objective (z_j - c_j)
  std::vector<int> basis;     // basic variable per row

  double& at(int i, int j) { return t[static_cast<std::size_t>(i) * cols + j]; }
  double at(int i, int j) const { return t[static_cast<std::size_t>(i) * cols + j]; }

  void pivot(int prow, int pcol) {
    const double inv = 1.0 / at(prow, pcol);
    for (int j = 0; j < cols; ++j) at(prow, j) *= inv;
    at(prow, pcol) = 1.0;
    for (int i = 0; i <= rows; ++i) {
      if (i == prow) continue;
      const double f = at(i, pcol);
      if (f == 0.0) continue;
      for (int j = 0; j < cols; ++j) at(i, j) -= f * at(prow, j);
      at(i, pcol) = 0.0;
    }
    basis[prow] = pcol;
  }
};

}  // namespace

MatrixGameSolution solve_matrix_game(MatrixView m, double tol) {
  const int A = m.rows, B = m.cols;
  if (A < 1 || B < 1) throw std::invalid_argument("solve_matrix_game: empty matrix");
  if (!(tol > 0.0)) throw std::invalid_argument("solve_matrix_game: tol must be positive");
  double lo = m.at(0, 0);
  for (int i = 0; i < A; ++i)
    for (int j = 0; j < B; ++j) {
      const double v = m.at(i, j);
      if (!std::isfinite(v)) throw std::invalid_argument("solve_matrix_game: non-finite entry");
      lo = std::min(lo, v);
    }
  const double shift = 1.0 - lo;  // entries of M' lie in [1, ...)

  Tableau tab;
  tab.rows = A;
  tab.structural = B;
  tab.cols = B + A + 1;
  tab.t.assign(static_cast<std::size_t>(A + 1) * tab.cols, 0.0);
  tab.basis.resize(A);
  for (int i = 0; i < A; ++i) {
    for (int j = 0; j < B; ++j) tab.at(i, j) = m.at(i, j) + shift;
    tab.at(i, B + i) = 1.0;         // slack
    tab.at(i, tab.cols - 1) = 1.0;  // rhs
    tab.basis[i] = B + i;
  }
  for (int j = 0; j < B; ++j) tab.at(A, j) = -1.0;  // z_j - c_j for structurals

  // Bland's rule: lowest eligible entering column; ties in the ratio test go
  // to the row whose basic variable has the lowest index. Finite termination.
  for (;;) {
    int enter = -1;
    for (int j = 0; j < tab.cols - 1; ++j)
      if (tab.at(A, j) < -kPivotTol) {
        enter = j;
        break;
      }
    if (enter < 0) break;
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < A; ++i) {
      const double coef = tab.at(i, enter);
      if (coef <= kPivotTol) continue;
      const double ratio = tab.at(i, tab.cols - 1) / coef;
      if (leave < 0 || ratio < best_ratio - kPivotTol ||
          (ratio < best_ratio + kPivotTol && tab.basis[i] < tab.basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0)
      throw ConvergenceError("solve_matrix_game: LP unbounded (corrupt input?)", 0.0);
    tab.pivot(leave, enter);
  }

  // objective value = sum(w) = 1 / v'
  const double obj = tab.at(A, tab.cols - 1);
  if (!(obj > 0.0))
    throw ConvergenceError("solve_matrix_game: degenerate optimum", obj);
  const double vshift = 1.0 / obj;

  MatrixGameSolution sol;
  sol.value = vshift - shift;
  sol.min_policy.assign(B, 0.0);
  for (int i = 0; i < A; ++i)
    if (tab.basis[i] < B) sol.min_policy[tab.basis[i]] = tab.at(i, tab.cols - 1) * vshift;
  sol.max_policy.assign(A, 0.0);
  for (int i = 0; i < A; ++i) sol.max_policy[i] = tab.at(A, B + i) * vshift;

  // Clip pivot noise and renormalize each mixture to an exact simplex point.
  for (auto* pol : {&sol.max_policy, &sol.min_policy}) {
    double sum = 0.0;
    for (double& x : *pol) {
      if (x < 0.0) x = 0.0;
      sum += x;
    }
    if (sum <= 0.0) throw ConvergenceError("solve_matrix_game: zero policy mass", sum);
    for (double& x : *pol) x /= sum;
  }

  // Measure the gap on the actual returned policies.
  double worst_col = std::numeric_limits<double>::infinity();
  for (int j = 0; j < B; ++j) {
    double v = 0.0;
    for (int i = 0; i < A; ++i) v += sol.max_policy[i] * m.at(i, j);
    worst_col = std::min(worst_col, v);
  }
  double worst_row = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < A; ++i) {
    double v = 0.0;
    for (int j = 0; j < B; ++j) v += sol.min_policy[j] * m.at(i, j);
    worst_row = std::max(worst_row, v);
  }
  sol.duality_gap = std::max({0.0, sol.value - worst_col, worst_row - sol.value});
  if (sol.duality_gap > tol)
    throw ConvergenceError("solve_matrix_game: duality gap above tolerance", sol.duality_gap);
  return sol;
}

std::pair<int, double> best_response_value(MatrixView m, std::span<const double> min_policy) {
  if (static_cast<int>(min_policy.size()) != m.cols)
    throw std::invalid_argument("best_response_value: policy length mismatch");
  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < m.rows; ++i) {
    double v = 0.0;
    for (int j = 0; j < m.cols; ++j) v += min_policy[j] * m.at(i, j);
    if (v > best_value) {
      best = i;
      best_value = v;
    }
  }
  return {best, best_value};
}

}  // namespace donq
