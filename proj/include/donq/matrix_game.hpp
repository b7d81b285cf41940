#pragma once

#include <span>
#include <utility>
#include <vector>

namespace donq {

// Non-owning view of a dense row-major matrix.
struct MatrixView {
  const double* data = nullptr;
  int rows = 0;
  int cols = 0;
  double at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

inline MatrixView make_view(const std::vector<double>& m, int rows, int cols) {
  return {m.data(), rows, cols};
}

// Maximin solution of the zero-sum matrix game M: value = max_x min_y x'My
// together with a Nash pair. duality_gap is measured directly on the returned
// policies: max_policy secures at least value - gap against every pure column
// and min_policy concedes at most value + gap against every pure row.
struct MatrixGameSolution {
  double value = 0.0;
  std::vector<double> max_policy;  // length rows
  std::vector<double> min_policy;  // length cols
  double duality_gap = 0.0;
};

// Solves the game exactly with a dense simplex (Bland's rule, so deterministic
// and cycle-free). Both policies come out of one tableau: the min-player from
// the primal, the max-player from the duals of the row constraints. Entries
// may be any finite reals. Throws on non-finite input; throws ConvergenceError
// if the measured gap exceeds tol.
MatrixGameSolution solve_matrix_game(MatrixView m, double tol = 1e-9);

// Best pure row against a fixed min-player mixture; ties break to the lowest
// row index. Returns (row, expected payoff).
std::pair<int, double> best_response_value(MatrixView m, std::span<const double> min_policy);

}  // namespace donq
