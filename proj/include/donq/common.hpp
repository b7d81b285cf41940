#pragma once

#include <stdexcept>
#include <string>

namespace donq {

// Bad input: malformed files, invalid indices, broken invariants on construction.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative routine failed to reach its tolerance. Carries the last residual
// so callers can report how far off the computation stopped.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& msg, double residual)
      : std::runtime_error(msg), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_ = 0.0;
};

// Tolerance for probability-row sums; rows within this of 1 are renormalized.
inline constexpr double kProbTolerance = 1e-12;

// A sum quoted in decimal right at the tolerance (e.g. 0.999999999999) lands a
// few ulps past it in binary; the pad keeps such rows on the accepted side.
inline bool prob_sum_within_tolerance(double sum) {
  const double deviation = sum > 1.0 ? sum - 1.0 : 1.0 - sum;
  return deviation <= kProbTolerance + 1e-15;
}

}  // namespace donq
