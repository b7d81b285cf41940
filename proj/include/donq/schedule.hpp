#pragma once

#include <cstdint>
#include <vector>

namespace donq {

// Learning rate alpha_tau = (H+1)/(H+tau). alpha_1 = 1 exactly, so the first
// visit of a cell fully overwrites its optimistic initialization.
double learning_rate(double H, long long tau);

// Exploration bonus beta_tau = 2 * d_bound * sqrt(H * ln(2T/delta) / tau).
double bonus(double d_bound, double H, long long T, double delta, long long tau);

// Cumulative weights of the recursive update unrolled over tau visits:
// weight i (for i >= 1) multiplies the i-th sample, weight 0 the initial
// value. Returns tau+1 entries summing to 1. Test/diagnostic path only; the
// agent applies the recursion incrementally.
std::vector<double> alpha_weights(double H, long long tau);

// Agent parameters. gamma is derived, never stored: 1 - 1/H.
struct DonqConfig {
  long long horizon_T = 1;
  double H = 2.0;          // > 1
  double delta = 0.1;      // in (0,1)
  double d_bound = 1.0;    // known upper bound on the game diameter; >= 0

  double gamma() const { return 1.0 - 1.0 / H; }
  void validate() const;  // throws ValidationError on a bad field
};

// High-probability preset: H = sqrt(d_bound / sqrt(ln(2/delta))) * T^(1/4),
// clamped above 1.
double preset_h_high_prob(long long T, double d_bound, double delta);

// Expected-regret preset: H = (T / (S*A*B * ln(2T^2)))^(1/3), clamped above 1.
double preset_h_expected(long long T, int S, int A, int B);

}  // namespace donq
