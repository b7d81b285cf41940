#include "donq/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "donq/common.hpp"

namespace donq {

double learning_rate(double H, long long tau) {
  if (tau < 1) throw std::invalid_argument("learning_rate: tau must be >= 1");
  if (!(H > 1.0)) throw std::invalid_argument("learning_rate: H must be > 1");
  return (H + 1.0) / (H + static_cast<double>(tau));
}

double bonus(double d_bound, double H, long long T, double delta, long long tau) {
  if (tau < 1) throw std::invalid_argument("bonus: tau must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("bonus: delta in (0,1)");
  if (T < 1) throw std::invalid_argument("bonus: T must be >= 1");
  return 2.0 * d_bound * std::sqrt(H * std::log(2.0 * static_cast<double>(T) / delta) /
                                   static_cast<double>(tau));
}

std::vector<double> alpha_weights(double H, long long tau) {
  if (tau < 0) throw std::invalid_argument("alpha_weights: tau must be >= 0");
  std::vector<double> w(static_cast<std::size_t>(tau) + 1, 0.0);
  w[0] = 1.0;
  for (long long i = 1; i <= tau; ++i) {
    const double a = learning_rate(H, i);
    for (long long j = 0; j < i; ++j) w[j] *= 1.0 - a;
    w[i] = a;
  }
  return w;
}

void DonqConfig::validate() const {
  if (horizon_T < 1) throw ValidationError("DonqConfig: horizon_T must be >= 1");
  if (!(H > 1.0) || !std::isfinite(H)) throw ValidationError("DonqConfig: H must be finite and > 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("DonqConfig: delta must be in (0,1)");
  if (!(d_bound >= 0.0) || !std::isfinite(d_bound))
    throw ValidationError("DonqConfig: d_bound must be finite and >= 0");
}

namespace {
// The formulas can dip below 1 at small T; anything <= 1 breaks gamma = 1-1/H.
constexpr double kMinH = 1.001;
}  // namespace

double preset_h_high_prob(long long T, double d_bound, double delta) {
  const double h = std::sqrt(d_bound / std::sqrt(std::log(2.0 / delta))) *
                   std::pow(static_cast<double>(T), 0.25);
  return std::isfinite(h) ? std::max(h, kMinH) : kMinH;
}

double preset_h_expected(long long T, int S, int A, int B) {
  const double t = static_cast<double>(T);
  const double h = std::cbrt(t / (static_cast<double>(S) * A * B * std::log(2.0 * t * t)));
  return std::isfinite(h) ? std::max(h, kMinH) : kMinH;
}

}  // namespace donq
