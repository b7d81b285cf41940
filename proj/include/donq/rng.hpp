#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace donq {

// Deterministic random stream. Each consumer (agent action draws, opponent
// draws, environment transitions, game generation) gets its own stream derived
// from (master seed, role), so changing one consumer never perturbs another.
//
// All draws consume exactly one 64-bit output of the underlying engine, which
// keeps runs bit-reproducible across platforms and compilers.
class RandomStream {
 public:
  enum class Role : std::uint64_t {
    kAgent = 0x61,
    kOpponent = 0x6F,
    kEnvironment = 0x65,
    kGenerator = 0x67,
  };

  explicit RandomStream(std::uint64_t raw_seed) : engine_(mix(raw_seed)) {}

  RandomStream(std::uint64_t master_seed, Role role)
      : engine_(mix(master_seed ^ (static_cast<std::uint64_t>(role) * 0x9e3779b97f4a7c15ULL))) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits; exactly one engine draw.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on {0, ..., n-1}; exactly one engine draw.
  int next_index(int n) {
    if (n <= 0) throw std::invalid_argument("next_index: n must be positive");
    return std::min(n - 1, static_cast<int>(next_double() * n));
  }

  // Categorical draw by CDF scan; exactly one engine draw. Probabilities must
  // sum to ~1; any rounding shortfall falls to the last category.
  int sample(std::span<const double> probs) {
    if (probs.empty()) throw std::invalid_argument("sample: empty distribution");
    const double u = next_double();
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      cum += probs[i];
      if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size() - 1);
  }

  // Exp(1) variate; exactly one engine draw.
  double exponential() { return -std::log1p(-next_double()); }

 private:
  // splitmix64 finalizer; spreads consecutive seeds across the engine's state space.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace donq
