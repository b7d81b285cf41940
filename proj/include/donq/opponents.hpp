#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "donq/game.hpp"
#include "donq/rng.hpp"
#include "donq/schedule.hpp"

namespace donq {

// Min-player adversary interface. One instance per run, mutated only by its
// run; act() draws from the opponent's stream, observe() is the adaptivity
// hook (a no-op for the non-adaptive kinds).
class Opponent {
 public:
  virtual ~Opponent() = default;
  virtual int act(int s, RandomStream& rng) = 0;
  virtual void observe(int s, int a, int b, double reward, int s_next) {
    (void)s; (void)a; (void)b; (void)reward; (void)s_next;
  }
  virtual std::string name() const = 0;
};

struct OpponentSpec {
  enum class Kind { kUniform, kFixedMarkov, kStationaryNash, kBestResponder, kSelfPlayMirror };
  Kind kind = Kind::kUniform;

  // fixed_markov
  std::optional<MarkovPolicy> policy;
  // stationary_nash: discount of the Nash policy; defaults to the learner's.
  std::optional<double> nash_gamma;
  // best_responder
  std::uint64_t period = 1;  // rebuild cadence in steps; huge value = never
  std::optional<double> br_gamma;  // defaults to the learner's gamma
  double br_tol = 1e-8;

  std::string kind_name() const;
};

// Read access to the learner's currently declared policy (the strongest
// information an adversary here gets; the learner's estimators stay private).
using PolicyProvider = std::function<const MarkovPolicy&()>;

// Builds an opponent bound to a specific game. learner_config supplies
// defaults (discount, and the mirrored agent's parameters); provider is only
// required for best_responder.
std::unique_ptr<Opponent> make_opponent(const OpponentSpec& spec, const StochasticGame& game,
                                        const DonqConfig& learner_config,
                                        PolicyProvider provider = {});

// The mirrored self-play opponent exposes its internal agent for inspection.
class SelfPlayMirrorOpponent : public Opponent {
 public:
  SelfPlayMirrorOpponent(const StochasticGame& game, const DonqConfig& config);
  int act(int s, RandomStream& rng) override;
  void observe(int s, int a, int b, double reward, int s_next) override;
  std::string name() const override { return "self_play_mirror"; }

  const class DonqAgent& agent() const { return *agent_; }
  const StochasticGame& mirrored_game() const { return game_; }

 private:
  StochasticGame game_;  // roles swapped, reward complemented
  std::unique_ptr<class DonqAgent> agent_;
};

}  // namespace donq
