#include "donq/opponents.hpp"

#include <limits>
#include <stdexcept>

#include "donq/agent.hpp"
#include "donq/common.hpp"
#include "donq/oracle.hpp"

namespace donq {

std::string OpponentSpec::kind_name() const {
  switch (kind) {
    case Kind::kUniform: return "uniform";
    case Kind::kFixedMarkov: return "fixed_markov";
    case Kind::kStationaryNash: return "stationary_nash";
    case Kind::kBestResponder: return "best_responder";
    case Kind::kSelfPlayMirror: return "self_play_mirror";
  }
  return "?";
}

namespace {

class UniformOpponent : public Opponent {
 public:
  explicit UniformOpponent(int num_actions) : b_(num_actions) {}
  int act(int, RandomStream& rng) override { return rng.next_index(b_); }
  std::string name() const override { return "uniform"; }

 private:
  int b_;
};

class FixedMarkovOpponent : public Opponent {
 public:
  explicit FixedMarkovOpponent(MarkovPolicy policy, std::string label)
      : policy_(std::move(policy)), label_(std::move(label)) {}
  int act(int s, RandomStream& rng) override { return rng.sample(policy_.row(s)); }
  std::string name() const override { return label_; }

 protected:
  MarkovPolicy policy_;
  std::string label_;
};

// Rebuilds a discounted best response against the learner's declared policy
// every `period` observed steps (and once at construction).
class BestResponderOpponent : public Opponent {
 public:
  BestResponderOpponent(const StochasticGame& game, PolicyProvider provider, std::uint64_t period,
                        double gamma, double tol)
      : game_(game), provider_(std::move(provider)), period_(period), gamma_(gamma), tol_(tol) {
    if (period_ < 1) throw ValidationError("best_responder: period must be >= 1");
    if (!provider_) throw ValidationError("best_responder: needs access to the learner's policy");
    rebuild();
  }

  int act(int s, RandomStream& rng) override { return rng.sample(policy_.row(s)); }

  void observe(int, int, int, double, int) override {
    if (++steps_ % period_ == 0) rebuild();
  }

  std::string name() const override { return "best_responder"; }

 private:
  void rebuild() { policy_ = discounted_best_response_min(game_, provider_(), gamma_, tol_); }

  const StochasticGame& game_;
  PolicyProvider provider_;
  std::uint64_t period_;
  double gamma_;
  double tol_;
  std::uint64_t steps_ = 0;
  MarkovPolicy policy_;
};

}  // namespace

SelfPlayMirrorOpponent::SelfPlayMirrorOpponent(const StochasticGame& game,
                                               const DonqConfig& config)
    : game_(mirror_game(game)),
      agent_(std::make_unique<DonqAgent>(config, game_.num_states, game_.num_actions_max,
                                         game_.num_actions_min)) {}

int SelfPlayMirrorOpponent::act(int s, RandomStream& rng) { return agent_->act(s, rng); }

void SelfPlayMirrorOpponent::observe(int s, int a, int b, double reward, int s_next) {
  // From the mirror's seat the action roles swap and the payoff complements.
  agent_->observe(s, b, a, 1.0 - reward, s_next);
}

std::unique_ptr<Opponent> make_opponent(const OpponentSpec& spec, const StochasticGame& game,
                                        const DonqConfig& learner_config,
                                        PolicyProvider provider) {
  switch (spec.kind) {
    case OpponentSpec::Kind::kUniform:
      return std::make_unique<UniformOpponent>(game.num_actions_min);

    case OpponentSpec::Kind::kFixedMarkov: {
      if (!spec.policy) throw ValidationError("fixed_markov: missing policy");
      const MarkovPolicy& p = *spec.policy;
      if (p.owner != PlayerSide::kMin || p.num_states != game.num_states ||
          p.num_actions != game.num_actions_min || !p.valid())
        throw ValidationError("fixed_markov: policy does not fit the game");
      return std::make_unique<FixedMarkovOpponent>(p, "fixed_markov");
    }

    case OpponentSpec::Kind::kStationaryNash: {
      const double g = spec.nash_gamma.value_or(learner_config.gamma());
      if (!(g > 0.0 && g < 1.0)) throw ValidationError("stationary_nash: gamma must be in (0,1)");
      DiscountedNashSolution sol = shapley_iteration(game, g, 1e-10);
      return std::make_unique<FixedMarkovOpponent>(std::move(sol.nu), "stationary_nash");
    }

    case OpponentSpec::Kind::kBestResponder: {
      const double g = spec.br_gamma.value_or(learner_config.gamma());
      return std::make_unique<BestResponderOpponent>(game, std::move(provider), spec.period, g,
                                                     spec.br_tol);
    }

    case OpponentSpec::Kind::kSelfPlayMirror:
      return std::make_unique<SelfPlayMirrorOpponent>(game, learner_config);
  }
  throw std::logic_error("make_opponent: unknown kind");
}

}  // namespace donq
