#include "donq/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "donq/agent.hpp"
#include "donq/common.hpp"
#include "donq/oracle.hpp"

namespace donq {

void ExperimentConfig::validate() const {
  if (!validate_game(game).ok()) throw ValidationError("ExperimentConfig: invalid game");
  if (horizons.empty()) throw ValidationError("ExperimentConfig: need at least one horizon");
  for (long long T : horizons)
    if (T < 1) throw ValidationError("ExperimentConfig: horizons must be >= 1");
  if (seeds.empty()) throw ValidationError("ExperimentConfig: need at least one seed");
  if (!(oracle_target_err > 0.0)) throw ValidationError("ExperimentConfig: target_err must be > 0");
  if (initial_state < 0 || initial_state >= game.num_states)
    throw ValidationError("ExperimentConfig: initial_state out of range");
  if (h_mode.kind == HMode::Kind::kExplicit && !(h_mode.value > 1.0))
    throw ValidationError("ExperimentConfig: explicit H must be > 1");
  if (delta_mode.kind == DeltaMode::Kind::kExplicit &&
      !(delta_mode.value > 0.0 && delta_mode.value < 1.0))
    throw ValidationError("ExperimentConfig: explicit delta must be in (0,1)");
  if (d_source.kind == DSource::Kind::kUserSupplied && !(d_source.value >= 0.0))
    throw ValidationError("ExperimentConfig: user-supplied d must be >= 0");
}

ResolvedOracle resolve_oracle(const ExperimentConfig& config) {
  config.validate();
  ResolvedOracle out;
  if (config.d_source.kind == DSource::Kind::kUserSupplied) {
    out.d_used = config.d_source.value;
    out.d_source_name = "user_supplied";
  } else {
    out.d_used = estimate_diameter(config.game).d_hat;
    out.d_source_name = "estimator";
  }
  AverageRewardSolution avg = average_nash_value(config.game, config.oracle_target_err, out.d_used);
  out.j_star = avg.j_star;
  out.j_star_error_bound = avg.error_bound;
  out.gamma_used = avg.gamma_used;
  return out;
}

DonqConfig build_agent_config(const ExperimentConfig& config, long long T, double d_used) {
  DonqConfig cfg;
  cfg.horizon_T = T;
  cfg.d_bound = d_used;
  switch (config.delta_mode.kind) {
    case DeltaMode::Kind::kExplicit: cfg.delta = config.delta_mode.value; break;
    case DeltaMode::Kind::kOneOverT: cfg.delta = 1.0 / static_cast<double>(std::max<long long>(T, 2)); break;
  }
  switch (config.h_mode.kind) {
    case HMode::Kind::kExplicit: cfg.H = config.h_mode.value; break;
    case HMode::Kind::kHighProb: cfg.H = preset_h_high_prob(T, d_used, cfg.delta); break;
    case HMode::Kind::kExpected:
      cfg.H = preset_h_expected(T, config.game.num_states, config.game.num_actions_max,
                                config.game.num_actions_min);
      break;
  }
  cfg.validate();
  return cfg;
}

std::vector<double> regret_series(std::span<const double> rewards, double j_star) {
  std::vector<double> out(rewards.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    acc += j_star - rewards[i];
    out[i] = acc;
  }
  return out;
}

RegretRecord run_episode(const ExperimentConfig& config, long long T, std::uint64_t seed,
                         const ResolvedOracle& oracle) {
  if (T < 1) throw ValidationError("run_episode: T must be >= 1");
  const StochasticGame& game = config.game;
  const DonqConfig agent_cfg = build_agent_config(config, T, oracle.d_used);

  DonqAgent agent(agent_cfg, game.num_states, game.num_actions_max, game.num_actions_min);
  auto opponent = make_opponent(config.opponent, game, agent_cfg,
                                [&agent]() -> const MarkovPolicy& { return agent.policy(); });

  RandomStream agent_rng(seed, RandomStream::Role::kAgent);
  RandomStream opponent_rng(seed, RandomStream::Role::kOpponent);
  RandomStream env_rng(seed, RandomStream::Role::kEnvironment);

  RegretRecord rec;
  rec.states.reserve(T);
  rec.actions_max.reserve(T);
  rec.actions_min.reserve(T);
  rec.rewards.reserve(T);

  const auto t0 = std::chrono::steady_clock::now();
  int s = config.initial_state;
  for (long long t = 0; t < T; ++t) {
    const int a = agent.act(s, agent_rng);
    const int b = opponent->act(s, opponent_rng);
    const double r = game.r(s, a, b);
    const int s_next = sample_transition(game, s, a, b, env_rng);
    agent.observe(s, a, b, r, s_next);
    opponent->observe(s, a, b, r, s_next);
    rec.states.push_back(s);
    rec.actions_max.push_back(a);
    rec.actions_min.push_back(b);
    rec.rewards.push_back(r);
    s = s_next;
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  rec.j_star = oracle.j_star;
  rec.cum_regret = regret_series(rec.rewards, oracle.j_star);
  rec.meta = {T,
              seed,
              agent_cfg.H,
              agent_cfg.gamma(),
              agent_cfg.delta,
              oracle.d_used,
              oracle.d_source_name,
              oracle.j_star,
              oracle.j_star_error_bound,
              elapsed > 0.0 ? static_cast<double>(T) / elapsed : 0.0};
  return rec;
}

RegretRecord run_episode(const ExperimentConfig& config, std::uint64_t seed) {
  const ResolvedOracle oracle = resolve_oracle(config);
  return run_episode(config, config.horizons.front(), seed, oracle);
}

SweepSummary run_sweep(const ExperimentConfig& config, int threads) {
  const ResolvedOracle oracle = resolve_oracle(config);

  struct Job {
    long long T;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (long long T : config.horizons)
    for (std::uint64_t seed : config.seeds) jobs.push_back({T, seed});

  std::vector<double> finals(jobs.size(), 0.0);
  std::vector<double> elapsed_steps(jobs.size(), 0.0);
  std::vector<std::string> errors(jobs.size());

  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp<int>(workers, 1, static_cast<int>(jobs.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        RegretRecord rec = run_episode(config, jobs[i].T, jobs[i].seed, oracle);
        finals[i] = rec.cum_regret.back();
        elapsed_steps[i] =
            rec.meta.steps_per_second > 0.0 ? jobs[i].T / rec.meta.steps_per_second : 0.0;
      } catch (const std::exception& e) {
        errors[i] = e.what();
        return;
      }
    }
  };
  const auto t0 = std::chrono::steady_clock::now();
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  for (std::size_t i = 0; i < jobs.size(); ++i)
    if (!errors[i].empty())
      throw std::runtime_error("run_sweep: episode (T=" + std::to_string(jobs[i].T) +
                               ", seed=" + std::to_string(jobs[i].seed) + ") failed: " + errors[i]);

  SweepSummary summary;
  summary.game_desc = config.game_desc;
  summary.j_star = oracle.j_star;
  long long total_steps = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    summary.entries.push_back({jobs[i].T, jobs[i].seed, finals[i]});
    total_steps += jobs[i].T;
  }
  summary.steps_per_second = wall > 0.0 ? static_cast<double>(total_steps) / wall : 0.0;

  const std::size_t n_seeds = config.seeds.size();
  for (std::size_t hi = 0; hi < config.horizons.size(); ++hi) {
    const long long T = config.horizons[hi];
    double mean = 0.0;
    for (std::size_t si = 0; si < n_seeds; ++si) mean += finals[hi * n_seeds + si];
    mean /= static_cast<double>(n_seeds);
    double var = 0.0;
    for (std::size_t si = 0; si < n_seeds; ++si) {
      const double d = finals[hi * n_seeds + si] - mean;
      var += d * d;
    }
    const double stderr_v =
        n_seeds > 1 ? std::sqrt(var / static_cast<double>(n_seeds - 1) / static_cast<double>(n_seeds))
                    : 0.0;
    summary.means.push_back({T, build_agent_config(config, T, oracle.d_used).H, mean, stderr_v,
                             mean / static_cast<double>(T)});
  }
  return summary;
}

}  // namespace donq
