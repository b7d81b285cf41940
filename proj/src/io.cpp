#include "donq/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "donq/common.hpp"

namespace donq {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open file for writing: " + path);
  out << text;
}

// Strict parsing: every present key must be in the allowed set.
void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& context) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw ValidationError(context + ": unknown key \"" + item.key() + "\"");
  }
}

const json& require(const json& j, const char* key, const std::string& context) {
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(context + ": missing key \"" + key + "\"");
  return *it;
}

double as_number(const json& j, const std::string& context) {
  if (!j.is_number()) throw ValidationError(context + ": expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& context) {
  if (!j.is_number_integer()) throw ValidationError(context + ": expected an integer");
  return j.get<int>();
}

// Renormalizes a probability row in place; rejects rows off by more than
// kProbTolerance or with negative entries.
void normalize_row(double* row, int n, const std::string& where) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (row[i] < 0.0) throw ValidationError(where + ": negative probability");
    sum += row[i];
  }
  if (!prob_sum_within_tolerance(sum))
    throw ValidationError(where + ": row sums to " + std::to_string(sum));
  for (int i = 0; i < n; ++i) row[i] /= sum;
}

}  // namespace

StochasticGame load_game(const std::string& path) {
  const json j = parse_file(path);
  check_keys(j, {"S", "A", "B", "r", "P"}, path);
  StochasticGame g;
  g.num_states = as_int(require(j, "S", path), path + ": S");
  g.num_actions_max = as_int(require(j, "A", path), path + ": A");
  g.num_actions_min = as_int(require(j, "B", path), path + ": B");
  if (g.num_states < 1 || g.num_actions_max < 1 || g.num_actions_min < 1)
    throw ValidationError(path + ": S, A, B must be positive");
  const json& r = require(j, "r", path);
  const json& p = require(j, "P", path);
  const int S = g.num_states, A = g.num_actions_max, B = g.num_actions_min;
  g.reward.resize(static_cast<std::size_t>(S) * A * B);
  g.transition.resize(g.reward.size() * S);
  if (!r.is_array() || static_cast<int>(r.size()) != S)
    throw ValidationError(path + ": r must have S outer entries");
  if (!p.is_array() || static_cast<int>(p.size()) != S)
    throw ValidationError(path + ": P must have S outer entries");
  for (int s = 0; s < S; ++s) {
    const json& rs = r[s];
    const json& ps = p[s];
    if (!rs.is_array() || static_cast<int>(rs.size()) != A ||
        !ps.is_array() || static_cast<int>(ps.size()) != A)
      throw ValidationError(path + ": r/P state " + std::to_string(s) + " must have A rows");
    for (int a = 0; a < A; ++a) {
      if (!rs[a].is_array() || static_cast<int>(rs[a].size()) != B ||
          !ps[a].is_array() || static_cast<int>(ps[a].size()) != B)
        throw ValidationError(path + ": r/P at (s=" + std::to_string(s) +
                              ",a=" + std::to_string(a) + ") must have B entries");
      for (int b = 0; b < B; ++b) {
        const std::string where =
            path + " (s=" + std::to_string(s) + ",a=" + std::to_string(a) +
            ",b=" + std::to_string(b) + ")";
        const double rv = as_number(rs[a][b], where + " reward");
        if (!(rv >= 0.0 && rv <= 1.0)) throw ValidationError(where + ": reward outside [0,1]");
        g.reward[g.reward_index(s, a, b)] = rv;
        const json& row = ps[a][b];
        if (!row.is_array() || static_cast<int>(row.size()) != S)
          throw ValidationError(where + ": transition row must have S entries");
        double* dst = g.transition.data() + static_cast<std::size_t>(g.reward_index(s, a, b)) * S;
        for (int sp = 0; sp < S; ++sp) dst[sp] = as_number(row[sp], where + " transition");
        normalize_row(dst, S, where);
      }
    }
  }
  return g;
}

void save_game(const StochasticGame& game, const std::string& path) {
  ojson j;
  j["S"] = game.num_states;
  j["A"] = game.num_actions_max;
  j["B"] = game.num_actions_min;
  ojson r = ojson::array(), p = ojson::array();
  for (int s = 0; s < game.num_states; ++s) {
    ojson rs = ojson::array(), ps = ojson::array();
    for (int a = 0; a < game.num_actions_max; ++a) {
      ojson ra = ojson::array(), pa = ojson::array();
      for (int b = 0; b < game.num_actions_min; ++b) {
        ra.push_back(game.r(s, a, b));
        auto row = game.transition_row(s, a, b);
        pa.push_back(ojson(std::vector<double>(row.begin(), row.end())));
      }
      rs.push_back(std::move(ra));
      ps.push_back(std::move(pa));
    }
    r.push_back(std::move(rs));
    p.push_back(std::move(ps));
  }
  j["r"] = std::move(r);
  j["P"] = std::move(p);
  write_file(path, j.dump(2) + "\n");
}

MarkovPolicy load_policy(const std::string& path) {
  const json j = parse_file(path);
  check_keys(j, {"owner", "dist"}, path);
  const json& owner = require(j, "owner", path);
  MarkovPolicy p;
  if (owner == "max")
    p.owner = PlayerSide::kMax;
  else if (owner == "min")
    p.owner = PlayerSide::kMin;
  else
    throw ValidationError(path + ": owner must be \"max\" or \"min\"");
  const json& dist = require(j, "dist", path);
  if (!dist.is_array() || dist.empty()) throw ValidationError(path + ": dist must be a non-empty array");
  p.num_states = static_cast<int>(dist.size());
  p.num_actions = dist[0].is_array() ? static_cast<int>(dist[0].size()) : 0;
  if (p.num_actions < 1) throw ValidationError(path + ": dist rows must be non-empty arrays");
  p.dist.resize(static_cast<std::size_t>(p.num_states) * p.num_actions);
  for (int s = 0; s < p.num_states; ++s) {
    const json& row = dist[s];
    if (!row.is_array() || static_cast<int>(row.size()) != p.num_actions)
      throw ValidationError(path + ": dist row " + std::to_string(s) + " has the wrong length");
    double* dst = p.dist.data() + static_cast<std::size_t>(s) * p.num_actions;
    for (int i = 0; i < p.num_actions; ++i)
      dst[i] = as_number(row[i], path + " dist[" + std::to_string(s) + "]");
    normalize_row(dst, p.num_actions, path + " dist[" + std::to_string(s) + "]");
  }
  return p;
}

void save_policy(const MarkovPolicy& policy, const std::string& path) {
  ojson j;
  j["owner"] = policy.owner == PlayerSide::kMax ? "max" : "min";
  ojson dist = ojson::array();
  for (int s = 0; s < policy.num_states; ++s) {
    auto row = policy.row(s);
    dist.push_back(ojson(std::vector<double>(row.begin(), row.end())));
  }
  j["dist"] = std::move(dist);
  write_file(path, j.dump(2) + "\n");
}

std::tuple<std::vector<double>, int, int> load_matrix(const std::string& path) {
  const json j = parse_file(path);
  check_keys(j, {"M"}, path);
  const json& m = require(j, "M", path);
  if (!m.is_array() || m.empty()) throw ValidationError(path + ": M must be a non-empty array");
  const int rows = static_cast<int>(m.size());
  const int cols = m[0].is_array() ? static_cast<int>(m[0].size()) : 0;
  if (cols < 1) throw ValidationError(path + ": M rows must be non-empty arrays");
  std::vector<double> data(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i) {
    if (!m[i].is_array() || static_cast<int>(m[i].size()) != cols)
      throw ValidationError(path + ": M row " + std::to_string(i) + " has the wrong length");
    for (int jx = 0; jx < cols; ++jx)
      data[static_cast<std::size_t>(i) * cols + jx] =
          as_number(m[i][jx], path + " M[" + std::to_string(i) + "]");
  }
  return {std::move(data), rows, cols};
}

namespace {

GameGenSpec parse_gen_spec(const json& j, const std::string& context) {
  check_keys(j, {"S", "A", "B", "mixing_epsilon", "reward_law", "seed"}, context);
  GameGenSpec spec;
  spec.S = as_int(require(j, "S", context), context + ": S");
  spec.A = as_int(require(j, "A", context), context + ": A");
  spec.B = as_int(require(j, "B", context), context + ": B");
  spec.mixing_epsilon = as_number(require(j, "mixing_epsilon", context), context);
  if (auto it = j.find("reward_law"); it != j.end()) {
    if (it->is_string() && *it == "uniform01") {
      spec.reward_law.kind = RewardLaw::Kind::kUniform01;
    } else if (it->is_object()) {
      check_keys(*it, {"bernoulli"}, context + ".reward_law");
      spec.reward_law.kind = RewardLaw::Kind::kBernoulli;
      spec.reward_law.p = as_number(require(*it, "bernoulli", context), context + ": bernoulli p");
    } else {
      throw ValidationError(context + ": reward_law must be \"uniform01\" or {\"bernoulli\": p}");
    }
  }
  spec.seed = require(j, "seed", context).get<std::uint64_t>();
  return spec;
}

OpponentSpec parse_opponent(const json& j, const std::string& context) {
  const json& kind = require(j, "kind", context);
  OpponentSpec spec;
  if (kind == "uniform") {
    check_keys(j, {"kind"}, context);
    spec.kind = OpponentSpec::Kind::kUniform;
  } else if (kind == "fixed_markov") {
    check_keys(j, {"kind", "policy_file"}, context);
    spec.kind = OpponentSpec::Kind::kFixedMarkov;
    spec.policy = load_policy(require(j, "policy_file", context).get<std::string>());
  } else if (kind == "stationary_nash") {
    check_keys(j, {"kind", "gamma"}, context);
    spec.kind = OpponentSpec::Kind::kStationaryNash;
    if (auto it = j.find("gamma"); it != j.end()) spec.nash_gamma = as_number(*it, context);
  } else if (kind == "best_responder") {
    check_keys(j, {"kind", "period", "gamma", "tol"}, context);
    spec.kind = OpponentSpec::Kind::kBestResponder;
    spec.period = require(j, "period", context).get<std::uint64_t>();
    if (spec.period < 1) throw ValidationError(context + ": period must be >= 1");
    if (auto it = j.find("gamma"); it != j.end()) spec.br_gamma = as_number(*it, context);
    if (auto it = j.find("tol"); it != j.end()) spec.br_tol = as_number(*it, context);
  } else if (kind == "self_play_mirror") {
    check_keys(j, {"kind"}, context);
    spec.kind = OpponentSpec::Kind::kSelfPlayMirror;
  } else {
    throw ValidationError(context + ": unknown opponent kind");
  }
  return spec;
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  const json j = parse_file(path);
  check_keys(j, {"game", "agent", "opponent", "oracle", "sweep"}, path);
  ExperimentConfig cfg;

  const json& game = require(j, "game", path);
  check_keys(game, {"file", "generate"}, path + ".game");
  if (game.contains("file") == game.contains("generate"))
    throw ValidationError(path + ".game: give exactly one of \"file\" or \"generate\"");
  if (game.contains("file")) {
    const std::string file = game["file"].get<std::string>();
    cfg.game = load_game(file);
    cfg.game_desc = file;
  } else {
    const GameGenSpec spec = parse_gen_spec(game["generate"], path + ".game.generate");
    cfg.game = generate_random_communicating_game(spec);
    std::ostringstream desc;
    desc << "generated(S=" << spec.S << ",A=" << spec.A << ",B=" << spec.B
         << ",eps=" << spec.mixing_epsilon << ",seed=" << spec.seed << ")";
    cfg.game_desc = desc.str();
  }

  const json& agent = require(j, "agent", path);
  check_keys(agent, {"H", "delta", "d"}, path + ".agent");
  const json& h = require(agent, "H", path + ".agent");
  if (h.is_number()) {
    cfg.h_mode = {HMode::Kind::kExplicit, h.get<double>()};
  } else if (h == "high-prob") {
    cfg.h_mode.kind = HMode::Kind::kHighProb;
  } else if (h == "expected") {
    cfg.h_mode.kind = HMode::Kind::kExpected;
  } else {
    throw ValidationError(path + ".agent.H: expected a number, \"high-prob\" or \"expected\"");
  }
  const json& delta = require(agent, "delta", path + ".agent");
  if (delta.is_number()) {
    cfg.delta_mode = {DeltaMode::Kind::kExplicit, delta.get<double>()};
  } else if (delta == "one-over-T") {
    cfg.delta_mode.kind = DeltaMode::Kind::kOneOverT;
  } else {
    throw ValidationError(path + ".agent.delta: expected a number or \"one-over-T\"");
  }
  const json& d = require(agent, "d", path + ".agent");
  if (d.is_number()) {
    cfg.d_source = {DSource::Kind::kUserSupplied, d.get<double>()};
  } else if (d == "estimator") {
    cfg.d_source.kind = DSource::Kind::kEstimator;
  } else {
    throw ValidationError(path + ".agent.d: expected a number or \"estimator\"");
  }

  cfg.opponent = parse_opponent(require(j, "opponent", path), path + ".opponent");

  if (auto it = j.find("oracle"); it != j.end()) {
    check_keys(*it, {"target_err"}, path + ".oracle");
    if (auto t = it->find("target_err"); t != it->end())
      cfg.oracle_target_err = as_number(*t, path + ".oracle.target_err");
  }

  const json& sweep = require(j, "sweep", path);
  check_keys(sweep, {"T_values", "seeds", "initial_state"}, path + ".sweep");
  for (const json& t : require(sweep, "T_values", path + ".sweep"))
    cfg.horizons.push_back(t.get<long long>());
  for (const json& s : require(sweep, "seeds", path + ".sweep"))
    cfg.seeds.push_back(s.get<std::uint64_t>());
  if (auto it = sweep.find("initial_state"); it != sweep.end())
    cfg.initial_state = as_int(*it, path + ".sweep.initial_state");

  cfg.validate();
  return cfg;
}

void write_episode_csv(const RegretRecord& record, std::ostream& out) {
  out << "t,s,a,b,reward,cum_regret\n";
  char buf[96];
  for (std::size_t i = 0; i < record.rewards.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%lld,%d,%d,%d,%.17g,%.17g\n",
                  static_cast<long long>(i + 1), record.states[i], record.actions_max[i],
                  record.actions_min[i], record.rewards[i], record.cum_regret[i]);
    out << buf;
  }
}

std::string sweep_summary_to_json(const SweepSummary& summary) {
  ojson j;
  j["game"] = summary.game_desc;
  j["j_star"] = summary.j_star;
  ojson entries = ojson::array();
  for (const auto& e : summary.entries) {
    ojson je;
    je["T"] = e.T;
    je["seed"] = e.seed;
    je["final_regret"] = e.final_regret;
    entries.push_back(std::move(je));
  }
  j["entries"] = std::move(entries);
  ojson means = ojson::array();
  for (const auto& m : summary.means) {
    ojson jm;
    jm["T"] = m.T;
    jm["H"] = m.H;
    jm["mean_final_regret"] = m.mean_final_regret;
    jm["stderr_final_regret"] = m.stderr_final_regret;
    jm["mean_regret_per_step"] = m.mean_regret_per_step;
    means.push_back(std::move(jm));
  }
  j["means"] = std::move(means);
  j["steps_per_second"] = summary.steps_per_second;
  return j.dump(2) + "\n";
}

std::string diameter_to_json(const DiameterEstimate& estimate) {
  ojson j;
  j["d_hat"] = estimate.d_hat;
  j["method"] = estimate.method == DiameterEstimate::Method::kUserSupplied
                    ? "user_supplied"
                    : "deterministic_enumeration";
  ojson pairs = ojson::array();
  for (const auto& p : estimate.pairs) {
    ojson jp;
    jp["from"] = p.from;
    jp["to"] = p.to;
    jp["worst_opponent"] = p.worst_opponent;
    jp["hitting_time"] = p.hitting_time;
    pairs.push_back(std::move(jp));
  }
  j["pairs"] = std::move(pairs);
  return j.dump(2) + "\n";
}

std::string average_value_to_json(const AverageRewardSolution& solution) {
  ojson j;
  j["j_star"] = solution.j_star;
  j["gamma_used"] = solution.gamma_used;
  j["error_bound"] = solution.error_bound;
  j["v_star"] = solution.v_star_ref;
  return j.dump(2) + "\n";
}

std::string matrix_solution_to_json(const MatrixGameSolution& solution) {
  ojson j;
  j["value"] = solution.value;
  j["max_policy"] = solution.max_policy;
  j["min_policy"] = solution.min_policy;
  j["duality_gap"] = solution.duality_gap;
  return j.dump(2) + "\n";
}

std::string validation_report_to_json(const ValidationReport& report) {
  ojson j;
  j["ok"] = report.ok();
  ojson v = ojson::array();
  for (const auto& violation : report.violations) v.push_back(violation.describe());
  j["violations"] = std::move(v);
  return j.dump(2) + "\n";
}

}  // namespace donq
