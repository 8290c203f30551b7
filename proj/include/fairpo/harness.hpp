#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairpo/baselines.hpp"
#include "fairpo/config.hpp"
#include "fairpo/envs/attention.hpp"
#include "fairpo/envs/bandit.hpp"
#include "fairpo/envs/disease.hpp"
#include "fairpo/envs/lending.hpp"
#include "fairpo/metrics.hpp"
#include "fairpo/nn.hpp"
#include "fairpo/ppo.hpp"

namespace fairpo {

// --- experiment configuration -------------------------------------------

struct ExperimentConfig {
  std::string name = "experiment";
  std::string environment;  // attention | lending | disease | bandit
  std::string agent;        // default agent, overridable per command
  int trials = 10;
  std::uint64_t seed = 1;
  ConfigFile raw;

  static ExperimentConfig load(const std::string& path) {
    ExperimentConfig cfg;
    cfg.raw = ConfigFile::load(path);
    cfg.name = cfg.raw.get_string("experiment", "name", std::filesystem::path(path).stem());
    cfg.environment = cfg.raw.get_string("experiment", "environment");
    cfg.agent = cfg.raw.get_string("experiment", "agent");
    cfg.trials = cfg.raw.get_int("experiment", "trials", 10);
    cfg.seed = cfg.raw.get_u64("experiment", "seed", 1);
    if (cfg.environment.empty())
      throw std::runtime_error(path + ": [experiment] environment is required");
    return cfg;
  }
};

inline bool is_ppo_agent(const std::string& agent) {
  return agent == "g_ppo" || agent == "r_ppo" || agent == "a_ppo";
}

/// Fairness-knob defaults per environment and PPO variant. Everything is
/// overridable from the [r_ppo]/[a_ppo] config sections.
inline void apply_fairness_defaults(PpoConfig& ppo, const std::string& environment,
                                    const std::string& agent) {
  if (agent == "g_ppo") {
    ppo.fairness_mode = FairnessMode::Greedy;
    return;
  }
  if (agent == "r_ppo") {
    ppo.fairness_mode = FairnessMode::RewardPenalty;
    if (environment == "attention")
      ppo.reward_penalty_weight = 10.0;
    else if (environment == "lending")
      ppo.reward_penalty_weight = 2.0;
    else if (environment == "disease")
      ppo.reward_penalty_weight = 0.1;
    else
      ppo.reward_penalty_weight = 1.0;
    return;
  }
  if (agent == "a_ppo") {
    ppo.fairness_mode = FairnessMode::AdvantageRegularized;
    if (environment == "attention") {
      ppo.regularizer.beta0 = 0.05;
      ppo.regularizer.beta1 = 0.32;
      ppo.regularizer.beta2 = 0.63;
      ppo.regularizer.normalize = false;
    } else if (environment == "lending") {
      ppo.regularizer.beta0 = 1.0;
      ppo.regularizer.beta1 = 0.5;
      ppo.regularizer.beta2 = 0.5;
      ppo.regularizer.normalize = true;
    } else if (environment == "disease") {
      ppo.regularizer.beta0 = 0.6;
      ppo.regularizer.beta1 = 0.15;
      ppo.regularizer.beta2 = 0.25;
      ppo.regularizer.normalize = true;
    } else {
      ppo.regularizer.beta0 = 1.0;
      ppo.regularizer.beta1 = 0.5;
      ppo.regularizer.beta2 = 0.5;
      ppo.regularizer.normalize = false;
    }
    return;
  }
  throw std::invalid_argument("apply_fairness_defaults: not a PPO agent: " + agent);
}

inline PpoConfig make_ppo_config(const ExperimentConfig& cfg, const std::string& agent) {
  PpoConfig ppo;
  const ConfigFile& raw = cfg.raw;
  ppo.gamma = raw.get_double("ppo", "gamma", ppo.gamma);
  ppo.clip_epsilon = raw.get_double("ppo", "clip_epsilon", ppo.clip_epsilon);
  ppo.policy_step = raw.get_double("ppo", "policy_step", ppo.policy_step);
  ppo.value_step = raw.get_double("ppo", "value_step", ppo.value_step);
  ppo.episodes_per_iteration =
      raw.get_int("ppo", "episodes_per_iteration", ppo.episodes_per_iteration);
  ppo.horizon = raw.get_int("ppo", "horizon", raw.get_int("env", "horizon", ppo.horizon));
  ppo.iterations = raw.get_int("ppo", "iterations", ppo.iterations);
  ppo.update_epochs = raw.get_int("ppo", "update_epochs", ppo.update_epochs);
  ppo.minibatch_size = raw.get_int("ppo", "minibatch_size", ppo.minibatch_size);
  ppo.hidden_sizes = raw.get_int_list("ppo", "hidden_sizes", ppo.hidden_sizes);
  ppo.policy_output_scale = raw.get_double("ppo", "policy_output_scale", ppo.policy_output_scale);
  ppo.standardize_advantage =
      raw.get_bool("ppo", "standardize_advantage", ppo.standardize_advantage);
  ppo.use_adam = raw.get_bool("ppo", "use_adam", ppo.use_adam);
  ppo.divergence_logit_bound =
      raw.get_double("ppo", "divergence_logit_bound", ppo.divergence_logit_bound);
  const std::string method = raw.get_string("ppo", "advantage_method", "returns_minus_baseline");
  if (method == "returns_minus_baseline")
    ppo.advantage_method = AdvantageMethod::ReturnsMinusBaseline;
  else if (method == "gae")
    ppo.advantage_method = AdvantageMethod::Gae;
  else
    throw std::runtime_error("unknown advantage_method: " + method);
  ppo.gae_lambda = raw.get_double("ppo", "gae_lambda", ppo.gae_lambda);

  const double omega = raw.get_double("ppo", "omega", 0.05);
  ppo.regularizer.omega = omega;

  apply_fairness_defaults(ppo, cfg.environment, agent);

  // Section overrides for the variant actually being trained.
  if (agent == "r_ppo") {
    ppo.reward_penalty_weight =
        raw.get_double("r_ppo", "zeta_fair", ppo.reward_penalty_weight);
    ppo.regularizer.omega = raw.get_double("r_ppo", "omega", ppo.regularizer.omega);
  } else if (agent == "a_ppo") {
    ppo.regularizer.beta0 = raw.get_double("a_ppo", "beta0", ppo.regularizer.beta0);
    ppo.regularizer.beta1 = raw.get_double("a_ppo", "beta1", ppo.regularizer.beta1);
    ppo.regularizer.beta2 = raw.get_double("a_ppo", "beta2", ppo.regularizer.beta2);
    ppo.regularizer.normalize = raw.get_bool("a_ppo", "normalize", ppo.regularizer.normalize);
    ppo.regularizer.omega = raw.get_double("a_ppo", "omega", ppo.regularizer.omega);
  }
  return ppo;
}

// --- environment construction ---------------------------------------------

inline AttentionConfig make_attention_config(const ConfigFile& raw) {
  AttentionConfig cfg;
  cfg.sites = raw.get_int("env", "sites", cfg.sites);
  cfg.units = raw.get_int("env", "units", cfg.units);
  cfg.drift = raw.get_double("env", "drift", cfg.drift);
  cfg.zeta0 = raw.get_double("env", "zeta0", cfg.zeta0);
  cfg.zeta1 = raw.get_double("env", "zeta1", cfg.zeta1);
  cfg.initial_rates = raw.get_double_list("env", "initial_rates", cfg.initial_rates);
  cfg.horizon = raw.get_int("env", "horizon", cfg.horizon);
  return cfg;
}

inline LendingConfig make_lending_config(const ConfigFile& raw) {
  LendingConfig cfg;
  cfg.c_max = raw.get_int("env", "c_max", cfg.c_max);
  cfg.eta = raw.get_double_list("env", "eta", cfg.eta);
  if (raw.has("env", "eta_base") || raw.has("env", "eta_slope")) {
    const double base = raw.get_double("env", "eta_base", 0.1);
    const double slope = raw.get_double("env", "eta_slope", 0.8);
    cfg.eta.resize(static_cast<std::size_t>(cfg.c_max));
    for (int c = 1; c <= cfg.c_max; ++c)
      cfg.eta[static_cast<std::size_t>(c - 1)] = base + slope * (c - 1) / (cfg.c_max - 1);
  }
  cfg.group_distributions[0] =
      raw.get_double_list("env", "group1_distribution", cfg.group_distributions[0]);
  cfg.group_distributions[1] =
      raw.get_double_list("env", "group2_distribution", cfg.group_distributions[1]);
  cfg.loan_amount = raw.get_double("env", "loan_amount", cfg.loan_amount);
  cfg.interest_rate = raw.get_double("env", "interest_rate", cfg.interest_rate);
  cfg.zeta0 = raw.get_double("env", "zeta0", cfg.zeta0);
  cfg.horizon = raw.get_int("env", "horizon", cfg.horizon);
  cfg.shift_fraction = raw.get_double("env", "shift_fraction", cfg.shift_fraction);
  return cfg;
}

inline DiseaseConfig make_disease_config(const ConfigFile& raw) {
  DiseaseConfig cfg;
  cfg.tau = raw.get_double("env", "tau", cfg.tau);
  cfg.rho = raw.get_double("env", "rho", cfg.rho);
  cfg.zeta0 = raw.get_double("env", "zeta0", cfg.zeta0);
  cfg.horizon = raw.get_int("env", "horizon", cfg.horizon);
  cfg.burn_in_steps = raw.get_int("env", "burn_in", cfg.burn_in_steps);
  return cfg;
}

inline AttentionEnv make_attention_env(const ConfigFile& raw) {
  return AttentionEnv(make_attention_config(raw));
}

inline LendingEnv make_lending_env(const ConfigFile& raw) {
  return LendingEnv(make_lending_config(raw));
}

inline DiseaseEnv make_disease_env(const ConfigFile& raw) {
  const std::string graph_file = raw.get_string("env", "graph");
  SocialGraph graph =
      graph_file.empty() ? SocialGraph::karate_club() : SocialGraph::load_edgelist(graph_file);
  return DiseaseEnv(std::move(graph), make_disease_config(raw));
}

inline BanditEnv make_bandit_env(const ConfigFile& raw) {
  std::vector<double> arms = raw.get_double_list("env", "arm_rewards", {1.0, 0.0});
  return BanditEnv(std::move(arms), raw.get_int("env", "horizon", 1));
}

// --- checkpoints -----------------------------------------------------------

struct Checkpoint {
  std::string environment;
  std::string agent;
  MlpNetwork policy;
  MlpNetwork value;
};

inline void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_checkpoint: cannot open " + path);
  const char magic[8] = {'F', 'P', 'C', 'K', 'P', 'T', '0', '1'};
  os.write(magic, sizeof(magic));
  auto write_str = [&os](const std::string& s) {
    const auto n = static_cast<std::uint32_t>(s.size());
    os.write(reinterpret_cast<const char*>(&n), sizeof(n));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
  };
  write_str(ckpt.environment);
  write_str(ckpt.agent);
  save_network(ckpt.policy, os);
  save_network(ckpt.value, os);
  if (!os) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_checkpoint: cannot open " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  const char expect[8] = {'F', 'P', 'C', 'K', 'P', 'T', '0', '1'};
  if (!is || !std::equal(std::begin(magic), std::end(magic), std::begin(expect)))
    throw std::runtime_error("load_checkpoint: bad magic in " + path);
  auto read_str = [&is, &path]() {
    std::uint32_t n = 0;
    is.read(reinterpret_cast<char*>(&n), sizeof(n));
    if (!is || n > 4096) throw std::runtime_error("load_checkpoint: corrupt string in " + path);
    std::string s(n, '\0');
    is.read(s.data(), n);
    if (!is) throw std::runtime_error("load_checkpoint: truncated " + path);
    return s;
  };
  Checkpoint ckpt;
  ckpt.environment = read_str();
  ckpt.agent = read_str();
  ckpt.policy = load_network(is);
  ckpt.value = load_network(is);
  return ckpt;
}

// --- training ---------------------------------------------------------------

struct TrainOutcome {
  Checkpoint checkpoint;
  std::vector<IterationLog> log;
};

/// Trains the requested PPO variant on the configured environment with the
/// table-default fairness weights (unless overridden in the config file).
inline TrainOutcome run_training(const ExperimentConfig& cfg, const std::string& agent,
                                 std::uint64_t seed, std::ostream* progress = nullptr) {
  if (!is_ppo_agent(agent))
    throw std::invalid_argument("run_training: agent must be one of g_ppo|r_ppo|a_ppo, got " +
                                (agent.empty() ? std::string("<none>") : agent));
  const PpoConfig ppo = make_ppo_config(cfg, agent);

  TrainResult result;
  if (cfg.environment == "attention")
    result = train(make_attention_env(cfg.raw), ppo, seed, progress);
  else if (cfg.environment == "lending")
    result = train(make_lending_env(cfg.raw), ppo, seed, progress);
  else if (cfg.environment == "disease")
    result = train(make_disease_env(cfg.raw), ppo, seed, progress);
  else if (cfg.environment == "bandit")
    result = train(make_bandit_env(cfg.raw), ppo, seed, progress);
  else
    throw std::runtime_error("run_training: unknown environment " + cfg.environment);

  TrainOutcome outcome;
  outcome.checkpoint.environment = cfg.environment;
  outcome.checkpoint.agent = agent;
  outcome.checkpoint.policy = std::move(result.policy);
  outcome.checkpoint.value = std::move(result.value);
  outcome.log = std::move(result.log);
  return outcome;
}

// --- evaluation --------------------------------------------------------------

/// How a trained policy picks actions at evaluation time.
enum class ActionSelection { Sample, Argmax };

template <class Env>
struct EvalAgent {
  std::function<std::vector<int>(const Env&, Rng&)> act;
  std::function<void(const Env&)> after_step;  // optional feedback hook
};

template <class Env>
EvalAgent<Env> make_policy_agent(MlpNetwork policy, ActionSelection selection) {
  EvalAgent<Env> agent;
  agent.act = [policy = std::move(policy), selection](const Env& env, Rng& rng) {
    const std::vector<double> probs = forward(policy, env.observe());
    std::vector<int> counts(probs.size(), 0);
    if (selection == ActionSelection::Argmax) {
      const auto best = std::max_element(probs.begin(), probs.end()) - probs.begin();
      counts[static_cast<std::size_t>(best)] = env.draws_per_step();
    } else {
      counts = rng.multinomial(probs, env.draws_per_step());
    }
    return counts;
  };
  return agent;
}

inline std::vector<int> one_hot_action(int index, int dim) {
  std::vector<int> counts(static_cast<std::size_t>(dim), 0);
  counts[static_cast<std::size_t>(index)] = 1;
  return counts;
}

inline EvalAgent<AttentionEnv> make_attention_baseline(const std::string& name,
                                                       const AttentionEnv& env) {
  if (name != "purely_greedy")
    throw std::runtime_error("attention baseline must be purely_greedy, got " + name);
  auto estimator = std::make_shared<RateEstimator>(env.action_dim());
  EvalAgent<AttentionEnv> agent;
  agent.act = [estimator](const AttentionEnv& e, Rng&) {
    return purely_greedy_allocate(*estimator, e.draws_per_step());
  };
  agent.after_step = [estimator](const AttentionEnv& e) {
    estimator->update(e.last_allocation(), e.last_discovered());
  };
  return agent;
}

inline EvalAgent<LendingEnv> make_lending_baseline(const std::string& name) {
  EvalAgent<LendingEnv> agent;
  if (name == "greedy_lend") {
    agent.act = [](const LendingEnv& e, Rng&) {
      const LendDecision d = greedy_lend(e.eta(e.applicant().credit_score),
                                         e.config().loan_amount, e.config().interest_rate);
      return one_hot_action(static_cast<int>(d), 2);
    };
  } else if (name == "eo") {
    // Thresholds are refit from the current (oracle) score distributions at
    // every step, since lending dynamics move them.
    agent.act = [](const LendingEnv& e, Rng&) {
      const EoThresholds th = eo_thresholds(e.distributions(), e.config().eta,
                                            e.config().loan_amount, e.config().interest_rate);
      return one_hot_action(static_cast<int>(th.decide(e.applicant())), 2);
    };
  } else {
    throw std::runtime_error("lending baseline must be greedy_lend or eo, got " + name);
  }
  return agent;
}

inline EvalAgent<DiseaseEnv> make_disease_baseline(const std::string& name) {
  EvalAgent<DiseaseEnv> agent;
  if (name == "random") {
    agent.act = [](const DiseaseEnv& e, Rng& rng) {
      return one_hot_action(random_vaccinate(e.statuses(), rng), e.action_dim());
    };
  } else if (name == "max_neighbor") {
    agent.act = [](const DiseaseEnv& e, Rng&) {
      return one_hot_action(max_neighbor_vaccinate(e.statuses(), e.graph()), e.action_dim());
    };
  } else {
    throw std::runtime_error("disease baseline must be random or max_neighbor, got " + name);
  }
  return agent;
}

/// Environment-specific extra series captured during evaluation.
template <class Env>
struct MetricsAdapter;

template <>
struct MetricsAdapter<AttentionEnv> {
  static std::vector<std::string> extra_names(const AttentionEnv& env) {
    std::vector<std::string> names;
    for (int k = 0; k < env.action_dim(); ++k) names.push_back("rate_" + std::to_string(k));
    names.push_back("rate_mean");
    return names;
  }
  static std::vector<double> extras(const AttentionEnv& env) {
    std::vector<double> out(env.rates().begin(), env.rates().end());
    out.push_back(env.mean_rate());
    return out;
  }
  static std::vector<std::string> raw_names(const AttentionEnv& env) {
    std::vector<std::string> names;
    for (int k = 0; k < env.action_dim(); ++k) names.push_back("cum_discovered_" + std::to_string(k));
    for (int k = 0; k < env.action_dim(); ++k) names.push_back("cum_occurred_" + std::to_string(k));
    return names;
  }
  static std::vector<double> raw(const AttentionEnv& env) {
    std::vector<double> out;
    for (long long v : env.cum_discovered()) out.push_back(static_cast<double>(v));
    for (long long v : env.cum_occurred()) out.push_back(static_cast<double>(v));
    return out;
  }
};

template <>
struct MetricsAdapter<LendingEnv> {
  static std::vector<std::string> extra_names(const LendingEnv&) {
    return {"bank_cash", "loans_g1", "loans_g2"};
  }
  static std::vector<double> extras(const LendingEnv& env) {
    return {env.bank_cash(), static_cast<double>(env.loans_given(1)),
            static_cast<double>(env.loans_given(2))};
  }
  static std::vector<std::string> raw_names(const LendingEnv&) {
    return {"tp_g1", "fn_g1", "tp_g2", "fn_g2"};
  }
  static std::vector<double> raw(const LendingEnv& env) {
    return {static_cast<double>(env.tp(1)), static_cast<double>(env.fn(1)),
            static_cast<double>(env.tp(2)), static_cast<double>(env.fn(2))};
  }
};

template <>
struct MetricsAdapter<DiseaseEnv> {
  static std::vector<std::string> extra_names(const DiseaseEnv&) { return {"frac_infected"}; }
  static std::vector<double> extras(const DiseaseEnv& env) { return {env.fraction_infected()}; }
  static std::vector<std::string> raw_names(const DiseaseEnv& env) {
    std::vector<std::string> names;
    for (int c = 1; c <= env.num_communities(); ++c) {
      names.push_back("vaccinations_c" + std::to_string(c));
      names.push_back("newly_infected_c" + std::to_string(c));
    }
    return names;
  }
  static std::vector<double> raw(const DiseaseEnv& env) {
    std::vector<double> out;
    for (int c = 1; c <= env.num_communities(); ++c) {
      out.push_back(static_cast<double>(env.vaccinations_given()[static_cast<std::size_t>(c - 1)]));
      out.push_back(static_cast<double>(env.newly_infected()[static_cast<std::size_t>(c - 1)]));
    }
    return out;
  }
};

template <>
struct MetricsAdapter<BanditEnv> {
  static std::vector<std::string> extra_names(const BanditEnv&) { return {}; }
  static std::vector<double> extras(const BanditEnv&) { return {}; }
  static std::vector<std::string> raw_names(const BanditEnv&) { return {}; }
  static std::vector<double> raw(const BanditEnv&) { return {}; }
};

/// Runs `trials` independent episodes (trial i uses substream seed+i) and
/// records reward, the fairness metric after every step, and env extras.
template <class Env>
MetricsSeries evaluate_agent(Env& env, const EvalAgent<Env>& agent, int trials, int horizon,
                             std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("evaluate_agent: trials >= 1");
  MetricsSeries series;
  series.trials = trials;
  series.horizon = horizon;
  series.extra_names = MetricsAdapter<Env>::extra_names(env);
  series.raw_names = MetricsAdapter<Env>::raw_names(env);
  series.extras.assign(series.extra_names.size(), {});
  series.raw.assign(series.raw_names.size(), {});

  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, 0x9e1d, static_cast<std::uint64_t>(trial)));
    env.reset(rng);
    std::vector<double> rewards, deltas;
    std::vector<std::vector<double>> extras(series.extra_names.size());
    std::vector<std::vector<double>> raws(series.raw_names.size());
    for (int t = 0; t < horizon; ++t) {
      const std::vector<int> action = agent.act(env, rng);
      const double reward = env.step(action, rng);
      if (agent.after_step) agent.after_step(env);
      rewards.push_back(reward);
      deltas.push_back(env.fairness_delta());
      const auto ex = MetricsAdapter<Env>::extras(env);
      for (std::size_t x = 0; x < ex.size(); ++x) extras[x].push_back(ex[x]);
      const auto rw = MetricsAdapter<Env>::raw(env);
      for (std::size_t x = 0; x < rw.size(); ++x) raws[x].push_back(rw[x]);
    }
    series.reward.push_back(std::move(rewards));
    series.delta.push_back(std::move(deltas));
    for (std::size_t x = 0; x < extras.size(); ++x)
      series.extras[x].push_back(std::move(extras[x]));
    for (std::size_t x = 0; x < raws.size(); ++x) series.raw[x].push_back(std::move(raws[x]));
  }
  series.validate();
  return series;
}

template <class Env>
EvalAgent<Env> make_env_baseline(const std::string& name, const Env& env);

template <>
inline EvalAgent<AttentionEnv> make_env_baseline(const std::string& name,
                                                 const AttentionEnv& env) {
  return make_attention_baseline(name, env);
}
template <>
inline EvalAgent<LendingEnv> make_env_baseline(const std::string& name, const LendingEnv&) {
  return make_lending_baseline(name);
}
template <>
inline EvalAgent<DiseaseEnv> make_env_baseline(const std::string& name, const DiseaseEnv&) {
  return make_disease_baseline(name);
}
template <>
inline EvalAgent<BanditEnv> make_env_baseline(const std::string& name, const BanditEnv&) {
  throw std::runtime_error("bandit has no baseline agents, got " + name);
}

template <class Env>
MetricsSeries run_eval_env(Env env, const std::string& agent,
                           const std::optional<Checkpoint>& ckpt, int trials,
                           std::uint64_t seed, ActionSelection selection) {
  const int horizon = env.horizon();
  EvalAgent<Env> eval_agent;
  if (is_ppo_agent(agent)) {
    if (!ckpt) throw std::runtime_error("run_eval: PPO agent " + agent + " needs a checkpoint");
    if (ckpt->policy.input_dim() != env.observation_dim() ||
        ckpt->policy.output_dim() != env.action_dim())
      throw std::runtime_error("run_eval: checkpoint dimensions do not match environment");
    eval_agent = make_policy_agent<Env>(ckpt->policy, selection);
  } else {
    eval_agent = make_env_baseline<Env>(agent, env);
  }
  return evaluate_agent(env, eval_agent, trials, horizon, seed);
}

/// Evaluates a trained checkpoint or named baseline over independent trials.
inline MetricsSeries run_eval(const ExperimentConfig& cfg, const std::string& agent,
                              const std::optional<Checkpoint>& ckpt, int trials,
                              std::uint64_t seed,
                              ActionSelection selection = ActionSelection::Sample) {
  if (ckpt && is_ppo_agent(agent) && ckpt->environment != cfg.environment)
    throw std::runtime_error("run_eval: checkpoint was trained on " + ckpt->environment +
                             " but config is for " + cfg.environment);
  if (cfg.environment == "attention")
    return run_eval_env(make_attention_env(cfg.raw), agent, ckpt, trials, seed, selection);
  if (cfg.environment == "lending")
    return run_eval_env(make_lending_env(cfg.raw), agent, ckpt, trials, seed, selection);
  if (cfg.environment == "disease")
    return run_eval_env(make_disease_env(cfg.raw), agent, ckpt, trials, seed, selection);
  if (cfg.environment == "bandit")
    return run_eval_env(make_bandit_env(cfg.raw), agent, ckpt, trials, seed, selection);
  throw std::runtime_error("run_eval: unknown environment " + cfg.environment);
}

}  // namespace fairpo
