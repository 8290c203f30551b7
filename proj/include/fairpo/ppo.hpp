#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairpo/nn.hpp"
#include "fairpo/regularizer.hpp"
#include "fairpo/rollout.hpp"
#include "fairpo/rng.hpp"

namespace fairpo {

/// How fairness enters training: not at all, as a reward-level penalty, or as
/// advantage regularization.
enum class FairnessMode { Greedy, RewardPenalty, AdvantageRegularized };

inline const char* fairness_mode_name(FairnessMode m) {
  switch (m) {
    case FairnessMode::Greedy: return "greedy";
    case FairnessMode::RewardPenalty: return "reward_penalty";
    case FairnessMode::AdvantageRegularized: return "advantage_regularized";
  }
  return "?";
}

struct PpoConfig {
  double gamma = 0.99;
  double clip_epsilon = 0.2;
  double policy_step = 3e-4;
  double value_step = 1e-3;
  int episodes_per_iteration = 8;
  int horizon = 200;
  int iterations = 100;
  int update_epochs = 4;
  int minibatch_size = 256;
  std::vector<int> hidden_sizes = {64, 64};
  double policy_output_scale = 0.01;   // keeps the initial policy near uniform

  AdvantageMethod advantage_method = AdvantageMethod::ReturnsMinusBaseline;
  double gae_lambda = 0.95;
  // Zero-mean/unit-variance scaling of the base advantage across the batch.
  // Only applied when the regularizer is not in min-max mode.
  bool standardize_advantage = true;

  FairnessMode fairness_mode = FairnessMode::Greedy;
  double reward_penalty_weight = 0.0;  // zeta for FairnessMode::RewardPenalty
  RegularizerConfig regularizer;       // betas/omega for AdvantageRegularized;
                                       // omega is shared with RewardPenalty

  bool use_adam = true;
  AdamConfig adam;
  double divergence_logit_bound = 60.0;

  void validate() const {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("PpoConfig: gamma in (0,1]");
    if (!(clip_epsilon > 0.0 && clip_epsilon < 1.0))
      throw std::invalid_argument("PpoConfig: clip_epsilon in (0,1)");
    if (policy_step <= 0 || value_step <= 0)
      throw std::invalid_argument("PpoConfig: step sizes must be positive");
    if (episodes_per_iteration < 1 || horizon < 1 || iterations < 1 || update_epochs < 1)
      throw std::invalid_argument("PpoConfig: counts must be >= 1");
    if (minibatch_size < 1) throw std::invalid_argument("PpoConfig: minibatch_size >= 1");
    if (minibatch_size > episodes_per_iteration * horizon)
      throw std::invalid_argument("PpoConfig: minibatch_size exceeds buffer size");
    regularizer.validate();
    if (fairness_mode == FairnessMode::RewardPenalty && reward_penalty_weight < 0)
      throw std::invalid_argument("PpoConfig: reward penalty weight must be >= 0");
  }

  /// The regularizer actually applied in the update step. Greedy and
  /// reward-penalty training use the plain advantage (beta0=1, no penalties).
  RegularizerConfig effective_regularizer() const {
    if (fairness_mode == FairnessMode::AdvantageRegularized) return regularizer;
    RegularizerConfig plain;
    plain.beta0 = 1.0;
    plain.beta1 = 0.0;
    plain.beta2 = 0.0;
    plain.omega = regularizer.omega;
    plain.normalize = false;
    return plain;
  }
};

struct ClipLossResult {
  double objective = 0.0;
  GradientSet gradients;  // ascent direction for the objective
  int skipped = 0;        // transitions dropped due to non-finite ratios
};

/// Clipped surrogate objective and its policy gradient over a minibatch.
/// `advantages[j]` is the (already regularized) advantage for
/// `buffer.transitions[indices[j]]`. Per-sample contribution is
/// min(R*A, clip(R, 1-eps, 1+eps)*A) with R the probability ratio against the
/// behavior policy recorded at collection time.
inline ClipLossResult ppo_clip_loss(const MlpNetwork& policy, const RolloutBuffer& buffer,
                                    std::span<const int> indices,
                                    std::span<const double> advantages, double epsilon) {
  if (indices.size() != advantages.size())
    throw std::invalid_argument("ppo_clip_loss: indices/advantages length mismatch");
  if (indices.empty()) throw std::invalid_argument("ppo_clip_loss: empty minibatch");

  ClipLossResult result;
  result.gradients = policy.zero_gradients();
  double objective_sum = 0.0;
  int used = 0;

  ForwardCache cache;
  for (std::size_t j = 0; j < indices.size(); ++j) {
    const Transition& tr = buffer.transitions[static_cast<std::size_t>(indices[j])];
    const double adv = advantages[j];
    const std::vector<double> probs = forward(policy, tr.state_obs, cache);
    const double lp_new = log_prob_of_counts(probs, tr.action);
    const double ratio = std::exp(lp_new - tr.log_prob_behavior);
    if (!std::isfinite(ratio)) {
      ++result.skipped;
      continue;
    }
    ++used;
    const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
    objective_sum += std::min(ratio * adv, clipped * adv);

    // Gradient flows only while the clip is not binding against the sample.
    const bool clipped_off =
        (adv > 0.0 && ratio > 1.0 + epsilon) || (adv < 0.0 && ratio < 1.0 - epsilon);
    if (clipped_off || adv == 0.0 || ratio == 0.0) continue;

    // d/dlogits of (ratio * adv) = adv * ratio * (counts - draws * probs),
    // expressed through the softmax output gradient d/dp_k = coeff * counts_k / p_k.
    const double coeff = adv * ratio;
    std::vector<double> out_grad(probs.size(), 0.0);
    for (std::size_t k = 0; k < probs.size(); ++k)
      if (tr.action[k] > 0) out_grad[k] = coeff * tr.action[k] / probs[k];
    GradientSet g = backward(policy, cache, out_grad);
    result.gradients.accumulate(g);
  }

  if (used == 0) throw std::runtime_error("ppo_clip_loss: all transitions skipped");
  result.gradients.scale(1.0 / used);
  result.objective = objective_sum / used;
  return result;
}

struct ValueLossResult {
  double mse = 0.0;
  GradientSet gradients;  // gradient of the MSE (descend by applying negated)
};

/// Mean squared error of the value net against stored returns, with its
/// gradient over the minibatch.
inline ValueLossResult value_loss(const MlpNetwork& value_net, const RolloutBuffer& buffer,
                                  std::span<const int> indices) {
  if (!buffer.returns_computed) throw std::invalid_argument("value_loss: returns not computed");
  if (indices.empty()) throw std::invalid_argument("value_loss: empty minibatch");

  ValueLossResult result;
  result.gradients = value_net.zero_gradients();
  double sum = 0.0;
  ForwardCache cache;
  for (int idx : indices) {
    const Transition& tr = buffer.transitions[static_cast<std::size_t>(idx)];
    const double v = forward(value_net, tr.state_obs, cache)[0];
    const double err = v - tr.ret;
    sum += err * err;
    const double out_grad[1] = {2.0 * err};
    GradientSet g = backward(value_net, cache, out_grad);
    result.gradients.accumulate(g);
  }
  const double inv = 1.0 / static_cast<double>(indices.size());
  result.gradients.scale(inv);
  result.mse = sum * inv;
  return result;
}

struct IterationLog {
  int iteration = 0;
  double mean_reward = 0.0;   // raw environment reward
  double mean_delta = 0.0;    // fairness metric at visited states
  double objective = 0.0;     // clipped surrogate, averaged over minibatches
  double value_loss = 0.0;
};

struct TrainResult {
  MlpNetwork policy;
  MlpNetwork value;
  std::vector<IterationLog> log;
  std::string advantage_method;
};

/// Thrown when policy logits blow past the configured bound.
struct TrainingDiverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void write_training_log_csv(const std::vector<IterationLog>& log, std::ostream& os) {
  os << "iteration,mean_reward,mean_delta,objective,value_loss\n";
  char buf[256];
  for (const auto& row : log) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", row.iteration,
                  row.mean_reward, row.mean_delta, row.objective, row.value_loss);
    os << buf;
  }
}

/// Full training loop: collect rollouts with fairness values, compute returns
/// and advantages, regularize, and run clipped policy updates plus value
/// regression for the configured number of iterations.
template <Environment Env>
TrainResult train(Env env, const PpoConfig& cfg, std::uint64_t seed,
                  std::ostream* progress = nullptr) {
  cfg.validate();
  if (cfg.minibatch_size > cfg.episodes_per_iteration * cfg.horizon)
    throw std::invalid_argument("train: minibatch larger than rollout buffer");

  std::vector<int> policy_sizes;
  policy_sizes.push_back(env.observation_dim());
  policy_sizes.insert(policy_sizes.end(), cfg.hidden_sizes.begin(), cfg.hidden_sizes.end());
  policy_sizes.push_back(env.action_dim());
  std::vector<int> value_sizes;
  value_sizes.push_back(env.observation_dim());
  value_sizes.insert(value_sizes.end(), cfg.hidden_sizes.begin(), cfg.hidden_sizes.end());
  value_sizes.push_back(1);

  TrainResult out;
  out.policy = MlpNetwork::create(policy_sizes, Head::SoftmaxPolicy,
                                  derive_seed(seed, 0, 0), cfg.policy_output_scale);
  out.value = MlpNetwork::create(value_sizes, Head::ScalarValue, derive_seed(seed, 0, 1));
  out.advantage_method = advantage_method_name(cfg.advantage_method);

  AdamState policy_adam = AdamState::for_network(out.policy);
  AdamState value_adam = AdamState::for_network(out.value);

  RewardShaper shaper;
  if (cfg.fairness_mode == FairnessMode::RewardPenalty) {
    shaper.active = true;
    shaper.zeta = cfg.reward_penalty_weight;
    shaper.omega = cfg.regularizer.omega;
  }
  const RegularizerConfig reg = cfg.effective_regularizer();

  for (int iter = 1; iter <= cfg.iterations; ++iter) {
    RolloutBuffer buffer =
        collect_rollouts(env, out.policy, cfg.episodes_per_iteration, cfg.horizon, seed,
                         static_cast<std::uint64_t>(iter), shaper);
    compute_returns(buffer, cfg.gamma);
    estimate_advantage(buffer, out.value, cfg.advantage_method, cfg.gamma, cfg.gae_lambda);

    const int n = static_cast<int>(buffer.size());
    std::vector<double> base_adv(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) base_adv[static_cast<std::size_t>(i)] =
        buffer.transitions[static_cast<std::size_t>(i)].advantage;

    if (cfg.standardize_advantage && !reg.normalize) {
      double mean = 0.0;
      for (double a : base_adv) mean += a;
      mean /= n;
      double var = 0.0;
      for (double a : base_adv) var += (a - mean) * (a - mean);
      var /= n;
      const double inv_std = 1.0 / (std::sqrt(var) + 1e-8);
      for (double& a : base_adv) a = (a - mean) * inv_std;
    }

    Rng shuffle_rng(derive_seed(seed, static_cast<std::uint64_t>(iter), 1000000));
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);

    double objective_acc = 0.0, vloss_acc = 0.0;
    int batches = 0;
    std::vector<double> mb_adv, mb_dt, mb_dn;
    for (int epoch = 0; epoch < cfg.update_epochs; ++epoch) {
      // Fisher-Yates with our own stream; std::shuffle is not seed-portable.
      for (int i = n - 1; i > 0; --i)
        std::swap(order[static_cast<std::size_t>(i)],
                  order[static_cast<std::size_t>(shuffle_rng.uniform_int(i + 1))]);
      for (int start = 0; start + cfg.minibatch_size <= n; start += cfg.minibatch_size) {
        const std::span<const int> mb(order.data() + start,
                                      static_cast<std::size_t>(cfg.minibatch_size));
        mb_adv.clear();
        mb_dt.clear();
        mb_dn.clear();
        for (int idx : mb) {
          const auto& tr = buffer.transitions[static_cast<std::size_t>(idx)];
          mb_adv.push_back(base_adv[static_cast<std::size_t>(idx)]);
          mb_dt.push_back(tr.delta_t);
          mb_dn.push_back(tr.delta_next);
        }
        const std::vector<double> reg_adv = regularize_advantages(mb_adv, mb_dt, mb_dn, reg);

        ClipLossResult pl = ppo_clip_loss(out.policy, buffer, mb, reg_adv, cfg.clip_epsilon);
        if (pl.skipped > 0 && progress)
          *progress << "warning: iteration " << iter << " skipped " << pl.skipped
                    << " transitions with non-finite ratios\n";
        if (cfg.use_adam)
          adam_update(out.policy, pl.gradients, policy_adam, cfg.policy_step, cfg.adam);
        else
          apply_update(out.policy, pl.gradients, cfg.policy_step);

        ValueLossResult vl = value_loss(out.value, buffer, mb);
        vl.gradients.scale(-1.0);  // descend the MSE
        if (cfg.use_adam)
          adam_update(out.value, vl.gradients, value_adam, cfg.value_step, cfg.adam);
        else
          apply_update(out.value, vl.gradients, cfg.value_step);

        objective_acc += pl.objective;
        vloss_acc += vl.mse;
        ++batches;
      }
    }

    IterationLog row;
    row.iteration = iter;
    double reward_sum = 0.0, delta_sum = 0.0;
    for (const auto& tr : buffer.transitions) {
      reward_sum += tr.raw_reward;
      delta_sum += tr.delta_t;
    }
    row.mean_reward = reward_sum / n;
    row.mean_delta = delta_sum / n;
    row.objective = batches > 0 ? objective_acc / batches : 0.0;
    row.value_loss = batches > 0 ? vloss_acc / batches : 0.0;
    out.log.push_back(row);
    if (progress)
      *progress << "iter " << iter << " reward " << row.mean_reward << " delta "
                << row.mean_delta << "\n";

    // Divergence guard: probe the policy on each episode's first state.
    double logit_abs = 0.0;
    int probes = 0;
    for (const auto& [begin, end] : buffer.episodes) {
      const auto& obs = buffer.transitions[static_cast<std::size_t>(begin)].state_obs;
      std::vector<double> cur(obs.begin(), obs.end());
      for (int l = 0; l < out.policy.num_layers(); ++l) {
        const Matrix& w = out.policy.weights[l];
        std::vector<double> next(static_cast<std::size_t>(w.rows));
        for (int r = 0; r < w.rows; ++r) {
          double acc = out.policy.biases[static_cast<std::size_t>(l)][static_cast<std::size_t>(r)];
          for (int c = 0; c < w.cols; ++c)
            acc += w(r, c) * cur[static_cast<std::size_t>(c)];
          next[static_cast<std::size_t>(r)] = acc;
        }
        if (l < out.policy.num_layers() - 1)
          for (double& v : next) v = std::tanh(v);
        cur = std::move(next);
      }
      for (double z : cur) {
        logit_abs += std::abs(z);
        ++probes;
      }
    }
    if (probes > 0 && logit_abs / probes > cfg.divergence_logit_bound)
      throw TrainingDiverged("training diverged at iteration " + std::to_string(iter) +
                             ": mean |logit| " + std::to_string(logit_abs / probes) +
                             " exceeds bound " + std::to_string(cfg.divergence_logit_bound));
  }
  return out;
}

}  // namespace fairpo
