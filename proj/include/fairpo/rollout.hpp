#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fairpo/nn.hpp"
#include "fairpo/rng.hpp"

namespace fairpo {

/// What a decision environment must provide. Actions are count vectors over
/// the discrete action set: single-decision environments receive a one-hot
/// vector (one draw), allocation-style environments receive `draws_per_step`
/// units spread over the categories.
template <typename E>
concept Environment = requires(E env, const E cenv, std::span<const int> counts, Rng& rng) {
  { env.reset(rng) };
  { cenv.observe() } -> std::convertible_to<std::vector<double>>;
  { cenv.observation_dim() } -> std::convertible_to<int>;
  { cenv.action_dim() } -> std::convertible_to<int>;
  { cenv.draws_per_step() } -> std::convertible_to<int>;
  { env.step(counts, rng) } -> std::convertible_to<double>;
  { cenv.fairness_delta() } -> std::convertible_to<double>;
};

/// One environment step enriched with the fairness values before and after.
struct Transition {
  std::vector<double> state_obs;
  std::vector<int> action;        // counts over the action set
  double reward = 0.0;            // training reward (shaped when a penalty applies)
  double raw_reward = 0.0;        // unshaped environment reward, for logging
  std::vector<double> next_state_obs;
  double log_prob_behavior = 0.0;
  double delta_t = 0.0;
  double delta_next = 0.0;
  bool terminal = false;
  // filled in later by compute_returns / estimate_advantage
  double ret = 0.0;
  double advantage = 0.0;
};

/// Ordered transitions grouped by episode.
struct RolloutBuffer {
  std::vector<Transition> transitions;
  std::vector<std::pair<int, int>> episodes;  // [begin, end) into transitions
  bool returns_computed = false;
  bool advantages_computed = false;

  std::size_t size() const { return transitions.size(); }
};

/// Log-probability of an action-count vector under category probabilities.
inline double log_prob_of_counts(std::span<const double> probs, std::span<const int> counts) {
  double lp = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k)
    if (counts[k] > 0) lp += counts[k] * std::log(probs[k]);
  return lp;
}

/// Optional reward-level fairness penalty: r <- r - zeta * max(0, delta_t - omega).
struct RewardShaper {
  bool active = false;
  double zeta = 0.0;
  double omega = 0.0;

  double shape(double reward, double delta_t) const {
    return active ? reward - zeta * std::max(0.0, delta_t - omega) : reward;
  }
};

/// Runs `episodes` fresh episodes of `horizon` steps each, sampling actions
/// from the policy and recording the fairness metric before and after every
/// step. Each episode draws from its own substream of (seed, iteration).
template <Environment Env>
RolloutBuffer collect_rollouts(Env& env, const MlpNetwork& policy, int episodes, int horizon,
                               std::uint64_t seed, std::uint64_t iteration = 0,
                               const RewardShaper& shaper = {}) {
  if (episodes < 1 || horizon < 1)
    throw std::invalid_argument("collect_rollouts: episodes and horizon must be >= 1");
  if (policy.head != Head::SoftmaxPolicy)
    throw std::invalid_argument("collect_rollouts: policy must have a softmax head");
  if (policy.output_dim() != env.action_dim())
    throw std::invalid_argument("collect_rollouts: policy output dim does not match action dim");

  RolloutBuffer buffer;
  buffer.transitions.reserve(static_cast<std::size_t>(episodes) * horizon);
  const int draws = env.draws_per_step();

  for (int e = 0; e < episodes; ++e) {
    Rng rng(derive_seed(seed, iteration, static_cast<std::uint64_t>(e)));
    env.reset(rng);
    const int begin = static_cast<int>(buffer.transitions.size());
    std::vector<double> obs = env.observe();
    for (int t = 0; t < horizon; ++t) {
      Transition tr;
      tr.state_obs = obs;
      tr.delta_t = env.fairness_delta();
      const std::vector<double> probs = forward(policy, tr.state_obs);
      tr.action = rng.multinomial(probs, draws);
      tr.log_prob_behavior = log_prob_of_counts(probs, tr.action);
      tr.raw_reward = env.step(tr.action, rng);
      tr.reward = shaper.shape(tr.raw_reward, tr.delta_t);
      tr.delta_next = env.fairness_delta();
      tr.next_state_obs = env.observe();
      tr.terminal = (t == horizon - 1);
      obs = tr.next_state_obs;
      buffer.transitions.push_back(std::move(tr));
    }
    buffer.episodes.emplace_back(begin, static_cast<int>(buffer.transitions.size()));
  }
  return buffer;
}

/// Discounted returns via within-episode backward recursion; no bootstrapping
/// across episode boundaries.
inline void compute_returns(RolloutBuffer& buffer, double gamma) {
  for (const auto& [begin, end] : buffer.episodes) {
    if (begin >= end) throw std::invalid_argument("compute_returns: empty episode");
    double acc = 0.0;
    for (int i = end - 1; i >= begin; --i) {
      auto& tr = buffer.transitions[static_cast<std::size_t>(i)];
      acc = tr.reward + gamma * acc;
      tr.ret = acc;
    }
  }
  buffer.returns_computed = true;
}

enum class AdvantageMethod { ReturnsMinusBaseline, Gae };

inline const char* advantage_method_name(AdvantageMethod m) {
  return m == AdvantageMethod::ReturnsMinusBaseline ? "returns_minus_baseline" : "gae";
}

/// Advantage estimates from the current value network. Default is
/// A = G(s) - V(s); GAE(lambda) is available as an option. Episode ends are
/// treated as terminal (the value beyond the horizon is taken as zero, which
/// matches the return recursion).
inline void estimate_advantage(RolloutBuffer& buffer, const MlpNetwork& value_net,
                               AdvantageMethod method = AdvantageMethod::ReturnsMinusBaseline,
                               double gamma = 1.0, double lambda = 0.95) {
  if (!buffer.returns_computed)
    throw std::invalid_argument("estimate_advantage: compute_returns first");
  if (value_net.head != Head::ScalarValue)
    throw std::invalid_argument("estimate_advantage: value net must have a scalar head");

  if (method == AdvantageMethod::ReturnsMinusBaseline) {
    for (auto& tr : buffer.transitions)
      tr.advantage = tr.ret - forward(value_net, tr.state_obs)[0];
  } else {
    for (const auto& [begin, end] : buffer.episodes) {
      double acc = 0.0;
      for (int i = end - 1; i >= begin; --i) {
        auto& tr = buffer.transitions[static_cast<std::size_t>(i)];
        const double v = forward(value_net, tr.state_obs)[0];
        const double v_next =
            tr.terminal ? 0.0 : forward(value_net, tr.next_state_obs)[0];
        const double delta = tr.reward + gamma * v_next - v;
        acc = delta + gamma * lambda * (tr.terminal ? 0.0 : acc);
        tr.advantage = acc;
      }
    }
  }
  buffer.advantages_computed = true;
}

}  // namespace fairpo
