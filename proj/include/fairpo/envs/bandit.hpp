#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "fairpo/rng.hpp"

namespace fairpo {

/// Stateless multi-armed bandit with deterministic arm rewards and a fairness
/// metric that is identically zero. Mostly useful as a fast smoke target.
class BanditEnv {
 public:
  explicit BanditEnv(std::vector<double> arm_rewards = {1.0, 0.0}, int horizon = 1)
      : arm_rewards_(std::move(arm_rewards)), horizon_(horizon) {
    if (arm_rewards_.size() < 2) throw std::invalid_argument("BanditEnv: need >= 2 arms");
    if (horizon_ < 1) throw std::invalid_argument("BanditEnv: horizon >= 1");
  }

  void reset(Rng&) {}

  int observation_dim() const { return 1; }
  int action_dim() const { return static_cast<int>(arm_rewards_.size()); }
  int draws_per_step() const { return 1; }
  int horizon() const { return horizon_; }

  std::vector<double> observe() const { return {1.0}; }

  double step(std::span<const int> counts, Rng&) {
    if (static_cast<int>(counts.size()) != action_dim())
      throw std::invalid_argument("BanditEnv::step: action size mismatch");
    double reward = 0.0;
    int total = 0;
    for (std::size_t k = 0; k < arm_rewards_.size(); ++k) {
      reward += counts[k] * arm_rewards_[k];
      total += counts[k];
    }
    if (total != 1) throw std::invalid_argument("BanditEnv::step: expected one draw");
    return reward;
  }

  double fairness_delta() const { return 0.0; }

  const std::vector<double>& arm_rewards() const { return arm_rewards_; }

 private:
  std::vector<double> arm_rewards_;
  int horizon_;
};

}  // namespace fairpo
