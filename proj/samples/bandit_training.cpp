// Minimal end-to-end example: train the clipped-objective learner on a
// two-armed bandit and print how the policy concentrates on the better arm.

#include <iostream>

#include "fairpo/envs/bandit.hpp"
#include "fairpo/ppo.hpp"

int main() {
  fairpo::PpoConfig cfg;
  cfg.gamma = 1.0;
  cfg.policy_step = 1e-3;
  cfg.episodes_per_iteration = 4;
  cfg.horizon = 16;
  cfg.iterations = 150;
  cfg.minibatch_size = 64;
  cfg.hidden_sizes = {16};

  const auto result = fairpo::train(fairpo::BanditEnv({1.0, 0.0}), cfg, /*seed=*/42);

  const auto probs = fairpo::forward(result.policy, std::vector<double>{1.0});
  std::cout << "P(arm 0) = " << probs[0] << ", P(arm 1) = " << probs[1] << "\n";
  std::cout << "mean reward by iteration (every 30):\n";
  for (std::size_t i = 0; i < result.log.size(); i += 30)
    std::cout << "  iter " << result.log[i].iteration << ": " << result.log[i].mean_reward
              << "\n";
  return 0;
}
