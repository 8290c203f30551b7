#pragma once

// Fairness-constrained policy optimization: PPO with advantage-level fairness
// regularization, three long-horizon decision environments, hand-designed
// baseline policies, and an evaluation harness.

#include "fairpo/baselines.hpp"
#include "fairpo/config.hpp"
#include "fairpo/envs/attention.hpp"
#include "fairpo/envs/bandit.hpp"
#include "fairpo/envs/disease.hpp"
#include "fairpo/envs/lending.hpp"
#include "fairpo/graph.hpp"
#include "fairpo/harness.hpp"
#include "fairpo/metrics.hpp"
#include "fairpo/nn.hpp"
#include "fairpo/ppo.hpp"
#include "fairpo/regularizer.hpp"
#include "fairpo/rng.hpp"
#include "fairpo/rollout.hpp"
