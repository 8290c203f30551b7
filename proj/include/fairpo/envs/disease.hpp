#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fairpo/graph.hpp"
#include "fairpo/rng.hpp"

namespace fairpo {

enum class HealthStatus : std::uint8_t { Susceptible = 0, Infected = 1, Recovered = 2 };

struct DiseaseConfig {
  double tau = 0.5;    // per-neighbor infection probability
  double rho = 0.005;  // recovery probability
  double zeta0 = 1.0;
  int horizon = 20;
  int burn_in_steps = 1;  // unimpeded spread before the agent acts

  void validate() const {
    if (tau < 0 || tau > 1) throw std::invalid_argument("DiseaseConfig: tau in [0,1]");
    if (rho < 0 || rho > 1) throw std::invalid_argument("DiseaseConfig: rho in [0,1]");
    if (horizon < 1) throw std::invalid_argument("DiseaseConfig: horizon >= 1");
    if (burn_in_steps < 0) throw std::invalid_argument("DiseaseConfig: burn_in_steps >= 0");
  }
};

/// Epidemic-control environment on a social network. Health follows
/// susceptible/infected/recovered dynamics; the agent places at most one
/// vaccine per step (vaccination immunizes susceptible individuals only).
/// Communities for the fairness metric come from Girvan-Newman bisection
/// unless the graph already carries labels.
class DiseaseEnv {
 public:
  DiseaseEnv(SocialGraph graph, DiseaseConfig cfg)
      : graph_(std::move(graph)), cfg_(cfg) {
    cfg_.validate();
    if (graph_.communities.empty()) graph_.communities = girvan_newman_bisect(graph_);
    if (static_cast<int>(graph_.communities.size()) != graph_.num_nodes)
      throw std::invalid_argument("DiseaseEnv: community labels size mismatch");
    num_communities_ = *std::max_element(graph_.communities.begin(), graph_.communities.end());
    seed_node_ = max_degree_node();
    reset_counters();
    statuses_.assign(static_cast<std::size_t>(graph_.num_nodes), HealthStatus::Susceptible);
  }

  void reset(Rng& rng) {
    statuses_.assign(static_cast<std::size_t>(graph_.num_nodes), HealthStatus::Susceptible);
    statuses_[static_cast<std::size_t>(seed_node_)] = HealthStatus::Infected;
    for (int b = 0; b < cfg_.burn_in_steps; ++b) {
      spread_infection(rng);
      apply_recovery(rng);
    }
    // Fairness accounting starts once the agent is in control.
    reset_counters();
    t_ = 0;
  }

  int observation_dim() const { return 3 * graph_.num_nodes; }
  int action_dim() const { return graph_.num_nodes + 1; }  // last index: vaccinate nobody
  int no_vaccinate_action() const { return graph_.num_nodes; }
  int draws_per_step() const { return 1; }
  int horizon() const { return cfg_.horizon; }

  /// One-hot health status per node.
  std::vector<double> observe() const {
    std::vector<double> obs(static_cast<std::size_t>(observation_dim()), 0.0);
    for (int v = 0; v < graph_.num_nodes; ++v)
      obs[static_cast<std::size_t>(3 * v +
                                   static_cast<int>(statuses_[static_cast<std::size_t>(v)]))] =
          1.0;
    return obs;
  }

  double step(std::span<const int> counts, Rng& rng) {
    if (static_cast<int>(counts.size()) != action_dim())
      throw std::invalid_argument("DiseaseEnv::step: action vector size mismatch");
    int chosen = -1, total = 0;
    for (int i = 0; i < action_dim(); ++i) {
      total += counts[static_cast<std::size_t>(i)];
      if (counts[static_cast<std::size_t>(i)] == 1 && chosen == -1) chosen = i;
    }
    if (total != 1) throw std::invalid_argument("DiseaseEnv::step: expected a one-hot action");
    return step_action(chosen, rng);
  }

  /// `action` is a node index or no_vaccinate_action().
  double step_action(int action, Rng& rng) {
    if (action < 0 || action > graph_.num_nodes)
      throw std::invalid_argument("DiseaseEnv::step: node index out of range");

    if (action < graph_.num_nodes) {
      // A vaccine spent on a non-susceptible node has no health effect but
      // still counts as given to that node's community.
      const auto c = static_cast<std::size_t>(community_of(action) - 1);
      ++vaccinations_given_[c];
      if (statuses_[static_cast<std::size_t>(action)] == HealthStatus::Susceptible)
        statuses_[static_cast<std::size_t>(action)] = HealthStatus::Recovered;
    }

    spread_infection(rng);
    apply_recovery(rng);
    ++t_;

    int healthy = 0;
    for (HealthStatus s : statuses_)
      if (s != HealthStatus::Infected) ++healthy;
    return cfg_.zeta0 * healthy / graph_.num_nodes;
  }

  /// Largest pairwise gap between community ratios of vaccinations given to
  /// newly infected individuals.
  double fairness_delta() const {
    double lo = community_ratio(1), hi = lo;
    for (int c = 2; c <= num_communities_; ++c) {
      const double r = community_ratio(c);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    return hi - lo;
  }

  double community_ratio(int community) const {
    const auto c = static_cast<std::size_t>(community - 1);
    return static_cast<double>(vaccinations_given_[c]) /
           (static_cast<double>(newly_infected_[c]) + 1.0);
  }

  int community_of(int node) const { return graph_.communities[static_cast<std::size_t>(node)]; }
  const SocialGraph& graph() const { return graph_; }
  const DiseaseConfig& config() const { return cfg_; }
  const std::vector<HealthStatus>& statuses() const { return statuses_; }
  const std::vector<long long>& vaccinations_given() const { return vaccinations_given_; }
  const std::vector<long long>& newly_infected() const { return newly_infected_; }
  int num_communities() const { return num_communities_; }
  int seed_node() const { return seed_node_; }
  int step_count() const { return t_; }

  double fraction_infected() const {
    int infected = 0;
    for (HealthStatus s : statuses_)
      if (s == HealthStatus::Infected) ++infected;
    return static_cast<double>(infected) / graph_.num_nodes;
  }

 private:
  int max_degree_node() const {
    int best = 0;
    for (int v = 1; v < graph_.num_nodes; ++v)
      if (graph_.degree(v) > graph_.degree(best)) best = v;
    return best;
  }

  /// Each susceptible node independently becomes infected with probability
  /// 1 - (1 - tau)^k, where k counts infected neighbors in the pre-step set.
  void spread_infection(Rng& rng) {
    const std::vector<HealthStatus> before = statuses_;
    for (int v = 0; v < graph_.num_nodes; ++v) {
      if (before[static_cast<std::size_t>(v)] != HealthStatus::Susceptible) continue;
      int infected_neighbors = 0;
      for (int w : graph_.adjacency[static_cast<std::size_t>(v)])
        if (before[static_cast<std::size_t>(w)] == HealthStatus::Infected) ++infected_neighbors;
      if (infected_neighbors == 0) continue;
      const double p = 1.0 - std::pow(1.0 - cfg_.tau, infected_neighbors);
      if (rng.bernoulli(p)) {
        statuses_[static_cast<std::size_t>(v)] = HealthStatus::Infected;
        ++newly_infected_[static_cast<std::size_t>(community_of(v) - 1)];
      }
    }
    pre_step_infected_ = before;  // recovery applies to previously infected only
  }

  void apply_recovery(Rng& rng) {
    for (int v = 0; v < graph_.num_nodes; ++v) {
      if (pre_step_infected_[static_cast<std::size_t>(v)] != HealthStatus::Infected) continue;
      if (rng.bernoulli(cfg_.rho))
        statuses_[static_cast<std::size_t>(v)] = HealthStatus::Recovered;
    }
  }

  void reset_counters() {
    vaccinations_given_.assign(static_cast<std::size_t>(num_communities_), 0);
    newly_infected_.assign(static_cast<std::size_t>(num_communities_), 0);
  }

  SocialGraph graph_;
  DiseaseConfig cfg_;
  int num_communities_ = 0;
  int seed_node_ = 0;
  std::vector<HealthStatus> statuses_;
  std::vector<HealthStatus> pre_step_infected_;
  std::vector<long long> vaccinations_given_;
  std::vector<long long> newly_infected_;
  int t_ = 0;
};

}  // namespace fairpo
