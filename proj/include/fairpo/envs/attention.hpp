#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "fairpo/rng.hpp"

namespace fairpo {

struct AttentionConfig {
  int sites = 5;
  int units = 6;
  double drift = 0.1;
  double zeta0 = 1.0;
  double zeta1 = 0.25;
  std::vector<double> initial_rates;  // empty: evenly spaced over [1.5, 3.5]
  int horizon = 200;

  void validate() const {
    if (sites < 2) throw std::invalid_argument("AttentionConfig: need at least 2 sites");
    if (units < 1) throw std::invalid_argument("AttentionConfig: need at least 1 unit");
    if (!(drift > 0)) throw std::invalid_argument("AttentionConfig: drift must be > 0");
    if (!initial_rates.empty() && static_cast<int>(initial_rates.size()) != sites)
      throw std::invalid_argument("AttentionConfig: initial_rates size must equal sites");
    for (double r : initial_rates)
      if (r < 0) throw std::invalid_argument("AttentionConfig: initial rates must be >= 0");
  }
};

/// Incident-monitoring environment: each step the agent spreads a fixed
/// number of attention units over sites with drifting Poisson incident rates.
/// Attended sites' rates fall proportionally to the attention they received,
/// unattended sites' rates rise.
class AttentionEnv {
 public:
  explicit AttentionEnv(AttentionConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    if (cfg_.initial_rates.empty()) {
      cfg_.initial_rates.resize(static_cast<std::size_t>(cfg_.sites));
      for (int k = 0; k < cfg_.sites; ++k)
        cfg_.initial_rates[static_cast<std::size_t>(k)] =
            1.5 + 2.0 * k / (cfg_.sites - 1);
    }
    reset_state();
  }

  void reset(Rng&) { reset_state(); }

  int observation_dim() const { return 3 * cfg_.sites; }
  int action_dim() const { return cfg_.sites; }
  int draws_per_step() const { return cfg_.units; }
  int horizon() const { return cfg_.horizon; }

  /// Last allocation, last incident counts, and the per-site discovery
  /// ratios, each scaled to roughly unit range.
  std::vector<double> observe() const {
    std::vector<double> obs;
    obs.reserve(static_cast<std::size_t>(observation_dim()));
    for (int a : last_allocation_) obs.push_back(static_cast<double>(a) / cfg_.units);
    for (long long y : last_incidents_) obs.push_back(static_cast<double>(y) / 10.0);
    for (int k = 0; k < cfg_.sites; ++k) obs.push_back(discovery_ratio(k));
    return obs;
  }

  double step(std::span<const int> allocation, Rng& rng) {
    if (static_cast<int>(allocation.size()) != cfg_.sites)
      throw std::invalid_argument("AttentionEnv::step: allocation size mismatch");
    int total = 0;
    for (int a : allocation) {
      if (a < 0) throw std::invalid_argument("AttentionEnv::step: negative allocation");
      total += a;
    }
    if (total != cfg_.units)
      throw std::invalid_argument("AttentionEnv::step: allocation must sum to unit count");

    double discovered = 0.0, missed = 0.0;
    for (int k = 0; k < cfg_.sites; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      const int y = rng.poisson(rates_[ku]);
      const int found = std::min(allocation[ku], y);
      discovered += found;
      missed += y - found;
      cum_occurred_[ku] += y;
      cum_discovered_[ku] += found;
      last_incidents_[ku] = y;
      last_discovered_[ku] = found;
      last_allocation_[ku] = allocation[ku];
      if (allocation[ku] == 0)
        rates_[ku] += cfg_.drift;
      else
        rates_[ku] = std::max(0.0, rates_[ku] - cfg_.drift * allocation[ku]);
    }
    ++t_;
    return cfg_.zeta0 * discovered - cfg_.zeta1 * missed;
  }

  /// Largest pairwise gap between per-site ratios of total incidents
  /// discovered to total incidents occurred.
  double fairness_delta() const {
    double lo = discovery_ratio(0), hi = lo;
    for (int k = 1; k < cfg_.sites; ++k) {
      const double r = discovery_ratio(k);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    return hi - lo;
  }

  double discovery_ratio(int k) const {
    const auto ku = static_cast<std::size_t>(k);
    return static_cast<double>(cum_discovered_[ku]) /
           (static_cast<double>(cum_occurred_[ku]) + 1.0);
  }

  const AttentionConfig& config() const { return cfg_; }
  const std::vector<double>& rates() const { return rates_; }
  const std::vector<long long>& cum_discovered() const { return cum_discovered_; }
  const std::vector<long long>& cum_occurred() const { return cum_occurred_; }
  const std::vector<int>& last_allocation() const { return last_allocation_; }
  const std::vector<long long>& last_incidents() const { return last_incidents_; }
  const std::vector<long long>& last_discovered() const { return last_discovered_; }
  int step_count() const { return t_; }

  double mean_rate() const {
    return std::accumulate(rates_.begin(), rates_.end(), 0.0) / cfg_.sites;
  }

 private:
  void reset_state() {
    rates_ = cfg_.initial_rates;
    const auto n = static_cast<std::size_t>(cfg_.sites);
    cum_discovered_.assign(n, 0);
    cum_occurred_.assign(n, 0);
    last_allocation_.assign(n, 0);
    last_incidents_.assign(n, 0);
    last_discovered_.assign(n, 0);
    t_ = 0;
  }

  AttentionConfig cfg_;
  std::vector<double> rates_;
  std::vector<long long> cum_discovered_;
  std::vector<long long> cum_occurred_;
  std::vector<int> last_allocation_;
  std::vector<long long> last_incidents_;
  std::vector<long long> last_discovered_;
  int t_ = 0;
};

}  // namespace fairpo
