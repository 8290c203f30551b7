#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "fairpo/envs/disease.hpp"
#include "fairpo/envs/lending.hpp"
#include "fairpo/graph.hpp"
#include "fairpo/rng.hpp"

namespace fairpo {

/// Exponentially-smoothed per-site incident-rate estimates for the greedy
/// attention allocator. A site only yields an observation on steps where it
/// was watched, and what it yields is the discovered count (capped by the
/// attention spent there), so estimates of hot, thinly-watched sites saturate
/// low. Estimates are floored at a small positive value: an exact zero would
/// make every tail probability zero and the tie rule would pin all attention
/// to the first site forever.
class RateEstimator {
 public:
  RateEstimator(int sites, double initial_estimate = 1.0, double smoothing = 0.3,
                double min_estimate = 0.05)
      : estimates_(static_cast<std::size_t>(sites), initial_estimate),
        smoothing_(smoothing),
        min_estimate_(min_estimate) {
    if (sites < 1) throw std::invalid_argument("RateEstimator: need at least one site");
    if (initial_estimate < 0) throw std::invalid_argument("RateEstimator: estimate >= 0");
    if (smoothing <= 0 || smoothing > 1)
      throw std::invalid_argument("RateEstimator: smoothing in (0,1]");
    if (min_estimate < 0) throw std::invalid_argument("RateEstimator: min_estimate >= 0");
  }

  void update(std::span<const int> allocation, std::span<const long long> discovered) {
    if (allocation.size() != estimates_.size() || discovered.size() != estimates_.size())
      throw std::invalid_argument("RateEstimator::update: size mismatch");
    for (std::size_t k = 0; k < estimates_.size(); ++k) {
      if (allocation[k] == 0) continue;
      estimates_[k] = std::max(min_estimate_,
                               (1.0 - smoothing_) * estimates_[k] +
                                   smoothing_ * static_cast<double>(discovered[k]));
    }
  }

  const std::vector<double>& estimates() const { return estimates_; }

 private:
  std::vector<double> estimates_;
  double smoothing_;
  double min_estimate_;
};

/// P(Y >= m) for Y ~ Poisson(lambda).
inline double poisson_tail_at_least(double lambda, int m) {
  if (m <= 0) return 1.0;
  if (lambda == 0.0) return 0.0;
  double term = std::exp(-lambda);  // P(Y = 0)
  double cdf = term;
  for (int i = 1; i < m; ++i) {
    term *= lambda / i;
    cdf += term;
  }
  return std::max(0.0, 1.0 - cdf);
}

/// Hand-designed allocator: hands out units one at a time, each to the site
/// with the highest probability of producing one more incident than the
/// units already placed there. Ties break toward the lower site index.
inline std::vector<int> purely_greedy_allocate(const RateEstimator& estimator, int units) {
  const auto& rates = estimator.estimates();
  std::vector<int> allocation(rates.size(), 0);
  for (int u = 0; u < units; ++u) {
    int best = 0;
    double best_p = -1.0;
    for (std::size_t k = 0; k < rates.size(); ++k) {
      const double p = poisson_tail_at_least(rates[k], allocation[k] + 1);
      if (p > best_p) {
        best_p = p;
        best = static_cast<int>(k);
      }
    }
    ++allocation[static_cast<std::size_t>(best)];
  }
  return allocation;
}

/// Profit-maximizing lender with oracle repayment probabilities: accept only
/// when the expected profit is strictly positive.
inline LendDecision greedy_lend(double repay_prob, double loan_amount, double interest_rate) {
  const double expected_profit =
      repay_prob * loan_amount * interest_rate - (1.0 - repay_prob) * loan_amount;
  return expected_profit > 0.0 ? LendDecision::Accept : LendDecision::Reject;
}

/// Per-group accept thresholds on credit score; c_max + 1 accepts nobody.
struct EoThresholds {
  std::array<int, 2> threshold{1, 1};

  LendDecision decide(const Applicant& a) const {
    return a.credit_score >= threshold[static_cast<std::size_t>(a.group - 1)]
               ? LendDecision::Accept
               : LendDecision::Reject;
  }
};

/// Expected TPR of a threshold policy on one group, computed analytically
/// from the score distribution and repayment probabilities:
/// P(repay & accepted) / P(repay).
inline double expected_tpr(std::span<const double> dist, std::span<const double> eta,
                           int threshold) {
  double num = 0.0, den = 0.0;
  for (std::size_t c = 0; c < dist.size(); ++c) {
    const double mass = dist[c] * eta[c];
    den += mass;
    if (static_cast<int>(c) + 1 >= threshold) num += mass;
  }
  return den == 0.0 ? 0.0 : num / den;
}

/// Expected per-applicant profit of a threshold on one group.
inline double expected_profit(std::span<const double> dist, std::span<const double> eta,
                              int threshold, double loan_amount, double interest_rate) {
  double profit = 0.0;
  for (std::size_t c = 0; c < dist.size(); ++c) {
    if (static_cast<int>(c) + 1 < threshold) continue;
    profit += dist[c] * (eta[c] * loan_amount * interest_rate - (1.0 - eta[c]) * loan_amount);
  }
  return profit;
}

/// Equality-of-opportunity lender: grid search over all threshold pairs,
/// keep those whose analytic TPRs differ by at most `tpr_tolerance`, and
/// among those return the most profitable (groups weighted equally). If no
/// pair is feasible, fall back to the pair minimizing the TPR gap. Ties
/// break toward the lexicographically smallest pair.
inline EoThresholds eo_thresholds(const std::array<std::vector<double>, 2>& distributions,
                                  std::span<const double> eta, double loan_amount,
                                  double interest_rate, double tpr_tolerance = 0.02) {
  const int c_max = static_cast<int>(eta.size());
  EoThresholds best_feasible, best_gap;
  double best_profit = -std::numeric_limits<double>::infinity();
  double min_gap = std::numeric_limits<double>::infinity();
  bool any_feasible = false;

  for (int t1 = 1; t1 <= c_max + 1; ++t1) {
    for (int t2 = 1; t2 <= c_max + 1; ++t2) {
      const double tpr1 = expected_tpr(distributions[0], eta, t1);
      const double tpr2 = expected_tpr(distributions[1], eta, t2);
      const double gap = std::abs(tpr1 - tpr2);
      const double profit =
          0.5 * expected_profit(distributions[0], eta, t1, loan_amount, interest_rate) +
          0.5 * expected_profit(distributions[1], eta, t2, loan_amount, interest_rate);
      if (gap <= tpr_tolerance) {
        if (!any_feasible || profit > best_profit) {
          any_feasible = true;
          best_profit = profit;
          best_feasible.threshold = {t1, t2};
        }
      }
      if (gap < min_gap) {
        min_gap = gap;
        best_gap.threshold = {t1, t2};
      }
    }
  }
  return any_feasible ? best_feasible : best_gap;
}

/// Uniformly random susceptible node; with no susceptibles left, uniformly
/// random over the whole graph.
inline int random_vaccinate(std::span<const HealthStatus> statuses, Rng& rng) {
  std::vector<int> susceptible;
  for (std::size_t v = 0; v < statuses.size(); ++v)
    if (statuses[v] == HealthStatus::Susceptible) susceptible.push_back(static_cast<int>(v));
  if (susceptible.empty()) return rng.uniform_int(static_cast<int>(statuses.size()));
  return susceptible[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(susceptible.size())))];
}

/// Susceptible node of maximal degree (ties to the lowest index); with no
/// susceptibles left, the highest-degree node overall.
inline int max_neighbor_vaccinate(std::span<const HealthStatus> statuses,
                                  const SocialGraph& graph) {
  int best = -1;
  for (int v = 0; v < graph.num_nodes; ++v) {
    if (statuses[static_cast<std::size_t>(v)] != HealthStatus::Susceptible) continue;
    if (best == -1 || graph.degree(v) > graph.degree(best)) best = v;
  }
  if (best != -1) return best;
  best = 0;
  for (int v = 1; v < graph.num_nodes; ++v)
    if (graph.degree(v) > graph.degree(best)) best = v;
  return best;
}

}  // namespace fairpo
