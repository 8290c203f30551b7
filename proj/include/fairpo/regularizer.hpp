#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace fairpo {

/// Weights for fairness-regularized advantages.
///
/// The regularized advantage is a weighted sum of three terms:
///   beta0 * A                                     (base advantage)
///   beta1 * min(0, -delta_t + omega)              (violation threshold)
///   beta2 * min(0, delta_t - delta_next)          (decrease-in-violation,
///                                                  active only when delta_t > omega)
/// `omega` is the tolerated violation level; below it both penalties vanish.
/// With `normalize` set, each term is min-max normalized to [0,1] across the
/// minibatch before weighting (see regularize_advantages).
struct RegularizerConfig {
  double beta0 = 1.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double omega = 0.05;
  bool normalize = false;

  void validate() const {
    if (!(std::isfinite(beta0) && std::isfinite(beta1) && std::isfinite(beta2)))
      throw std::invalid_argument("RegularizerConfig: beta weights must be finite");
    if (beta0 < 0 || beta1 < 0 || beta2 < 0)
      throw std::invalid_argument("RegularizerConfig: beta weights must be nonnegative");
    if (!(omega >= 0)) throw std::invalid_argument("RegularizerConfig: omega must be >= 0");
  }
};

/// The three unweighted terms for one sample.
inline std::array<double, 3> advantage_terms(double adv, double delta_t, double delta_next,
                                             double omega) {
  return {adv, std::min(0.0, -delta_t + omega),
          delta_t > omega ? std::min(0.0, delta_t - delta_next) : 0.0};
}

/// Regularized advantage for a single sample (no batch normalization).
inline double regularize_advantage(double adv, double delta_t, double delta_next,
                                   const RegularizerConfig& cfg) {
  const auto t = advantage_terms(adv, delta_t, delta_next, cfg.omega);
  return cfg.beta0 * t[0] + cfg.beta1 * t[1] + cfg.beta2 * t[2];
}

/// Min-max normalization onto [0,1]; a constant batch maps to all zeros.
inline std::vector<double> min_max_normalize(std::span<const double> xs) {
  std::vector<double> out(xs.size(), 0.0);
  if (xs.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
  const double lo = *lo_it, hi = *hi_it;
  if (hi > lo) {
    const double inv = 1.0 / (hi - lo);
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (xs[i] - lo) * inv;
  }
  return out;
}

/// Regularized advantages for a minibatch. With cfg.normalize each of the
/// three terms is min-max normalized across the batch before weighting;
/// otherwise this is the per-sample formula applied elementwise.
inline std::vector<double> regularize_advantages(std::span<const double> advantages,
                                                 std::span<const double> delta_t,
                                                 std::span<const double> delta_next,
                                                 const RegularizerConfig& cfg) {
  cfg.validate();
  const std::size_t n = advantages.size();
  if (delta_t.size() != n || delta_next.size() != n)
    throw std::invalid_argument("regularize_advantages: length mismatch");
  std::vector<double> out(n);
  if (!cfg.normalize) {
    for (std::size_t i = 0; i < n; ++i)
      out[i] = regularize_advantage(advantages[i], delta_t[i], delta_next[i], cfg);
    return out;
  }
  std::vector<double> t0(n), t1(n), t2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto t = advantage_terms(advantages[i], delta_t[i], delta_next[i], cfg.omega);
    t0[i] = t[0];
    t1[i] = t[1];
    t2[i] = t[2];
  }
  const auto n0 = min_max_normalize(t0);
  const auto n1 = min_max_normalize(t1);
  const auto n2 = min_max_normalize(t2);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = cfg.beta0 * n0[i] + cfg.beta1 * n1[i] + cfg.beta2 * n2[i];
  return out;
}

}  // namespace fairpo
