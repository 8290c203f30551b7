#pragma once

#include <array>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "fairpo/rng.hpp"

namespace fairpo {

enum class LendDecision { Reject = 0, Accept = 1 };

struct Applicant {
  int credit_score = 1;  // in {1..c_max}
  int group = 1;         // in {1, 2}
};

struct LendingConfig {
  int c_max = 7;
  std::vector<double> eta;  // repayment probability per score; empty: affine default
  std::array<std::vector<double>, 2> group_distributions;  // empty: triangular defaults
  double loan_amount = 1.0;
  double interest_rate = 0.3;
  double zeta0 = 1.0;
  int horizon = 400;
  double shift_fraction = -1.0;  // mass fraction moved per repay/default; <0: 1/horizon

  void validate() const {
    if (c_max < 2) throw std::invalid_argument("LendingConfig: c_max must be >= 2");
    if (!eta.empty()) {
      if (static_cast<int>(eta.size()) != c_max)
        throw std::invalid_argument("LendingConfig: eta size must equal c_max");
      for (std::size_t i = 0; i < eta.size(); ++i) {
        if (eta[i] < 0 || eta[i] > 1)
          throw std::invalid_argument("LendingConfig: eta values in [0,1]");
        if (i > 0 && eta[i] < eta[i - 1])
          throw std::invalid_argument("LendingConfig: eta must be non-decreasing");
      }
    }
    if (loan_amount <= 0) throw std::invalid_argument("LendingConfig: loan_amount > 0");
    if (interest_rate < 0) throw std::invalid_argument("LendingConfig: interest_rate >= 0");
    if (horizon < 1) throw std::invalid_argument("LendingConfig: horizon >= 1");
  }
};

/// Loan-approval environment: applicants from two groups arrive with discrete
/// credit scores; accepting a loan moves the bank's cash by the interest on
/// repayment or the principal on default, and nudges the group's score
/// distribution up or down accordingly.
class LendingEnv {
 public:
  explicit LendingEnv(LendingConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    if (cfg_.eta.empty()) {
      cfg_.eta.resize(static_cast<std::size_t>(cfg_.c_max));
      for (int c = 1; c <= cfg_.c_max; ++c)
        cfg_.eta[static_cast<std::size_t>(c - 1)] =
            0.1 + 0.8 * (c - 1) / (cfg_.c_max - 1);
    }
    for (int g = 0; g < 2; ++g) {
      auto& dist = cfg_.group_distributions[static_cast<std::size_t>(g)];
      if (dist.empty()) {
        dist = triangular_distribution(cfg_.c_max, g == 0 ? 5 : 3);
      } else {
        if (static_cast<int>(dist.size()) != cfg_.c_max)
          throw std::invalid_argument("LendingConfig: group distribution size mismatch");
        double sum = 0.0;
        for (double p : dist) {
          if (p < 0) throw std::invalid_argument("LendingConfig: negative probability");
          sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9)
          throw std::invalid_argument("LendingConfig: group distribution must sum to 1");
      }
    }
    if (cfg_.shift_fraction < 0) cfg_.shift_fraction = 1.0 / cfg_.horizon;
    distributions_ = cfg_.group_distributions;
  }

  void reset(Rng& rng) {
    distributions_ = cfg_.group_distributions;
    bank_cash_ = 0.0;
    tp_ = {0, 0};
    fn_ = {0, 0};
    fp_ = {0, 0};
    tn_ = {0, 0};
    t_ = 0;
    sample_applicant(rng);
  }

  int observation_dim() const { return cfg_.c_max + 2; }
  int action_dim() const { return 2; }  // {Reject, Accept}
  int draws_per_step() const { return 1; }
  int horizon() const { return cfg_.horizon; }

  /// One-hot credit score followed by one-hot group membership.
  std::vector<double> observe() const {
    std::vector<double> obs(static_cast<std::size_t>(observation_dim()), 0.0);
    obs[static_cast<std::size_t>(applicant_.credit_score - 1)] = 1.0;
    obs[static_cast<std::size_t>(cfg_.c_max + applicant_.group - 1)] = 1.0;
    return obs;
  }

  double step(std::span<const int> counts, Rng& rng) {
    if (static_cast<int>(counts.size()) != 2 || counts[0] + counts[1] != 1)
      throw std::invalid_argument("LendingEnv::step: expected a one-hot {reject,accept}");
    return step(counts[1] == 1 ? LendDecision::Accept : LendDecision::Reject, rng);
  }

  double step(LendDecision decision, Rng& rng) {
    const double cash_before = bank_cash_;
    const auto g = static_cast<std::size_t>(applicant_.group - 1);
    const double repay_prob = eta(applicant_.credit_score);
    const bool repays = rng.bernoulli(repay_prob);

    if (decision == LendDecision::Accept) {
      if (repays) {
        bank_cash_ += cfg_.loan_amount * cfg_.interest_rate;
        ++tp_[g];
        shift_mass(g, applicant_.credit_score, +1);
      } else {
        bank_cash_ -= cfg_.loan_amount;
        ++fp_[g];
        shift_mass(g, applicant_.credit_score, -1);
      }
    } else {
      // Counterfactual repayment decides FN vs TN; no cash or score movement.
      if (repays)
        ++fn_[g];
      else
        ++tn_[g];
    }

    sample_applicant(rng);
    ++t_;
    return cfg_.zeta0 * (bank_cash_ - cash_before);
  }

  /// Gap between the two groups' true positive rates; an empty group
  /// contributes a rate of zero.
  double fairness_delta() const {
    return std::abs(tpr(1) - tpr(2));
  }

  double tpr(int group) const {
    const auto g = static_cast<std::size_t>(group - 1);
    const long long denom = tp_[g] + fn_[g];
    return denom == 0 ? 0.0 : static_cast<double>(tp_[g]) / static_cast<double>(denom);
  }

  double eta(int score) const { return cfg_.eta[static_cast<std::size_t>(score - 1)]; }

  const LendingConfig& config() const { return cfg_; }
  const Applicant& applicant() const { return applicant_; }
  const std::array<std::vector<double>, 2>& distributions() const { return distributions_; }
  double bank_cash() const { return bank_cash_; }
  long long tp(int group) const { return tp_[static_cast<std::size_t>(group - 1)]; }
  long long fn(int group) const { return fn_[static_cast<std::size_t>(group - 1)]; }
  long long fp(int group) const { return fp_[static_cast<std::size_t>(group - 1)]; }
  long long tn(int group) const { return tn_[static_cast<std::size_t>(group - 1)]; }
  long long loans_given(int group) const {
    const auto g = static_cast<std::size_t>(group - 1);
    return tp_[g] + fp_[g];
  }
  int step_count() const { return t_; }

  static std::vector<double> triangular_distribution(int c_max, int peak) {
    std::vector<double> w(static_cast<std::size_t>(c_max));
    double sum = 0.0;
    for (int c = 1; c <= c_max; ++c) {
      w[static_cast<std::size_t>(c - 1)] = std::max(0.0, 3.0 - std::abs(c - peak));
      sum += w[static_cast<std::size_t>(c - 1)];
    }
    for (double& v : w) v /= sum;
    return w;
  }

 private:
  void sample_applicant(Rng& rng) {
    applicant_.group = 1 + rng.uniform_int(2);
    applicant_.credit_score =
        1 + rng.categorical(distributions_[static_cast<std::size_t>(applicant_.group - 1)]);
  }

  /// Moves a fraction of the applicant's score-bucket mass one bucket up
  /// (repay) or down (default), saturating at the ends of the range.
  void shift_mass(std::size_t g, int score, int direction) {
    const int target = score + direction;
    if (target < 1 || target > cfg_.c_max) return;
    auto& dist = distributions_[g];
    const double moved = dist[static_cast<std::size_t>(score - 1)] * cfg_.shift_fraction;
    dist[static_cast<std::size_t>(score - 1)] -= moved;
    dist[static_cast<std::size_t>(target - 1)] += moved;
  }

  LendingConfig cfg_;
  std::array<std::vector<double>, 2> distributions_;
  Applicant applicant_;
  double bank_cash_ = 0.0;
  std::array<long long, 2> tp_{0, 0}, fn_{0, 0}, fp_{0, 0}, tn_{0, 0};
  int t_ = 0;
};

}  // namespace fairpo
