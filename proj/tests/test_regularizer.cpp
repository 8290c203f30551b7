#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fairpo/regularizer.hpp"
#include "fairpo/rng.hpp"

using namespace fairpo;

namespace {
RegularizerConfig make_cfg(double b0, double b1, double b2, double omega,
                           bool normalize = false) {
  RegularizerConfig cfg;
  cfg.beta0 = b0;
  cfg.beta1 = b1;
  cfg.beta2 = b2;
  cfg.omega = omega;
  cfg.normalize = normalize;
  return cfg;
}
}  // namespace

TEST_CASE("regularized advantage matches hand-computed values") {
  struct Case {
    double adv, dt, dn, b0, b1, b2, omega, expected;
  };
  // Covers below/above omega, decreasing/increasing violation, both signs of
  // the advantage, and boundary values (dt == omega, dt == dn, omega == 0).
  const Case cases[] = {
      {0.5, 0.05, 0.9, 1, 1, 1, 0.1, 0.5},
      {1.0, 0.5, 0.7, 1, 2, 3, 0.1, 1.0 + 2.0 * (-0.5 + 0.1) + 3.0 * (0.5 - 0.7)},
      {1.0, 0.5, 0.3, 1, 2, 3, 0.1, 1.0 + 2.0 * (-0.5 + 0.1)},
      {-1.0, 0.05, 0.02, 1, 2, 3, 0.1, -1.0},
      {-2.0, 0.3, 0.5, 0.5, 1, 1, 0.1, 0.5 * -2.0 + (-0.3 + 0.1) + (0.3 - 0.5)},
      {0.0, 0.2, 0.1, 1, 1, 1, 0.1, -0.2 + 0.1},
      {1.0, 0.1, 0.5, 1, 1, 1, 0.1, 1.0},
      {1.0, 0.4, 0.4, 1, 1, 1, 0.1, 1.0 + (-0.4 + 0.1)},
      {5.0, 0.9, 1.0, 0, 1, 1, 0.05, (-0.9 + 0.05) + (0.9 - 1.0)},
      {0.3, 0.0, 0.2, 1, 4, 4, 0.0, 0.3},
      {2.0, 1.0, 0.0, 2, 3, 5, 0.5, 2.0 * 2.0 + 3.0 * (-1.0 + 0.5)},
      {-0.5, 0.6, 0.9, 1, 0.5, 2, 0.1, -0.5 + 0.5 * (-0.6 + 0.1) + 2.0 * (0.6 - 0.9)},
  };
  for (const auto& c : cases) {
    const double got = regularize_advantage(c.adv, c.dt, c.dn, make_cfg(c.b0, c.b1, c.b2, c.omega));
    INFO("adv=" << c.adv << " dt=" << c.dt << " dn=" << c.dn);
    REQUIRE(std::abs(got - c.expected) <= 1e-12);
  }
}

TEST_CASE("both penalties vanish at or below the tolerance") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const double omega = rng.uniform(0.0, 1.0);
    const double dt = rng.uniform(0.0, 1.0) * omega;  // dt <= omega
    const double dn = rng.uniform(0.0, 2.0);
    const double adv = rng.uniform(-5.0, 5.0);
    const double b0 = rng.uniform(0.0, 2.0);
    const auto cfg = make_cfg(b0, rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0), omega);
    REQUIRE(regularize_advantage(adv, dt, dn, cfg) == b0 * adv);
  }
}

TEST_CASE("output is non-increasing in delta_t when beta1 >= beta2") {
  // The gated decrease-in-violation term min(0, dt - dn) grows with dt, so
  // joint monotonicity in dt needs the threshold weight to dominate it.
  Rng rng(17);
  for (int i = 0; i < 300; ++i) {
    const double b2 = rng.uniform(0.0, 2.0);
    const double b1 = b2 + rng.uniform(0.0, 2.0);
    const auto cfg = make_cfg(rng.uniform(0.0, 2.0), b1, b2, rng.uniform(0.0, 0.5));
    const double adv = rng.uniform(-3.0, 3.0);
    const double dn = rng.uniform(0.0, 2.0);
    const double dt_lo = rng.uniform(0.0, 2.0);
    const double dt_hi = dt_lo + rng.uniform(0.0, 1.0);
    REQUIRE(regularize_advantage(adv, dt_hi, dn, cfg) <=
            regularize_advantage(adv, dt_lo, dn, cfg) + 1e-12);
  }
}

TEST_CASE("output is non-increasing in delta_next past the tolerance") {
  Rng rng(18);
  for (int i = 0; i < 300; ++i) {
    const auto cfg = make_cfg(rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0),
                              rng.uniform(0.0, 2.0), rng.uniform(0.0, 0.5));
    const double adv = rng.uniform(-3.0, 3.0);
    const double dt = cfg.omega + rng.uniform(1e-6, 1.0);
    const double dn_lo = rng.uniform(0.0, 2.0);
    const double dn_hi = dn_lo + rng.uniform(0.0, 1.0);
    REQUIRE(regularize_advantage(adv, dt, dn_hi, cfg) <=
            regularize_advantage(adv, dt, dn_lo, cfg) + 1e-12);
  }
}

TEST_CASE("min-max normalization maps to [0,1] with min->0 and max->1") {
  const std::vector<double> xs{3.0, -1.0, 7.0, 0.0, 7.0};
  const auto n = min_max_normalize(xs);
  REQUIRE(*std::min_element(n.begin(), n.end()) == 0.0);
  REQUIRE(*std::max_element(n.begin(), n.end()) == 1.0);
  REQUIRE(n[1] == 0.0);
  REQUIRE(n[2] == 1.0);
  REQUIRE(n[4] == 1.0);
  for (double v : n) {
    REQUIRE(v >= 0.0);
    REQUIRE(v <= 1.0);
  }
}

TEST_CASE("constant batches normalize to zero") {
  const std::vector<double> xs{2.5, 2.5, 2.5};
  for (double v : min_max_normalize(xs)) REQUIRE(v == 0.0);
}

TEST_CASE("batch regularization without normalization matches the scalar formula") {
  Rng rng(5);
  const auto cfg = make_cfg(0.7, 1.3, 0.9, 0.05);
  std::vector<double> adv(50), dt(50), dn(50);
  for (std::size_t i = 0; i < adv.size(); ++i) {
    adv[i] = rng.uniform(-2.0, 2.0);
    dt[i] = rng.uniform(0.0, 1.0);
    dn[i] = rng.uniform(0.0, 1.0);
  }
  const auto batch = regularize_advantages(adv, dt, dn, cfg);
  for (std::size_t i = 0; i < adv.size(); ++i)
    REQUIRE(batch[i] == regularize_advantage(adv[i], dt[i], dn[i], cfg));
}

TEST_CASE("normalized batch output is a weighted sum of normalized terms") {
  const auto cfg = make_cfg(1.0, 0.5, 0.5, 0.1, true);
  const std::vector<double> adv{1.0, -1.0, 0.5};
  const std::vector<double> dt{0.0, 0.5, 0.3};
  const std::vector<double> dn{0.0, 0.4, 0.6};
  const auto out = regularize_advantages(adv, dt, dn, cfg);

  // independent recomputation
  std::vector<double> t0, t1, t2;
  for (std::size_t i = 0; i < adv.size(); ++i) {
    const auto t = advantage_terms(adv[i], dt[i], dn[i], cfg.omega);
    t0.push_back(t[0]);
    t1.push_back(t[1]);
    t2.push_back(t[2]);
  }
  const auto n0 = min_max_normalize(t0), n1 = min_max_normalize(t1), n2 = min_max_normalize(t2);
  for (std::size_t i = 0; i < adv.size(); ++i)
    REQUIRE(out[i] ==
            Catch::Approx(cfg.beta0 * n0[i] + cfg.beta1 * n1[i] + cfg.beta2 * n2[i])
                .margin(1e-15));
  // all terms normalized: outputs bounded by beta mass
  for (double v : out) {
    REQUIRE(v >= 0.0);
    REQUIRE(v <= cfg.beta0 + cfg.beta1 + cfg.beta2);
  }
}

TEST_CASE("invalid configurations are rejected") {
  auto bad_beta = make_cfg(-1.0, 0.0, 0.0, 0.1);
  REQUIRE_THROWS_AS(bad_beta.validate(), std::invalid_argument);
  auto bad_omega = make_cfg(1.0, 0.0, 0.0, -0.1);
  REQUIRE_THROWS_AS(bad_omega.validate(), std::invalid_argument);
}
