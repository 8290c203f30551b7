#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "fairpo/harness.hpp"

using namespace fairpo;

namespace {

const char* kAttentionToml = R"(
[experiment]
name = "attn_test"
environment = "attention"
agent = "a_ppo"
trials = 3
seed = 9

[env]
sites = 5
units = 6
drift = 0.1
zeta0 = 1.0
zeta1 = 0.25
horizon = 12

[ppo]
iterations = 2
episodes_per_iteration = 2
horizon = 12
minibatch_size = 8
hidden_sizes = [8]
omega = 0.05
)";

ExperimentConfig parse_experiment(const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / "fairpo_test_cfg.toml";
  std::ofstream os(path);
  os << text;
  os.close();
  auto cfg = ExperimentConfig::load(path.string());
  std::filesystem::remove(path);
  return cfg;
}

MetricsSeries tiny_series() {
  MetricsSeries s;
  s.trials = 2;
  s.horizon = 3;
  s.reward = {{1.0, 2.5, -0.125}, {0.3333333333333333, 1e-9, 4.0}};
  s.delta = {{0.0, 0.1, 0.2}, {0.05, 0.0, 0.125}};
  s.extra_names = {"cash"};
  s.extras = {{{10.0, 11.0, 12.0}, {9.0, 8.0, 7.5}}};
  return s;
}

}  // namespace

TEST_CASE("config parser handles sections, comments, lists and types") {
  const auto cfg = ConfigFile::parse_string(R"(
# top comment
[env]
sites = 7       # trailing comment
drift = 0.25
name = "hello # not a comment"
flag = true
rates = [1.0, 2.5, 3]

[other]
x = -4
)");
  REQUIRE(cfg.get_int("env", "sites", 0) == 7);
  REQUIRE(cfg.get_double("env", "drift", 0) == 0.25);
  REQUIRE(cfg.get_string("env", "name") == "hello # not a comment");
  REQUIRE(cfg.get_bool("env", "flag", false));
  REQUIRE(cfg.get_double_list("env", "rates") == std::vector<double>{1.0, 2.5, 3.0});
  REQUIRE(cfg.get_int("other", "x", 0) == -4);
  REQUIRE(cfg.get_int("missing", "key", 42) == 42);
  REQUIRE_FALSE(cfg.has("env", "absent"));
}

TEST_CASE("config parser rejects malformed input") {
  REQUIRE_THROWS(ConfigFile::parse_string("[unclosed\nx = 1"));
  REQUIRE_THROWS(ConfigFile::parse_string("[s]\nno_equals_here"));
  const auto cfg = ConfigFile::parse_string("[s]\nx = notanumber");
  REQUIRE_THROWS(cfg.get_double("s", "x", 0.0));
}

TEST_CASE("experiment config loads and validates") {
  const auto cfg = parse_experiment(kAttentionToml);
  REQUIRE(cfg.name == "attn_test");
  REQUIRE(cfg.environment == "attention");
  REQUIRE(cfg.agent == "a_ppo");
  REQUIRE(cfg.trials == 3);
  REQUIRE(cfg.seed == 9);
}

TEST_CASE("fairness defaults follow the per-environment tables") {
  const auto cfg = parse_experiment(kAttentionToml);
  const auto a = make_ppo_config(cfg, "a_ppo");
  REQUIRE(a.fairness_mode == FairnessMode::AdvantageRegularized);
  REQUIRE(a.regularizer.beta0 == 0.05);
  REQUIRE(a.regularizer.beta1 == 0.32);
  REQUIRE(a.regularizer.beta2 == 0.63);
  REQUIRE_FALSE(a.regularizer.normalize);

  const auto r = make_ppo_config(cfg, "r_ppo");
  REQUIRE(r.fairness_mode == FairnessMode::RewardPenalty);
  REQUIRE(r.reward_penalty_weight == 10.0);

  const auto g = make_ppo_config(cfg, "g_ppo");
  REQUIRE(g.fairness_mode == FairnessMode::Greedy);

  // lending and disease defaults
  auto lending_cfg = cfg;
  lending_cfg.environment = "lending";
  const auto al = make_ppo_config(lending_cfg, "a_ppo");
  REQUIRE(al.regularizer.beta0 == 1.0);
  REQUIRE(al.regularizer.beta1 == 0.5);
  REQUIRE(al.regularizer.beta2 == 0.5);
  REQUIRE(al.regularizer.normalize);
  REQUIRE(make_ppo_config(lending_cfg, "r_ppo").reward_penalty_weight == 2.0);

  auto disease_cfg = cfg;
  disease_cfg.environment = "disease";
  const auto ad = make_ppo_config(disease_cfg, "a_ppo");
  REQUIRE(ad.regularizer.beta0 == 0.6);
  REQUIRE(ad.regularizer.beta1 == 0.15);
  REQUIRE(ad.regularizer.beta2 == 0.25);
  REQUIRE(ad.regularizer.normalize);
  REQUIRE(make_ppo_config(disease_cfg, "r_ppo").reward_penalty_weight == 0.1);
}

TEST_CASE("csv export writes the documented layout and round-trips") {
  const auto series = tiny_series();
  std::ostringstream os;
  export_csv(series, os);
  const std::string text = os.str();
  REQUIRE(text.rfind("t,trial,reward,delta,cash\n", 0) == 0);
  // 2 trials x 3 steps = 6 data rows
  int rows = -1;  // don't count the header
  for (char c : text)
    if (c == '\n') ++rows;
  REQUIRE(rows == 6);

  std::istringstream is(text);
  const auto back = import_csv(is);
  REQUIRE(back.trials == series.trials);
  REQUIRE(back.horizon == series.horizon);
  REQUIRE(back.reward == series.reward);
  REQUIRE(back.delta == series.delta);
  REQUIRE(back.extras == series.extras);
}

TEST_CASE("csv header without extras is exactly t,trial,reward,delta") {
  MetricsSeries s = tiny_series();
  s.extra_names.clear();
  s.extras.clear();
  std::ostringstream os;
  export_csv(s, os);
  REQUIRE(os.str().rfind("t,trial,reward,delta\n", 0) == 0);
}

TEST_CASE("json export round-trips numerically and keeps aggregates consistent") {
  auto series = tiny_series();
  series.raw_names = {"acc"};
  series.raw = {{{1, 2, 3}, {4, 5, 6}}};
  const auto path = std::filesystem::temp_directory_path() / "fairpo_metrics.json";
  export_json(series, path.string());
  const auto back = import_json(path.string());
  std::filesystem::remove(path);
  REQUIRE(back.reward == series.reward);
  REQUIRE(back.delta == series.delta);
  REQUIRE(back.extras == series.extras);
  REQUIRE(back.raw == series.raw);

  // aggregates recomputable from raw trials
  const auto mean = series.mean_per_t(series.reward);
  for (int t = 0; t < series.horizon; ++t) {
    double acc = 0.0;
    for (int i = 0; i < series.trials; ++i)
      acc += series.reward[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
    REQUIRE(mean[static_cast<std::size_t>(t)] ==
            Catch::Approx(acc / series.trials).margin(1e-12));
  }
}

TEST_CASE("baseline evaluation has the right shape and is deterministic") {
  const auto cfg = parse_experiment(kAttentionToml);
  const auto a = run_eval(cfg, "purely_greedy", std::nullopt, 3, 5);
  REQUIRE(a.trials == 3);
  REQUIRE(a.horizon == 12);
  REQUIRE(a.delta_summary().size() == 3);
  const auto b = run_eval(cfg, "purely_greedy", std::nullopt, 3, 5);
  std::ostringstream sa, sb;
  export_csv(a, sa);
  export_csv(b, sb);
  REQUIRE(sa.str() == sb.str());
  const auto c = run_eval(cfg, "purely_greedy", std::nullopt, 3, 6);
  std::ostringstream sc;
  export_csv(c, sc);
  REQUIRE(sa.str() != sc.str());
}

TEST_CASE("attention deltas in the series match recomputation from raw accumulators") {
  const auto cfg = parse_experiment(kAttentionToml);
  const auto series = run_eval(cfg, "purely_greedy", std::nullopt, 2, 11);
  const int sites = 5;
  REQUIRE(series.raw_names.size() == static_cast<std::size_t>(2 * sites));
  for (int trial = 0; trial < series.trials; ++trial) {
    for (int t = 0; t < series.horizon; ++t) {
      double lo = 1e300, hi = -1e300;
      for (int k = 0; k < sites; ++k) {
        const double disc =
            series.raw[static_cast<std::size_t>(k)][static_cast<std::size_t>(trial)]
                      [static_cast<std::size_t>(t)];
        const double occ =
            series.raw[static_cast<std::size_t>(sites + k)][static_cast<std::size_t>(trial)]
                      [static_cast<std::size_t>(t)];
        const double ratio = disc / (occ + 1.0);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      REQUIRE(series.delta[static_cast<std::size_t>(trial)][static_cast<std::size_t>(t)] ==
              Catch::Approx(hi - lo).margin(1e-12));
    }
  }
}

TEST_CASE("training on a tiny budget produces a checkpoint that evaluates") {
  const auto cfg = parse_experiment(kAttentionToml);
  const auto outcome = run_training(cfg, "a_ppo", 3);
  REQUIRE(outcome.log.size() == 2);
  REQUIRE(outcome.checkpoint.environment == "attention");
  REQUIRE(outcome.checkpoint.policy.output_dim() == 5);

  const auto path = std::filesystem::temp_directory_path() / "fairpo_test.ckpt";
  save_checkpoint(outcome.checkpoint, path.string());
  const auto loaded = load_checkpoint(path.string());
  std::filesystem::remove(path);
  REQUIRE(loaded.policy == outcome.checkpoint.policy);
  REQUIRE(loaded.value == outcome.checkpoint.value);
  REQUIRE(loaded.environment == "attention");
  REQUIRE(loaded.agent == "a_ppo");

  const auto series = run_eval(cfg, "a_ppo", loaded, 2, 4);
  REQUIRE(series.trials == 2);
  REQUIRE(series.horizon == 12);
}

TEST_CASE("checkpoint and environment mismatches are rejected") {
  const auto cfg = parse_experiment(kAttentionToml);
  const auto outcome = run_training(cfg, "g_ppo", 4);
  auto lending_cfg = cfg;
  lending_cfg.environment = "lending";
  REQUIRE_THROWS(run_eval(lending_cfg, "g_ppo", outcome.checkpoint, 1, 1));
  REQUIRE_THROWS(run_eval(cfg, "g_ppo", std::nullopt, 1, 1));
  REQUIRE_THROWS(run_training(cfg, "purely_greedy", 1));
  REQUIRE_THROWS(run_eval(cfg, "no_such_agent", std::nullopt, 1, 1));
}

TEST_CASE("same seed gives identical training runs at the harness level") {
  const auto cfg = parse_experiment(kAttentionToml);
  const auto a = run_training(cfg, "r_ppo", 5);
  const auto b = run_training(cfg, "r_ppo", 5);
  REQUIRE(a.checkpoint.policy == b.checkpoint.policy);
  REQUIRE(a.checkpoint.value == b.checkpoint.value);
  std::ostringstream sa, sb;
  write_training_log_csv(a.log, sa);
  write_training_log_csv(b.log, sb);
  REQUIRE(sa.str() == sb.str());
}

TEST_CASE("argmax evaluation of a checkpoint is reproducible") {
  const auto cfg = parse_experiment(kAttentionToml);
  const auto outcome = run_training(cfg, "g_ppo", 6);
  const auto a =
      run_eval(cfg, "g_ppo", outcome.checkpoint, 2, 3, ActionSelection::Argmax);
  const auto b =
      run_eval(cfg, "g_ppo", outcome.checkpoint, 2, 3, ActionSelection::Argmax);
  REQUIRE(a.reward == b.reward);
  REQUIRE(a.delta == b.delta);
}

TEST_CASE("lending and disease evaluations carry their extras") {
  const auto lending = parse_experiment(R"(
[experiment]
name = "lend_test"
environment = "lending"
trials = 2
[env]
horizon = 15
)");
  const auto ls = run_eval(lending, "greedy_lend", std::nullopt, 2, 3);
  REQUIRE(ls.extra_names == std::vector<std::string>{"bank_cash", "loans_g1", "loans_g2"});
  REQUIRE(ls.horizon == 15);

  const auto es = run_eval(lending, "eo", std::nullopt, 2, 3);
  REQUIRE(es.trials == 2);

  const auto disease = parse_experiment(R"(
[experiment]
name = "dis_test"
environment = "disease"
trials = 2
[env]
horizon = 10
)");
  const auto ds = run_eval(disease, "random", std::nullopt, 2, 3);
  REQUIRE(ds.extra_names == std::vector<std::string>{"frac_infected"});
  REQUIRE(ds.horizon == 10);
  const auto ms = run_eval(disease, "max_neighbor", std::nullopt, 2, 3);
  REQUIRE(ms.trials == 2);
}
