// Command-line front end: train PPO variants, evaluate agents over trials,
// detect graph communities, and run quick benchmark suites.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairpo/fairpo.hpp"

namespace fs = std::filesystem;

namespace {

std::string output_stem(const fairpo::ExperimentConfig& cfg, const std::string& agent,
                        std::uint64_t seed) {
  return cfg.name + "_" + agent + "_seed" + std::to_string(seed);
}

int cmd_train(const std::string& config_path, const std::string& agent_flag, std::uint64_t seed,
              const std::string& out_dir, bool quiet) {
  const auto cfg = fairpo::ExperimentConfig::load(config_path);
  const std::string agent = agent_flag.empty() ? cfg.agent : agent_flag;
  if (agent.empty())
    throw std::runtime_error("no agent: set [experiment] agent in the config or pass --agent");

  fs::create_directories(out_dir);
  const auto t0 = std::chrono::steady_clock::now();
  const auto outcome = fairpo::run_training(cfg, agent, seed, quiet ? nullptr : &std::cerr);
  const auto elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::string stem = output_stem(cfg, agent, seed);
  const fs::path ckpt_path = fs::path(out_dir) / (stem + ".ckpt");
  const fs::path log_path = fs::path(out_dir) / (stem + "_train_log.csv");
  fairpo::save_checkpoint(outcome.checkpoint, ckpt_path.string());
  {
    std::ofstream os(log_path);
    if (!os) throw std::runtime_error("cannot open " + log_path.string());
    fairpo::write_training_log_csv(outcome.log, os);
  }
  std::cout << "trained " << agent << " on " << cfg.environment << " in " << elapsed << " s\n"
            << "checkpoint: " << ckpt_path.string() << "\n"
            << "training log: " << log_path.string() << "\n";
  return 0;
}

int cmd_eval(const std::string& config_path, const std::string& agent_flag,
             const std::string& checkpoint_path, int trials_flag, std::uint64_t seed_flag,
             bool has_seed, const std::string& out_dir, const std::string& format,
             const std::string& selection_name) {
  const auto cfg = fairpo::ExperimentConfig::load(config_path);
  std::string agent = agent_flag.empty() ? cfg.agent : agent_flag;

  std::optional<fairpo::Checkpoint> ckpt;
  if (!checkpoint_path.empty()) {
    ckpt = fairpo::load_checkpoint(checkpoint_path);
    if (agent.empty()) agent = ckpt->agent;
  }
  if (agent.empty())
    throw std::runtime_error("no agent: pass --agent, set it in the config, or give a checkpoint");

  const int trials = trials_flag > 0 ? trials_flag : cfg.trials;
  const std::uint64_t seed = has_seed ? seed_flag : cfg.seed;
  const auto selection = selection_name == "argmax" ? fairpo::ActionSelection::Argmax
                                                    : fairpo::ActionSelection::Sample;

  const auto series = fairpo::run_eval(cfg, agent, ckpt, trials, seed, selection);

  fs::create_directories(out_dir);
  const std::string stem = output_stem(cfg, agent, seed) + "_eval";
  if (format == "csv" || format == "both") {
    const fs::path p = fs::path(out_dir) / (stem + ".csv");
    fairpo::export_csv(series, p.string());
    std::cout << "metrics csv: " << p.string() << "\n";
  }
  if (format == "json" || format == "both") {
    const fs::path p = fs::path(out_dir) / (stem + ".json");
    fairpo::export_json(series, p.string());
    std::cout << "metrics json: " << p.string() << "\n";
  }
  std::cout << "mean cumulative reward: " << series.mean_cumulative_reward() << "\n"
            << "mean delta: " << series.mean_delta_over_all() << "\n";
  return 0;
}

int cmd_communities(const std::string& graph_path, const std::string& out_path) {
  const fairpo::SocialGraph graph = graph_path.empty()
                                        ? fairpo::SocialGraph::karate_club()
                                        : fairpo::SocialGraph::load_edgelist(graph_path);
  const auto labels = fairpo::girvan_newman_bisect(graph);
  const auto betweenness = fairpo::edge_betweenness(graph);

  nlohmann::json j;
  j["num_nodes"] = graph.num_nodes;
  j["num_edges"] = graph.edges.size();
  j["communities"] = labels;
  nlohmann::json eb = nlohmann::json::array();
  for (const auto& [edge, score] : betweenness)
    eb.push_back({{"u", edge.first}, {"v", edge.second}, {"betweenness", score}});
  j["edge_betweenness"] = eb;

  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream os(out_path);
    if (!os) throw std::runtime_error("cannot open " + out_path);
    os << j.dump(2) << "\n";
    std::cout << "communities json: " << out_path << "\n";
  }
  return 0;
}

int cmd_bench(const std::string& suite) {
  using clock = std::chrono::steady_clock;
  auto run = [](const char* name, auto fn) {
    const auto t0 = clock::now();
    fn();
    const double s = std::chrono::duration<double>(clock::now() - t0).count();
    std::cout << name << ": " << s << " s\n";
  };

  if (suite == "bandit") {
    run("bandit smoke training (200 iterations)", [] {
      fairpo::PpoConfig cfg;
      cfg.gamma = 1.0;
      cfg.policy_step = 1e-3;
      cfg.episodes_per_iteration = 4;
      cfg.horizon = 16;
      cfg.iterations = 200;
      cfg.minibatch_size = 64;
      cfg.hidden_sizes = {16};
      const auto result = fairpo::train(fairpo::BanditEnv({1.0, 0.0}), cfg, 1);
      const auto probs = fairpo::forward(result.policy, std::vector<double>{1.0});
      std::cout << "  final P(best arm) = " << probs[0] << "\n";
    });
    return 0;
  }
  if (suite == "nn") {
    run("mlp forward+backward x20000 (64x64 hidden)", [] {
      auto net = fairpo::MlpNetwork::create({30, 64, 64, 10}, fairpo::Head::SoftmaxPolicy, 7);
      std::vector<double> input(30, 0.1);
      std::vector<double> up(10, 0.1);
      fairpo::ForwardCache cache;
      double acc = 0.0;
      for (int i = 0; i < 20000; ++i) {
        const auto out = fairpo::forward(net, input, cache);
        const auto g = fairpo::backward(net, cache, up);
        acc += out[0] + g.bias_grads[0][0];
      }
      std::cout << "  checksum " << acc << "\n";
    });
    return 0;
  }
  if (suite == "envs") {
    run("attention 50k steps", [] {
      fairpo::AttentionEnv env{fairpo::AttentionConfig{}};
      fairpo::Rng rng(3);
      env.reset(rng);
      std::vector<int> alloc(5, 1);
      alloc[0] = 2;
      double acc = 0.0;
      for (int i = 0; i < 50000; ++i) acc += env.step(alloc, rng);
      std::cout << "  checksum " << acc << "\n";
    });
    run("disease 50k steps", [] {
      fairpo::DiseaseEnv env{fairpo::SocialGraph::karate_club(), fairpo::DiseaseConfig{}};
      fairpo::Rng rng(3);
      env.reset(rng);
      double acc = 0.0;
      for (int i = 0; i < 50000; ++i) {
        if (i % 20 == 0) env.reset(rng);
        acc += env.step_action(i % 35, rng);
      }
      std::cout << "  checksum " << acc << "\n";
    });
    return 0;
  }
  throw std::runtime_error("unknown bench suite: " + suite + " (try bandit|nn|envs)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairness-constrained policy optimization harness"};
  app.require_subcommand(1);

  std::string config_path, agent, out_dir = "out", checkpoint_path, format = "csv";
  std::string graph_path, communities_out, suite = "bandit", selection = "sample";
  std::uint64_t seed = 1;
  int trials = 0;
  bool quiet = false;

  auto* train_cmd = app.add_subcommand("train", "train a PPO variant on an environment");
  train_cmd->add_option("--config", config_path, "experiment config file")->required();
  train_cmd->add_option("--agent", agent, "g_ppo | r_ppo | a_ppo");
  train_cmd->add_option("--seed", seed, "training seed")->required();
  train_cmd->add_option("--out", out_dir, "output directory");
  train_cmd->add_flag("--quiet", quiet, "suppress per-iteration progress");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate an agent over independent trials");
  eval_cmd->add_option("--config", config_path, "experiment config file")->required();
  eval_cmd->add_option("--agent", agent, "PPO variant or baseline name");
  eval_cmd->add_option("--checkpoint", checkpoint_path, "checkpoint for PPO agents");
  eval_cmd->add_option("--trials", trials, "number of evaluation trials");
  auto* seed_opt = eval_cmd->add_option("--seed", seed, "evaluation seed");
  eval_cmd->add_option("--out", out_dir, "output directory");
  eval_cmd->add_option("--format", format, "csv | json | both")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  eval_cmd->add_option("--selection", selection, "sample | argmax")
      ->check(CLI::IsMember({"sample", "argmax"}));

  auto* comm_cmd = app.add_subcommand("communities", "bisect a graph into two communities");
  comm_cmd->add_option("--graph", graph_path, "edge-list file (default: built-in karate club)");
  comm_cmd->add_option("--out", communities_out, "output json path (default: stdout)");

  auto* bench_cmd = app.add_subcommand("bench", "run a quick benchmark suite");
  bench_cmd->add_option("--suite", suite, "bandit | nn | envs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) return cmd_train(config_path, agent, seed, out_dir, quiet);
    if (eval_cmd->parsed())
      return cmd_eval(config_path, agent, checkpoint_path, trials, seed, seed_opt->count() > 0,
                      out_dir, format, selection);
    if (comm_cmd->parsed()) return cmd_communities(graph_path, communities_out);
    if (bench_cmd->parsed()) return cmd_bench(suite);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
