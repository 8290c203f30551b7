#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace fairpo {

/// Per-timestep evaluation series over independent trials: reward, fairness
/// metric, environment-specific extras, plus raw accumulator snapshots that
/// let the fairness values be recomputed offline.
struct MetricsSeries {
  int horizon = 0;
  int trials = 0;
  std::vector<std::string> extra_names;
  std::vector<std::vector<double>> reward;  // [trial][t]
  std::vector<std::vector<double>> delta;   // [trial][t]
  std::vector<std::vector<std::vector<double>>> extras;  // [extra][trial][t]
  std::vector<std::string> raw_names;       // accumulator series (JSON export only)
  std::vector<std::vector<std::vector<double>>> raw;     // [series][trial][t]

  void validate() const {
    if (static_cast<int>(reward.size()) != trials || static_cast<int>(delta.size()) != trials)
      throw std::invalid_argument("MetricsSeries: trial count mismatch");
    for (const auto& r : reward)
      if (static_cast<int>(r.size()) != horizon)
        throw std::invalid_argument("MetricsSeries: reward length mismatch");
    for (const auto& d : delta)
      if (static_cast<int>(d.size()) != horizon)
        throw std::invalid_argument("MetricsSeries: delta length mismatch");
    if (extras.size() != extra_names.size())
      throw std::invalid_argument("MetricsSeries: extras/names mismatch");
  }

  std::vector<double> mean_per_t(const std::vector<std::vector<double>>& series) const {
    std::vector<double> mean(static_cast<std::size_t>(horizon), 0.0);
    for (const auto& trial : series)
      for (int t = 0; t < horizon; ++t) mean[static_cast<std::size_t>(t)] += trial[static_cast<std::size_t>(t)];
    for (double& v : mean) v /= trials;
    return mean;
  }

  std::vector<double> stddev_per_t(const std::vector<std::vector<double>>& series) const {
    const auto mean = mean_per_t(series);
    std::vector<double> sd(static_cast<std::size_t>(horizon), 0.0);
    for (const auto& trial : series)
      for (int t = 0; t < horizon; ++t) {
        const double d = trial[static_cast<std::size_t>(t)] - mean[static_cast<std::size_t>(t)];
        sd[static_cast<std::size_t>(t)] += d * d;
      }
    for (double& v : sd) v = std::sqrt(v / trials);
    return sd;
  }

  /// Mean fairness metric over the trajectory, one entry per trial.
  std::vector<double> delta_summary() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(trials));
    for (const auto& trial : delta) {
      double sum = 0.0;
      for (double v : trial) sum += v;
      out.push_back(sum / horizon);
    }
    return out;
  }

  double mean_cumulative_reward() const {
    double sum = 0.0;
    for (const auto& trial : reward)
      for (double v : trial) sum += v;
    return sum / trials;
  }

  double mean_delta_over_all() const {
    double sum = 0.0;
    for (const auto& trial : delta)
      for (double v : trial) sum += v;
    return sum / (static_cast<double>(trials) * horizon);
  }

  double mean_at_final_step(const std::vector<std::vector<double>>& series) const {
    double sum = 0.0;
    for (const auto& trial : series) sum += trial.back();
    return sum / trials;
  }
};

namespace detail {
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace detail

/// CSV layout: header `t,trial,reward,delta,<extras...>`, one row per
/// (trial, timestep), doubles printed with enough digits to round-trip.
inline void export_csv(const MetricsSeries& series, std::ostream& os) {
  series.validate();
  os << "t,trial";
  os << ",reward,delta";
  for (const auto& name : series.extra_names) os << ',' << name;
  os << '\n';
  for (int trial = 0; trial < series.trials; ++trial) {
    for (int t = 0; t < series.horizon; ++t) {
      os << t << ',' << trial << ','
         << detail::fmt_double(series.reward[static_cast<std::size_t>(trial)][static_cast<std::size_t>(t)])
         << ','
         << detail::fmt_double(series.delta[static_cast<std::size_t>(trial)][static_cast<std::size_t>(t)]);
      for (const auto& extra : series.extras)
        os << ','
           << detail::fmt_double(extra[static_cast<std::size_t>(trial)][static_cast<std::size_t>(t)]);
      os << '\n';
    }
  }
}

inline void export_csv(const MetricsSeries& series, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("export_csv: cannot open " + path);
  export_csv(series, os);
  if (!os) throw std::runtime_error("export_csv: write failed for " + path);
}

inline MetricsSeries import_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("import_csv: empty input");
  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string field;
    while (std::getline(hs, field, ',')) header.push_back(field);
  }
  if (header.size() < 4 || header[0] != "t" || header[1] != "trial" || header[2] != "reward" ||
      header[3] != "delta")
    throw std::runtime_error("import_csv: unexpected header");

  MetricsSeries series;
  series.extra_names.assign(header.begin() + 4, header.end());
  series.extras.resize(series.extra_names.size());

  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<double> fields;
    while (std::getline(ls, field, ',')) fields.push_back(std::stod(field));
    if (fields.size() != header.size()) throw std::runtime_error("import_csv: ragged row");
    const int trial = static_cast<int>(fields[1]);
    if (trial >= static_cast<int>(series.reward.size())) {
      series.reward.resize(static_cast<std::size_t>(trial) + 1);
      series.delta.resize(static_cast<std::size_t>(trial) + 1);
      for (auto& e : series.extras) e.resize(static_cast<std::size_t>(trial) + 1);
    }
    series.reward[static_cast<std::size_t>(trial)].push_back(fields[2]);
    series.delta[static_cast<std::size_t>(trial)].push_back(fields[3]);
    for (std::size_t x = 0; x < series.extras.size(); ++x)
      series.extras[x][static_cast<std::size_t>(trial)].push_back(fields[4 + x]);
  }
  series.trials = static_cast<int>(series.reward.size());
  series.horizon = series.trials > 0 ? static_cast<int>(series.reward[0].size()) : 0;
  series.validate();
  return series;
}

inline MetricsSeries import_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("import_csv: cannot open " + path);
  return import_csv(is);
}

/// JSON layout: per-trial arrays for reward/delta/extras/raw accumulators,
/// plus mean and standard-deviation aggregates per timestep.
inline nlohmann::json to_json(const MetricsSeries& series) {
  series.validate();
  nlohmann::json j;
  j["horizon"] = series.horizon;
  j["trials"] = series.trials;
  j["reward"] = series.reward;
  j["delta"] = series.delta;
  nlohmann::json extras = nlohmann::json::object();
  for (std::size_t x = 0; x < series.extra_names.size(); ++x)
    extras[series.extra_names[x]] = series.extras[x];
  j["extras"] = extras;
  nlohmann::json raw = nlohmann::json::object();
  for (std::size_t x = 0; x < series.raw_names.size(); ++x)
    raw[series.raw_names[x]] = series.raw[x];
  j["raw"] = raw;
  j["aggregates"] = {
      {"reward_mean", series.mean_per_t(series.reward)},
      {"reward_std", series.stddev_per_t(series.reward)},
      {"delta_mean", series.mean_per_t(series.delta)},
      {"delta_std", series.stddev_per_t(series.delta)},
      {"delta_summary", series.delta_summary()},
  };
  return j;
}

inline MetricsSeries metrics_from_json(const nlohmann::json& j) {
  MetricsSeries series;
  series.horizon = j.at("horizon").get<int>();
  series.trials = j.at("trials").get<int>();
  series.reward = j.at("reward").get<std::vector<std::vector<double>>>();
  series.delta = j.at("delta").get<std::vector<std::vector<double>>>();
  for (const auto& [name, value] : j.at("extras").items()) {
    series.extra_names.push_back(name);
    series.extras.push_back(value.get<std::vector<std::vector<double>>>());
  }
  for (const auto& [name, value] : j.at("raw").items()) {
    series.raw_names.push_back(name);
    series.raw.push_back(value.get<std::vector<std::vector<double>>>());
  }
  series.validate();
  return series;
}

inline void export_json(const MetricsSeries& series, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("export_json: cannot open " + path);
  os << to_json(series).dump(2) << '\n';
  if (!os) throw std::runtime_error("export_json: write failed for " + path);
}

inline MetricsSeries import_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("import_json: cannot open " + path);
  nlohmann::json j;
  is >> j;
  return metrics_from_json(j);
}

}  // namespace fairpo
