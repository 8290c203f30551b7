#pragma once

// Test-side oracles, deliberately independent of the library's own
// implementation paths: straight-line network evaluation, literal
// shortest-path enumeration for edge betweenness, and a from-scratch
// bisection loop built on it.

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "fairpo/graph.hpp"
#include "fairpo/nn.hpp"

namespace fairpo::oracles {

// Plain nested-loop re-evaluation of a dense network.
inline std::vector<double> straight_line_eval(const MlpNetwork& net,
                                              const std::vector<double>& input) {
  std::vector<double> h = input;
  for (int l = 0; l < net.num_layers(); ++l) {
    const Matrix& w = net.weights[static_cast<std::size_t>(l)];
    std::vector<double> z(static_cast<std::size_t>(w.rows));
    for (int r = 0; r < w.rows; ++r) {
      double acc = net.biases[static_cast<std::size_t>(l)][static_cast<std::size_t>(r)];
      for (int c = 0; c < w.cols; ++c) acc += w(r, c) * h[static_cast<std::size_t>(c)];
      z[static_cast<std::size_t>(r)] = acc;
    }
    if (l + 1 < net.num_layers())
      for (double& v : z) v = std::tanh(v);
    h = z;
  }
  if (net.head == Head::SoftmaxPolicy) {
    double m = h[0];
    for (double v : h) m = std::max(m, v);
    double sum = 0.0;
    for (double& v : h) {
      v = std::exp(v - m);
      sum += v;
    }
    for (double& v : h) v /= sum;
  }
  return h;
}

// Brute-force edge betweenness: enumerate every shortest path of every
// unordered pair by walking the BFS predecessor DAG.
inline std::map<std::pair<int, int>, double> edge_betweenness_bruteforce(const SocialGraph& g) {
  std::map<std::pair<int, int>, double> score;
  for (const auto& e : g.edges) score[e] = 0.0;

  for (int s = 0; s < g.num_nodes; ++s) {
    std::vector<int> dist(static_cast<std::size_t>(g.num_nodes), -1);
    std::vector<std::vector<int>> preds(static_cast<std::size_t>(g.num_nodes));
    std::deque<int> queue{s};
    dist[static_cast<std::size_t>(s)] = 0;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int w : g.adjacency[static_cast<std::size_t>(u)]) {
        if (dist[static_cast<std::size_t>(w)] == -1) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
          queue.push_back(w);
        }
        if (dist[static_cast<std::size_t>(w)] == dist[static_cast<std::size_t>(u)] + 1)
          preds[static_cast<std::size_t>(w)].push_back(u);
      }
    }
    for (int t = s + 1; t < g.num_nodes; ++t) {
      if (dist[static_cast<std::size_t>(t)] == -1) continue;
      std::vector<std::vector<int>> paths;
      std::vector<int> partial{t};
      std::vector<std::pair<int, std::size_t>> stack{{t, 0}};
      while (!stack.empty()) {
        auto& [node, next_pred] = stack.back();
        if (node == s) {
          paths.push_back(partial);
          stack.pop_back();
          partial.pop_back();
          continue;
        }
        const auto& ps = preds[static_cast<std::size_t>(node)];
        if (next_pred >= ps.size()) {
          stack.pop_back();
          partial.pop_back();
          continue;
        }
        const int p = ps[next_pred];
        ++next_pred;
        partial.push_back(p);
        stack.push_back({p, 0});
      }
      const double total = static_cast<double>(paths.size());
      for (const auto& path : paths)
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
          const auto key = std::minmax(path[i], path[i + 1]);
          score[{key.first, key.second}] += 1.0 / total;
        }
    }
  }
  return score;
}

// Independent bisection: iterative removal, recomputing brute-force
// betweenness, same lexicographic tie rule.
inline std::vector<int> bisect_bruteforce(const SocialGraph& g) {
  std::vector<std::pair<int, int>> edges = g.edges;
  auto components = [&]() {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.num_nodes));
    for (const auto& [u, v] : edges) {
      adj[static_cast<std::size_t>(u)].push_back(v);
      adj[static_cast<std::size_t>(v)].push_back(u);
    }
    return connected_components(g.num_nodes, adj);
  };
  auto count = [](const std::vector<int>& comp) {
    return *std::max_element(comp.begin(), comp.end()) + 1;
  };
  auto comp = components();
  while (count(comp) < 2 && !edges.empty()) {
    const SocialGraph current = SocialGraph::from_edges(g.num_nodes, edges);
    const auto score = edge_betweenness_bruteforce(current);
    double best = -1.0;
    std::pair<int, int> best_edge{-1, -1};
    for (const auto& [e, v] : score) {
      const double eps = 1e-9 * std::max(1.0, std::abs(best));
      if (v > best + eps) {
        best = v;
        best_edge = e;
      } else if (v > best - eps && e < best_edge) {
        best_edge = e;
      }
    }
    edges.erase(std::find(edges.begin(), edges.end(), best_edge));
    comp = components();
  }
  std::vector<int> labels(static_cast<std::size_t>(g.num_nodes));
  for (int v = 0; v < g.num_nodes; ++v)
    labels[static_cast<std::size_t>(v)] = comp[static_cast<std::size_t>(v)] + 1;
  return labels;
}

inline std::set<std::set<int>> as_partition(const std::vector<int>& labels) {
  std::map<int, std::set<int>> groups;
  for (std::size_t v = 0; v < labels.size(); ++v) groups[labels[v]].insert(static_cast<int>(v));
  std::set<std::set<int>> partition;
  for (auto& [label, members] : groups) partition.insert(members);
  return partition;
}

}  // namespace fairpo::oracles
