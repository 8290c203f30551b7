#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fairpo {

/// Undirected simple graph with optional per-node community labels.
struct SocialGraph {
  int num_nodes = 0;
  std::vector<std::pair<int, int>> edges;       // stored with u < v, sorted, unique
  std::vector<std::vector<int>> adjacency;
  std::vector<int> communities;                 // per node, 1-based; empty until assigned

  static SocialGraph from_edges(int n, std::vector<std::pair<int, int>> edge_list) {
    if (n <= 0) throw std::invalid_argument("SocialGraph: need at least one node");
    SocialGraph g;
    g.num_nodes = n;
    for (auto& [u, v] : edge_list) {
      if (u == v) throw std::invalid_argument("SocialGraph: self-loop rejected");
      if (u < 0 || v < 0 || u >= n || v >= n)
        throw std::invalid_argument("SocialGraph: edge endpoint out of range");
      if (u > v) std::swap(u, v);
    }
    std::sort(edge_list.begin(), edge_list.end());
    if (std::adjacent_find(edge_list.begin(), edge_list.end()) != edge_list.end())
      throw std::invalid_argument("SocialGraph: duplicate edge rejected");
    g.edges = std::move(edge_list);
    g.adjacency.assign(static_cast<std::size_t>(n), {});
    for (const auto& [u, v] : g.edges) {
      g.adjacency[static_cast<std::size_t>(u)].push_back(v);
      g.adjacency[static_cast<std::size_t>(v)].push_back(u);
    }
    return g;
  }

  /// Plain edge-list text: one "u v" pair per line, 0-indexed; lines starting
  /// with '#' are skipped. Node count is max index + 1.
  static SocialGraph load_edgelist(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_edgelist: cannot open " + path);
    std::vector<std::pair<int, int>> edges;
    int max_node = -1;
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      int u, v;
      if (!(ls >> u >> v)) throw std::runtime_error("load_edgelist: malformed line: " + line);
      edges.emplace_back(u, v);
      max_node = std::max({max_node, u, v});
    }
    if (edges.empty()) throw std::runtime_error("load_edgelist: no edges in " + path);
    return from_edges(max_node + 1, std::move(edges));
  }

  static SocialGraph karate_club();

  int degree(int v) const { return static_cast<int>(adjacency[static_cast<std::size_t>(v)].size()); }

  int num_communities() const {
    return communities.empty() ? 0 : *std::max_element(communities.begin(), communities.end());
  }
};

/// Connected-component id per node (0-based, in order of lowest contained node).
inline std::vector<int> connected_components(int n,
                                             const std::vector<std::vector<int>>& adjacency) {
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  int next = 0;
  std::deque<int> queue;
  for (int s = 0; s < n; ++s) {
    if (comp[static_cast<std::size_t>(s)] != -1) continue;
    comp[static_cast<std::size_t>(s)] = next;
    queue.push_back(s);
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int w : adjacency[static_cast<std::size_t>(u)]) {
        if (comp[static_cast<std::size_t>(w)] == -1) {
          comp[static_cast<std::size_t>(w)] = next;
          queue.push_back(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

/// Edge betweenness: for every edge, the sum over unordered node pairs of the
/// fraction of shortest paths between the pair that pass through the edge.
/// Brandes-style accumulation; disconnected inputs are handled per component.
inline std::map<std::pair<int, int>, double> edge_betweenness(
    int n, const std::vector<std::vector<int>>& adjacency,
    const std::vector<std::pair<int, int>>& edges) {
  std::map<std::pair<int, int>, double> score;
  for (const auto& e : edges) score[e] = 0.0;

  std::vector<int> dist(static_cast<std::size_t>(n));
  std::vector<double> sigma(static_cast<std::size_t>(n));
  std::vector<double> delta(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> preds(static_cast<std::size_t>(n));
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));

  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto& p : preds) p.clear();
    order.clear();

    dist[static_cast<std::size_t>(s)] = 0;
    sigma[static_cast<std::size_t>(s)] = 1.0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      order.push_back(u);
      for (int w : adjacency[static_cast<std::size_t>(u)]) {
        if (dist[static_cast<std::size_t>(w)] == -1) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
          queue.push_back(w);
        }
        if (dist[static_cast<std::size_t>(w)] == dist[static_cast<std::size_t>(u)] + 1) {
          sigma[static_cast<std::size_t>(w)] += sigma[static_cast<std::size_t>(u)];
          preds[static_cast<std::size_t>(w)].push_back(u);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int w = *it;
      for (int u : preds[static_cast<std::size_t>(w)]) {
        const double c = sigma[static_cast<std::size_t>(u)] /
                         sigma[static_cast<std::size_t>(w)] *
                         (1.0 + delta[static_cast<std::size_t>(w)]);
        const auto key = std::minmax(u, w);
        score[{key.first, key.second}] += c;
        delta[static_cast<std::size_t>(u)] += c;
      }
    }
  }
  // Every unordered pair was counted from both endpoints.
  for (auto& [e, v] : score) v *= 0.5;
  return score;
}

inline std::map<std::pair<int, int>, double> edge_betweenness(const SocialGraph& g) {
  return edge_betweenness(g.num_nodes, g.adjacency, g.edges);
}

/// Repeatedly removes the highest-betweenness edge (recomputing after each
/// removal) until the graph splits into two connected components; returns
/// 1-based community labels by component. Ties on betweenness go to the
/// lexicographically smallest edge. An input that is already split is
/// returned as-is.
inline std::vector<int> girvan_newman_bisect(const SocialGraph& g) {
  auto adjacency = g.adjacency;
  auto edges = g.edges;

  auto labels_from_components = [&]() {
    const std::vector<int> comp = connected_components(g.num_nodes, adjacency);
    std::vector<int> labels(static_cast<std::size_t>(g.num_nodes));
    for (int v = 0; v < g.num_nodes; ++v)
      labels[static_cast<std::size_t>(v)] = comp[static_cast<std::size_t>(v)] + 1;
    return labels;
  };

  auto component_count = [&]() {
    const auto comp = connected_components(g.num_nodes, adjacency);
    return *std::max_element(comp.begin(), comp.end()) + 1;
  };

  while (component_count() < 2) {
    if (edges.empty()) break;  // single isolated node
    const auto score = edge_betweenness(g.num_nodes, adjacency, edges);
    double best = -1.0;
    std::pair<int, int> best_edge{-1, -1};
    for (const auto& [e, v] : score) {
      // Relative tolerance so float noise does not break tie ordering.
      const double tie_eps = 1e-9 * std::max(1.0, std::abs(best));
      if (v > best + tie_eps) {
        best = v;
        best_edge = e;
      } else if (v > best - tie_eps && e < best_edge) {
        best_edge = e;
      }
    }
    edges.erase(std::find(edges.begin(), edges.end(), best_edge));
    auto& au = adjacency[static_cast<std::size_t>(best_edge.first)];
    au.erase(std::find(au.begin(), au.end(), best_edge.second));
    auto& av = adjacency[static_cast<std::size_t>(best_edge.second)];
    av.erase(std::find(av.begin(), av.end(), best_edge.first));
  }
  return labels_from_components();
}

/// Zachary's karate club network: 34 nodes, 78 edges, 0-indexed.
inline SocialGraph SocialGraph::karate_club() {
  static constexpr std::array<std::pair<int, int>, 78> kEdges{{
      {0, 1},   {0, 2},   {0, 3},   {0, 4},   {0, 5},   {0, 6},   {0, 7},   {0, 8},
      {0, 10},  {0, 11},  {0, 12},  {0, 13},  {0, 17},  {0, 19},  {0, 21},  {0, 31},
      {1, 2},   {1, 3},   {1, 7},   {1, 13},  {1, 17},  {1, 19},  {1, 21},  {1, 30},
      {2, 3},   {2, 7},   {2, 8},   {2, 9},   {2, 13},  {2, 27},  {2, 28},  {2, 32},
      {3, 7},   {3, 12},  {3, 13},  {4, 6},   {4, 10},  {5, 6},   {5, 10},  {5, 16},
      {6, 16},  {8, 30},  {8, 32},  {8, 33},  {9, 33},  {13, 33}, {14, 32}, {14, 33},
      {15, 32}, {15, 33}, {18, 32}, {18, 33}, {19, 33}, {20, 32}, {20, 33}, {22, 32},
      {22, 33}, {23, 25}, {23, 27}, {23, 29}, {23, 32}, {23, 33}, {24, 25}, {24, 27},
      {24, 31}, {25, 31}, {26, 29}, {26, 33}, {27, 33}, {28, 31}, {28, 33}, {29, 32},
      {29, 33}, {30, 32}, {30, 33}, {31, 32}, {31, 33}, {32, 33},
  }};
  return from_edges(34, {kEdges.begin(), kEdges.end()});
}

}  // namespace fairpo
