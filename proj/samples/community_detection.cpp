// Splits the built-in karate club network into two communities and prints
// the members of each alongside the highest-betweenness edges.

#include <algorithm>
#include <iostream>
#include <vector>

#include "fairpo/graph.hpp"

int main() {
  const auto graph = fairpo::SocialGraph::karate_club();
  const auto labels = fairpo::girvan_newman_bisect(graph);

  for (int community = 1; community <= 2; ++community) {
    std::cout << "community " << community << ":";
    for (int v = 0; v < graph.num_nodes; ++v)
      if (labels[static_cast<std::size_t>(v)] == community) std::cout << ' ' << v;
    std::cout << "\n";
  }

  auto scores = fairpo::edge_betweenness(graph);
  std::vector<std::pair<double, std::pair<int, int>>> ranked;
  for (const auto& [edge, score] : scores) ranked.push_back({score, edge});
  std::sort(ranked.rbegin(), ranked.rend());
  std::cout << "top edges by betweenness:\n";
  for (int i = 0; i < 5; ++i)
    std::cout << "  (" << ranked[static_cast<std::size_t>(i)].second.first << ", "
              << ranked[static_cast<std::size_t>(i)].second.second
              << ") = " << ranked[static_cast<std::size_t>(i)].first << "\n";
  return 0;
}
