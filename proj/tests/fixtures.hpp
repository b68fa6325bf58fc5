#pragma once

// Small graph builders shared by the test binaries.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "netdyn/graph.hpp"

namespace fixture {

using netdyn::Edge;
using netdyn::Graph;

using WeightedEdge = std::tuple<std::size_t, std::size_t, double>;

inline Graph make_graph(std::size_t n, const std::vector<WeightedEdge>& edges) {
  std::vector<std::string> nodes(n);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = std::to_string(i);
  std::vector<Edge> e;
  for (const auto& [s, t, w] : edges) e.push_back({s, t, w});
  return Graph(std::move(nodes), std::move(e));
}

inline Graph path(std::size_t n) {
  std::vector<WeightedEdge> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1, 1.0);
  return make_graph(n, e);
}

inline Graph cycle(std::size_t n) {
  std::vector<WeightedEdge> e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n, 1.0);
  return make_graph(n, e);
}

/// Star with node 0 at the center.
inline Graph star(std::size_t leaves) {
  std::vector<WeightedEdge> e;
  for (std::size_t i = 1; i <= leaves; ++i) e.emplace_back(0, i, 1.0);
  return make_graph(leaves + 1, e);
}

inline Graph complete(std::size_t n) {
  std::vector<WeightedEdge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(i, j, 1.0);
  return make_graph(n, e);
}

/// Disjoint cliques of the given sizes, optionally joined by unit bridges
/// between the first nodes of consecutive cliques (weight `bridge`, 0 = none).
inline Graph cliques(const std::vector<std::size_t>& sizes, double bridge = 0.0,
                     double sign_between = 1.0) {
  std::vector<WeightedEdge> e;
  std::size_t offset = 0;
  std::vector<std::size_t> first;
  for (std::size_t s : sizes) {
    first.push_back(offset);
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = i + 1; j < s; ++j) e.emplace_back(offset + i, offset + j, 1.0);
    offset += s;
  }
  if (bridge != 0.0)
    for (std::size_t c = 0; c + 1 < first.size(); ++c)
      e.emplace_back(first[c], first[c + 1], sign_between * bridge);
  return make_graph(offset, e);
}

/// Random tree on n nodes (node i > 0 attaches to a uniform earlier node)
/// plus extra pairs with probability p. Weights are integers in [1, max_weight].
/// The tree edges come first in the edge list.
inline std::vector<WeightedEdge> random_connected_edges(std::size_t n, double p, std::uint64_t seed,
                                                        int max_weight = 1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> weight(1, max_weight);
  std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
  std::vector<WeightedEdge> e;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t parent = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
    used[parent][i] = used[i][parent] = true;
    e.emplace_back(parent, i, weight(rng));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!used[i][j] && unit(rng) < p) e.emplace_back(i, j, weight(rng));
  return e;
}

inline Graph random_connected(std::size_t n, double p, std::uint64_t seed, int max_weight = 1) {
  return make_graph(n, random_connected_edges(n, p, seed, max_weight));
}

inline std::vector<int> random_signs(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> sigma(n);
  for (int& s : sigma) s = (rng() & 1) ? 1 : -1;
  return sigma;
}

/// Structurally balanced by construction: a positive connected graph switched
/// by a random σ. Returns the graph and σ.
inline std::pair<Graph, std::vector<int>> balanced_signed(std::size_t n, double p, std::uint64_t seed) {
  auto edges = random_connected_edges(n, p, seed, 3);
  const auto sigma = random_signs(n, seed ^ 0x9e3779b97f4a7c15ULL);
  for (auto& [s, t, w] : edges) w *= sigma[s] * sigma[t];
  return {make_graph(n, edges), sigma};
}

/// Balanced construction with the sign of one non-tree edge flipped, which
/// makes the cycle that edge closes negative. Requires n ≥ 3.
inline Graph frustrated_signed(std::size_t n, double p, std::uint64_t seed) {
  auto edges = random_connected_edges(n, p, seed, 3);
  if (edges.size() < n) {  // tree only: close a cycle with the first missing pair
    std::vector<std::vector<bool>> adjacent(n, std::vector<bool>(n, false));
    for (const auto& [s, t, w] : edges) adjacent[s][t] = adjacent[t][s] = true;
    for (std::size_t i = 0; i < n && edges.size() < n; ++i)
      for (std::size_t j = i + 1; j < n && edges.size() < n; ++j)
        if (!adjacent[i][j]) edges.emplace_back(i, j, 1.0);
  }
  const auto sigma = random_signs(n, seed ^ 0x9e3779b97f4a7c15ULL);
  for (auto& [s, t, w] : edges) w *= sigma[s] * sigma[t];
  auto& [s, t, w] = edges[n - 1];  // first non-tree edge
  w = -w;
  return make_graph(n, edges);
}

/// Random connected graph with an external equitable partition built in:
/// between cells i and j every node of i has exactly a_ij neighbours in j
/// (all with one common weight), while edges inside cells are arbitrary.
/// Returns the graph and the planted cell labels.
inline std::pair<Graph, std::vector<std::size_t>> constructed_eep(std::size_t max_n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::vector<std::size_t> choices{1, 2, 3, 4, 5, 6, 8, 10, 12};
  for (;;) {
    std::vector<std::size_t> sizes;
    const std::size_t k = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
    std::size_t n = 0;
    for (std::size_t c = 0; c < k; ++c) {
      const std::size_t s = choices[std::uniform_int_distribution<std::size_t>(0, choices.size() - 1)(rng)];
      if (n + s > max_n) break;
      sizes.push_back(s);
      n += s;
    }
    if (sizes.size() < 2) continue;
    std::vector<std::size_t> first(sizes.size(), 0), labels;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
      first[c] = labels.size();
      labels.insert(labels.end(), sizes[c], c);
    }
    std::vector<WeightedEdge> e;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> weight(1, 3);
    for (std::size_t c = 0; c < sizes.size(); ++c)
      for (std::size_t i = 0; i < sizes[c]; ++i)
        for (std::size_t j = i + 1; j < sizes[c]; ++j)
          if (unit(rng) < 0.4) e.emplace_back(first[c] + i, first[c] + j, weight(rng));
    for (std::size_t ci = 0; ci < sizes.size(); ++ci)
      for (std::size_t cj = ci + 1; cj < sizes.size(); ++cj) {
        if (cj != ci + 1 && unit(rng) < 0.5) continue;  // consecutive cells always linked
        const std::size_t ni = sizes[ci], nj = sizes[cj];
        std::vector<std::size_t> degrees;  // a with nj | ni·a, so every node of cj gets ni·a/nj
        for (std::size_t a = 1; a <= nj; ++a)
          if ((ni * a) % nj == 0) degrees.push_back(a);
        const std::size_t a = degrees[std::uniform_int_distribution<std::size_t>(0, degrees.size() - 1)(rng)];
        const double w = weight(rng);
        for (std::size_t u = 0; u < ni; ++u)
          for (std::size_t r = 0; r < a; ++r)
            e.emplace_back(first[ci] + u, first[cj] + (u * a + r) % nj, w);
      }
    Graph g = make_graph(labels.size(), e);
    if (g.is_connected()) return {std::move(g), labels};
  }
}

}  // namespace fixture
