// Copyright 2026 The bdst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdst/common.hpp"
#include "bdst/random.hpp"
#include "bdst/union_find.hpp"

namespace bdst {

/// Immutable simple undirected graph on vertices 0..n-1 with sorted adjacency.
class Graph {
 public:
  Graph() = default;

  int num_vertices() const { return static_cast<int>(adjacency_.size()); }
  int num_edges() const { return num_edges_; }

  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }
  int degree(Vertex v) const { return static_cast<int>(adjacency_[v].size()); }

  bool has_edge(Vertex u, Vertex v) const {
    const auto& adj = adjacency_[u];
    return std::binary_search(adj.begin(), adj.end(), v);
  }

  /// All edges as (u < v), lexicographically sorted.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges_);
    for (Vertex u = 0; u < num_vertices(); ++u)
      for (Vertex v : adjacency_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  int min_degree() const {
    int best = num_vertices() == 0 ? 0 : degree(0);
    for (Vertex v = 1; v < num_vertices(); ++v) best = std::min(best, degree(v));
    return best;
  }

  int max_degree() const {
    int best = 0;
    for (Vertex v = 0; v < num_vertices(); ++v) best = std::max(best, degree(v));
    return best;
  }

  /// Common degree if the graph is regular, -1 otherwise.
  int regular_degree() const {
    if (num_vertices() == 0) return 0;
    const int r = degree(0);
    for (Vertex v = 1; v < num_vertices(); ++v)
      if (degree(v) != r) return -1;
    return r;
  }

  std::vector<int> degrees() const {
    std::vector<int> out(num_vertices());
    for (Vertex v = 0; v < num_vertices(); ++v) out[v] = degree(v);
    return out;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  friend Graph build_graph(int n, std::span<const Edge> edges);
  std::vector<std::vector<Vertex>> adjacency_;
  int num_edges_ = 0;
};

inline std::string edge_to_string(const Edge& e) {
  return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
}

/// Builds a simple graph. Duplicate edges are merged; out-of-range endpoints
/// and self-loops are rejected naming the offending edge.
inline Graph build_graph(int n, std::span<const Edge> edges) {
  if (n < 0) throw PreconditionError("negative vertex count");
  Graph g;
  g.adjacency_.assign(n, {});
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v >= n)
      throw PreconditionError("edge " + edge_to_string(e) + " has an endpoint outside 0.." +
                              std::to_string(n - 1));
    if (e.u == e.v) throw PreconditionError("edge " + edge_to_string(e) + " is a self-loop");
    g.adjacency_[e.u].push_back(e.v);
    g.adjacency_[e.v].push_back(e.u);
  }
  for (auto& adj : g.adjacency_) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  int twice = 0;
  for (const auto& adj : g.adjacency_) twice += static_cast<int>(adj.size());
  g.num_edges_ = twice / 2;
  return g;
}

inline Graph build_graph(int n, std::initializer_list<Edge> edges) {
  return build_graph(n, std::span<const Edge>(edges.begin(), edges.size()));
}

/// Checks symmetry, range, simplicity and sortedness of the adjacency.
inline bool is_valid_graph(const Graph& g) {
  const int n = g.num_vertices();
  int twice = 0;
  for (Vertex v = 0; v < n; ++v) {
    auto adj = g.neighbors(v);
    twice += static_cast<int>(adj.size());
    for (std::size_t i = 0; i < adj.size(); ++i) {
      const Vertex w = adj[i];
      if (w < 0 || w >= n || w == v) return false;
      if (i > 0 && adj[i - 1] >= w) return false;
      if (!g.has_edge(w, v)) return false;
    }
  }
  return twice == 2 * g.num_edges();
}

/// Component label per vertex (labels ordered by smallest member) and count.
struct Components {
  std::vector<int> label;
  int count = 0;

  std::vector<int> sizes() const {
    std::vector<int> out(count, 0);
    for (int c : label) ++out[c];
    return out;
  }
};

inline Components components(const Graph& g) {
  const int n = g.num_vertices();
  Components out;
  out.label.assign(n, -1);
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < n; ++s) {
    if (out.label[s] >= 0) continue;
    out.label[s] = out.count;
    stack.push_back(s);
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : g.neighbors(v)) {
        if (out.label[w] < 0) {
          out.label[w] = out.count;
          stack.push_back(w);
        }
      }
    }
    ++out.count;
  }
  return out;
}

inline bool is_connected(const Graph& g) { return components(g).count <= 1; }

/// d(G), the product of all degrees. Rejects isolated vertices.
inline BigCount degree_product(const Graph& g) {
  BigCount product = 1;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (g.degree(v) == 0)
      throw PreconditionError("vertex " + std::to_string(v) + " is isolated");
    product *= g.degree(v);
  }
  return product;
}

/// d(G)^{1/n} computed from the sum of log-degrees.
inline double geometric_mean_degree(const Graph& g) {
  const int n = g.num_vertices();
  if (n == 0) return 0.0;
  double log_sum = 0.0;
  for (Vertex v = 0; v < n; ++v) {
    if (g.degree(v) == 0)
      throw PreconditionError("vertex " + std::to_string(v) + " is isolated");
    log_sum += std::log(static_cast<double>(g.degree(v)));
  }
  return std::exp(log_sum / n);
}

// Standard families.

inline Graph complete_graph(int n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return build_graph(n, edges);
}

inline Graph cycle_graph(int n) {
  if (n < 3) throw PreconditionError("cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (Vertex v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  return build_graph(n, edges);
}

inline Graph path_graph(int n) {
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return build_graph(n, edges);
}

/// K_{a,b} with part A = {0..a-1} and part B = {a..a+b-1}.
inline Graph complete_bipartite(int a, int b) {
  if (a < 1 || b < 1) throw PreconditionError("complete_bipartite needs both parts nonempty");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < a; ++u)
    for (Vertex v = a; v < a + b; ++v) edges.emplace_back(u, v);
  return build_graph(a + b, edges);
}

inline Graph star_graph(int leaves) { return complete_bipartite(1, leaves); }

namespace detail {

/// One attempt at a simple r-regular pairing: pairs two random free points
/// whenever they form a new non-loop edge. After repeated misses it looks
/// at every remaining vertex pair and either picks one (weighted by free
/// points) or reports a dead end.
inline std::optional<std::vector<Edge>> incremental_pairing(int n, int r, Rng& rng) {
  std::vector<Vertex> points(static_cast<std::size_t>(n) * r);
  for (std::size_t i = 0; i < points.size(); ++i) points[i] = static_cast<Vertex>(i / r);
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  std::vector<int> free_points(n, r);
  std::vector<Edge> edges;
  edges.reserve(points.size() / 2);
  auto take = [&](std::size_t i, std::size_t j) {
    const Vertex a = points[i];
    const Vertex b = points[j];
    adj[a][b] = adj[b][a] = 1;
    --free_points[a];
    --free_points[b];
    edges.emplace_back(a, b);
    const std::size_t hi = std::max(i, j);
    const std::size_t lo = std::min(i, j);
    points[hi] = points.back();
    points.pop_back();
    points[lo] = points.back();
    points.pop_back();
  };
  int misses = 0;
  while (!points.empty()) {
    const std::size_t size = points.size();
    const std::size_t i = rng.below(size);
    std::size_t j = rng.below(size - 1);
    if (j >= i) ++j;
    const Vertex a = points[i];
    const Vertex b = points[j];
    if (a != b && !adj[a][b]) {
      take(i, j);
      misses = 0;
      continue;
    }
    if (++misses < 64) continue;
    misses = 0;
    std::vector<Vertex> open;
    for (Vertex v = 0; v < n; ++v)
      if (free_points[v] > 0) open.push_back(v);
    std::vector<std::pair<Vertex, Vertex>> pairs;
    std::vector<std::uint64_t> weight;
    std::uint64_t total = 0;
    for (std::size_t x = 0; x < open.size(); ++x)
      for (std::size_t y = x + 1; y < open.size(); ++y)
        if (!adj[open[x]][open[y]]) {
          pairs.emplace_back(open[x], open[y]);
          total += static_cast<std::uint64_t>(free_points[open[x]]) * free_points[open[y]];
          weight.push_back(total);
        }
    if (pairs.empty()) return std::nullopt;
    const std::uint64_t pick = rng.below(total);
    const auto [u, v] = pairs[std::upper_bound(weight.begin(), weight.end(), pick) - weight.begin()];
    const auto pu = std::find(points.begin(), points.end(), u) - points.begin();
    const auto pv = std::find(points.begin(), points.end(), v) - points.begin();
    take(static_cast<std::size_t>(pu), static_cast<std::size_t>(pv));
  }
  return edges;
}

}  // namespace detail

/// Connected simple r-regular graph, built by incremental random pairing
/// with restarts on dead ends or disconnected results. For r above (n-1)/2
/// the complement of a random (n-1-r)-regular graph is used instead.
/// Deterministic in (n, r, seed). Near-uniform, not exactly uniform.
inline Graph random_regular(int n, int r, std::uint64_t seed, int max_restarts = 100000) {
  if (n < 1 || r < 0) throw PreconditionError("random_regular needs n >= 1 and r >= 0");
  if ((static_cast<long>(n) * r) % 2 != 0)
    throw PreconditionError("random_regular: n*r = " + std::to_string(static_cast<long>(n) * r) +
                            " is odd");
  if (r >= n) throw PreconditionError("random_regular: degree must be below n");
  if (r == 0 && n > 1) throw PreconditionError("random_regular: 0-regular graph is disconnected");
  if (r == 1 && n > 2) throw PreconditionError("random_regular: 1-regular graph is disconnected");

  Rng rng(derive_seed(seed, 0x7265677561ULL));
  const bool complement = 2 * r > n - 1;
  const int degree = complement ? n - 1 - r : r;
  for (int attempt = 0; attempt < max_restarts; ++attempt) {
    auto edges = detail::incremental_pairing(n, degree, rng);
    if (!edges) continue;
    if (complement) {
      std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
      for (const Edge& e : *edges) adj[e.u][e.v] = 1;
      std::vector<Edge> flipped;
      for (Vertex a = 0; a < n; ++a)
        for (Vertex b = a + 1; b < n; ++b)
          if (!adj[a][b]) flipped.emplace_back(a, b);
      edges = std::move(flipped);
    }
    Graph g = build_graph(n, *edges);
    if (is_connected(g)) return g;
  }
  throw std::runtime_error("random_regular: restart budget of " + std::to_string(max_restarts) +
                           " exhausted for n=" + std::to_string(n) + ", r=" + std::to_string(r));
}

}  // namespace bdst
