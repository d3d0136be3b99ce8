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

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "bdst/common.hpp"
#include "bdst/graph.hpp"
#include "bdst/union_find.hpp"

namespace bdst {

/// Determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination. Every division is exact, so intermediate entries stay
/// integral and bounded by minors of the input.
inline BigCount bareiss_determinant(std::vector<std::vector<BigCount>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  BigCount previous = 1;
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t pivot = k + 1;
      while (pivot < n && a[pivot][k] == 0) ++pivot;
      if (pivot == n) return 0;
      std::swap(a[k], a[pivot]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / previous;
      }
      a[i][k] = 0;
    }
    previous = a[k][k];
  }
  BigCount det = a[n - 1][n - 1];
  return negate ? BigCount(-det) : det;
}

/// c(G): the (0,0) cofactor of the Laplacian. Zero for disconnected graphs.
inline BigCount count_spanning_trees(const Graph& g) {
  const int n = g.num_vertices();
  if (n == 0) throw PreconditionError("count_spanning_trees: empty graph");
  const int dim = n - 1;
  std::vector<std::vector<BigCount>> minor(dim, std::vector<BigCount>(dim, 0));
  for (Vertex v = 1; v < n; ++v) {
    minor[v - 1][v - 1] = g.degree(v);
    for (Vertex w : g.neighbors(v))
      if (w != 0) minor[v - 1][w - 1] = -1;
  }
  return bareiss_determinant(std::move(minor));
}

using SpanningTree = std::vector<Edge>;

/// Acyclic, connected, spans all n vertices, uses only edges of `g`.
inline bool is_spanning_tree(const Graph& g, const SpanningTree& tree) {
  const int n = g.num_vertices();
  if (static_cast<int>(tree.size()) != n - 1) return false;
  UnionFind uf(n);
  for (const Edge& e : tree) {
    if (e.u < 0 || e.v >= n || e.u == e.v || !g.has_edge(e.u, e.v)) return false;
    if (!uf.unite(e.u, e.v)) return false;
  }
  return n <= 1 || uf.num_sets() == 1;
}

inline int max_tree_degree(int n, const SpanningTree& tree) {
  std::vector<int> deg(n, 0);
  int best = 0;
  for (const Edge& e : tree) {
    best = std::max(best, ++deg[e.u]);
    best = std::max(best, ++deg[e.v]);
  }
  return best;
}

struct EnumerationResult {
  std::uint64_t emitted = 0;
  bool truncated = false;
};

namespace detail {

/// Backtracking over edges in lexicographic order. At each edge the
/// deletion branch is taken first unless deleting would disconnect the
/// remaining graph (the edge is then a bridge and is forced in). Edges whose
/// endpoints are already joined by chosen edges are skipped. With a degree
/// cap, an inclusion that would exceed it is pruned.
class TreeEnumerator {
 public:
  TreeEnumerator(const Graph& g, int degree_cap, std::uint64_t cap,
                 const std::function<void(const SpanningTree&)>& visit)
      : g_(g),
        n_(g.num_vertices()),
        edges_(g.edges()),
        degree_cap_(degree_cap),
        cap_(cap),
        visit_(visit),
        excluded_(edges_.size(), 0),
        degree_(n_, 0),
        uf_(n_) {
    incident_.assign(n_, {});
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      incident_[edges_[i].u].push_back(static_cast<int>(i));
      incident_[edges_[i].v].push_back(static_cast<int>(i));
    }
  }

  EnumerationResult run() {
    if (n_ == 0) return result_;
    if (!is_connected(g_)) return result_;
    recurse(0);
    return result_;
  }

 private:
  bool remaining_connected() {
    std::vector<char> seen(n_, 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (int idx : incident_[v]) {
        if (excluded_[idx]) continue;
        const Edge& e = edges_[idx];
        const Vertex w = e.u == v ? e.v : e.u;
        if (!seen[w]) {
          seen[w] = 1;
          ++reached;
          stack.push_back(w);
        }
      }
    }
    return reached == n_;
  }

  void emit() {
    if (result_.emitted >= cap_) {
      result_.truncated = true;
      stop_ = true;
      return;
    }
    ++result_.emitted;
    visit_(chosen_);
  }

  void recurse(std::size_t index) {
    if (stop_) return;
    if (static_cast<int>(chosen_.size()) == n_ - 1) {
      emit();
      return;
    }
    if (index == edges_.size()) return;
    const Edge& e = edges_[index];
    if (uf_.same(e.u, e.v)) {
      excluded_[index] = 1;
      recurse(index + 1);
      excluded_[index] = 0;
      return;
    }
    excluded_[index] = 1;
    const bool can_delete = remaining_connected();
    if (can_delete) recurse(index + 1);
    excluded_[index] = 0;
    if (stop_) return;
    if (degree_[e.u] < degree_cap_ && degree_[e.v] < degree_cap_) {
      ++degree_[e.u];
      ++degree_[e.v];
      uf_.unite(e.u, e.v);
      chosen_.push_back(e);
      recurse(index + 1);
      chosen_.pop_back();
      uf_.undo();
      --degree_[e.u];
      --degree_[e.v];
    }
  }

  const Graph& g_;
  int n_;
  std::vector<Edge> edges_;
  int degree_cap_;
  std::uint64_t cap_;
  const std::function<void(const SpanningTree&)>& visit_;
  std::vector<char> excluded_;
  std::vector<int> degree_;
  std::vector<std::vector<int>> incident_;
  RollbackUnionFind uf_;
  SpanningTree chosen_;
  EnumerationResult result_;
  bool stop_ = false;
};

}  // namespace detail

/// Emits every spanning tree of `g` exactly once, in a deterministic order,
/// stopping after `cap` trees. `truncated` is set when more trees exist.
inline EnumerationResult enumerate_spanning_trees(
    const Graph& g, const std::function<void(const SpanningTree&)>& visit,
    std::uint64_t cap = UINT64_MAX) {
  detail::TreeEnumerator e(g, g.num_vertices(), cap, visit);
  return e.run();
}

/// Same enumeration restricted to trees with maximum degree at most `k`.
inline EnumerationResult enumerate_bounded_trees(
    const Graph& g, int k, const std::function<void(const SpanningTree&)>& visit,
    std::uint64_t cap = UINT64_MAX) {
  if (k < 1) throw PreconditionError("degree bound k must be at least 1");
  detail::TreeEnumerator e(g, k, cap, visit);
  return e.run();
}

/// c_k(G) by enumeration with degree-cap pruning.
inline BigCount count_bounded(const Graph& g, int k) {
  if (g.num_vertices() == 1) return 1;
  std::uint64_t count = 0;
  enumerate_bounded_trees(g, k, [&](const SpanningTree&) { ++count; });
  return BigCount(count);
}

struct CountResult {
  BigCount total = 0;
  /// Present only when requested; keys are the tree's maximum degree.
  std::map<int, BigCount> by_max_degree;
};

inline CountResult count_with_histogram(const Graph& g) {
  CountResult out;
  std::map<int, std::uint64_t> hist;
  std::uint64_t total = 0;
  const int n = g.num_vertices();
  enumerate_spanning_trees(g, [&](const SpanningTree& t) {
    ++total;
    ++hist[max_tree_degree(n, t)];
  });
  out.total = total;
  for (const auto& [d, c] : hist) out.by_max_degree[d] = c;
  return out;
}

/// c_k(G)^{1/n}, or 0 when there is no such tree.
inline double normalized_count(const BigCount& count, int n) {
  if (count <= 0 || n <= 0) return 0.0;
  return std::exp(log_big(count) / n);
}

inline double normalized_count(const Graph& g, int k) {
  return normalized_count(count_bounded(g, k), g.num_vertices());
}

}  // namespace bdst
