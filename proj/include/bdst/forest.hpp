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
#include <set>
#include <string>
#include <vector>

#include "bdst/common.hpp"
#include "bdst/graph.hpp"
#include "bdst/union_find.hpp"

namespace bdst {

/// Spanning forest with a degree cap k. W-vertices have degree exactly k,
/// U-vertices degree below k. The structure accepts any edge set so that
/// callers can validate untrusted input; `is_acyclic` and `max_degree` report
/// whether the invariants actually hold.
class BoundedForest {
 public:
  BoundedForest() = default;
  BoundedForest(int n, int k) : k_(k), adjacency_(n) {}
  BoundedForest(int n, int k, const std::vector<Edge>& edges) : BoundedForest(n, k) {
    for (const Edge& e : edges) add_edge(e);
  }

  int num_vertices() const { return static_cast<int>(adjacency_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int cap() const { return k_; }

  const std::set<Edge>& edges() const { return edges_; }
  std::vector<Edge> edge_list() const { return {edges_.begin(), edges_.end()}; }
  const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_[v]; }
  int degree(Vertex v) const { return static_cast<int>(adjacency_[v].size()); }
  bool has_edge(Vertex u, Vertex v) const { return edges_.contains(Edge(u, v)); }

  bool is_w(Vertex v) const { return degree(v) == k_; }
  bool is_u(Vertex v) const { return degree(v) < k_; }

  void add_edge(const Edge& e) {
    if (!edges_.insert(e).second) throw InternalError("forest already has edge " + edge_to_string(e));
    insert_sorted(adjacency_[e.u], e.v);
    insert_sorted(adjacency_[e.v], e.u);
  }

  void remove_edge(const Edge& e) {
    if (edges_.erase(e) == 0) throw InternalError("forest has no edge " + edge_to_string(e));
    erase_value(adjacency_[e.u], e.v);
    erase_value(adjacency_[e.v], e.u);
  }

  int w_count() const {
    int w = 0;
    for (Vertex v = 0; v < num_vertices(); ++v) w += is_w(v) ? 1 : 0;
    return w;
  }

  int max_degree() const {
    int best = 0;
    for (Vertex v = 0; v < num_vertices(); ++v) best = std::max(best, degree(v));
    return best;
  }

  bool is_acyclic() const {
    UnionFind uf(num_vertices());
    for (const Edge& e : edges_)
      if (!uf.unite(e.u, e.v)) return false;
    return true;
  }

  /// Component labels ordered by smallest member.
  Components components() const {
    Components out;
    out.label.assign(num_vertices(), -1);
    std::vector<Vertex> stack;
    for (Vertex s = 0; s < num_vertices(); ++s) {
      if (out.label[s] >= 0) continue;
      out.label[s] = out.count;
      stack.push_back(s);
      while (!stack.empty()) {
        const Vertex v = stack.back();
        stack.pop_back();
        for (Vertex w : adjacency_[v])
          if (out.label[w] < 0) {
            out.label[w] = out.count;
            stack.push_back(w);
          }
      }
      ++out.count;
    }
    return out;
  }

  bool is_subgraph_of(const Graph& g) const {
    if (g.num_vertices() != num_vertices()) return false;
    return std::all_of(edges_.begin(), edges_.end(),
                       [&](const Edge& e) { return g.has_edge(e.u, e.v); });
  }

  friend bool operator==(const BoundedForest& a, const BoundedForest& b) {
    return a.k_ == b.k_ && a.edges_ == b.edges_ && a.num_vertices() == b.num_vertices();
  }

 private:
  static void insert_sorted(std::vector<Vertex>& v, Vertex x) {
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
  }
  static void erase_value(std::vector<Vertex>& v, Vertex x) {
    v.erase(std::lower_bound(v.begin(), v.end(), x));
  }

  int k_ = 0;
  std::vector<std::vector<Vertex>> adjacency_;
  std::set<Edge> edges_;
};

}  // namespace bdst
