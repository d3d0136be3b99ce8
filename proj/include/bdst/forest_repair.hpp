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
#include <optional>
#include <string>
#include <vector>

#include "bdst/common.hpp"
#include "bdst/exact_count.hpp"
#include "bdst/forest.hpp"
#include "bdst/graph.hpp"

namespace bdst {

/// Budget constants of the extension step and the repair loop.
struct RepairConfig {
  /// Each extension needs w_count <= n / (step_w_ratio * k).
  double step_w_ratio = 6.8;
  /// The repair loop needs w_count <= n / (start_w_ratio * k) on entry.
  double start_w_ratio = 7.0;
  /// The repair loop needs at least n - c ln n edges on entry; c <= 0 means
  /// 50 (k + 1).
  double log_edge_factor = 0.0;

  double edge_factor(int k) const { return log_edge_factor > 0.0 ? log_edge_factor : 50.0 * (k + 1); }
};

/// One extension F -> F*. Added and removed edges are the net difference.
struct RepairReport {
  std::string case_used;               ///< a, b, a-after-c, b-after-d, c-after-d, ...
  std::vector<std::string> case_chain; ///< every case visited, outermost first
  std::vector<Edge> edges_added;
  std::vector<Edge> edges_removed;
  int w_count_before = 0;
  int w_count_after = 0;
  std::optional<bool> b_adjacent;      ///< case (b): were w1, w2 adjacent in F
  std::optional<int> l1_size;          ///< case (b), independent subcase
  std::optional<bool> l1_bound_holds;  ///< (2k-1) |L1| <= n
};

inline bool within_w_budget(int w, int n, int k, double ratio) {
  return static_cast<double>(w) * ratio * k <= static_cast<double>(n) + 1e-9;
}

inline bool meets_min_degree(const Graph& g, int k) {
  return static_cast<long>(g.min_degree()) * (k + 1) >= g.num_vertices();
}

namespace detail {

inline bool is_small_component(int size, int n, int k) {
  return static_cast<long>(k + 1) * size < n;
}

/// Pieces of the forest left after deleting `removed`, restricted to
/// vertices reachable from `seeds`. Labels are -1 outside any piece; pieces
/// are numbered in order of their smallest vertex.
struct Pieces {
  std::vector<int> label;
  std::vector<std::vector<Vertex>> members;

  int smallest() const {
    int best = 0;
    for (int p = 1; p < static_cast<int>(members.size()); ++p)
      if (members[p].size() < members[best].size()) best = p;
    return best;
  }
};

inline Pieces pieces_without(const BoundedForest& f, const std::vector<Vertex>& removed,
                             const std::vector<Vertex>& seeds) {
  const int n = f.num_vertices();
  std::vector<char> blocked(n, 0);
  for (Vertex r : removed) blocked[r] = 1;
  // Collect every vertex reachable from a seed with the removed vertices blocked.
  std::vector<char> in_scope(n, 0);
  std::vector<Vertex> stack;
  for (Vertex s : seeds) {
    if (blocked[s] || in_scope[s]) continue;
    in_scope[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : f.neighbors(v))
        if (!blocked[w] && !in_scope[w]) {
          in_scope[w] = 1;
          stack.push_back(w);
        }
    }
  }
  Pieces out;
  out.label.assign(n, -1);
  for (Vertex s = 0; s < n; ++s) {
    if (!in_scope[s] || out.label[s] >= 0) continue;
    const int id = static_cast<int>(out.members.size());
    out.members.emplace_back();
    out.label[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      out.members[id].push_back(v);
      for (Vertex w : f.neighbors(v))
        if (!blocked[w] && out.label[w] < 0) {
          out.label[w] = id;
          stack.push_back(w);
        }
    }
    std::sort(out.members[id].begin(), out.members[id].end());
  }
  return out;
}

/// Vertices on the forest path from `from` to `to`, inclusive.
inline std::vector<Vertex> forest_path(const BoundedForest& f, Vertex from, Vertex to) {
  std::vector<Vertex> parent(f.num_vertices(), -1);
  std::vector<Vertex> queue{from};
  parent[from] = from;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex v = queue[head];
    if (v == to) break;
    for (Vertex w : f.neighbors(v))
      if (parent[w] < 0) {
        parent[w] = v;
        queue.push_back(w);
      }
  }
  if (parent[to] < 0) return {};
  std::vector<Vertex> path;
  for (Vertex v = to; v != from; v = parent[v]) path.push_back(v);
  path.push_back(from);
  std::reverse(path.begin(), path.end());
  return path;
}

class Extender {
 public:
  Extender(const Graph& g, int k) : g_(g), n_(g.num_vertices()), k_(k) {}

  /// Applies one case (possibly an exchange followed by a nested case) to
  /// `f`. `last_case` bounds the cases allowed at this level.
  void dispatch(BoundedForest& f, char last_case, RepairReport& report) {
    const Components comp = f.components();
    if (try_case_a(f, comp, report)) return;
    if (last_case >= 'b' && try_case_b(f, comp, report)) return;
    if (last_case >= 'c' && try_case_c(f, comp, report)) return;
    if (last_case >= 'd' && try_case_d(f, comp, report)) return;
    throw InternalError(std::string("no extension case among a..") + last_case + " applies");
  }

 private:
  // (a) an edge of G joining U-vertices of different components. Among the
  // candidates, the one creating the fewest new W-vertices wins, then the
  // lexicographically smallest.
  bool try_case_a(BoundedForest& f, const Components& comp, RepairReport& report) {
    std::optional<Edge> best;
    int best_cost = 3;
    for (Vertex u = 0; u < n_ && best_cost > 0; ++u) {
      if (!f.is_u(u)) continue;
      for (Vertex v : g_.neighbors(u)) {
        if (v <= u || comp.label[u] == comp.label[v] || !f.is_u(v)) continue;
        const int cost = (f.degree(u) == k_ - 1) + (f.degree(v) == k_ - 1);
        if (cost < best_cost) {
          best_cost = cost;
          best = Edge(u, v);
          if (cost == 0) break;
        }
      }
    }
    if (!best) return false;
    f.add_edge(*best);
    report.case_chain.push_back("a");
    return true;
  }

  // (b) some component with fewer than n/(k+1) vertices.
  bool try_case_b(BoundedForest& f, const Components& comp, RepairReport& report) {
    const auto sizes = comp.sizes();
    int target = -1;
    for (int c = 0; c < comp.count; ++c)
      if (is_small_component(sizes[c], n_, k_)) {
        target = c;
        break;
      }
    if (target < 0) return false;
    report.case_chain.push_back("b");

    Vertex ui = -1;
    for (Vertex v = 0; v < n_; ++v)
      if (comp.label[v] == target && f.degree(v) <= 1) {
        ui = v;
        break;
      }
    if (ui < 0) throw InternalError("case (b): component has no vertex of degree <= 1");

    std::vector<Vertex> outside;
    for (Vertex w : g_.neighbors(ui))
      if (comp.label[w] != target) outside.push_back(w);
    if (outside.size() < 2)
      throw InternalError("case (b): vertex " + std::to_string(ui) +
                          " has fewer than two G-neighbors outside its component");
    for (Vertex w : outside)
      if (!f.is_w(w))
        throw InternalError("case (b): outside neighbor " + std::to_string(w) + " is a U-vertex");
    const Vertex w1 = outside[0];
    const Vertex w2 = outside[1];

    if (f.has_edge(w1, w2)) {
      report.b_adjacent = true;
      f.remove_edge(Edge(w1, w2));
      f.add_edge(Edge(ui, w1));
      f.add_edge(Edge(ui, w2));
      return true;
    }
    report.b_adjacent = false;

    const Pieces all = pieces_without(f, {w1, w2}, collect_seeds(f, {w1, w2}));
    if (static_cast<int>(all.members.size()) < 2 * k_ - 1)
      throw InternalError("case (b): removing w1, w2 left " + std::to_string(all.members.size()) +
                          " pieces, expected at least 2k-1");
    const int l1 = all.smallest();
    const auto& l1_members = all.members[l1];
    report.l1_size = static_cast<int>(l1_members.size());
    report.l1_bound_holds = static_cast<long>(2 * k_ - 1) * static_cast<long>(l1_members.size()) <= n_;

    Vertex u = -1;
    Vertex u_prime = -1;
    for (Vertex cand : l1_members) {
      if (!f.is_u(cand)) continue;
      for (Vertex x : g_.neighbors(cand)) {
        if (all.label[x] == l1 || !f.is_u(x)) continue;
        u = cand;
        u_prime = x;
        break;
      }
      if (u >= 0) break;
    }
    if (u < 0) throw InternalError("case (b): no U-vertex of L1 has an outside U-neighbor");
    if (comp.label[u] != comp.label[u_prime])
      throw InternalError("case (b): u and u' lie in different components");

    const auto path = forest_path(f, u, u_prime);
    Vertex w = -1;
    Vertex z = -1;
    for (std::size_t i = 1; i + 1 < path.size(); ++i)
      if (path[i] == w1) {
        w = w1;
        z = path[i - 1];
      }
    if (w < 0)
      for (std::size_t i = 1; i + 1 < path.size(); ++i)
        if (path[i] == w2) {
          w = w2;
          z = path[i - 1];
        }
    if (w < 0) throw InternalError("case (b): cycle through u u' avoids both w1 and w2");

    f.add_edge(Edge(u, u_prime));
    f.remove_edge(Edge(w, z));
    f.add_edge(Edge(ui, w));
    return true;
  }

  // (c) a U-vertex with a G-neighbor in another component.
  bool try_case_c(BoundedForest& f, const Components& comp, RepairReport& report) {
    Vertex ui = -1;
    Vertex wj = -1;
    for (Vertex v = 0; v < n_ && ui < 0; ++v) {
      if (!f.is_u(v)) continue;
      for (Vertex w : g_.neighbors(v))
        if (comp.label[w] != comp.label[v]) {
          ui = v;
          wj = w;
          break;
        }
    }
    if (ui < 0) return false;
    if (!f.is_w(wj)) throw InternalError("case (c): neighbor " + std::to_string(wj) + " is a U-vertex");
    report.case_chain.push_back("c");
    const Vertex attach = smallest_branch(f, wj);
    f.add_edge(Edge(ui, wj));
    f.remove_edge(Edge(wj, attach));
    dispatch(f, 'b', report);
    return true;
  }

  // (d) only W-W edges join different components.
  bool try_case_d(BoundedForest& f, const Components& comp, RepairReport& report) {
    const auto sizes = comp.sizes();
    Vertex wj = -1;
    for (Vertex x = 0; x < n_ && wj < 0; ++x)
      for (Vertex y : g_.neighbors(x)) {
        if (y <= x || comp.label[x] == comp.label[y]) continue;
        if (!f.is_w(x) || !f.is_w(y))
          throw InternalError("case (d): cross edge " + edge_to_string(Edge(x, y)) +
                              " has a U endpoint");
        wj = sizes[comp.label[y]] < sizes[comp.label[x]] ? y : x;
        break;
      }
    if (wj < 0) return false;
    report.case_chain.push_back("d");
    if (2L * sizes[comp.label[wj]] > n_) throw InternalError("case (d): chosen component exceeds n/2");

    const Vertex attach = smallest_branch(f, wj);
    const Pieces branch = pieces_without(f, {wj}, {attach});
    const auto& l1 = branch.members[0];
    Vertex u = -1;
    for (Vertex v : l1)
      if (f.degree(v) == 1) {
        u = v;
        break;
      }
    if (u < 0) throw InternalError("case (d): L1 has no vertex of forest degree 1");
    Vertex u_prime = -1;
    for (Vertex x : g_.neighbors(u))
      if (branch.label[x] != 0 && f.is_u(x)) {
        u_prime = x;
        break;
      }
    if (u_prime < 0) throw InternalError("case (d): u has no U-neighbor outside L1");
    if (comp.label[u_prime] != comp.label[wj])
      throw InternalError("case (d): u' lies outside the component of w_j");
    f.add_edge(Edge(u, u_prime));
    f.remove_edge(Edge(wj, attach));
    dispatch(f, 'c', report);
    return true;
  }

  static std::vector<Vertex> collect_seeds(const BoundedForest& f, const std::vector<Vertex>& centers) {
    std::vector<Vertex> seeds;
    for (Vertex c : centers)
      for (Vertex x : f.neighbors(c)) seeds.push_back(x);
    return seeds;
  }

  /// Neighbor of `center` rooting the smallest branch of the forest once
  /// `center` is deleted; ties go to the smaller neighbor id.
  Vertex smallest_branch(const BoundedForest& f, Vertex center) const {
    Vertex best = -1;
    std::size_t best_size = 0;
    for (Vertex x : f.neighbors(center)) {
      const Pieces p = pieces_without(f, {center}, {x});
      const std::size_t size = p.members.empty() ? 0 : p.members[0].size();
      if (best < 0 || size < best_size) {
        best = x;
        best_size = size;
      }
    }
    if (best < 0) throw InternalError("vertex " + std::to_string(center) + " has no forest neighbors");
    return best;
  }

  const Graph& g_;
  int n_;
  int k_;
};

inline std::string case_label(const std::vector<std::string>& chain) {
  if (chain.size() == 1) return chain[0];
  // Labels name the innermost case after the first exchange.
  return chain[1] + "-after-" + chain[0];
}

}  // namespace detail

/// Names the first violated hypothesis of the extension step, if any.
inline std::optional<std::string> extension_hypothesis_violation(const Graph& g, const BoundedForest& f,
                                                                 const RepairConfig& config = {}) {
  const int n = g.num_vertices();
  const int k = f.cap();
  if (k < 3) return "degree cap k = " + std::to_string(k) + " violates k >= 3";
  if (f.num_vertices() != n) return "forest is not on the vertex set of G";
  if (!is_connected(g)) return "G is not connected";
  if (!meets_min_degree(g, k))
    return "minimum degree " + std::to_string(g.min_degree()) + " is below n/(k+1) = " +
           std::to_string(static_cast<double>(n) / (k + 1));
  if (!f.is_subgraph_of(g)) return "forest uses an edge that is not in G";
  if (!f.is_acyclic()) return "forest is cyclic";
  if (f.num_edges() >= n - 1) return "forest already has n-1 edges";
  if (f.max_degree() > k)
    return "forest has maximum degree " + std::to_string(f.max_degree()) + " > k = " + std::to_string(k);
  if (!within_w_budget(f.w_count(), n, k, config.step_w_ratio))
    return "w_count " + std::to_string(f.w_count()) + " exceeds n/(" + std::to_string(config.step_w_ratio) +
           "k) = " + std::to_string(n / (config.step_w_ratio * k));
  return std::nullopt;
}

struct Extension {
  BoundedForest forest;
  RepairReport report;
};

/// Adds one edge to a bounded-degree spanning forest, keeping all but at
/// most three old edges and growing the number of W-vertices by at most four.
inline Extension extend_forest_once(const Graph& g, const BoundedForest& f, const RepairConfig& config = {}) {
  if (auto why = extension_hypothesis_violation(g, f, config)) throw PreconditionError("extend_forest_once: " + *why);
  const int k = f.cap();
  Extension out{f, {}};
  out.report.w_count_before = f.w_count();
  detail::Extender(g, k).dispatch(out.forest, 'd', out.report);
  out.report.case_used = detail::case_label(out.report.case_chain);
  std::set_difference(out.forest.edges().begin(), out.forest.edges().end(), f.edges().begin(),
                      f.edges().end(), std::back_inserter(out.report.edges_added));
  std::set_difference(f.edges().begin(), f.edges().end(), out.forest.edges().begin(),
                      out.forest.edges().end(), std::back_inserter(out.report.edges_removed));
  out.report.w_count_after = out.forest.w_count();

  const auto& r = out.report;
  if (out.forest.num_edges() != f.num_edges() + 1 || r.edges_removed.size() > 3 ||
      out.forest.max_degree() > k || r.w_count_after > r.w_count_before + 4 || !out.forest.is_acyclic() ||
      !out.forest.is_subgraph_of(g) || out.report.case_chain.size() > 3)
    throw InternalError("extend_forest_once: postcondition violated in case " + r.case_used);
  return out;
}

struct RepairResult {
  std::optional<SpanningTree> tree;
  BoundedForest forest;  ///< final forest, partial when the loop failed
  std::vector<RepairReport> trail;
  std::optional<int> failed_step;
  std::string failure;
  int initial_edges = 0;
  int new_edges = 0;   ///< tree edges not in the input forest
  int lost_edges = 0;  ///< input forest edges not in the tree
};

/// Repeats extend_forest_once until the forest is a spanning tree.
inline RepairResult repair_to_spanning_tree(const Graph& g, const BoundedForest& f, const RepairConfig& config = {}) {
  const int n = g.num_vertices();
  const int k = f.cap();
  if (k < 3) throw PreconditionError("repair_to_spanning_tree: degree cap k = " + std::to_string(k) + " violates k >= 3");
  if (f.num_vertices() != n) throw PreconditionError("repair_to_spanning_tree: forest is not on the vertex set of G");
  if (!is_connected(g)) throw PreconditionError("repair_to_spanning_tree: G is not connected");
  if (!meets_min_degree(g, k))
    throw PreconditionError("repair_to_spanning_tree: minimum degree " + std::to_string(g.min_degree()) +
                            " is below n/(k+1)");
  if (!f.is_subgraph_of(g)) throw PreconditionError("repair_to_spanning_tree: forest uses an edge not in G");
  if (!f.is_acyclic()) throw PreconditionError("repair_to_spanning_tree: forest is cyclic");
  if (f.max_degree() > k) throw PreconditionError("repair_to_spanning_tree: forest exceeds degree cap");
  if (!within_w_budget(f.w_count(), n, k, config.start_w_ratio))
    throw PreconditionError("repair_to_spanning_tree: w_count " + std::to_string(f.w_count()) + " exceeds n/(" +
                            std::to_string(config.start_w_ratio) + "k)");
  const double min_edges = n - config.edge_factor(k) * std::log(std::max(2, n));
  if (f.num_edges() < min_edges)
    throw PreconditionError("repair_to_spanning_tree: forest has " + std::to_string(f.num_edges()) +
                            " edges, below n - c ln n");

  RepairResult out;
  out.forest = f;
  out.initial_edges = f.num_edges();
  for (int step = 0; out.forest.num_edges() < n - 1; ++step) {
    if (!within_w_budget(out.forest.w_count(), n, k, config.step_w_ratio)) {
      out.failed_step = step;
      out.failure = "w_count budget overflow: " + std::to_string(out.forest.w_count()) + " > n/(" +
                    std::to_string(config.step_w_ratio) + "k)";
      return out;
    }
    try {
      auto ext = extend_forest_once(g, out.forest, config);
      out.forest = std::move(ext.forest);
      out.trail.push_back(std::move(ext.report));
    } catch (const std::exception& e) {
      out.failed_step = step;
      out.failure = e.what();
      return out;
    }
  }
  SpanningTree tree = out.forest.edge_list();
  std::vector<Edge> fresh;
  std::set_difference(tree.begin(), tree.end(), f.edges().begin(), f.edges().end(), std::back_inserter(fresh));
  out.new_edges = static_cast<int>(fresh.size());
  out.lost_edges = f.num_edges() - (static_cast<int>(tree.size()) - out.new_edges);
  out.tree = std::move(tree);
  return out;
}

}  // namespace bdst
