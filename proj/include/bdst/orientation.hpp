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
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "bdst/common.hpp"
#include "bdst/graph.hpp"
#include "bdst/random.hpp"
#include "bdst/union_find.hpp"

namespace bdst {

/// Out-degree one orientation: every vertex v points at gamma[v], a
/// G-neighbor of v.
struct Orientation {
  std::vector<Vertex> gamma;

  int size() const { return static_cast<int>(gamma.size()); }
  friend bool operator==(const Orientation&, const Orientation&) = default;
  friend auto operator<=>(const Orientation&, const Orientation&) = default;
};

inline bool is_valid_orientation(const Graph& g, const Orientation& o) {
  if (o.size() != g.num_vertices()) return false;
  for (Vertex v = 0; v < o.size(); ++v) {
    const Vertex w = o.gamma[v];
    if (w < 0 || w >= g.num_vertices() || !g.has_edge(v, w)) return false;
  }
  return true;
}

inline void require_no_isolated(const Graph& g) {
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (g.degree(v) == 0)
      throw PreconditionError("vertex " + std::to_string(v) +
                              " is isolated; it has no out-neighbor to choose");
}

/// Each vertex independently picks a uniform neighbor.
inline Orientation sample_orientation(const Graph& g, Rng& rng) {
  require_no_isolated(g);
  Orientation o;
  o.gamma.resize(g.num_vertices());
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    auto adj = g.neighbors(v);
    o.gamma[v] = adj[rng.below(adj.size())];
  }
  return o;
}

/// Rank of `o` in the mixed-radix order used by enumerate_orientations
/// (vertex 0 is the least significant digit).
inline std::uint64_t orientation_index(const Graph& g, const Orientation& o) {
  std::uint64_t index = 0;
  for (Vertex v = g.num_vertices() - 1; v >= 0; --v) {
    auto adj = g.neighbors(v);
    const auto pos = std::lower_bound(adj.begin(), adj.end(), o.gamma[v]) - adj.begin();
    index = index * adj.size() + static_cast<std::uint64_t>(pos);
  }
  return index;
}

/// Visits all d(G) orientations once each. Rejects when d(G) > cap.
inline void enumerate_orientations(const Graph& g, std::uint64_t cap,
                                   const std::function<void(const Orientation&)>& visit) {
  const BigCount total = degree_product(g);
  if (total > cap)
    throw PreconditionError("enumerate_orientations: d(G) = " + to_decimal(total) +
                            " exceeds cap " + std::to_string(cap));
  const int n = g.num_vertices();
  std::vector<std::size_t> digit(n, 0);
  Orientation o;
  o.gamma.resize(n);
  for (Vertex v = 0; v < n; ++v) o.gamma[v] = g.neighbors(v)[0];
  while (true) {
    visit(o);
    Vertex v = 0;
    while (v < n) {
      if (++digit[v] < g.neighbors(v).size()) {
        o.gamma[v] = g.neighbors(v)[digit[v]];
        break;
      }
      digit[v] = 0;
      o.gamma[v] = g.neighbors(v)[0];
      ++v;
    }
    if (v == n) break;
  }
}

inline std::vector<int> in_degrees(const Orientation& o) {
  std::vector<int> deg(o.size(), 0);
  for (Vertex w : o.gamma) ++deg[w];
  return deg;
}

/// b[i] = |B_i|, the number of vertices with in-degree i.
inline std::vector<int> in_degree_histogram(const Orientation& o) {
  const auto deg = in_degrees(o);
  const int top = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  std::vector<int> b(top + 1, 0);
  for (int d : deg) ++b[d];
  return b;
}

/// Number of weak components of the functional graph v -> gamma[v].
inline int count_components(const Orientation& o) {
  UnionFind uf(o.size());
  for (Vertex v = 0; v < o.size(); ++v) uf.unite(v, o.gamma[v]);
  return uf.num_sets();
}

/// Vertex sets of the directed cycles, each listed from its smallest vertex
/// in successor order.
inline std::vector<std::vector<Vertex>> directed_cycles(const Orientation& o) {
  const int n = o.size();
  std::vector<int> state(n, 0);  // 0 unvisited, 1 on current walk, 2 done
  std::vector<std::vector<Vertex>> cycles;
  std::vector<Vertex> walk;
  for (Vertex s = 0; s < n; ++s) {
    if (state[s] != 0) continue;
    walk.clear();
    Vertex v = s;
    while (state[v] == 0) {
      state[v] = 1;
      walk.push_back(v);
      v = o.gamma[v];
    }
    if (state[v] == 1) {
      std::vector<Vertex> cycle;
      Vertex c = v;
      do {
        cycle.push_back(c);
        c = o.gamma[c];
      } while (c != v);
      std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
      cycles.push_back(std::move(cycle));
    }
    for (Vertex w : walk) state[w] = 2;
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

struct OrientationClassification {
  int max_in_degree = 0;
  int num_at_least_k_minus_1 = 0;  ///< vertices with in-degree >= k-1
  int num_exactly_k_minus_1 = 0;   ///< vertices with in-degree == k-1
  int num_components = 0;
  int num_directed_cycles = 0;
  bool in_H_ks = false;      ///< max in-degree <= k-1, at most s at k-1
  bool in_H_star = false;    ///< at most ell components
  std::vector<int> histogram;

  bool accepted() const { return in_H_ks && in_H_star; }
};

inline OrientationClassification classify(const Orientation& o, int k, int s, int ell) {
  OrientationClassification c;
  c.histogram = in_degree_histogram(o);
  c.max_in_degree = static_cast<int>(c.histogram.size()) - 1;
  for (int i = 0; i < static_cast<int>(c.histogram.size()); ++i) {
    if (i >= k - 1) c.num_at_least_k_minus_1 += c.histogram[i];
    if (i == k - 1) c.num_exactly_k_minus_1 += c.histogram[i];
  }
  c.num_components = count_components(o);
  c.num_directed_cycles = static_cast<int>(directed_cycles(o).size());
  c.in_H_ks = c.max_in_degree <= k - 1 && c.num_exactly_k_minus_1 <= s;
  c.in_H_star = c.num_components <= ell;
  return c;
}

inline OrientationClassification classify(const Graph& g, const Orientation& o, int k, int s,
                                          int ell) {
  if (!is_valid_orientation(g, o)) throw PreconditionError("classify: invalid orientation");
  return classify(o, k, s, ell);
}

/// Pr[indeg(v) = i] in a uniform orientation of an r-regular graph:
/// binom(r, i) r^{-i} (1 - 1/r)^{r-i}.
inline double in_degree_prob_exact(long r, long i) {
  if (r < 1) throw PreconditionError("in_degree_prob_exact: r must be positive");
  if (i < 0 || i > r) return 0.0;
  const double rd = static_cast<double>(r);
  double head = 1.0;
  for (long j = 0; j < i; ++j) head *= (rd - static_cast<double>(j)) / (rd * static_cast<double>(j + 1));
  return head * std::exp(static_cast<double>(r - i) * std::log1p(-1.0 / rd));
}

/// Arcs (u, gamma[u]) whose head has in-degree at least k-1, sorted by tail.
inline std::vector<Arc> removable_edges(const Orientation& o, int k) {
  const auto deg = in_degrees(o);
  std::vector<Arc> out;
  for (Vertex u = 0; u < o.size(); ++u)
    if (deg[o.gamma[u]] >= k - 1) out.push_back({u, o.gamma[u]});
  return out;
}

inline std::vector<Arc> removable_edges(const Graph& g, const Orientation& o, int k) {
  if (!is_valid_orientation(g, o)) throw PreconditionError("removable_edges: invalid orientation");
  return removable_edges(o, k);
}

/// Fewest arcs whose deletion leaves maximum in-degree at most t-1:
/// sum over i >= t of (i - t + 1) |B_i|.
inline long removal_cost_Q(const Orientation& o, int t) {
  if (t < 1) throw PreconditionError("removal_cost_Q: t must be at least 1");
  const auto b = in_degree_histogram(o);
  long q = 0;
  for (int i = t; i < static_cast<int>(b.size()); ++i) q += static_cast<long>(i - t + 1) * b[i];
  return q;
}

/// Reduces every in-degree above `cap` to exactly `cap` by deleting arcs.
/// With an Rng the kept in-arcs are a uniform subset; without one the arcs
/// with the lowest tails are deleted. Only arcs with `deletable[tail]` set
/// may be deleted (all arcs when the mask is empty); arcs that must be kept
/// count against the cap first.
struct InDegreeReduction {
  std::vector<Arc> kept;
  std::vector<Arc> removed;
};

inline InDegreeReduction reduce_in_degrees(const std::vector<Arc>& arcs, int n, int cap, Rng* rng,
                                           const std::vector<char>& deletable = {}) {
  std::vector<std::vector<Arc>> fixed_in(n);
  std::vector<std::vector<Arc>> optional_in(n);
  for (const Arc& a : arcs) {
    if (deletable.empty() || deletable[a.from])
      optional_in[a.to].push_back(a);
    else
      fixed_in[a.to].push_back(a);
  }
  InDegreeReduction out;
  for (Vertex v = 0; v < n; ++v) {
    auto& opt = optional_in[v];
    std::sort(opt.begin(), opt.end());
    const int room = std::max(0, cap - static_cast<int>(fixed_in[v].size()));
    const int drop = std::max(0, static_cast<int>(opt.size()) - room);
    if (rng != nullptr) {
      // Partial Fisher-Yates: the first `drop` slots become the deleted set.
      for (int i = 0; i < drop; ++i) {
        const auto j = i + static_cast<int>(rng->below(opt.size() - i));
        std::swap(opt[i], opt[j]);
      }
    }
    for (int i = 0; i < static_cast<int>(opt.size()); ++i)
      (i < drop ? out.removed : out.kept).push_back(opt[i]);
    for (const Arc& a : fixed_in[v]) out.kept.push_back(a);
  }
  std::sort(out.kept.begin(), out.kept.end());
  std::sort(out.removed.begin(), out.removed.end());
  return out;
}

inline std::vector<Arc> arcs_of(const Orientation& o) {
  std::vector<Arc> arcs(o.size());
  for (Vertex v = 0; v < o.size(); ++v) arcs[v] = {v, o.gamma[v]};
  return arcs;
}

/// Performs the deletion counted by removal_cost_Q(o, t).
inline InDegreeReduction remove_excess_in_edges(const Orientation& o, int t, Rng* rng) {
  if (t < 1) throw PreconditionError("remove_excess_in_edges: t must be at least 1");
  return reduce_in_degrees(arcs_of(o), o.size(), t - 1, rng);
}

/// Stage probabilities p_1..p_K of the K-stage model.
struct StagePlan {
  std::vector<double> probs;

  int stages() const { return static_cast<int>(probs.size()); }

  static StagePlan uniform(int stages) {
    if (stages < 1) throw PreconditionError("stage plan needs K >= 1");
    return StagePlan{std::vector<double>(stages, 1.0 / stages)};
  }

  void validate() const {
    if (probs.empty()) throw PreconditionError("stage plan needs K >= 1");
    double sum = 0.0;
    for (double p : probs) {
      if (!(p >= 0.0)) throw PreconditionError("stage probabilities must be nonnegative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw PreconditionError("stage probabilities sum to " + std::to_string(sum) + ", not 1");
  }
};

struct KStageSample {
  Orientation composite;
  std::vector<int> stage_of;  ///< 0-based stage each vertex took its arc from
  std::vector<Orientation> stages;
};

inline int pick_stage(const StagePlan& plan, Rng& rng) {
  const double x = rng.uniform();
  double acc = 0.0;
  for (int c = 0; c + 1 < plan.stages(); ++c) {
    acc += plan.probs[c];
    if (x < acc) return c;
  }
  return plan.stages() - 1;
}

/// K independent uniform orientations, then each vertex independently keeps
/// the arc of stage c with probability p_c. A one-stage plan consumes the
/// generator exactly like sample_orientation.
inline KStageSample k_stage_sample(const Graph& g, const StagePlan& plan, Rng& rng) {
  plan.validate();
  KStageSample out;
  for (int c = 0; c < plan.stages(); ++c) out.stages.push_back(sample_orientation(g, rng));
  const int n = g.num_vertices();
  out.stage_of.assign(n, 0);
  out.composite.gamma.resize(n);
  for (Vertex v = 0; v < n; ++v) {
    if (plan.stages() > 1) out.stage_of[v] = pick_stage(plan, rng);
    out.composite.gamma[v] = out.stages[out.stage_of[v]].gamma[v];
  }
  return out;
}

}  // namespace bdst
