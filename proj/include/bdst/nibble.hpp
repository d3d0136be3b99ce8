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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bdst/common.hpp"
#include "bdst/estimation.hpp"
#include "bdst/graph.hpp"
#include "bdst/orientation.hpp"
#include "bdst/random.hpp"
#include "bdst/union_find.hpp"

namespace bdst {

/// Survival fractions q_1 = 1/e, q_i = q_{i-1} e^{-q_{i-1}}.
inline double q_sequence(int i) {
  if (i < 1) throw PreconditionError("q_sequence: stage index must be at least 1");
  double q = std::exp(-1.0);
  for (int j = 2; j <= i; ++j) q *= std::exp(-q);
  return q;
}

/// q_i for a stage forest after i stages; the empty forest (i = 0) has q = 1.
inline double stage_fraction(int i) { return i == 0 ? 1.0 : q_sequence(i); }

/// Default number of stages: 20 for k = 3, 5 for k = 4.
inline int default_stage_count(int k) { return k == 3 ? 20 : 5; }

struct StageArc {
  Vertex from = 0;
  Vertex to = 0;
  int stage = 0;  ///< 1-based stage that contributed the arc
};

/// Union of the stage edge sets F_1..F_i as a directed graph.
struct StageForest {
  int n = 0;
  int stage = 0;
  std::vector<StageArc> arcs;

  StageForest() = default;
  explicit StageForest(int vertices) : n(vertices) {}

  std::vector<int> in_degrees() const {
    std::vector<int> d(n, 0);
    for (const auto& a : arcs) ++d[a.to];
    return d;
  }

  std::vector<int> out_degrees() const {
    std::vector<int> d(n, 0);
    for (const auto& a : arcs) ++d[a.from];
    return d;
  }

  /// X_i: vertices with out-degree 0, ascending.
  std::vector<Vertex> open_vertices() const {
    const auto out = out_degrees();
    std::vector<Vertex> x;
    for (Vertex v = 0; v < n; ++v)
      if (out[v] == 0) x.push_back(v);
    return x;
  }

  /// Item (b): stage edge sets pairwise disjoint and their union acyclic.
  bool is_disjoint_forest() const {
    std::set<Edge> seen;
    UnionFind uf(n);
    for (const auto& a : arcs) {
      if (a.from == a.to) return false;
      if (!seen.insert(Edge(a.from, a.to)).second) return false;
      if (!uf.unite(a.from, a.to)) return false;
    }
    return true;
  }

  /// Item (c): in- and out-degree at most one.
  bool has_unit_degrees() const {
    const auto in = in_degrees();
    const auto out = out_degrees();
    for (Vertex v = 0; v < n; ++v)
      if (in[v] > 1 || out[v] > 1) return false;
    return true;
  }
};

struct NibbleStepReport {
  int stage = 0;           ///< index i of the stage just built
  int open_before = 0;     ///< |X_{i-1}|
  int friendly = 0;
  int cycle_breaks = 0;    ///< closing arcs in components above the threshold
  int e_star = 0;          ///< |E_i*| = friendly + cycle_breaks
  int e_double_star = 0;   ///< |E_i**|
  int removed = 0;         ///< |E_i* union E_i**|
  int added = 0;           ///< |F_i|
  double q = 0.0;
};

struct NibbleStep {
  StageForest forest;
  NibbleStepReport report;
};

/// Builds F_i from the out-arcs of X_{i-1} in `next`: processes X_{i-1} in
/// id order and discards an arc when it closes a cycle (a friendly vertex if
/// its component has at most sqrt(n) vertices), then trims in-degrees back
/// to one by keeping a uniformly random new in-arc per vertex.
inline NibbleStep nibble_step(const Graph& g, const StageForest& s, const Orientation& next, Rng& rng) {
  const int n = g.num_vertices();
  if (s.n != n) throw PreconditionError("nibble_step: stage forest has the wrong vertex count");
  if (!s.is_disjoint_forest() || !s.has_unit_degrees())
    throw PreconditionError("nibble_step: stage forest violates its structural invariants");
  if (!is_valid_orientation(g, next)) throw PreconditionError("nibble_step: invalid orientation");

  NibbleStep out;
  out.forest = s;
  out.forest.stage = s.stage + 1;
  auto& rep = out.report;
  rep.stage = out.forest.stage;
  rep.q = q_sequence(rep.stage);

  const auto open = s.open_vertices();
  rep.open_before = static_cast<int>(open.size());
  const double small = std::sqrt(static_cast<double>(n));

  UnionFind uf(n);
  for (const auto& a : s.arcs) uf.unite(a.from, a.to);
  std::vector<char> starred(n, 0);
  for (Vertex v : open) {
    const Vertex t = next.gamma[v];
    if (uf.same(v, t)) {
      starred[v] = 1;
      if (uf.size_of(v) <= small)
        ++rep.friendly;
      else
        ++rep.cycle_breaks;
    } else {
      uf.unite(v, t);
    }
  }
  rep.e_star = rep.friendly + rep.cycle_breaks;

  std::vector<Arc> all;
  std::vector<char> deletable(n, 0);
  for (const auto& a : s.arcs) all.push_back({a.from, a.to});
  for (Vertex v : open) {
    all.push_back({v, next.gamma[v]});
    deletable[v] = 1;
  }
  const auto trimmed = reduce_in_degrees(all, n, 1, &rng, deletable);
  std::vector<char> double_starred(n, 0);
  for (const Arc& a : trimmed.removed) double_starred[a.from] = 1;
  rep.e_double_star = static_cast<int>(trimmed.removed.size());

  for (Vertex v : open) {
    if (starred[v] || double_starred[v]) {
      ++rep.removed;
      continue;
    }
    out.forest.arcs.push_back({v, next.gamma[v], out.forest.stage});
    ++rep.added;
  }
  if (!out.forest.is_disjoint_forest() || !out.forest.has_unit_degrees())
    throw InternalError("nibble_step: output violates the stage forest invariants");
  return out;
}

/// Itemized test of a stage forest against the bands around n q_i and r q_i.
struct SuccessCheck {
  int stage = 0;
  double q = 1.0;
  double eps = 0.0;
  bool forest_ok = false;        ///< (b)
  bool degrees_ok = false;       ///< (c)
  bool zero_in_ok = false;       ///< (d)
  bool neighbor_in_ok = false;   ///< (e)
  bool neighbor_out_ok = false;  ///< (f)
  int zero_in_count = 0;
  double zero_in_ratio = 0.0;  ///< zero_in_count / (n q)
  double neighbor_in_min_ratio = 0.0;
  double neighbor_in_max_ratio = 0.0;
  double neighbor_out_min_ratio = 0.0;
  double neighbor_out_max_ratio = 0.0;

  bool passed() const { return forest_ok && degrees_ok && zero_in_ok && neighbor_in_ok && neighbor_out_ok; }
};

inline bool within_band(double value, double target, double eps) {
  return value >= (1.0 - eps) * target && value <= (1.0 + eps) * target;
}

inline SuccessCheck check_successful(const StageForest& s, const Graph& g, double eps) {
  const int n = g.num_vertices();
  const int r = g.regular_degree();
  if (r < 1) throw PreconditionError("check_successful: G must be regular with positive degree");
  if (s.n != n) throw PreconditionError("check_successful: stage forest has the wrong vertex count");
  SuccessCheck c;
  c.stage = s.stage;
  c.q = stage_fraction(s.stage);
  c.eps = eps;
  c.forest_ok = s.is_disjoint_forest();
  c.degrees_ok = s.has_unit_degrees();

  const auto in = s.in_degrees();
  const auto out = s.out_degrees();
  c.zero_in_count = static_cast<int>(std::count(in.begin(), in.end(), 0));
  const double n_target = n * c.q;
  const double r_target = r * c.q;
  c.zero_in_ratio = c.zero_in_count / n_target;
  c.zero_in_ok = within_band(c.zero_in_count, n_target, eps);

  c.neighbor_in_ok = c.neighbor_out_ok = true;
  c.neighbor_in_min_ratio = c.neighbor_out_min_ratio = INFINITY;
  c.neighbor_in_max_ratio = c.neighbor_out_max_ratio = 0.0;
  for (Vertex v = 0; v < n; ++v) {
    int zin = 0;
    int zout = 0;
    for (Vertex w : g.neighbors(v)) {
      zin += in[w] == 0;
      zout += out[w] == 0;
    }
    c.neighbor_in_ok = c.neighbor_in_ok && within_band(zin, r_target, eps);
    c.neighbor_out_ok = c.neighbor_out_ok && within_band(zout, r_target, eps);
    c.neighbor_in_min_ratio = std::min(c.neighbor_in_min_ratio, zin / r_target);
    c.neighbor_in_max_ratio = std::max(c.neighbor_in_max_ratio, zin / r_target);
    c.neighbor_out_min_ratio = std::min(c.neighbor_out_min_ratio, zout / r_target);
    c.neighbor_out_max_ratio = std::max(c.neighbor_out_max_ratio, zout / r_target);
  }
  return c;
}

struct GoodnessResult {
  Orientation composite;
  int in_degree_cap = 0;
  int prefixes = 0;  ///< |X| arcs added
  bool every_prefix_good = true;
  std::optional<int> first_bad_prefix;  ///< 1-based number of arcs added when goodness failed
  std::string first_bad_reason;
  int top_in_degree_count = 0;  ///< vertices at the in-degree cap in the composite
  int s_bound = 0;              ///< allowed count at the cap (k in {3,4})
  int components = 0;
  bool in_H = false;
  bool in_H_star = false;
};

/// Completes a stage forest with the out-arcs of its open vertices taken
/// from `last`, one at a time in id order, and checks goodness after every
/// prefix: in-degree at most the cap (2 for k in {3,4}, k-2 otherwise),
/// every component below n / ln n a tree and, for k in {3,4}, at most h
/// vertices at in-degree 2 after h arcs.
inline GoodnessResult final_stage_goodness(const Graph& g, const StageForest& s, const Orientation& last, int k,
                                           double eps = 0.15) {
  const int n = g.num_vertices();
  if (k < 3) throw PreconditionError("final_stage_goodness: k must be at least 3");
  if (s.n != n) throw PreconditionError("final_stage_goodness: stage forest has the wrong vertex count");
  if (!is_valid_orientation(g, last)) throw PreconditionError("final_stage_goodness: invalid orientation");
  const bool low_k = k == 3 || k == 4;
  GoodnessResult res;
  res.in_degree_cap = low_k ? 2 : k - 2;
  const double small = n / std::log(static_cast<double>(std::max(n, 2)));

  auto indeg = s.in_degrees();
  res.composite.gamma.assign(n, -1);
  UnionFind uf(n);
  for (const auto& a : s.arcs) {
    res.composite.gamma[a.from] = a.to;
    uf.unite(a.from, a.to);
  }
  int at_two = static_cast<int>(std::count(indeg.begin(), indeg.end(), 2));
  auto fail = [&](int h, std::string why) {
    if (res.every_prefix_good) {
      res.every_prefix_good = false;
      res.first_bad_prefix = h;
      res.first_bad_reason = std::move(why);
    }
  };
  const auto open = s.open_vertices();
  int h = 0;
  for (Vertex v : open) {
    ++h;
    const Vertex t = last.gamma[v];
    res.composite.gamma[v] = t;
    if (++indeg[t] == 2) ++at_two;
    if (indeg[t] > res.in_degree_cap) fail(h, "in-degree of " + std::to_string(t) + " exceeds the cap");
    if (uf.same(v, t)) {
      if (uf.size_of(v) < small) fail(h, "cycle closed in a component below n/ln n");
    } else {
      uf.unite(v, t);
    }
    if (low_k && at_two > h) fail(h, "more than h vertices at in-degree 2");
  }
  res.prefixes = h;

  const int ell = default_ell(n);
  res.components = count_components(res.composite);
  res.in_H_star = res.components <= ell;
  const int top = *std::max_element(indeg.begin(), indeg.end());
  if (low_k) {
    res.s_bound = static_cast<int>(std::floor(n * stage_fraction(s.stage) * (1.0 + eps)));
    res.top_in_degree_count = at_two;
    res.in_H = top <= 2 && at_two <= res.s_bound;
  } else {
    res.top_in_degree_count = static_cast<int>(std::count(indeg.begin(), indeg.end(), k - 2));
    res.s_bound = n;
    res.in_H = top <= k - 2;
  }
  return res;
}

struct NibbleStage {
  NibbleStepReport step;
  SuccessCheck check;
};

struct NibbleRun {
  int k = 3;
  int stages = 0;  ///< K
  double eps = 0.15;
  std::uint64_t seed = 0;
  std::vector<NibbleStage> history;
  StageForest forest;  ///< after stage K-1
  GoodnessResult final_stage;
};

/// Full K-stage run for k in {3,4}: K-1 nibble steps from fresh uniform
/// orientations followed by the completion stage.
inline NibbleRun run_nibble(const Graph& g, int k, int stages, double eps, std::uint64_t seed) {
  const int n = g.num_vertices();
  const int r = g.regular_degree();
  if (k != 3 && k != 4) throw PreconditionError("run_nibble: staged pipeline is defined for k in {3,4}");
  if (r < 1) throw PreconditionError("run_nibble: G must be regular");
  if (static_cast<long>(r) * (k + 1) < n)
    throw PreconditionError("run_nibble: degree " + std::to_string(r) + " is below n/(k+1)");
  if (stages < 2) throw PreconditionError("run_nibble: need at least two stages");
  NibbleRun run;
  run.k = k;
  run.stages = stages;
  run.eps = eps;
  run.seed = seed;
  Rng rng(seed);
  run.forest = StageForest(n);
  for (int i = 1; i < stages; ++i) {
    const Orientation o = sample_orientation(g, rng);
    auto step = nibble_step(g, run.forest, o, rng);
    run.forest = std::move(step.forest);
    run.history.push_back({step.report, check_successful(run.forest, g, eps)});
  }
  const Orientation last = sample_orientation(g, rng);
  run.final_stage = final_stage_goodness(g, run.forest, last, k, eps);
  return run;
}

}  // namespace bdst
