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
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bdst/common.hpp"
#include "bdst/estimation.hpp"
#include "bdst/exact_count.hpp"
#include "bdst/forest.hpp"
#include "bdst/forest_repair.hpp"
#include "bdst/orientation.hpp"
#include "bdst/random.hpp"

namespace bdst {

enum class PruneMode {
  /// Break cycles, then drop every removable arc (head in-degree >= k-1).
  General,
  /// Break cycles, then trim in-degrees above k-2, deleting the arcs with
  /// the lowest tails.
  Regular,
};

struct PrunedForest {
  BoundedForest forest;
  std::vector<Arc> kept;          ///< surviving arcs (directed view of the forest)
  std::vector<Arc> cycle_breaks;  ///< one arc per directed cycle
  std::vector<Arc> pruned;        ///< arcs removed after cycle breaking
};

/// Turns an out-degree one orientation into an acyclic forest with cap k.
/// On each directed cycle the arc whose head has the largest in-degree is
/// removed (ties: lowest tail).
inline PrunedForest orientation_to_pruned_forest(const Graph& g, const Orientation& o, int k, PruneMode mode) {
  if (!is_valid_orientation(g, o)) throw PreconditionError("orientation_to_pruned_forest: invalid orientation");
  const int n = o.size();
  const auto indeg = in_degrees(o);
  PrunedForest out;
  std::vector<char> dropped(n, 0);
  for (const auto& cycle : directed_cycles(o)) {
    Vertex best = cycle[0];
    for (Vertex v : cycle) {
      const int d = indeg[o.gamma[v]];
      const int bd = indeg[o.gamma[best]];
      if (d > bd || (d == bd && v < best)) best = v;
    }
    dropped[best] = 1;
    out.cycle_breaks.push_back({best, o.gamma[best]});
  }
  std::sort(out.cycle_breaks.begin(), out.cycle_breaks.end());

  std::vector<Arc> remaining;
  for (Vertex v = 0; v < n; ++v)
    if (!dropped[v]) remaining.push_back({v, o.gamma[v]});

  if (mode == PruneMode::General) {
    for (const Arc& a : remaining) (indeg[a.to] >= k - 1 ? out.pruned : out.kept).push_back(a);
  } else {
    auto red = reduce_in_degrees(remaining, n, std::max(0, k - 2), nullptr);
    out.kept = std::move(red.kept);
    out.pruned = std::move(red.removed);
  }
  out.forest = BoundedForest(n, k);
  for (const Arc& a : out.kept) out.forest.add_edge(Edge(a.from, a.to));
  return out;
}

/// Independent check: spanning, acyclic, edges of G, maximum degree <= k.
inline bool is_valid_bounded_tree(const Graph& g, const SpanningTree& tree, int k) {
  return is_spanning_tree(g, tree) && max_tree_degree(g.num_vertices(), tree) <= k;
}

struct PipelineConfig {
  int k = 3;
  StagePlan plan = StagePlan::uniform(1);
  std::optional<int> s;    ///< default floor(n / (7k))
  std::optional<int> ell;  ///< default ceil(ln n)
  PruneMode mode = PruneMode::General;
  RepairConfig repair;
};

enum class PipelineStatus { Produced, HypothesisRejected, ClassificationRejected, RepairFailed };

inline const char* to_string(PipelineStatus s) {
  switch (s) {
    case PipelineStatus::Produced: return "produced";
    case PipelineStatus::HypothesisRejected: return "hypothesis_rejected";
    case PipelineStatus::ClassificationRejected: return "classification_rejected";
    case PipelineStatus::RepairFailed: return "repair_failed";
  }
  return "unknown";
}

struct PipelineOutcome {
  PipelineStatus status = PipelineStatus::HypothesisRejected;
  std::string reason;
  std::optional<SpanningTree> tree;
  std::optional<OrientationClassification> classification;
  int forest_edges = 0;
  int repair_steps = 0;
};

/// Names the violated hypothesis of the sampling pipeline, if any.
inline std::optional<std::string> pipeline_hypothesis_violation(const Graph& g, int k) {
  if (k < 3) return "k = " + std::to_string(k) + " violates k >= 3";
  if (g.num_vertices() < 2) return "graph needs at least two vertices";
  if (!is_connected(g)) return "G is not connected";
  if (!meets_min_degree(g, k))
    return "minimum degree " + std::to_string(g.min_degree()) + " is below n/(k+1) = " +
           std::to_string(static_cast<double>(g.num_vertices()) / (k + 1));
  return std::nullopt;
}

/// Maps an orientation to a degree-<=k spanning tree when it lies in
/// H_{k,s} and H*_ell.
inline PipelineOutcome pipeline_from_orientation(const Graph& g, const Orientation& o, const PipelineConfig& cfg) {
  PipelineOutcome out;
  const int n = g.num_vertices();
  if (auto why = pipeline_hypothesis_violation(g, cfg.k)) {
    out.reason = *why;
    return out;
  }
  const int s = cfg.s.value_or(default_s(n, cfg.k));
  const int ell = cfg.ell.value_or(default_ell(n));
  out.classification = classify(o, cfg.k, s, ell);
  if (!out.classification->accepted()) {
    out.status = PipelineStatus::ClassificationRejected;
    if (!out.classification->in_H_ks)
      out.reason = out.classification->max_in_degree > cfg.k - 1 ? "in-degree above k-1"
                                                               : "too many vertices at in-degree k-1";
    else
      out.reason = "more than ell components";
    return out;
  }
  const auto pruned = orientation_to_pruned_forest(g, o, cfg.k, cfg.mode);
  out.forest_edges = pruned.forest.num_edges();
  try {
    auto repaired = repair_to_spanning_tree(g, pruned.forest, cfg.repair);
    out.repair_steps = static_cast<int>(repaired.trail.size());
    if (!repaired.tree) {
      out.status = PipelineStatus::RepairFailed;
      out.reason = "step " + std::to_string(*repaired.failed_step) + ": " + repaired.failure;
      return out;
    }
    if (!is_valid_bounded_tree(g, *repaired.tree, cfg.k)) {
      out.status = PipelineStatus::RepairFailed;
      out.reason = "repaired tree failed validation";
      return out;
    }
    out.status = PipelineStatus::Produced;
    out.tree = std::move(repaired.tree);
  } catch (const PreconditionError& e) {
    out.status = PipelineStatus::RepairFailed;
    out.reason = e.what();
  }
  return out;
}

/// Samples a (possibly K-stage) orientation from `seed` and runs it through
/// the pipeline.
inline PipelineOutcome pipeline_generate(const Graph& g, const PipelineConfig& cfg, std::uint64_t seed) {
  if (auto why = pipeline_hypothesis_violation(g, cfg.k)) {
    PipelineOutcome out;
    out.reason = *why;
    return out;
  }
  Rng rng(seed);
  const auto sample = k_stage_sample(g, cfg.plan, rng);
  return pipeline_from_orientation(g, sample.composite, cfg);
}

/// Canonical form of a tree: sorted edge list.
inline SpanningTree canonical_tree(SpanningTree tree) {
  std::sort(tree.begin(), tree.end());
  return tree;
}

inline std::uint64_t tree_hash(const SpanningTree& tree) {
  std::uint64_t h = 0x84222325cbf29ce4ULL;
  for (const Edge& e : canonical_tree(tree))
    h = mix64(h ^ ((static_cast<std::uint64_t>(e.u) << 32) | static_cast<std::uint32_t>(e.v)));
  return h;
}

struct GenerationTally {
  std::uint64_t runs = 0;
  std::uint64_t produced = 0;
  std::uint64_t invalid = 0;
  std::map<std::string, std::uint64_t> status;
  std::map<std::string, std::uint64_t> reasons;
  std::set<SpanningTree> distinct;
  std::uint64_t repair_steps = 0;

  void merge(const GenerationTally& o) {
    runs += o.runs;
    produced += o.produced;
    invalid += o.invalid;
    for (const auto& [k, v] : o.status) status[k] += v;
    for (const auto& [k, v] : o.reasons) reasons[k] += v;
    distinct.insert(o.distinct.begin(), o.distinct.end());
    repair_steps += o.repair_steps;
  }
};

/// Runs the pipeline for seeds derive_seed(seed, 0..runs-1) and deduplicates
/// the emitted trees by canonical edge set.
inline GenerationTally generate_trees(const Graph& g, const PipelineConfig& cfg, std::uint64_t runs,
                                      std::uint64_t seed, unsigned threads = 1) {
  return run_trials<GenerationTally>(
      runs, seed, threads,
      [&](std::uint64_t t, Rng&, GenerationTally& acc) {
        const auto out = pipeline_generate(g, cfg, derive_seed(seed, t));
        ++acc.runs;
        ++acc.status[to_string(out.status)];
        if (out.status != PipelineStatus::Produced) {
          ++acc.reasons[out.reason];
          return;
        }
        if (!is_valid_bounded_tree(g, *out.tree, cfg.k)) {
          ++acc.invalid;
          return;
        }
        ++acc.produced;
        acc.repair_steps += out.repair_steps;
        acc.distinct.insert(canonical_tree(*out.tree));
      },
      [](GenerationTally& a, const GenerationTally& b) { a.merge(b); });
}

}  // namespace bdst
