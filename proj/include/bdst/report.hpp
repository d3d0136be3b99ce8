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

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "bdst/constructions.hpp"
#include "bdst/estimation.hpp"
#include "bdst/exact_count.hpp"
#include "bdst/graph.hpp"
#include "bdst/nibble.hpp"
#include "bdst/pipeline.hpp"

namespace bdst {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

inline std::string schema_name(const std::string& command) { return "bdst." + command + "/1"; }

/// Top-level report: schema tag, tool version, resolved config, payload.
inline Json envelope(const std::string& command, Json config, Json result) {
  Json j;
  j["schema"] = schema_name(command);
  j["tool"] = "bdst";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["config"] = std::move(config);
  j["result"] = std::move(result);
  return j;
}

inline Json error_json(int exit_code, const std::string& kind, const std::string& message) {
  Json j;
  j["schema"] = schema_name("error");
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = exit_code;
  return j;
}

template <typename Map>
Json histogram_json(const Map& m) {
  Json j = Json::object();
  for (const auto& [key, v] : m) j[std::to_string(key)] = v;
  return j;
}

inline Json to_json(const GraphSummary& s) {
  Json j;
  j["n"] = s.n;
  j["m"] = s.m;
  j["min_degree"] = s.min_degree;
  j["max_degree"] = s.max_degree;
  if (s.regular_degree >= 0)
    j["regular_degree"] = s.regular_degree;
  else
    j["regular_degree"] = nullptr;
  j["geometric_mean_degree"] = s.geometric_mean_degree;
  return j;
}

/// c(G), c_k(G) and their n-th roots. With `histogram`, every spanning tree
/// is enumerated once and bucketed by its maximum degree. Enumeration is
/// refused when c(G) exceeds `enum_cap`, unless k >= max degree makes
/// c_k = c.
inline Json count_json(const Graph& g, int k, bool histogram, std::uint64_t enum_cap = 50'000'000) {
  if (k < 1) throw PreconditionError("count: k must be positive");
  Json j;
  j["graph"] = to_json(summarize(g));
  j["k"] = k;
  const BigCount c = count_spanning_trees(g);
  const bool trivial = g.num_vertices() > 0 && k >= g.max_degree();
  // A cut vertex leaving k+1 components forces c_k = 0 without enumeration.
  const auto witness = histogram || trivial || c == 0 ? std::nullopt : no_bounded_tree_certificate(g, k);
  if (c > enum_cap && (histogram || !(trivial || witness)))
    throw PreconditionError("count: c(G) = " + to_decimal(c) + " exceeds the enumeration cap " +
                            std::to_string(enum_cap));
  BigCount ck;
  Json hist = Json::object();
  std::string method;
  if (histogram) {
    method = "enumeration";
    const auto h = count_with_histogram(g);
    if (h.total != c) throw InternalError("count: enumeration disagrees with the determinant");
    ck = 0;
    for (const auto& [d, v] : h.by_max_degree) {
      hist[std::to_string(d)] = to_decimal(v);
      if (d <= k) ck += v;
    }
  } else if (trivial) {
    method = "max_degree";
    ck = c;
  } else if (witness) {
    method = "certificate";
    ck = 0;
  } else {
    method = "enumeration";
    ck = count_bounded(g, k);
  }
  const int n = g.num_vertices();
  j["c"] = to_decimal(c);
  j["c_k"] = to_decimal(ck);
  j["c_root"] = normalized_count(c, n);
  j["c_k_root"] = normalized_count(ck, n);
  j["degree_product"] = to_decimal(degree_product(g));
  j["c_k_method"] = method;
  if (witness) j["certificate"] = *witness;
  if (histogram) j["c_by_max_degree"] = hist;
  return j;
}

inline Json to_json(const ExactProbability& p) {
  Json j;
  j["favorable"] = to_decimal(p.favorable);
  j["total"] = to_decimal(p.total);
  j["value"] = p.value();
  return j;
}

inline Json to_json(const TrialReport& r) {
  Json j;
  j["graph"] = to_json(r.graph);
  j["k"] = r.k;
  j["s"] = r.s;
  j["ell"] = r.ell;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["successes"] = r.successes;
  j["estimate"] = r.estimate;
  j["ci95"] = Json::array({r.ci_low, r.ci_high});
  j["exact"] = r.exact ? to_json(*r.exact) : Json(nullptr);
  j["mean_components"] = r.mean_components;
  j["stderr_components"] = r.stderr_components;
  j["exact_mean_components"] = r.exact_mean_components ? Json(*r.exact_mean_components) : Json(nullptr);
  j["component_bound"] = r.component_bound;
  j["component_histogram"] = histogram_json(r.component_histogram);
  j["in_degree_histogram"] = histogram_json(r.in_degree_histogram);
  return j;
}

inline Json edges_json(const std::vector<Edge>& edges) {
  Json j = Json::array();
  for (const Edge& e : edges) j.push_back(Json::array({e.u, e.v}));
  return j;
}

inline std::string hex64(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[i] = digits[h & 15];
  return s;
}

inline Json to_json(const GenerationTally& t) {
  Json j;
  j["runs"] = t.runs;
  j["produced"] = t.produced;
  j["invalid"] = t.invalid;
  j["distinct"] = t.distinct.size();
  j["success_rate"] = t.runs == 0 ? 0.0 : static_cast<double>(t.produced) / static_cast<double>(t.runs);
  j["mean_repair_steps"] =
      t.produced == 0 ? 0.0 : static_cast<double>(t.repair_steps) / static_cast<double>(t.produced);
  Json status = Json::object();
  for (const auto& [key, v] : t.status) status[key] = v;
  j["status"] = status;
  Json reasons = Json::object();
  for (const auto& [key, v] : t.reasons) reasons[key] = v;
  j["rejections"] = reasons;
  Json hashes = Json::array();
  for (const auto& tree : t.distinct) hashes.push_back(hex64(tree_hash(tree)));
  j["tree_hashes"] = hashes;
  return j;
}

inline Json to_json(const NibbleStepReport& s) {
  Json j;
  j["i"] = s.stage;
  j["open"] = s.open_before;
  j["friendly"] = s.friendly;
  j["cycle_breaks"] = s.cycle_breaks;
  j["e_star"] = s.e_star;
  j["e_double_star"] = s.e_double_star;
  j["removed"] = s.removed;
  j["added"] = s.added;
  j["q"] = s.q;
  return j;
}

inline Json to_json(const SuccessCheck& c) {
  Json j;
  j["passed"] = c.passed();
  j["b_forest"] = c.forest_ok;
  j["c_degrees"] = c.degrees_ok;
  j["d_zero_in"] = c.zero_in_ok;
  j["e_neighbor_in"] = c.neighbor_in_ok;
  j["f_neighbor_out"] = c.neighbor_out_ok;
  j["zero_in_count"] = c.zero_in_count;
  j["zero_in_ratio"] = c.zero_in_ratio;
  j["neighbor_in_ratio"] = Json::array({c.neighbor_in_min_ratio, c.neighbor_in_max_ratio});
  j["neighbor_out_ratio"] = Json::array({c.neighbor_out_min_ratio, c.neighbor_out_max_ratio});
  return j;
}

inline Json to_json(const GoodnessResult& g) {
  Json j;
  j["in_degree_cap"] = g.in_degree_cap;
  j["arcs_added"] = g.prefixes;
  j["every_prefix_good"] = g.every_prefix_good;
  j["first_bad_prefix"] = g.first_bad_prefix ? Json(*g.first_bad_prefix) : Json(nullptr);
  j["first_bad_reason"] = g.first_bad_reason;
  j["top_in_degree_count"] = g.top_in_degree_count;
  j["s_bound"] = g.s_bound;
  j["components"] = g.components;
  j["in_H"] = g.in_H;
  j["in_H_star"] = g.in_H_star;
  return j;
}

inline Json to_json(const NibbleRun& run) {
  Json j;
  j["k"] = run.k;
  j["K"] = run.stages;
  j["eps"] = run.eps;
  j["seed"] = run.seed;
  Json stages = Json::array();
  for (const auto& s : run.history) {
    Json row = to_json(s.step);
    row["check"] = to_json(s.check);
    stages.push_back(row);
  }
  j["stages"] = stages;
  j["final"] = to_json(run.final_stage);
  return j;
}

inline Json to_json(const ConstantsTable& c) {
  Json j;
  j["k"] = c.k;
  j["f_k"] = c.f;
  j["g_k"] = c.g;
  j["z_k"] = c.z;
  j["log_z_k"] = c.log_z;
  j["z_star_k"] = c.z_star;
  return j;
}

inline Json to_json(const TheoremBound& b) {
  Json j;
  j["regime"] = to_string(b.regime);
  j["n"] = b.n;
  j["k"] = b.k;
  j["base"] = b.base;
  j["factor"] = b.factor;
  j["bound"] = b.value;
  Json checks = Json::array();
  for (const auto& c : b.checks) {
    Json row;
    row["inequality"] = c.inequality;
    row["lhs"] = c.lhs;
    row["rhs"] = c.rhs;
    row["holds"] = c.holds;
    checks.push_back(row);
  }
  j["hypotheses"] = checks;
  return j;
}

}  // namespace bdst
