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
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "bdst/common.hpp"
#include "bdst/graph.hpp"
#include "bdst/orientation.hpp"
#include "bdst/random.hpp"

namespace bdst {

struct Interval {
  double low = 0.0;
  double high = 0.0;
  double half_width() const { return (high - low) / 2.0; }
};

/// Wilson score interval for `successes` out of `trials` (z = 1.96 for 95%).
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                double z = 1.959963984540054) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double spread = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // The bounds are exact at the edges; the formula leaves rounding residue there.
  return {successes == 0 ? 0.0 : std::max(0.0, center - spread),
          successes == trials ? 1.0 : std::min(1.0, center + spread)};
}

inline unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs `trials` independent trials split into contiguous blocks, one block
/// per worker. Trial t always draws from Rng(derive_seed(seed, t)), and
/// accumulators merge with an associative `merge`, so the result does not
/// depend on `threads` as long as `merge` is exact (integer counters).
template <typename Acc, typename Trial, typename Merge>
Acc run_trials(std::uint64_t trials, std::uint64_t seed, unsigned threads, Trial trial, Merge merge) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::uint64_t>(1, trials))));
  std::vector<Acc> partial(threads);
  auto work = [&](unsigned w) {
    const std::uint64_t begin = trials * w / threads;
    const std::uint64_t end = trials * (w + 1) / threads;
    for (std::uint64_t t = begin; t < end; ++t) {
      Rng rng(derive_seed(seed, t));
      trial(t, rng, partial[w]);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  Acc total = std::move(partial[0]);
  for (unsigned w = 1; w < threads; ++w) merge(total, partial[w]);
  return total;
}

struct GraphSummary {
  int n = 0;
  int m = 0;
  int min_degree = 0;
  int max_degree = 0;
  int regular_degree = -1;
  double geometric_mean_degree = 0.0;
};

inline GraphSummary summarize(const Graph& g) {
  GraphSummary s;
  s.n = g.num_vertices();
  s.m = g.num_edges();
  s.min_degree = g.min_degree();
  s.max_degree = g.max_degree();
  s.regular_degree = g.regular_degree();
  s.geometric_mean_degree = g.min_degree() > 0 ? geometric_mean_degree(g) : 0.0;
  return s;
}

/// Default s = floor(n / (7k)).
inline int default_s(int n, int k) { return n / (7 * k); }
/// Default ell = ceil(ln n).
inline int default_ell(int n) { return n <= 1 ? 0 : static_cast<int>(std::ceil(std::log(static_cast<double>(n)))); }

struct ExactProbability {
  BigCount favorable = 0;
  BigCount total = 0;
  double value() const {
    if (total == 0) return 0.0;
    return std::exp(log_big(favorable) - log_big(total));
  }
};

/// Counters shared by the Monte-Carlo estimators.
struct OrientationTally {
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  std::uint64_t component_sum = 0;
  std::uint64_t component_square_sum = 0;
  std::map<int, std::uint64_t> components;  ///< component count -> trials
  std::map<int, std::uint64_t> in_degree;   ///< in-degree -> vertex observations

  void add(const OrientationClassification& c, bool hit) {
    ++trials;
    if (hit) ++hits;
    component_sum += c.num_components;
    component_square_sum += static_cast<std::uint64_t>(c.num_components) * c.num_components;
    ++components[c.num_components];
    for (int i = 0; i < static_cast<int>(c.histogram.size()); ++i)
      if (c.histogram[i] > 0) in_degree[i] += c.histogram[i];
  }

  void merge(const OrientationTally& o) {
    trials += o.trials;
    hits += o.hits;
    component_sum += o.component_sum;
    component_square_sum += o.component_square_sum;
    for (const auto& [key, v] : o.components) components[key] += v;
    for (const auto& [key, v] : o.in_degree) in_degree[key] += v;
  }

  double mean_components() const {
    return trials == 0 ? 0.0 : static_cast<double>(component_sum) / static_cast<double>(trials);
  }

  double stderr_components() const {
    if (trials < 2) return 0.0;
    const double n = static_cast<double>(trials);
    const double mean = mean_components();
    const double var = (static_cast<double>(component_square_sum) - n * mean * mean) / (n - 1.0);
    return std::sqrt(std::max(0.0, var) / n);
  }
};

/// Seeded Monte-Carlo experiment record.
struct TrialReport {
  GraphSummary graph;
  int k = 0;
  int s = 0;
  int ell = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t successes = 0;
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::optional<ExactProbability> exact;
  double mean_components = 0.0;
  double stderr_components = 0.0;
  std::optional<double> exact_mean_components;
  double component_bound = 0.0;  ///< (k+1) ln n; set by the component check
  std::map<int, std::uint64_t> component_histogram;
  std::map<int, std::uint64_t> in_degree_histogram;
};

/// P_{k,s,ell}(G) by exhaustive enumeration of H(G).
inline ExactProbability exact_P(const Graph& g, int k, int s, int ell, std::uint64_t cap = 10'000'000) {
  ExactProbability out;
  out.total = degree_product(g);
  std::uint64_t favorable = 0;
  enumerate_orientations(g, cap, [&](const Orientation& o) {
    if (classify(o, k, s, ell).accepted()) ++favorable;
  });
  out.favorable = favorable;
  return out;
}

/// Monte-Carlo estimate of P_{k,s,ell}(G) with a Wilson 95% interval.
inline TrialReport estimate_P(const Graph& g, int k, int s, int ell, std::uint64_t trials,
                              std::uint64_t seed, unsigned threads = 1) {
  if (trials < 1) throw PreconditionError("estimate_P: trials must be at least 1");
  require_no_isolated(g);
  auto tally = run_trials<OrientationTally>(
      trials, seed, threads,
      [&](std::uint64_t, Rng& rng, OrientationTally& acc) {
        const Orientation o = sample_orientation(g, rng);
        const auto c = classify(o, k, s, ell);
        acc.add(c, c.accepted());
      },
      [](OrientationTally& a, const OrientationTally& b) { a.merge(b); });
  TrialReport r;
  r.graph = summarize(g);
  r.k = k;
  r.s = s;
  r.ell = ell;
  r.trials = trials;
  r.seed = seed;
  r.successes = tally.hits;
  r.estimate = static_cast<double>(tally.hits) / static_cast<double>(trials);
  const auto ci = wilson_interval(tally.hits, trials);
  r.ci_low = ci.low;
  r.ci_high = ci.high;
  r.mean_components = tally.mean_components();
  r.stderr_components = tally.stderr_components();
  r.component_histogram = tally.components;
  r.in_degree_histogram = tally.in_degree;
  return r;
}

/// Exact mean number of components over all of H(G).
inline double exact_mean_components(const Graph& g, std::uint64_t cap = 10'000'000) {
  std::uint64_t sum = 0;
  std::uint64_t count = 0;
  enumerate_orientations(g, cap, [&](const Orientation& o) {
    sum += count_components(o);
    ++count;
  });
  return static_cast<double>(sum) / static_cast<double>(count);
}

/// Empirical mean component count of a uniform orientation, compared with
/// the (k+1) ln n bound that holds when the minimum degree is at least
/// n/(k+1). The exact mean is added when d(G) <= exact_cap.
inline TrialReport component_expectation_check(const Graph& g, int k, std::uint64_t trials,
                                               std::uint64_t seed, unsigned threads = 1,
                                               std::uint64_t exact_cap = 100'000) {
  const int n = g.num_vertices();
  if (trials < 1) throw PreconditionError("component_expectation_check: trials must be at least 1");
  if (static_cast<long>(g.min_degree()) * (k + 1) < n)
    throw PreconditionError("component_expectation_check: minimum degree " +
                            std::to_string(g.min_degree()) + " is below n/(k+1) = " +
                            std::to_string(static_cast<double>(n) / (k + 1)));
  TrialReport r = estimate_P(g, k, default_s(n, k), default_ell(n), trials, seed, threads);
  r.component_bound = (k + 1) * std::log(static_cast<double>(n));
  if (degree_product(g) <= exact_cap) r.exact_mean_components = exact_mean_components(g, exact_cap);
  return r;
}

}  // namespace bdst
