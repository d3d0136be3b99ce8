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
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "bdst/common.hpp"
#include "bdst/graph.hpp"
#include "bdst/union_find.hpp"

namespace bdst {

struct ConstantsTable {
  int k = 0;
  double f = 0.0;
  double g = 0.0;
  double z = 0.0;
  double log_z = 0.0;  ///< ln z_k; resolves z_k once it rounds to 1
  double z_star = 0.0;
};

/// f_k = 1 - (1/e) sum_{i=0}^{k-3} 1/i!, evaluated as the tail
/// (1/e) sum_{i>=k-2} 1/i! so that it stays positive for large k.
inline double f_constant(int k) {
  double term = 1.0;
  for (int i = 1; i <= k - 2; ++i) term /= i;
  double sum = 0.0;
  for (int i = k - 2; term > sum * 1e-18; ++i) {
    sum += term;
    term /= i + 1;
  }
  return sum / std::exp(1.0);
}

/// g_k = 2 / (e (k-1)!)
inline double g_constant(int k) {
  double fact = 1.0;
  for (int i = 2; i <= k - 1; ++i) fact *= i;
  return 2.0 / (std::exp(1.0) * fact);
}

inline double z_star_constant(int k) {
  const double a = 1.0 / (7.0 * k);
  return std::pow(1.0 - a, 1.0 - a) * std::pow(1.0 / (9.0 * k), a);
}

inline constexpr double kZ3 = 0.0494;
inline constexpr double kZ4 = 0.1527;

inline ConstantsTable constants(int k) {
  if (k < 3) throw PreconditionError("constants: k must be at least 3, got " + std::to_string(k));
  ConstantsTable c;
  c.k = k;
  c.f = f_constant(k);
  c.g = g_constant(k);
  c.z_star = z_star_constant(k);
  if (k == 3) {
    c.log_z = std::log(kZ3);
  } else if (k == 4) {
    c.log_z = std::log(kZ4);
  } else {
    c.log_z = c.g * std::log1p(-(k + 1) * (c.f + c.g)) + (1.0 - c.g) * std::log1p(-c.g) + c.g * std::log(c.g);
  }
  c.z = k == 3 ? kZ3 : k == 4 ? kZ4 : std::exp(c.log_z);
  return c;
}

enum class Regime { Regular, NearlyRegular, NonRegular };

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::Regular: return "regular";
    case Regime::NearlyRegular: return "nearly-regular";
    case Regime::NonRegular: return "non-regular";
  }
  return "?";
}

inline std::optional<Regime> parse_regime(const std::string& s) {
  if (s == "regular") return Regime::Regular;
  if (s == "nearly-regular") return Regime::NearlyRegular;
  if (s == "non-regular") return Regime::NonRegular;
  return std::nullopt;
}

struct HypothesisCheck {
  std::string inequality;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct TheoremBound {
  Regime regime = Regime::Regular;
  int n = 0;
  int k = 0;
  double base = 0.0;    ///< r, or the geometric mean degree
  double factor = 0.0;  ///< z_k or z*_k
  double value = 0.0;   ///< base * factor, before the (1 - o(1)) term
  std::vector<HypothesisCheck> checks;

  bool hypotheses_hold() const {
    for (const auto& c : checks)
      if (!c.holds) return false;
    return true;
  }
};

/// Evaluates the lower bound on c_k(G)^{1/n} and its hypotheses without
/// rejecting anything.
inline TheoremBound evaluate_theorem_bound(int n, std::span<const int> degrees, int k, Regime regime) {
  if (k < 3) throw PreconditionError("theorem_bound: k must be at least 3");
  if (n < 1 || static_cast<int>(degrees.size()) != n)
    throw PreconditionError("theorem_bound: expected one degree per vertex");
  int lo = degrees[0];
  int hi = degrees[0];
  double log_sum = 0.0;
  for (int d : degrees) {
    if (d < 1) throw PreconditionError("theorem_bound: degrees must be positive");
    lo = std::min(lo, d);
    hi = std::max(hi, d);
    log_sum += std::log(static_cast<double>(d));
  }
  TheoremBound b;
  b.regime = regime;
  b.n = n;
  b.k = k;
  const auto tab = constants(k);
  const double slack = 3.0 * std::sqrt(std::log(static_cast<double>(k)) / k);
  switch (regime) {
    case Regime::Regular:
      b.checks.push_back({"every degree equals r", static_cast<double>(lo), static_cast<double>(hi), lo == hi});
      b.checks.push_back({"r >= n/(k+1)", static_cast<double>(lo), static_cast<double>(n) / (k + 1),
                          static_cast<long>(lo) * (k + 1) >= n});
      b.base = lo;
      b.factor = tab.z;
      break;
    case Regime::NearlyRegular:
      b.checks.push_back({"min degree >= n/(k+1)", static_cast<double>(lo), static_cast<double>(n) / (k + 1),
                          static_cast<long>(lo) * (k + 1) >= n});
      b.checks.push_back({"max degree <= n(1 - 3 sqrt(ln k / k))", static_cast<double>(hi), n * (1.0 - slack),
                          hi <= n * (1.0 - slack)});
      b.base = std::exp(log_sum / n);
      b.factor = tab.z_star;
      break;
    case Regime::NonRegular:
      b.checks.push_back({"min degree >= (n/k)(1 + 3 sqrt(ln k / k))", static_cast<double>(lo),
                          n / static_cast<double>(k) * (1.0 + slack), lo >= n / static_cast<double>(k) * (1.0 + slack)});
      b.base = std::exp(log_sum / n);
      b.factor = tab.z_star;
      break;
  }
  b.value = b.base * b.factor;
  return b;
}

/// As evaluate_theorem_bound, but rejects when a hypothesis fails.
inline TheoremBound theorem_bound(int n, std::span<const int> degrees, int k, Regime regime) {
  auto b = evaluate_theorem_bound(n, degrees, k, regime);
  for (const auto& c : b.checks)
    if (!c.holds)
      throw PreconditionError("theorem_bound: hypothesis fails: " + c.inequality + " (" + std::to_string(c.lhs) +
                              " vs " + std::to_string(c.rhs) + ")");
  return b;
}

inline TheoremBound theorem_bound(int n, int r, int k, Regime regime = Regime::Regular) {
  const std::vector<int> degrees(n > 0 ? n : 0, r);
  return theorem_bound(n, degrees, k, regime);
}

inline TheoremBound theorem_bound(const Graph& g, int k, Regime regime) {
  const auto d = g.degrees();
  return theorem_bound(g.num_vertices(), d, k, regime);
}

/// Number of components of G - v.
inline int components_without(const Graph& g, Vertex v) {
  UnionFind uf(g.num_vertices());
  for (const Edge& e : g.edges())
    if (e.u != v && e.v != v) uf.unite(e.u, e.v);
  return uf.num_sets() - 1;
}

/// First vertex whose removal leaves at least k+1 components. Every spanning
/// tree gives such a vertex degree k+1 or more, so c_k(G) = 0. An empty
/// result proves nothing. G is expected to be connected.
inline std::optional<Vertex> no_bounded_tree_certificate(const Graph& g, int k) {
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (components_without(g, v) >= k + 1) return v;
  return std::nullopt;
}

/// K_{(n-2)/k, n-(n-2)/k}: connected, minimum degree (n-2)/k, c_k = 0.
inline Graph bipartite_counterexample(int n, int k) {
  if (k < 1) throw PreconditionError("bipartite_counterexample: k must be positive");
  if (n < 3) throw PreconditionError("bipartite_counterexample: n must be at least 3");
  if ((n - 2) % k != 0)
    throw PreconditionError("bipartite_counterexample: k = " + std::to_string(k) + " does not divide n-2 = " +
                            std::to_string(n - 2));
  const int a = (n - 2) / k;
  return complete_bipartite(a, n - a);
}

enum class TightVariant { Auto, Odd, Even };

inline std::string to_string(TightVariant v) {
  switch (v) {
    case TightVariant::Auto: return "auto";
    case TightVariant::Odd: return "odd";
    case TightVariant::Even: return "even";
  }
  return "?";
}

inline std::optional<TightVariant> parse_tight_variant(const std::string& s) {
  if (s == "auto") return TightVariant::Auto;
  if (s == "odd") return TightVariant::Odd;
  if (s == "even") return TightVariant::Even;
  return std::nullopt;
}

struct TightConstruction {
  Graph graph;
  int k = 0;
  int t = 0;
  int r = 0;
  Vertex witness = 0;  ///< v_{0,0}
  TightVariant variant = TightVariant::Odd;
};

/// Connected r-regular graph with r = floor(n/(k+1)) - 2 and c_k = 0.
///
/// Vertex ids: G_0 comes first with v_{0,j} = j for the designated vertices
/// and the undesignated ones after them; G_i (i >= 1) occupies the block
/// starting at |G_0| + (i-1)t with v_{i,j} = base + j. Matchings pair
/// consecutive ids and the Hamilton cycle runs in ascending order.
///
/// The odd variant (n = (k+1)t) needs a perfect matching on t-k-2 vertices,
/// so it requires k odd; the even variant (n = (k+1)t+1) requires k even.
inline TightConstruction tight_regular_construction(int k, int t, TightVariant variant = TightVariant::Auto) {
  if (k < 2) throw PreconditionError("tight_regular_construction: k must be at least 2");
  if (variant == TightVariant::Auto) variant = k % 2 == 1 ? TightVariant::Odd : TightVariant::Even;
  if (t % 2 == 0) throw PreconditionError("tight_regular_construction: t must be odd");
  if (variant == TightVariant::Odd) {
    if (k % 2 == 0)
      throw PreconditionError("tight_regular_construction: the odd variant needs k odd (t-k-2 must be even)");
    if (t < k + 4) throw PreconditionError("tight_regular_construction: need t >= k+4");
  } else {
    if (k % 2 == 1) throw PreconditionError("tight_regular_construction: the even variant needs k even");
    if (t < k + 5) throw PreconditionError("tight_regular_construction: need t >= k+5");
  }
  const bool even = variant == TightVariant::Even;
  const int g0 = even ? t + 1 : t;
  const int n = g0 + k * t;
  std::set<Edge> edges;
  auto clique = [&](int base, int size) {
    for (int a = 0; a < size; ++a)
      for (int b = a + 1; b < size; ++b) edges.insert(Edge(base + a, base + b));
  };
  auto drop = [&](Vertex a, Vertex b) {
    if (edges.erase(Edge(a, b)) != 1) throw InternalError("tight_regular_construction: missing edge");
  };

  clique(0, g0);
  const int designated0 = even ? k + 3 : k + 2;
  for (int j = 1; j < designated0; ++j) drop(0, j);
  if (even) {
    for (int j = 1; j + 1 < designated0; j += 2) drop(j, j + 1);
    const int first = designated0;
    const int len = g0 - designated0;
    for (int a = 0; a < len; ++a) drop(first + a, first + (a + 1) % len);
  } else {
    for (int v = designated0; v + 1 < g0; v += 2) drop(v, v + 1);
  }

  for (int i = 1; i <= k; ++i) {
    const int base = g0 + (i - 1) * t;
    clique(base, t);
    drop(base, base + 1);
    drop(base, base + 2);
    for (int v = base + 3; v + 1 < base + t; v += 2) drop(v, v + 1);
    edges.insert(Edge(0, base));
  }

  const std::vector<Edge> list(edges.begin(), edges.end());
  TightConstruction c;
  c.graph = build_graph(n, list);
  c.k = k;
  c.t = t;
  c.r = n / (k + 1) - 2;
  c.witness = 0;
  c.variant = variant;
  if (c.graph.regular_degree() != c.r) throw InternalError("tight_regular_construction: graph is not r-regular");
  if (!is_connected(c.graph)) throw InternalError("tight_regular_construction: graph is disconnected");
  if (components_without(c.graph, 0) < k + 1) throw InternalError("tight_regular_construction: witness fails");
  return c;
}

}  // namespace bdst
