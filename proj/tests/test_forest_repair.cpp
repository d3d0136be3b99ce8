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

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "bdst/forest_repair.hpp"
#include "bdst/graph.hpp"
#include "instances.hpp"
#include "oracles.hpp"

namespace {

using namespace bdst;

TEST(BoundedForest, TracksDegreesAndWVertices) {
  BoundedForest f(5, 2, {{0, 1}, {1, 2}, {3, 4}});
  EXPECT_EQ(f.num_edges(), 3);
  EXPECT_EQ(f.w_count(), 1);
  EXPECT_TRUE(f.is_w(1));
  EXPECT_TRUE(f.is_u(0));
  EXPECT_TRUE(f.is_acyclic());
  EXPECT_EQ(f.max_degree(), 2);
  EXPECT_THROW(f.add_edge(Edge(1, 0)), InternalError);
  f.add_edge(Edge(2, 0));
  EXPECT_FALSE(f.is_acyclic());
}

TEST(ExtendOnce, PathThreeAddsMissingEdge) {
  const Graph g = path_graph(3);
  const auto ext = extend_forest_once(g, BoundedForest(3, 3, {{0, 1}}));
  EXPECT_EQ(ext.report.case_used, "a");
  ASSERT_EQ(ext.report.edges_added.size(), 1u);
  EXPECT_EQ(ext.report.edges_added[0], Edge(1, 2));
  EXPECT_TRUE(ext.report.edges_removed.empty());
  EXPECT_EQ(ext.forest.num_edges(), 2);
}

TEST(ExtendOnce, CompleteFourJoinsIsolatedVertex) {
  const Graph g = complete_graph(4);
  const BoundedForest f(4, 3, {{0, 1}, {1, 2}});
  const auto ext = extend_forest_once(g, f);
  EXPECT_EQ(ext.report.case_used, "a");
  EXPECT_EQ(ext.forest.num_edges(), 3);
  EXPECT_EQ(oracle::extension_violation(g, 3, f.edge_list(), ext.forest.edge_list()), "");
}

TEST(ExtendOnce, RejectsCapBelowThree) {
  EXPECT_THROW(extend_forest_once(cycle_graph(6), BoundedForest(6, 2, {{0, 1}})), PreconditionError);
}

TEST(ExtendOnce, RejectsSpanningTreeInput) {
  EXPECT_THROW(extend_forest_once(path_graph(3), BoundedForest(3, 3, {{0, 1}, {1, 2}})), PreconditionError);
}

TEST(ExtendOnce, NamesViolatedHypothesis) {
  // Minimum degree 1 < 8/4 on a path of 8 vertices.
  auto why = extension_hypothesis_violation(path_graph(8), BoundedForest(8, 3, {{0, 1}}));
  ASSERT_TRUE(why);
  EXPECT_NE(why->find("minimum degree"), std::string::npos);

  // Forest edge outside G.
  why = extension_hypothesis_violation(cycle_graph(4), BoundedForest(4, 3, {{0, 2}}));
  ASSERT_TRUE(why);
  EXPECT_NE(why->find("not in G"), std::string::npos);

  // Over-cap forest.
  const Graph k6 = complete_graph(6);
  why = extension_hypothesis_violation(k6, BoundedForest(6, 3, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}));
  ASSERT_TRUE(why);
  EXPECT_NE(why->find("maximum degree"), std::string::npos);

  // Cycle in F.
  why = extension_hypothesis_violation(k6, BoundedForest(6, 3, {{0, 1}, {1, 2}, {2, 0}}));
  ASSERT_TRUE(why);
  EXPECT_NE(why->find("cyclic"), std::string::npos);

  // One W-vertex on six vertices exceeds 6/(6.8*3).
  why = extension_hypothesis_violation(k6, BoundedForest(6, 3, {{0, 1}, {0, 2}, {0, 3}}));
  ASSERT_TRUE(why);
  EXPECT_NE(why->find("w_count"), std::string::npos);

  // Disconnected G.
  why = extension_hypothesis_violation(build_graph(4, {{0, 1}, {2, 3}}), BoundedForest(4, 3));
  ASSERT_TRUE(why);
  EXPECT_NE(why->find("not connected"), std::string::npos);

  EXPECT_FALSE(extension_hypothesis_violation(k6, BoundedForest(6, 3, {{0, 1}})));
}

TEST(ExtendOnce, SmallComponentForcesCaseB) {
  std::mt19937_64 gen(7);
  const auto inst = instances::draw("small", 60, 3, gen);
  const auto ext = extend_forest_once(inst.g, inst.f);
  EXPECT_EQ(ext.report.case_chain.front(), "b");
  ASSERT_TRUE(ext.report.b_adjacent.has_value());
  EXPECT_EQ(oracle::extension_violation(inst.g, 3, inst.f.edge_list(), ext.forest.edge_list()), "");
}

struct FamilyParam {
  std::string family;
  char expected_first;
};

class ExtendFamilies : public ::testing::TestWithParam<FamilyParam> {};

TEST_P(ExtendFamilies, PostconditionsHoldAndCaseIsReached) {
  const auto [family, expected] = GetParam();
  std::mt19937_64 gen(1000 + expected);
  std::map<std::string, int> chains;
  int drawn = 0;
  int hit = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = std::uniform_int_distribution<int>(20, 80)(gen);
    const int k = std::uniform_int_distribution<int>(3, 8)(gen);
    if (!instances::family_feasible(family, n, k)) continue;
    instances::Instance inst;
    try {
      inst = instances::draw(family, n, k, gen, 50);
    } catch (const std::runtime_error&) {
      continue;
    }
    ++drawn;
    const auto ext = extend_forest_once(inst.g, inst.f);
    const auto& r = ext.report;
    ASSERT_EQ(oracle::extension_violation(inst.g, k, inst.f.edge_list(), ext.forest.edge_list()), "")
        << family << " n=" << n << " k=" << k << " case " << r.case_used;
    EXPECT_EQ(r.w_count_before, inst.f.w_count());
    EXPECT_EQ(r.w_count_after, ext.forest.w_count());
    EXPECT_EQ(static_cast<int>(r.edges_added.size() - r.edges_removed.size()), 1);
    EXPECT_LE(r.case_chain.size(), 3u);
    if (r.l1_size) {
      EXPECT_TRUE(r.l1_bound_holds.value_or(false));
      EXPECT_LE((2 * k - 1) * *r.l1_size, n);
    }
    hit += r.case_chain.front()[0] == expected;
    std::string key;
    for (const auto& c : r.case_chain) key += c;
    ++chains[key];
  }
  ASSERT_GT(drawn, 20) << family;
  EXPECT_EQ(hit, drawn) << family << " did not always open with case " << expected;
}

INSTANTIATE_TEST_SUITE_P(Families, ExtendFamilies,
                         ::testing::Values(FamilyParam{"mixed", 'a'}, FamilyParam{"small", 'b'},
                                           FamilyParam{"u_to_w", 'c'}, FamilyParam{"w_to_w", 'd'}),
                         [](const auto& info) { return info.param.family; });

TEST(Repair, TreeInputIsReturnedUnchanged) {
  const Graph g = complete_graph(8);
  const BoundedForest f(8, 3, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}});
  const auto res = repair_to_spanning_tree(g, f);
  ASSERT_TRUE(res.tree);
  EXPECT_TRUE(res.trail.empty());
  EXPECT_EQ(*res.tree, f.edge_list());
  EXPECT_EQ(res.new_edges, 0);
  EXPECT_EQ(res.lost_edges, 0);
}

TEST(Repair, EmptyForestOnCompleteGraph) {
  const Graph g = complete_graph(12);
  const auto res = repair_to_spanning_tree(g, BoundedForest(12, 3));
  ASSERT_TRUE(res.tree) << res.failure;
  EXPECT_TRUE(oracle::is_tree(12, *res.tree));
  EXPECT_LE(oracle::max_degree(12, *res.tree), 3);
  EXPECT_EQ(res.trail.size(), 11u);
}

TEST(Repair, RejectsBadEntryState) {
  const Graph g = complete_graph(12);
  EXPECT_THROW(repair_to_spanning_tree(g, BoundedForest(12, 2)), PreconditionError);
  // Few edges on a large graph: n - c ln n with c = 1.
  RepairConfig cfg;
  cfg.log_edge_factor = 1.0;
  EXPECT_THROW(repair_to_spanning_tree(complete_graph(40), BoundedForest(40, 3), cfg), PreconditionError);
}

TEST(Repair, RegularGraphForestsBecomeBoundedTrees) {
  const int n = 60;
  const int k = 4;
  const Graph g = random_regular(n, 12, 5);
  std::mt19937_64 gen(11);
  int runs = 0;
  for (int attempt = 0; attempt < 2000 && runs < 200; ++attempt) {
    // Bounded spanning tree of G by a random capped DFS, then random deletions.
    std::vector<Vertex> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::vector<int> deg(n, 0);
    std::vector<char> seen(n, 0);
    std::vector<Edge> tree;
    std::vector<Vertex> stack{static_cast<Vertex>(gen() % n)};
    seen[stack[0]] = 1;
    while (!stack.empty()) {
      const Vertex v = stack.back();
      std::vector<Vertex> nb;
      if (deg[v] < k - 1 || (deg[v] < k && gen() % 8 == 0))
        for (Vertex w : g.neighbors(v))
          if (!seen[w]) nb.push_back(w);
      if (nb.empty()) {
        stack.pop_back();
        continue;
      }
      const Vertex w = nb[gen() % nb.size()];
      seen[w] = 1;
      ++deg[v];
      ++deg[w];
      tree.emplace_back(v, w);
      stack.push_back(w);
    }
    std::shuffle(tree.begin(), tree.end(), gen);
    tree.resize(tree.size() - std::min<std::size_t>(tree.size(), 1 + gen() % 12));
    const BoundedForest f(n, k, tree);
    if (!within_w_budget(f.w_count(), n, k, 7.0)) continue;
    ++runs;
    const auto res = repair_to_spanning_tree(g, f);
    ASSERT_TRUE(res.tree) << res.failure;
    EXPECT_TRUE(oracle::is_tree(n, *res.tree));
    EXPECT_LE(oracle::max_degree(n, *res.tree), k);
    const int missing = n - 1 - f.num_edges();
    EXPECT_EQ(static_cast<int>(res.trail.size()), missing);
    EXPECT_LE(res.lost_edges, 3 * missing);
    EXPECT_EQ(res.new_edges - res.lost_edges, missing);
    std::vector<Edge> cur = f.edge_list();
    for (const auto& step : res.trail) {
      std::set<Edge> s(cur.begin(), cur.end());
      for (const Edge& e : step.edges_removed) s.erase(e);
      for (const Edge& e : step.edges_added) s.insert(e);
      std::vector<Edge> next(s.begin(), s.end());
      ASSERT_EQ(oracle::extension_violation(g, k, cur, next), "");
      cur = std::move(next);
    }
    EXPECT_EQ(cur, *res.tree);
  }
  EXPECT_EQ(runs, 200);
}

}  // namespace
