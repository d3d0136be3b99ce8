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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Sizes and thresholds are pinned here.

#include <sys/wait.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "bdst.hpp"
#include "instances.hpp"
#include "oracles.hpp"

namespace {

using namespace bdst;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

double chi2_critical(double dof) {
  return boost::math::quantile(boost::math::complement(boost::math::chi_squared(dof), 0.001));
}

// 1. Constants table.
void constants_table(Verdict& v) {
  const std::pair<int, double> rows[] = {{5, 0.843148}, {6, 0.962200}, {7, 0.991935}, {8, 0.998565},
                                         {9, 0.999783}, {10, 0.999971}, {11, 0.999997}};
  double worst = 0.0;
  for (auto [k, z] : rows) worst = std::max(worst, std::abs(constants(k).z - z));
  v.require(worst <= 1e-6, "z_k row off by " + std::to_string(worst));
  v.require(std::abs(q_sequence(4) - 0.162038) <= 1e-6, "q_4");
  v.require(std::abs(q_sequence(19) - 0.045821) <= 1e-6, "q_19");
  v.require(constants(20).z_star > 0.956, "z*_20");
  v.detail << "max |z_k - table| = " << worst << ", q_4 = " << q_sequence(4) << ", q_19 = " << q_sequence(19)
           << ", z*_20 = " << constants(20).z_star;
}

std::vector<Graph> small_suite() {
  std::mt19937_64 gen(20260101);
  std::vector<Graph> out;
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + static_cast<int>(gen() % 7);
    const double p = 0.25 + 0.7 * std::uniform_real_distribution<double>()(gen);
    out.push_back(oracle::random_connected(n, p, gen));
  }
  return out;
}

// 2. Matrix-tree count equals enumeration.
void oracle_equivalence(Verdict& v) {
  int checked = 0;
  for (const Graph& g : small_suite()) {
    const BigCount c = count_spanning_trees(g);
    const auto e = enumerate_spanning_trees(g, [](const SpanningTree&) {});
    const auto brute = oracle::subset_tree_count(g);
    v.require(!e.truncated && BigCount(e.emitted) == c && BigCount(brute) == c,
              "n=" + std::to_string(g.num_vertices()) + " c=" + to_decimal(c));
    ++checked;
  }
  for (int n = 3; n <= 8; ++n) {
    BigCount cayley = 1;
    for (int i = 0; i < n - 2; ++i) cayley *= n;
    v.require(count_spanning_trees(complete_graph(n)) == cayley, "Cayley n=" + std::to_string(n));
  }
  v.detail << checked << " random graphs agree with enumeration and the subset oracle; Cayley n=3..8";
}

// 3. Bounded counts.
void bounded_counts(Verdict& v) {
  long fact = 1;
  for (int n = 3; n <= 5; ++n) {
    fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    v.require(count_bounded(complete_graph(n), 2) == fact / 2, "c_2(K_" + std::to_string(n) + ")");
  }
  int graphs = 0;
  for (const Graph& g : small_suite()) {
    const int n = g.num_vertices();
    const auto hist = oracle::subset_tree_histogram(g);
    BigCount prev = 0;
    for (int k = 1; k < n; ++k) {
      const BigCount ck = count_bounded(g, k);
      std::uint64_t expected = 0;
      for (const auto& [d, c] : hist)
        if (d <= k) expected += c;
      v.require(ck >= prev, "monotone in k");
      v.require(BigCount(expected) == ck, "c_k vs subset oracle");
      prev = ck;
    }
    v.require(count_bounded(g, std::max(1, n - 1)) == count_spanning_trees(g), "c_{n-1} = c");
    ++graphs;
  }
  v.detail << "c_2(K_n) = n!/2 for n=3..5; monotone and c_{n-1} = c on " << graphs << " graphs";
}

// 4. Forest extension property suite.
void extension_suite(Verdict& v) {
  std::mt19937_64 gen(4242);
  const std::vector<std::string> families{"mixed", "small", "u_to_w", "w_to_w"};
  std::map<std::string, int> by_case;
  std::map<std::string, int> by_family;
  int l1_checks = 0;
  int done = 0;
  while (done < 1000) {
    const int n = std::uniform_int_distribution<int>(20, 80)(gen);
    const int k = std::uniform_int_distribution<int>(3, 8)(gen);
    std::vector<std::string> feasible;
    for (const auto& f : families)
      if (instances::family_feasible(f, n, k)) feasible.push_back(f);
    const auto& family = feasible[gen() % feasible.size()];
    std::optional<instances::Instance> inst;
    try {
      inst = instances::draw(family, n, k, gen, 50);
    } catch (const std::runtime_error&) {
      continue;
    }
    const auto ext = extend_forest_once(inst->g, inst->f);
    const auto why = oracle::extension_violation(inst->g, k, inst->f.edge_list(), ext.forest.edge_list());
    v.require(why.empty(), family + " n=" + std::to_string(n) + " k=" + std::to_string(k) + ": " + why);
    if (ext.report.l1_size) {
      ++l1_checks;
      v.require((2 * k - 1) * *ext.report.l1_size <= n, "L1 bound");
    }
    ++by_case[ext.report.case_used];
    ++by_family[family];
    ++done;
  }
  v.detail << done << " instances (";
  for (const auto& [f, c] : by_family) v.detail << f << " " << c << " ";
  v.detail << "); cases:";
  for (const auto& [c, m] : by_case) v.detail << " " << c << "=" << m;
  v.detail << "; L1 bound checked " << l1_checks << " times";
  for (const char* c : {"a", "b", "c", "d"}) {
    bool seen = false;
    for (const auto& [label, m] : by_case) seen = seen || label.find(c) != std::string::npos;
    v.require(seen, std::string("case ") + c + " never reached");
  }
}

bool oracle_valid_tree(const Graph& g, const SpanningTree& t, int k) {
  for (const Edge& e : t)
    if (!g.has_edge(e.u, e.v)) return false;
  return oracle::is_tree(g.num_vertices(), t) && oracle::max_degree(g.num_vertices(), t) <= k;
}

// 5. Pipeline validity.
void pipeline_validity(Verdict& v) {
  std::ostringstream rates;
  for (int n : {30, 60, 120})
    for (int k : {3, 4, 5, 8}) {
      int r = (n + k) / (k + 1);
      if ((n * r) % 2) ++r;
      const Graph g = random_regular(n, r, 1000 + n + k);
      PipelineConfig cfg;
      cfg.k = k;
      cfg.plan = StagePlan::uniform(k == 3 ? 20 : k == 4 ? 5 : 2);
      const auto tally = generate_trees(g, cfg, 100, 77 + n * 10 + k, default_threads());
      v.require(tally.invalid == 0, "invalid tree at n=" + std::to_string(n) + " k=" + std::to_string(k));
      for (const auto& t : tally.distinct)
        v.require(oracle_valid_tree(g, t, k), "oracle rejects a tree at n=" + std::to_string(n));
      rates << " n" << n << "/k" << k << "=" << tally.produced;
    }
  for (int k : {2, 3}) {
    const auto tc = tight_regular_construction(k, 7);
    PipelineConfig cfg;
    cfg.k = k;
    const auto tally = generate_trees(tc.graph, cfg, 100, 5, 1);
    v.require(tally.produced == 0 && tally.invalid == 0, "tight construction emitted a tree");
    v.require(no_bounded_tree_certificate(tc.graph, k) == std::optional<Vertex>(tc.witness) && tc.witness == 0,
              "certificate");
  }
  v.detail << "trees produced per 100 runs:" << rates.str()
           << "; tight k=2 (n=22) and k=3 (n=28) emit 0 trees, witness vertex 0";
}

// Uniform chi-square on H(G) for a sampler.
bool uniform_ok(const Graph& g, const std::function<Orientation(Rng&)>& draw, std::uint64_t samples,
                std::uint64_t seed, double& stat) {
  std::map<std::vector<int>, std::uint64_t> counts;
  Rng rng(seed);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const auto o = draw(rng);
    ++counts[std::vector<int>(o.gamma.begin(), o.gamma.end())];
  }
  const auto cells = static_cast<std::uint64_t>(degree_product(g));
  stat = oracle::chi_square_uniform(counts, cells, samples);
  return stat <= chi2_critical(static_cast<double>(cells - 1));
}

// 6. Orientation model.
void orientation_model(Verdict& v) {
  const std::uint64_t samples = 100'000;
  for (const auto& [name, g] : {std::pair{"triangle", complete_graph(3)}, std::pair{"C4", cycle_graph(4)}}) {
    double stat = 0.0;
    v.require(uniform_ok(g, [&](Rng& r) { return sample_orientation(g, r); }, samples, 11, stat),
              std::string(name) + " one-shot");
    v.detail << name << " chi2=" << stat << "; ";
    for (int K : {2, 5}) {
      v.require(uniform_ok(g, [&](Rng& r) { return k_stage_sample(g, StagePlan::uniform(K), r).composite; },
                           samples, 12 + K, stat),
                std::string(name) + " K=" + std::to_string(K));
      v.detail << name << " K=" << K << " chi2=" << stat << "; ";
    }
  }
  v.detail << "critical(7)=" << chi2_critical(7) << " critical(15)=" << chi2_critical(15) << "; ";

  const int n = 100;
  const int r = 50;
  const Graph g = random_regular(n, r, 31);
  const std::uint64_t trials = 4000;
  std::vector<std::uint64_t> hits(6, 0);
  Rng rng(32);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto in = in_degrees(sample_orientation(g, rng));
    for (int d : in)
      if (d <= 5) ++hits[d];
  }
  double worst = 0.0;
  for (int i = 0; i <= 5; ++i) {
    const double p = oracle::binomial_pmf(r, i);
    const double freq = static_cast<double>(hits[i]) / (n * trials);
    const double se = std::sqrt(p * (1 - p) / (n * trials));
    worst = std::max(worst, std::abs(freq - p) / se);
  }
  v.require(worst <= 4.0, "in-degree law");
  v.detail << "in-degree law worst |z| = " << worst << " over i<=5";
}

Graph petersen() {
  std::vector<Edge> e;
  for (int i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(i, i + 5);
    e.emplace_back(5 + i, 5 + (i + 2) % 5);
  }
  return build_graph(10, e);
}

Graph cube() {
  std::vector<Edge> e;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 3; ++b)
      if (a < (a ^ (1 << b))) e.emplace_back(a, a ^ (1 << b));
  return build_graph(8, e);
}

Graph wheel(int rim) {
  std::vector<Edge> e;
  for (int i = 1; i <= rim; ++i) {
    e.emplace_back(0, i);
    e.emplace_back(i, i % rim + 1);
  }
  return build_graph(rim + 1, e);
}

// 7. Exact P against Monte-Carlo.
void estimation(Verdict& v) {
  struct Case {
    std::string name;
    Graph g;
    int k, s, ell;
  };
  const std::vector<Case> cases{
      {"K3", complete_graph(3), 3, 0, 1},       {"K4", complete_graph(4), 3, 0, 1},
      {"K4b", complete_graph(4), 3, 2, 1},      {"C5", cycle_graph(5), 3, 1, 1},
      {"K23", complete_bipartite(2, 3), 3, 1, 1}, {"K5", complete_graph(5), 3, 1, 2},
      {"K33", complete_bipartite(3, 3), 3, 2, 1}, {"W5", wheel(5), 4, 1, 1},
      {"Q3", cube(), 3, 2, 2},                   {"Petersen", petersen(), 3, 3, 2},
  };
  int idx = 0;
  for (const auto& c : cases) {
    v.require(degree_product(c.g) <= 100000, c.name + " too large");
    const auto ex = exact_P(c.g, c.k, c.s, c.ell);
    const auto mc = estimate_P(c.g, c.k, c.s, c.ell, 100'000, 700 + idx++, default_threads());
    const double half = (mc.ci_high - mc.ci_low) / 2;
    const double gap = std::abs(mc.estimate - ex.value());
    v.require(gap <= 4 * half, c.name);
    v.detail << c.name << " P=" << ex.value() << " |gap|/hw=" << (half > 0 ? gap / half : 0.0) << "; ";
  }
}

// 8. Expected component count.
void component_count(Verdict& v) {
  const int n = 200;
  for (int k : {4, 9}) {
    const int r = (n + k) / (k + 1);
    const Graph g = random_regular(n, r, 800 + k);
    const auto rep = component_expectation_check(g, k, 10'000, 900 + k, default_threads());
    v.require(rep.mean_components <= (k + 1) * std::log(static_cast<double>(n)), "k=" + std::to_string(k));
    v.detail << "k=" << k << " r=" << r << " mean=" << rep.mean_components << " bound=" << rep.component_bound
             << "; ";
  }
}

// 9. removal_cost_Q against brute force.
void removal_cost(Verdict& v) {
  std::mt19937_64 gen(9090);
  Rng rng(9091);
  int checks = 0;
  for (int i = 0; i < 100; ++i) {
    const int n = 3 + static_cast<int>(gen() % 6);
    const Graph g = oracle::random_connected(n, 0.5, gen);
    const auto o = sample_orientation(g, rng);
    for (int t : {3, 4}) {
      const long q = removal_cost_Q(o, t);
      const int brute = oracle::brute_force_min_deletion(std::vector<int>(o.gamma.begin(), o.gamma.end()), t);
      v.require(q == brute, "n=" + std::to_string(n) + " t=" + std::to_string(t));
      ++checks;
    }
  }
  v.detail << checks << " (orientation, t) pairs match brute-force minimum deletion";
}

std::string run_cli(const std::string& args) {
  const std::string cmd = std::string(BDST_CLI_PATH) + " " + args + " 2>/dev/null";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return "<popen failed>";
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) out += "<exit " + std::to_string(WEXITSTATUS(status)) + ">";
  return out;
}

// 10. Determinism.
void determinism(Verdict& v) {
  const std::vector<std::string> cmds{
      "estimate --gen regular:n=60,r=12 --k 4 --trials 5000 --exact-cap 0 --seed 3",
      "generate --gen regular:n=60,r=12 --k 4 --runs 60 --K 5 --seed 3",
      "nibble --gen regular:n=120,r=40 --k 3 --K 8 --runs 6 --seed 3",
      "nibble --gen regular:n=100,r=30 --k 4 --runs 6 --seed 3",
  };
  for (const auto& c : cmds) {
    const auto a = run_cli(c + " --threads 1");
    const auto b = run_cli(c + " --threads 1");
    const auto d = run_cli(c + " --threads 4");
    v.require(a.find("<exit") == std::string::npos && a == b && a == d, c);
  }
  const Graph g = random_regular(60, 12, 1);
  const auto p1 = estimate_P(g, 4, 2, 5, 3000, 8, 1);
  const auto p4 = estimate_P(g, 4, 2, 5, 3000, 8, 4);
  v.require(p1.successes == p4.successes && p1.component_histogram == p4.component_histogram &&
                p1.in_degree_histogram == p4.in_degree_histogram,
            "estimate_P across threads");
  PipelineConfig cfg;
  cfg.k = 4;
  const auto t1 = generate_trees(g, cfg, 50, 8, 1);
  const auto t4 = generate_trees(g, cfg, 50, 8, 4);
  v.require(t1.distinct == t4.distinct && t1.status == t4.status, "generate_trees across threads");
  v.detail << cmds.size() << " CLI commands byte-identical across reruns and --threads 1/4; library tallies equal";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    double budget;
    std::function<void(Verdict&)> body;
  };
  const std::vector<Criterion> criteria{
      {1, "constants", 1.0, constants_table},
      {2, "oracle equivalence", 30.0, oracle_equivalence},
      {3, "bounded counts", 30.0, bounded_counts},
      {4, "forest extension suite", 120.0, extension_suite},
      {5, "pipeline validity", 300.0, pipeline_validity},
      {6, "orientation model", 120.0, orientation_model},
      {7, "P estimation", 180.0, estimation},
      {8, "component expectation", 120.0, component_count},
      {9, "removal cost", 30.0, removal_cost},
      {10, "determinism", 600.0, determinism},
  };
  int failures = 0;
  for (const auto& [id, name, budget, body] : criteria) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      body(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.require(secs <= budget, "runtime " + std::to_string(secs) + " s over budget");
    failures += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << name << ", " << secs << " s): "
              << v.detail.str() << std::endl;
  }
  std::cout << (failures ? "FAIL" : "PASS") << " acceptance: " << 10 - failures << "/10 criteria passed" << std::endl;
  return failures ? 1 : 0;
}
