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

// Command-line front end: count, estimate, generate, nibble, construct,
// constants and bound. JSON on stdout (or --out); errors as a JSON object on
// stderr with exit code 1 (rejected hypothesis) or 2 (I/O or config).

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bdst.hpp"
#include "bdst/report.hpp"

namespace {

using bdst::Json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string graph_path;
  std::string gen;
  int k = 0;
  std::optional<int> s;
  std::optional<int> ell;
  std::optional<int> stages;
  std::string probs;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  double eps = 0.15;
  unsigned threads = 0;
  std::string out;
  std::string format = "json";
  bool timing = false;
  bool exact = false;
  std::uint64_t exact_cap = 10'000'000;  // d(G) cap for estimate, c(G) cap for count
  bool histogram = false;
  std::string mode = "general";
  std::string trees_dir;
  std::string variant = "tight";
  std::string parity = "auto";
  int t = 0;
  int n = 0;
  int r = 0;
  std::string k_range = "3..11";
  std::string regime = "regular";
  std::string edges_out;
};

std::map<std::string, std::string> parse_spec_args(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("generator spec: expected key=value, got '" + item + "'");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

long spec_int(const std::map<std::string, std::string>& args, const std::string& key,
              std::optional<long> fallback = std::nullopt) {
  const auto it = args.find(key);
  if (it == args.end()) {
    if (fallback) return *fallback;
    throw ConfigError("generator spec: missing '" + key + "'");
  }
  try {
    std::size_t used = 0;
    const long v = std::stol(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("generator spec: '" + key + "' is not an integer");
  }
}

/// regular:n=..,r=..[,seed=..] | complete:n=.. | cycle:n=.. | path:n=.. |
/// star:leaves=.. | bipartite:a=..,b=.. | tight:k=..,t=.. | counterexample:n=..,k=..
bdst::Graph generate_graph(const std::string& spec, std::uint64_t seed) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const auto args = colon == std::string::npos ? std::map<std::string, std::string>{}
                                                : parse_spec_args(spec.substr(colon + 1));
  try {
    if (kind == "regular")
      return bdst::random_regular(spec_int(args, "n"), spec_int(args, "r"),
                                  static_cast<std::uint64_t>(spec_int(args, "seed", static_cast<long>(seed))));
    if (kind == "complete") return bdst::complete_graph(spec_int(args, "n"));
    if (kind == "cycle") return bdst::cycle_graph(spec_int(args, "n"));
    if (kind == "path") return bdst::path_graph(spec_int(args, "n"));
    if (kind == "star") return bdst::star_graph(spec_int(args, "leaves"));
    if (kind == "bipartite") return bdst::complete_bipartite(spec_int(args, "a"), spec_int(args, "b"));
    if (kind == "tight") return bdst::tight_regular_construction(spec_int(args, "k"), spec_int(args, "t")).graph;
    if (kind == "counterexample") return bdst::bipartite_counterexample(spec_int(args, "n"), spec_int(args, "k"));
  } catch (const bdst::PreconditionError& e) {
    throw ConfigError(std::string("generator: ") + e.what());
  }
  throw ConfigError("unknown generator '" + kind + "'");
}

bdst::Graph load_graph(const Options& o) {
  if (!o.graph_path.empty() && !o.gen.empty()) throw ConfigError("give either --graph or --gen, not both");
  if (!o.gen.empty()) return generate_graph(o.gen, o.seed);
  if (o.graph_path.empty()) throw ConfigError("a graph is required (--graph PATH or --gen SPEC)");
  std::ifstream in(o.graph_path);
  if (!in) throw ConfigError("file not found: " + o.graph_path);
  try {
    return bdst::read_edge_list(in);
  } catch (const bdst::PreconditionError& e) {
    throw ConfigError(o.graph_path + ": " + e.what());
  }
}

Json graph_source(const Options& o) {
  Json j;
  if (!o.gen.empty())
    j["gen"] = o.gen;
  else
    j["path"] = o.graph_path;
  return j;
}

bdst::StagePlan resolve_plan(const Options& o, int k) {
  bdst::StagePlan plan;
  if (!o.probs.empty()) {
    std::stringstream ss(o.probs);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        plan.probs.push_back(std::stod(item));
      } catch (const std::logic_error&) {
        throw ConfigError("--probs: '" + item + "' is not a number");
      }
    }
    if (o.stages && *o.stages != plan.stages()) throw ConfigError("--probs length differs from --K");
  } else {
    const int stages = o.stages.value_or(k == 3 || k == 4 ? bdst::default_stage_count(k) : 2);
    if (stages < 1) throw ConfigError("--K must be at least 1");
    plan = bdst::StagePlan::uniform(stages);
  }
  try {
    plan.validate();
  } catch (const bdst::PreconditionError& e) {
    throw ConfigError(std::string("--probs: ") + e.what());
  }
  return plan;
}

void require_k(const Options& o, int lowest) {
  if (o.k < lowest) throw ConfigError("--k must be at least " + std::to_string(lowest));
}

Json cmd_count(const Options& o, Json& config) {
  require_k(o, 1);
  const auto g = load_graph(o);
  config["graph"] = graph_source(o);
  config["k"] = o.k;
  config["histogram"] = o.histogram;
  config["enum_cap"] = o.exact_cap;
  return bdst::count_json(g, o.k, o.histogram, o.exact_cap);
}

Json cmd_estimate(const Options& o, Json& config) {
  require_k(o, 2);
  if (o.trials < 1) throw ConfigError("--trials must be at least 1");
  const auto g = load_graph(o);
  bdst::require_no_isolated(g);
  const int n = g.num_vertices();
  const int s = o.s.value_or(bdst::default_s(n, o.k));
  const int ell = o.ell.value_or(bdst::default_ell(n));
  config["graph"] = graph_source(o);
  config["k"] = o.k;
  config["s"] = s;
  config["ell"] = ell;
  config["trials"] = o.trials;
  config["seed"] = o.seed;
  config["exact"] = o.exact;
  auto report = bdst::estimate_P(g, o.k, s, ell, o.trials, o.seed, o.threads);
  report.component_bound = (o.k + 1) * std::log(static_cast<double>(n));
  if (o.exact) {
    report.exact = bdst::exact_P(g, o.k, s, ell, o.exact_cap);
    report.exact_mean_components = bdst::exact_mean_components(g, o.exact_cap);
  }
  return bdst::to_json(report);
}

Json cmd_generate(const Options& o, Json& config) {
  require_k(o, 3);
  if (o.trials < 1) throw ConfigError("--trials must be at least 1");
  const auto g = load_graph(o);
  bdst::PipelineConfig cfg;
  cfg.k = o.k;
  cfg.plan = resolve_plan(o, o.k);
  cfg.s = o.s;
  cfg.ell = o.ell;
  if (o.mode == "regular")
    cfg.mode = bdst::PruneMode::Regular;
  else if (o.mode != "general")
    throw ConfigError("--mode must be general or regular");
  const int n = g.num_vertices();
  config["graph"] = graph_source(o);
  config["k"] = o.k;
  config["s"] = o.s.value_or(bdst::default_s(n, o.k));
  config["ell"] = o.ell.value_or(bdst::default_ell(n));
  config["K"] = cfg.plan.stages();
  config["probs"] = cfg.plan.probs;
  config["mode"] = o.mode;
  config["trials"] = o.trials;
  config["seed"] = o.seed;
  const auto tally = bdst::generate_trees(g, cfg, o.trials, o.seed, o.threads);
  Json result;
  result["graph"] = bdst::to_json(bdst::summarize(g));
  const auto cert = bdst::no_bounded_tree_certificate(g, o.k);
  result["certificate"] = cert ? Json(*cert) : Json(nullptr);
  result["generation"] = bdst::to_json(tally);
  if (!o.trees_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(o.trees_dir, ec);
    int index = 0;
    for (const auto& tree : tally.distinct) {
      const auto path = std::filesystem::path(o.trees_dir) / ("tree_" + std::to_string(index++) + ".edges");
      std::ofstream out(path);
      if (!out) throw ConfigError("cannot write " + path.string());
      out << bdst::to_edge_list(bdst::build_graph(n, tree));
    }
  }
  return result;
}

Json cmd_nibble(const Options& o, Json& config) {
  if (o.k != 3 && o.k != 4) throw ConfigError("nibble needs --k 3 or --k 4");
  if (o.trials < 1) throw ConfigError("--trials must be at least 1");
  if (!(o.eps >= 0.0)) throw ConfigError("--eps must be nonnegative");
  const auto g = load_graph(o);
  const int stages = o.stages.value_or(bdst::default_stage_count(o.k));
  config["graph"] = graph_source(o);
  config["k"] = o.k;
  config["K"] = stages;
  config["eps"] = o.eps;
  config["trials"] = o.trials;
  config["seed"] = o.seed;
  using Runs = std::vector<bdst::NibbleRun>;
  const auto runs = bdst::run_trials<Runs>(
      o.trials, o.seed, o.threads,
      [&](std::uint64_t t, bdst::Rng&, Runs& acc) {
        acc.push_back(bdst::run_nibble(g, o.k, stages, o.eps, bdst::derive_seed(o.seed, t)));
      },
      [](Runs& a, Runs& b) { std::move(b.begin(), b.end(), std::back_inserter(a)); });
  Json result;
  result["graph"] = bdst::to_json(bdst::summarize(g));
  std::vector<std::uint64_t> stage_pass(stages - 1, 0);
  std::uint64_t good = 0;
  std::uint64_t in_h = 0;
  Json detail = Json::array();
  for (const auto& run : runs) {
    for (std::size_t i = 0; i < run.history.size(); ++i) stage_pass[i] += run.history[i].check.passed();
    good += run.final_stage.every_prefix_good;
    in_h += run.final_stage.in_H && run.final_stage.in_H_star;
    detail.push_back(bdst::to_json(run));
  }
  Json summary;
  summary["runs"] = runs.size();
  summary["stage_success"] = stage_pass;
  summary["final_good"] = good;
  summary["final_in_H"] = in_h;
  result["summary"] = summary;
  result["runs"] = detail;
  return result;
}

Json cmd_construct(const Options& o, Json& config, std::string& edges_text) {
  config["variant"] = o.variant;
  Json result;
  bdst::Graph g;
  try {
    if (o.variant == "tight") {
      const auto parity = bdst::parse_tight_variant(o.parity);
      if (!parity) throw ConfigError("--parity must be auto, odd or even");
      config["k"] = o.k;
      config["t"] = o.t;
      config["parity"] = o.parity;
      const auto c = bdst::tight_regular_construction(o.k, o.t, *parity);
      g = c.graph;
      result["parity"] = bdst::to_string(c.variant);
      result["r"] = c.r;
      result["witness"] = c.witness;
    } else if (o.variant == "bipartite") {
      config["n"] = o.n;
      config["k"] = o.k;
      g = bdst::bipartite_counterexample(o.n, o.k);
    } else {
      throw ConfigError("--variant must be tight or bipartite");
    }
  } catch (const bdst::PreconditionError& e) {
    throw ConfigError(e.what());
  }
  result["graph"] = bdst::to_json(bdst::summarize(g));
  result["connected"] = bdst::is_connected(g);
  const auto cert = bdst::no_bounded_tree_certificate(g, o.k);
  result["certificate"] = cert ? Json(*cert) : Json(nullptr);
  if (cert) result["components_without_certificate"] = bdst::components_without(g, *cert);
  edges_text = bdst::to_edge_list(g);
  result["edges"] = bdst::edges_json(g.edges());
  return result;
}

std::vector<int> parse_k_range(const std::string& text) {
  std::vector<int> ks;
  std::stringstream ss(text);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) {
      const auto dots = item.find("..");
      if (dots == std::string::npos) {
        ks.push_back(std::stoi(item));
      } else {
        const int lo = std::stoi(item.substr(0, dots));
        const int hi = std::stoi(item.substr(dots + 2));
        for (int k = lo; k <= hi; ++k) ks.push_back(k);
      }
    }
  } catch (const std::logic_error&) {
    throw ConfigError("--k: expected a list like 5..11 or 3,4,5");
  }
  if (ks.empty()) throw ConfigError("--k: empty range");
  for (int k : ks)
    if (k < 3) throw ConfigError("--k: constants are defined for k >= 3");
  return ks;
}

Json cmd_constants(const Options& o, Json& config) {
  const auto ks = parse_k_range(o.k_range);
  config["k"] = o.k_range;
  Json rows = Json::array();
  for (int k : ks) rows.push_back(bdst::to_json(bdst::constants(k)));
  Json result;
  result["rows"] = rows;
  return result;
}

Json cmd_bound(const Options& o, Json& config) {
  require_k(o, 3);
  const auto regime = bdst::parse_regime(o.regime);
  if (!regime) throw ConfigError("--regime must be regular, nearly-regular or non-regular");
  config["k"] = o.k;
  config["regime"] = o.regime;
  if (!o.graph_path.empty() || !o.gen.empty()) {
    const auto g = load_graph(o);
    config["graph"] = graph_source(o);
    return bdst::to_json(bdst::theorem_bound(g, o.k, *regime));
  }
  if (o.n < 1 || o.r < 1) throw ConfigError("bound needs a graph or --n and --r");
  config["n"] = o.n;
  config["r"] = o.r;
  return bdst::to_json(bdst::theorem_bound(o.n, o.r, o.k, *regime));
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [key, v] : j.items()) flatten(v, prefix.empty() ? key : prefix + "." + key, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else {
    out.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

std::string render(const Json& report, const std::string& format, const std::string& command) {
  if (format == "json") return report.dump(2) + "\n";
  std::ostringstream os;
  if (format == "csv" && command == "constants") {
    os << "k,f_k,g_k,z_k,z_star_k\n";
    os.precision(10);
    for (const auto& row : report["result"]["rows"])
      os << row["k"].get<int>() << ',' << row["f_k"].get<double>() << ',' << row["g_k"].get<double>() << ','
         << row["z_k"].get<double>() << ',' << row["z_star_k"].get<double>() << '\n';
    return os.str();
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(report, "", rows);
  if (format == "csv") {
    os << "key,value\n";
    for (const auto& [key, v] : rows) os << key << ',' << v << '\n';
  } else {
    for (const auto& [key, v] : rows) os << key << ": " << v << '\n';
  }
  return os.str();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

int fail(int code, const std::string& kind, const std::string& message) {
  std::cerr << bdst::error_json(code, kind, message).dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded-degree spanning trees: exact counts, orientation model, repair pipeline"};
  app.require_subcommand(1);
  Options o;

  auto add_graph = [&](CLI::App* sub) {
    sub->add_option("--graph", o.graph_path, "edge-list file (header `n m`, then `u v` per line)");
    sub->add_option("--gen", o.gen, "generator, e.g. regular:n=60,r=12");
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "write the report here instead of stdout");
    sub->add_option("--format", o.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_flag("--timing", o.timing, "add wall time to the report (breaks byte-identical reruns)");
  };
  auto add_run = [&](CLI::App* sub) {
    sub->add_option("--trials,--runs", o.trials, "number of seeded trials");
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--threads", o.threads, "worker threads (0 = available parallelism)");
  };

  auto* count = app.add_subcommand("count", "exact c(G) and c_k(G)");
  add_graph(count);
  add_output(count);
  count->add_option("--k", o.k, "degree cap")->required();
  count->add_flag("--histogram", o.histogram, "bucket all spanning trees by maximum degree");
  count->add_option("--enum-cap", o.exact_cap, "largest c(G) to enumerate");

  auto* estimate = app.add_subcommand("estimate", "P_{k,s,ell} and component statistics");
  add_graph(estimate);
  add_output(estimate);
  add_run(estimate);
  estimate->add_option("--k", o.k, "degree cap")->required();
  estimate->add_option("--s", o.s, "allowed vertices at in-degree k-1 (default floor(n/(7k)))");
  estimate->add_option("--ell", o.ell, "allowed components (default ceil(ln n))");
  estimate->add_flag("--exact", o.exact, "also enumerate all d(G) orientations");
  estimate->add_option("--exact-cap", o.exact_cap, "largest d(G) to enumerate");

  auto* generate = app.add_subcommand("generate", "orientation -> forest -> tree pipeline");
  add_graph(generate);
  add_output(generate);
  add_run(generate);
  generate->add_option("--k", o.k, "degree cap")->required();
  generate->add_option("--s", o.s, "allowed vertices at in-degree k-1");
  generate->add_option("--ell", o.ell, "allowed components");
  generate->add_option("--K", o.stages, "number of stages");
  generate->add_option("--probs", o.probs, "stage probabilities p1,..,pK");
  generate->add_option("--mode", o.mode, "general or regular pruning");
  generate->add_option("--trees", o.trees_dir, "directory for the distinct trees");

  auto* nibble = app.add_subcommand("nibble", "staged nibble runs for k in {3,4}");
  add_graph(nibble);
  add_output(nibble);
  add_run(nibble);
  nibble->add_option("--k", o.k, "3 or 4")->required();
  nibble->add_option("--K", o.stages, "number of stages (default 20 for k=3, 5 for k=4)");
  nibble->add_option("--eps", o.eps, "relative band for the success items");

  auto* construct = app.add_subcommand("construct", "extremal graphs with c_k = 0");
  add_output(construct);
  construct->add_option("--variant", o.variant, "tight or bipartite");
  construct->add_option("--parity", o.parity, "tight construction variant: auto, odd or even");
  construct->add_option("--k", o.k, "degree cap")->required();
  construct->add_option("--t", o.t, "clique size (tight)");
  construct->add_option("--n", o.n, "vertex count (bipartite)");
  construct->add_option("--edges", o.edges_out, "also write the edge list here");

  auto* consts = app.add_subcommand("constants", "f_k, g_k, z_k, z*_k");
  add_output(consts);
  consts->add_option("--k", o.k_range, "list or range, e.g. 5..11");

  auto* bound = app.add_subcommand("bound", "lower bound on c_k(G)^{1/n} with hypothesis checks");
  add_graph(bound);
  add_output(bound);
  bound->add_option("--k", o.k, "degree cap")->required();
  bound->add_option("--n", o.n, "vertex count (without a graph)");
  bound->add_option("--r", o.r, "regular degree (without a graph)");
  bound->add_option("--regime", o.regime, "regular, nearly-regular or non-regular");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail(2, "config", e.what());
  }

  if (o.threads == 0) o.threads = bdst::default_threads();

  try {
    const auto start = std::chrono::steady_clock::now();
    Json config;
    Json result;
    std::string edges_text;
    std::string command;
    if (count->parsed()) {
      command = "count";
      result = cmd_count(o, config);
    } else if (estimate->parsed()) {
      command = "estimate";
      result = cmd_estimate(o, config);
    } else if (generate->parsed()) {
      command = "generate";
      result = cmd_generate(o, config);
    } else if (nibble->parsed()) {
      command = "nibble";
      result = cmd_nibble(o, config);
    } else if (construct->parsed()) {
      command = "construct";
      result = cmd_construct(o, config, edges_text);
    } else if (consts->parsed()) {
      command = "constants";
      result = cmd_constants(o, config);
    } else {
      command = "bound";
      result = cmd_bound(o, config);
    }
    config["format"] = o.format;
    Json report = bdst::envelope(command, config, result);
    if (o.timing)
      report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.edges_out.empty()) emit(edges_text, o.edges_out);
    emit(render(report, o.format, command), o.out);
    return 0;
  } catch (const ConfigError& e) {
    return fail(2, "config", e.what());
  } catch (const bdst::PreconditionError& e) {
    return fail(1, "precondition", e.what());
  } catch (const bdst::InternalError& e) {
    return fail(3, "internal", e.what());
  } catch (const std::exception& e) {
    return fail(2, "runtime", e.what());
  }
}
