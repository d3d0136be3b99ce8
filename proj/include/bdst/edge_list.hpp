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

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bdst/graph.hpp"

namespace bdst {

/// Edge-list text format: a header line `n m` followed by m lines `u v`
/// (0-based, undirected). Duplicate edges and self-loops are rejected.
inline Graph read_edge_list(std::istream& in) {
  long n = -1;
  long m = -1;
  if (!(in >> n >> m) || n < 0 || m < 0)
    throw PreconditionError("edge list: malformed header, expected `n m`");
  std::vector<Edge> edges;
  std::set<Edge> seen;
  for (long i = 0; i < m; ++i) {
    long u = 0;
    long v = 0;
    if (!(in >> u >> v))
      throw PreconditionError("edge list: expected " + std::to_string(m) + " edges, found " +
                              std::to_string(i));
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw PreconditionError("edge list line " + std::to_string(i + 2) + ": endpoint out of range");
    if (u == v)
      throw PreconditionError("edge list line " + std::to_string(i + 2) + ": self-loop at " +
                              std::to_string(u));
    const Edge e(static_cast<Vertex>(u), static_cast<Vertex>(v));
    if (!seen.insert(e).second)
      throw PreconditionError("edge list line " + std::to_string(i + 2) + ": duplicate edge " +
                              edge_to_string(e));
    edges.push_back(e);
  }
  std::string extra;
  if (in >> extra) throw PreconditionError("edge list: trailing content after " + std::to_string(m) + " edges");
  return build_graph(static_cast<int>(n), edges);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

inline std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  write_edge_list(out, g);
  return out.str();
}

inline Graph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return read_edge_list(in);
}

}  // namespace bdst
