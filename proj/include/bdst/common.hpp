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
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace bdst {

using Vertex = std::int32_t;

/// Undirected edge stored with `u < v`.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Edge() = default;
  Edge(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {}

  friend auto operator<=>(const Edge&, const Edge&) = default;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Directed edge (arc) `from -> to`.
struct Arc {
  Vertex from = 0;
  Vertex to = 0;

  friend auto operator<=>(const Arc&, const Arc&) = default;
  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Exact unsigned count. Spanning-tree counts and degree products overflow
/// 64 bits well before n = 60.
using BigCount = boost::multiprecision::cpp_int;

/// A violated hypothesis or malformed input. The CLI maps this to exit code 1.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A proof step that should always succeed under its hypotheses did not.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline std::string to_decimal(const BigCount& value) { return value.str(); }

/// Natural log of a positive big integer; -inf for zero.
inline double log_big(const BigCount& value) {
  if (value <= 0) return -INFINITY;
  const auto bits = static_cast<long>(boost::multiprecision::msb(value)) + 1;
  if (bits <= 60) return std::log(value.convert_to<double>());
  const long shift = bits - 60;
  const BigCount top = value >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

}  // namespace bdst
