// Copyright 2026 The Authors.
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
#include <stdexcept>
#include <string>
#include <vector>

#include "lms/matroid.hpp"

namespace lms {

// Malformed or invalid instance documents.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MatroidKind { kUniform, kPartition, kChain, kRandomLaminar };
enum class WeightDistribution { kUniform01, kExponential1, kPareto };

struct GeneratorSpec {
  MatroidKind kind = MatroidKind::kUniform;
  int n = 1;
  // uniform: single entry (the rank); partition: one capacity per part;
  // chain: strictly increasing capacities, innermost first; random_laminar:
  // unused (capacities are drawn).
  std::vector<int> capacities;
  int depth = 3;  // max nesting depth for random_laminar
  std::uint64_t seed = 0;
  WeightDistribution weights = WeightDistribution::kUniform01;
  double pareto_alpha = 2.0;
};

// Deterministic in the spec; the result always validates.
// Throws std::invalid_argument for infeasible specs.
LaminarMatroid generate(const GeneratorSpec& spec);

// Instance document: {"elements": [{id, weight}], "sets": [{id, capacity,
// parent, members}]}. Weights travel as decimal strings with 17 significant
// digits, so read(write(m)) reproduces them bit-exactly.
std::string instance_to_json(const LaminarMatroid& m);
LaminarMatroid instance_from_json(const std::string& text);

void write_instance(const LaminarMatroid& m, const std::string& path);
LaminarMatroid read_instance(const std::string& path);

}  // namespace lms
