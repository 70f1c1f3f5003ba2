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
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace lms {

using ElementId = std::int64_t;

struct Element {
  ElementId id;
  double weight;  // strictly positive, pairwise distinct within an instance
};

// One capacity-constrained set of the laminar family, as declared by a
// builder or an instance file. `parent` names the enclosing set, if any.
struct SetSpec {
  std::int64_t id = 0;
  int capacity = 1;
  std::optional<std::int64_t> parent;
  std::vector<ElementId> members;
};

// Node of the laminar forest in dense form. Members are element indices,
// sorted ascending; they include the members of all descendant nodes.
struct FamilyNode {
  std::int64_t set_id = 0;
  int capacity = 1;
  int parent = -1;             // index into nodes(), -1 for roots
  std::vector<int> children;   // indices into nodes()
  std::vector<int> members;    // element indices, sorted ascending
  int depth = 0;               // 0 for roots
};

struct IndependentSet {
  std::vector<ElementId> elements;  // sorted ascending
};

// Ground set plus a forest of capacity-constrained nested sets. A subset of
// elements is independent iff it has at most node.capacity elements inside
// every node of the forest. Immutable after construction and safe to share
// across threads.
class LaminarMatroid {
 public:
  LaminarMatroid() = default;
  LaminarMatroid(std::vector<Element> elements, std::vector<SetSpec> sets);

  int num_elements() const { return static_cast<int>(elements_.size()); }
  const std::vector<Element>& elements() const { return elements_; }
  double weight(int index) const { return elements_[index].weight; }
  ElementId id_of(int index) const { return elements_[index].id; }
  bool contains(ElementId id) const { return index_by_id_.count(id) > 0; }
  // Throws std::invalid_argument for ids outside the ground set.
  int index_of(ElementId id) const;

  const std::vector<FamilyNode>& nodes() const { return nodes_; }
  // Deepest family node containing the element, -1 if unconstrained.
  int deepest_node(int elem_index) const { return deepest_[elem_index]; }

  // Empty list means every invariant holds.
  const std::vector<std::string>& validate() const { return violations_; }
  bool is_valid() const { return violations_.empty(); }

  bool is_independent(const std::vector<ElementId>& ids) const;
  bool is_independent_indices(std::span<const int> indices) const;

  // Equivalent matroid in which capacities are strictly increasing along
  // every chain of nested sets and no set's capacity is vacuous.
  LaminarMatroid normalized() const;

  // Submatroid with ground set `keep`; independence agrees with this
  // matroid on subsets of `keep`.
  LaminarMatroid restricted(const std::vector<ElementId>& keep) const;

  // Size of a maximum-cardinality independent set.
  int rank() const;

  // Declaration view of the forest, e.g. for serialization.
  std::vector<SetSpec> set_specs() const;

 private:
  void check_valid(const char* op) const;

  std::vector<Element> elements_;
  std::unordered_map<ElementId, int> index_by_id_;
  std::vector<FamilyNode> nodes_;
  std::vector<int> deepest_;
  std::vector<std::string> violations_;
};

// Per-node usage counters for a growing selection. can_add/add/remove are
// O(depth of the element's chain); the matroid outlives the counter.
class IndependenceCounter {
 public:
  explicit IndependenceCounter(const LaminarMatroid& m)
      : matroid_(&m), used_(m.nodes().size(), 0) {}

  bool can_add(int elem_index) const;
  void add(int elem_index);
  void remove(int elem_index);
  void reset();
  int used(int node_index) const { return used_[node_index]; }

 private:
  const LaminarMatroid* matroid_;
  std::vector<int> used_;
};

// Maximum-weight independent subset of `available`: greedy by descending
// weight (id ascending as tie key), keeping each element that still fits.
// With distinct weights the result is the unique optimum.
std::vector<int> offline_opt_indices(const LaminarMatroid& m,
                                     std::span<const int> available);
IndependentSet offline_opt(const LaminarMatroid& m,
                           const std::vector<ElementId>& available);

// Exhaustive maximum-weight independent subset; test oracle. Throws
// std::invalid_argument when |available| exceeds 20.
std::vector<int> brute_force_opt_indices(const LaminarMatroid& m,
                                         std::span<const int> available);
IndependentSet brute_force_opt(const LaminarMatroid& m,
                               const std::vector<ElementId>& available);

double total_weight(const LaminarMatroid& m, std::span<const int> indices);

}  // namespace lms
