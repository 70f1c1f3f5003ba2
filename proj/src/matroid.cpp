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

#include "lms/matroid.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <limits>
#include <stdexcept>

namespace lms {

namespace {

std::string set_name(const FamilyNode& node) {
  return "set " + std::to_string(node.set_id);
}

}  // namespace

LaminarMatroid::LaminarMatroid(std::vector<Element> elements,
                               std::vector<SetSpec> sets)
    : elements_(std::move(elements)) {
  index_by_id_.reserve(elements_.size());
  for (int i = 0; i < static_cast<int>(elements_.size()); ++i) {
    auto [it, inserted] = index_by_id_.emplace(elements_[i].id, i);
    if (!inserted) {
      violations_.push_back("duplicate element id " +
                            std::to_string(elements_[i].id));
    }
  }

  // Bind set declarations to dense indices.
  std::unordered_map<std::int64_t, int> node_by_set_id;
  nodes_.reserve(sets.size());
  for (const SetSpec& spec : sets) {
    FamilyNode node;
    node.set_id = spec.id;
    node.capacity = spec.capacity;
    auto [it, inserted] =
        node_by_set_id.emplace(spec.id, static_cast<int>(nodes_.size()));
    if (!inserted) {
      violations_.push_back("duplicate set id " + std::to_string(spec.id));
    }
    for (ElementId id : spec.members) {
      auto found = index_by_id_.find(id);
      if (found == index_by_id_.end()) {
        violations_.push_back(set_name(node) + " references element " +
                              std::to_string(id) + " outside the ground set");
        continue;
      }
      node.members.push_back(found->second);
    }
    std::sort(node.members.begin(), node.members.end());
    auto dup = std::adjacent_find(node.members.begin(), node.members.end());
    if (dup != node.members.end()) {
      violations_.push_back(set_name(node) + " lists element " +
                            std::to_string(elements_[*dup].id) + " twice");
      node.members.erase(std::unique(node.members.begin(), node.members.end()),
                         node.members.end());
    }
    nodes_.push_back(std::move(node));
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (!sets[i].parent) continue;
    auto found = node_by_set_id.find(*sets[i].parent);
    if (found == node_by_set_id.end()) {
      violations_.push_back(set_name(nodes_[i]) + " names unknown parent set " +
                            std::to_string(*sets[i].parent));
    } else if (found->second == static_cast<int>(i)) {
      violations_.push_back(set_name(nodes_[i]) + " is its own parent");
    } else {
      nodes_[i].parent = found->second;
    }
  }

  // Depths, children, and cycle detection along parent chains.
  std::vector<int> state(nodes_.size(), 0);  // 0 new, 1 visiting, 2 done
  std::function<bool(int)> resolve = [&](int n) -> bool {
    if (state[n] == 2) return true;
    if (state[n] == 1) return false;  // cycle
    state[n] = 1;
    int p = nodes_[n].parent;
    if (p == -1) {
      nodes_[n].depth = 0;
    } else if (resolve(p)) {
      nodes_[n].depth = nodes_[p].depth + 1;
    } else {
      nodes_[n].parent = -1;  // break the cycle; already reported
      nodes_[n].depth = 0;
      state[n] = 2;
      return true;
    }
    state[n] = 2;
    return true;
  };
  for (int n = 0; n < static_cast<int>(nodes_.size()); ++n) {
    if (state[n] == 0 && !resolve(n)) {
      violations_.push_back(set_name(nodes_[n]) +
                            " participates in a parent cycle");
      resolve(n);
    }
  }
  for (int n = 0; n < static_cast<int>(nodes_.size()); ++n) {
    if (nodes_[n].parent != -1) nodes_[nodes_[n].parent].children.push_back(n);
  }

  // Semantic invariants.
  for (const FamilyNode& node : nodes_) {
    if (node.capacity < 1) {
      violations_.push_back(set_name(node) + " has capacity " +
                            std::to_string(node.capacity) + " < 1");
    }
    if (node.parent != -1) {
      const FamilyNode& parent = nodes_[node.parent];
      bool subset = std::includes(parent.members.begin(), parent.members.end(),
                                  node.members.begin(), node.members.end());
      if (!subset) {
        violations_.push_back(set_name(node) + " is not a subset of its parent " +
                              set_name(parent));
      } else if (node.members.size() == parent.members.size()) {
        violations_.push_back(set_name(node) + " equals its parent " +
                              set_name(parent) + "; nesting must be strict");
      }
    }
  }
  // Sibling groups (children of one node, or the roots) must be disjoint.
  auto check_disjoint = [&](const std::vector<int>& group) {
    std::vector<int> owner(elements_.size(), -1);
    for (int n : group) {
      for (int e : nodes_[n].members) {
        if (owner[e] != -1) {
          violations_.push_back("sets " + std::to_string(nodes_[owner[e]].set_id) +
                                " and " + std::to_string(nodes_[n].set_id) +
                                " overlap without nesting");
        } else {
          owner[e] = n;
        }
      }
    }
  };
  std::vector<int> roots;
  for (int n = 0; n < static_cast<int>(nodes_.size()); ++n) {
    if (nodes_[n].parent == -1) roots.push_back(n);
  }
  check_disjoint(roots);
  for (const FamilyNode& node : nodes_) check_disjoint(node.children);

  for (const Element& e : elements_) {
    if (!(e.weight > 0.0)) {
      violations_.push_back("element " + std::to_string(e.id) +
                            " has non-positive weight");
    }
  }
  {
    std::vector<std::pair<double, ElementId>> by_weight;
    by_weight.reserve(elements_.size());
    for (const Element& e : elements_) by_weight.emplace_back(e.weight, e.id);
    std::sort(by_weight.begin(), by_weight.end());
    for (std::size_t i = 1; i < by_weight.size(); ++i) {
      if (by_weight[i].first == by_weight[i - 1].first) {
        violations_.push_back("elements " + std::to_string(by_weight[i - 1].second) +
                              " and " + std::to_string(by_weight[i].second) +
                              " share weight; weights must be distinct");
      }
    }
  }

  // Deepest containing node per element.
  deepest_.assign(elements_.size(), -1);
  for (int n = 0; n < static_cast<int>(nodes_.size()); ++n) {
    for (int e : nodes_[n].members) {
      if (deepest_[e] == -1 || nodes_[n].depth > nodes_[deepest_[e]].depth) {
        deepest_[e] = n;
      }
    }
  }
}

int LaminarMatroid::index_of(ElementId id) const {
  auto it = index_by_id_.find(id);
  if (it == index_by_id_.end()) {
    throw std::invalid_argument("unknown element id " + std::to_string(id));
  }
  return it->second;
}

void LaminarMatroid::check_valid(const char* op) const {
  if (!violations_.empty()) {
    throw std::invalid_argument(std::string(op) + " requires a valid matroid: " +
                                violations_.front());
  }
}

bool LaminarMatroid::is_independent(const std::vector<ElementId>& ids) const {
  std::vector<int> indices;
  indices.reserve(ids.size());
  for (ElementId id : ids) indices.push_back(index_of(id));
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return is_independent_indices(indices);
}

bool LaminarMatroid::is_independent_indices(std::span<const int> indices) const {
  std::vector<int> used(nodes_.size(), 0);
  for (int e : indices) {
    for (int n = deepest_[e]; n != -1; n = nodes_[n].parent) {
      if (++used[n] > nodes_[n].capacity) return false;
    }
  }
  return true;
}

LaminarMatroid LaminarMatroid::normalized() const {
  check_valid("normalize");
  std::vector<SetSpec> kept;
  // A set is redundant when its capacity is implied by an enclosing set's
  // capacity or by its own size.
  std::function<void(int, long long, std::optional<std::int64_t>)> walk =
      [&](int n, long long min_above, std::optional<std::int64_t> kept_parent) {
        const FamilyNode& node = nodes_[n];
        bool keep = node.capacity < min_above &&
                    node.capacity < static_cast<long long>(node.members.size());
        std::optional<std::int64_t> parent_for_children = kept_parent;
        if (keep) {
          SetSpec spec;
          spec.id = node.set_id;
          spec.capacity = node.capacity;
          spec.parent = kept_parent;
          spec.members.reserve(node.members.size());
          for (int e : node.members) spec.members.push_back(elements_[e].id);
          kept.push_back(std::move(spec));
          parent_for_children = node.set_id;
        }
        long long child_min = std::min<long long>(min_above, node.capacity);
        for (int c : node.children) walk(c, child_min, parent_for_children);
      };
  for (int n = 0; n < static_cast<int>(nodes_.size()); ++n) {
    if (nodes_[n].parent == -1) {
      walk(n, std::numeric_limits<long long>::max(), std::nullopt);
    }
  }
  return LaminarMatroid(elements_, std::move(kept));
}

LaminarMatroid LaminarMatroid::restricted(const std::vector<ElementId>& keep) const {
  std::vector<char> in_keep(elements_.size(), 0);
  std::vector<Element> sub_elements;
  for (ElementId id : keep) {
    int idx = index_of(id);
    if (!in_keep[idx]) {
      in_keep[idx] = 1;
    }
  }
  for (int i = 0; i < static_cast<int>(elements_.size()); ++i) {
    if (in_keep[i]) sub_elements.push_back(elements_[i]);
  }

  // Intersect every node with the kept elements. A node whose intersection
  // coincides with its nearest surviving ancestor's collapses into it,
  // keeping the tighter capacity, so nesting stays strict.
  std::vector<SetSpec> specs;
  std::function<void(int, int, std::size_t)> walk = [&](int n, int ancestor,
                                                        std::size_t ancestor_size) {
    const FamilyNode& node = nodes_[n];
    std::vector<ElementId> inter;
    for (int e : node.members) {
      if (in_keep[e]) inter.push_back(elements_[e].id);
    }
    if (inter.empty()) return;  // children intersect emptily too
    int self = ancestor;
    std::size_t self_size = ancestor_size;
    if (ancestor != -1 && inter.size() == ancestor_size) {
      specs[ancestor].capacity = std::min(specs[ancestor].capacity, node.capacity);
    } else {
      SetSpec spec;
      spec.id = node.set_id;
      spec.capacity = node.capacity;
      if (ancestor != -1) spec.parent = specs[ancestor].id;
      self_size = inter.size();
      spec.members = std::move(inter);
      self = static_cast<int>(specs.size());
      specs.push_back(std::move(spec));
    }
    for (int c : node.children) walk(c, self, self_size);
  };
  for (int n = 0; n < static_cast<int>(nodes_.size()); ++n) {
    if (nodes_[n].parent == -1) walk(n, -1, 0);
  }
  return LaminarMatroid(std::move(sub_elements), std::move(specs));
}

int LaminarMatroid::rank() const {
  check_valid("rank");
  IndependenceCounter counter(*this);
  int r = 0;
  for (int e = 0; e < num_elements(); ++e) {
    if (counter.can_add(e)) {
      counter.add(e);
      ++r;
    }
  }
  return r;
}

std::vector<SetSpec> LaminarMatroid::set_specs() const {
  std::vector<SetSpec> specs;
  specs.reserve(nodes_.size());
  for (const FamilyNode& node : nodes_) {
    SetSpec spec;
    spec.id = node.set_id;
    spec.capacity = node.capacity;
    if (node.parent != -1) spec.parent = nodes_[node.parent].set_id;
    spec.members.reserve(node.members.size());
    for (int e : node.members) spec.members.push_back(elements_[e].id);
    specs.push_back(std::move(spec));
  }
  return specs;
}

bool IndependenceCounter::can_add(int elem_index) const {
  const auto& nodes = matroid_->nodes();
  for (int n = matroid_->deepest_node(elem_index); n != -1; n = nodes[n].parent) {
    if (used_[n] >= nodes[n].capacity) return false;
  }
  return true;
}

void IndependenceCounter::add(int elem_index) {
  const auto& nodes = matroid_->nodes();
  for (int n = matroid_->deepest_node(elem_index); n != -1; n = nodes[n].parent) {
    ++used_[n];
  }
}

void IndependenceCounter::remove(int elem_index) {
  const auto& nodes = matroid_->nodes();
  for (int n = matroid_->deepest_node(elem_index); n != -1; n = nodes[n].parent) {
    assert(used_[n] > 0);
    --used_[n];
  }
}

void IndependenceCounter::reset() {
  std::fill(used_.begin(), used_.end(), 0);
}

std::vector<int> offline_opt_indices(const LaminarMatroid& m,
                                     std::span<const int> available) {
  std::vector<int> order(available.begin(), available.end());
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (m.weight(a) != m.weight(b)) return m.weight(a) > m.weight(b);
    return m.id_of(a) < m.id_of(b);
  });
  IndependenceCounter counter(m);
  std::vector<int> chosen;
  for (int e : order) {
    if (counter.can_add(e)) {
      counter.add(e);
      chosen.push_back(e);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

namespace {

std::vector<int> to_indices(const LaminarMatroid& m,
                            const std::vector<ElementId>& ids) {
  std::vector<int> indices;
  indices.reserve(ids.size());
  for (ElementId id : ids) indices.push_back(m.index_of(id));
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return indices;
}

IndependentSet to_id_set(const LaminarMatroid& m, std::span<const int> indices) {
  IndependentSet out;
  out.elements.reserve(indices.size());
  for (int e : indices) out.elements.push_back(m.id_of(e));
  std::sort(out.elements.begin(), out.elements.end());
  return out;
}

}  // namespace

IndependentSet offline_opt(const LaminarMatroid& m,
                           const std::vector<ElementId>& available) {
  return to_id_set(m, offline_opt_indices(m, to_indices(m, available)));
}

std::vector<int> brute_force_opt_indices(const LaminarMatroid& m,
                                         std::span<const int> available) {
  if (available.size() > 20) {
    throw std::invalid_argument("brute_force_opt: size guard exceeded (" +
                                std::to_string(available.size()) + " > 20)");
  }
  const int k = static_cast<int>(available.size());
  std::vector<int> best;
  double best_weight = -1.0;
  std::vector<int> subset;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    subset.clear();
    double w = 0.0;
    for (int j = 0; j < k; ++j) {
      if (mask & (1u << j)) {
        subset.push_back(available[j]);
        w += m.weight(available[j]);
      }
    }
    if (w > best_weight && m.is_independent_indices(subset)) {
      best = subset;
      best_weight = w;
    }
  }
  std::sort(best.begin(), best.end());
  return best;
}

IndependentSet brute_force_opt(const LaminarMatroid& m,
                               const std::vector<ElementId>& available) {
  return to_id_set(m, brute_force_opt_indices(m, to_indices(m, available)));
}

double total_weight(const LaminarMatroid& m, std::span<const int> indices) {
  double w = 0.0;
  for (int e : indices) w += m.weight(e);
  return w;
}

}  // namespace lms
