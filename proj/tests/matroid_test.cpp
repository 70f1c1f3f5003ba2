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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <vector>

#include "lms/instances.hpp"
#include "lms/matroid.hpp"

using namespace lms;

namespace {

std::vector<Element> elems(std::initializer_list<double> weights) {
  std::vector<Element> out;
  ElementId id = 0;
  for (double w : weights) out.push_back({id++, w});
  return out;
}

SetSpec set_of(std::int64_t id, int capacity, std::vector<ElementId> members,
               std::optional<std::int64_t> parent = std::nullopt) {
  SetSpec s;
  s.id = id;
  s.capacity = capacity;
  s.parent = parent;
  s.members = std::move(members);
  return s;
}

std::vector<ElementId> ids_of_mask(const LaminarMatroid& m, unsigned mask) {
  std::vector<ElementId> ids;
  for (int i = 0; i < m.num_elements(); ++i) {
    if (mask & (1u << i)) ids.push_back(m.id_of(i));
  }
  return ids;
}

std::vector<int> indices_of_mask(unsigned mask, int n) {
  std::vector<int> idx;
  for (int i = 0; i < n; ++i) {
    if (mask & (1u << i)) idx.push_back(i);
  }
  return idx;
}

LaminarMatroid random_instance(int n, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.kind = MatroidKind::kRandomLaminar;
  spec.n = n;
  spec.depth = 3;
  spec.seed = seed;
  return generate(spec);
}

double weight_of(const LaminarMatroid& m, const std::vector<ElementId>& ids) {
  double w = 0.0;
  for (ElementId id : ids) w += m.weight(m.index_of(id));
  return w;
}

bool is_subset(const std::vector<ElementId>& a, const std::vector<ElementId>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

TEST_CASE("validate accepts a properly nested chain") {
  LaminarMatroid m(elems({1.0, 2.0, 3.0}),
                   {set_of(0, 2, {0, 1, 2}), set_of(1, 1, {0, 1}, 0)});
  CHECK(m.validate().empty());
}

TEST_CASE("validate rejects overlap without nesting") {
  LaminarMatroid m(elems({1.0, 2.0, 3.0}),
                   {set_of(0, 1, {0, 1}), set_of(1, 1, {1, 2})});
  REQUIRE_FALSE(m.is_valid());
  CHECK(m.validate().front().find("overlap") != std::string::npos);
}

TEST_CASE("validate rejects members outside the ground set") {
  LaminarMatroid m(elems({1.0, 2.0}), {set_of(0, 1, {0, 7})});
  REQUIRE_FALSE(m.is_valid());
  CHECK(m.validate().front().find("outside the ground set") != std::string::npos);
}

TEST_CASE("validate flags structural and weight defects") {
  SUBCASE("zero capacity") {
    LaminarMatroid m(elems({1.0, 2.0}), {set_of(0, 0, {0, 1})});
    CHECK_FALSE(m.is_valid());
  }
  SUBCASE("duplicate weights") {
    LaminarMatroid m(elems({1.5, 1.5}), {});
    CHECK_FALSE(m.is_valid());
  }
  SUBCASE("non-positive weight") {
    LaminarMatroid m(elems({0.0, 1.0}), {});
    CHECK_FALSE(m.is_valid());
  }
  SUBCASE("duplicate element ids") {
    LaminarMatroid m({{0, 1.0}, {0, 2.0}}, {});
    CHECK_FALSE(m.is_valid());
  }
  SUBCASE("unknown parent") {
    LaminarMatroid m(elems({1.0, 2.0}), {set_of(0, 1, {0}, 9)});
    CHECK_FALSE(m.is_valid());
  }
  SUBCASE("child equal to parent") {
    LaminarMatroid m(elems({1.0, 2.0}),
                     {set_of(0, 2, {0, 1}), set_of(1, 1, {0, 1}, 0)});
    CHECK_FALSE(m.is_valid());
  }
  SUBCASE("declared sibling contained in another") {
    LaminarMatroid m(elems({1.0, 2.0, 3.0}),
                     {set_of(0, 2, {0, 1, 2}), set_of(1, 1, {0, 1})});
    CHECK_FALSE(m.is_valid());
  }
}

TEST_CASE("is_independent basics") {
  LaminarMatroid one_cap(elems({1.0, 2.0}), {set_of(0, 1, {0, 1})});
  CHECK(one_cap.is_independent({}));
  CHECK(one_cap.is_independent({0}));
  CHECK_FALSE(one_cap.is_independent({0, 1}));

  // Inner capacity 1 binds even though the outer set would allow 2.
  LaminarMatroid nested(elems({1.0, 2.0, 3.0}),
                        {set_of(0, 2, {0, 1, 2}), set_of(1, 1, {0, 1}, 0)});
  CHECK_FALSE(nested.is_independent({0, 1}));
  CHECK(nested.is_independent({0, 2}));

  CHECK_THROWS_AS((void)one_cap.is_independent({42}), std::invalid_argument);
}

TEST_CASE("normalize drops implied and vacuous constraints") {
  SUBCASE("inner capacity not below outer is implied") {
    LaminarMatroid m(elems({1.0, 2.0, 3.0, 4.0}),
                     {set_of(0, 2, {0, 1, 2, 3}), set_of(1, 3, {0, 1, 2}, 0)});
    LaminarMatroid norm = m.normalized();
    REQUIRE(norm.nodes().size() == 1);
    CHECK(norm.nodes()[0].set_id == 0);
  }
  SUBCASE("strictly increasing chain is untouched") {
    LaminarMatroid m(elems({1.0, 2.0, 3.0, 4.0}),
                     {set_of(0, 2, {0, 1, 2, 3}), set_of(1, 1, {0, 1}, 0)});
    CHECK(m.normalized().nodes().size() == 2);
  }
  SUBCASE("capacity at least the set size is vacuous") {
    LaminarMatroid m(elems({1.0, 2.0}), {set_of(0, 5, {0, 1})});
    CHECK(m.normalized().nodes().empty());
    LaminarMatroid exact(elems({1.0, 2.0}), {set_of(0, 2, {0, 1})});
    CHECK(exact.normalized().nodes().empty());
  }
}

TEST_CASE("normalize preserves every independent set and is idempotent") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 4 + static_cast<int>(seed % 5);
    LaminarMatroid m = random_instance(n, seed);
    LaminarMatroid norm = m.normalized();
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      auto s = indices_of_mask(mask, n);
      REQUIRE(m.is_independent_indices(s) == norm.is_independent_indices(s));
    }
    LaminarMatroid twice = norm.normalized();
    REQUIRE(twice.nodes().size() == norm.nodes().size());
    for (std::size_t i = 0; i < norm.nodes().size(); ++i) {
      REQUIRE(twice.nodes()[i].set_id == norm.nodes()[i].set_id);
      REQUIRE(twice.nodes()[i].capacity == norm.nodes()[i].capacity);
      REQUIRE(twice.nodes()[i].members == norm.nodes()[i].members);
    }
  }
}

TEST_CASE("offline_opt basics") {
  LaminarMatroid m(elems({5.0, 3.0}), {set_of(0, 1, {0, 1})});
  CHECK(offline_opt(m, {}).elements.empty());
  CHECK(offline_opt(m, {0, 1}).elements == std::vector<ElementId>{0});
}

TEST_CASE("offline_opt equals brute force on every available subset") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 3 + static_cast<int>(seed % 6);
    LaminarMatroid m = random_instance(n, 1000 + seed);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      auto avail = ids_of_mask(m, mask);
      REQUIRE(offline_opt(m, avail).elements ==
              brute_force_opt(m, avail).elements);
    }
  }
}

TEST_CASE("brute_force_opt enforces its size guard") {
  GeneratorSpec spec;
  spec.kind = MatroidKind::kUniform;
  spec.n = 25;
  spec.capacities = {3};
  LaminarMatroid m = generate(spec);
  std::vector<ElementId> all;
  for (int i = 0; i < 25; ++i) all.push_back(i);
  CHECK_THROWS_AS((void)brute_force_opt(m, all), std::invalid_argument);
}

TEST_CASE("rank") {
  CHECK(LaminarMatroid({}, {}).rank() == 0);

  GeneratorSpec spec;
  spec.kind = MatroidKind::kUniform;
  spec.n = 7;
  spec.capacities = {3};
  CHECK(generate(spec).rank() == 3);

  // Capacity 1 inside capacity 2, covering all three elements.
  LaminarMatroid nested(elems({1.0, 2.0, 3.0}),
                        {set_of(0, 2, {0, 1, 2}), set_of(1, 1, {0, 1}, 0)});
  CHECK(nested.rank() == 2);
  // Agreement with exhaustive maximum cardinality.
  int best = 0;
  for (unsigned mask = 0; mask < 8u; ++mask) {
    auto s = indices_of_mask(mask, 3);
    if (nested.is_independent_indices(s)) {
      best = std::max(best, static_cast<int>(s.size()));
    }
  }
  CHECK(nested.rank() == best);
}

TEST_CASE("matroid axioms hold exhaustively") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const int n = 5 + static_cast<int>(seed % 4);  // 5..8
    LaminarMatroid m = random_instance(n, 2000 + seed);
    std::vector<unsigned> independent;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (m.is_independent_indices(indices_of_mask(mask, n))) {
        independent.push_back(mask);
      }
    }
    // Non-empty.
    REQUIRE(m.is_independent_indices({}));
    // Hereditary: every subset of an independent set is independent.
    for (unsigned mask : independent) {
      for (unsigned sub = mask; sub != 0; sub = (sub - 1) & mask) {
        REQUIRE(m.is_independent_indices(indices_of_mask(sub, n)));
      }
    }
    // Augmentation: a larger independent set lends an element to a smaller.
    for (unsigned s : independent) {
      for (unsigned t : independent) {
        if (__builtin_popcount(s) <= __builtin_popcount(t)) continue;
        bool found = false;
        for (int e = 0; e < n && !found; ++e) {
          unsigned bit = 1u << e;
          if ((s & bit) && !(t & bit)) {
            found = m.is_independent_indices(indices_of_mask(t | bit, n));
          }
        }
        REQUIRE(found);
      }
    }
  }
}

TEST_CASE("exchange property holds exhaustively") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 4 + static_cast<int>(seed % 3);  // 4..6
    LaminarMatroid m = random_instance(n, 3000 + seed);
    std::vector<unsigned> independent;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (m.is_independent_indices(indices_of_mask(mask, n))) {
        independent.push_back(mask);
      }
    }
    for (unsigned s : independent) {
      for (unsigned t : independent) {
        if (__builtin_popcount(s) != __builtin_popcount(t)) continue;
        for (int e = 0; e < n; ++e) {
          unsigned ebit = 1u << e;
          if (!(s & ebit) || (t & ebit)) continue;
          bool found = false;
          for (int f = 0; f < n && !found; ++f) {
            unsigned fbit = 1u << f;
            if (!(t & fbit) || (s & fbit)) continue;
            found = m.is_independent_indices(indices_of_mask((s & ~ebit) | fbit, n)) &&
                    m.is_independent_indices(indices_of_mask((t & ~fbit) | ebit, n));
          }
          REQUIRE(found);
        }
      }
    }
  }
}

TEST_CASE("restrict preserves independence and the identity cases") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 6;
    LaminarMatroid m = random_instance(n, 4000 + seed);
    // Identity restriction.
    std::vector<ElementId> all;
    for (int i = 0; i < n; ++i) all.push_back(m.id_of(i));
    LaminarMatroid full = m.restricted(all);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      auto ids = ids_of_mask(m, mask);
      REQUIRE(m.is_independent(ids) == full.is_independent(ids));
    }
    // Empty restriction.
    LaminarMatroid empty = m.restricted({});
    CHECK(empty.num_elements() == 0);
    CHECK(empty.is_independent({}));
    // Independence agreement on every subset of every restriction.
    for (unsigned smask = 0; smask < (1u << n); ++smask) {
      auto s_ids = ids_of_mask(m, smask);
      LaminarMatroid sub = m.restricted(s_ids);
      REQUIRE(sub.is_valid());
      for (unsigned xmask = smask; ; xmask = (xmask - 1) & smask) {
        auto x_ids = ids_of_mask(m, xmask);
        REQUIRE(sub.is_independent(x_ids) == m.is_independent(x_ids));
        if (xmask == 0) break;
      }
    }
  }
}

TEST_CASE("restriction keeps optimum elements optimal in the submatroid") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const int n = 4 + static_cast<int>(seed % 5);  // 4..8
    LaminarMatroid m = random_instance(n, 5000 + seed);
    std::vector<ElementId> all;
    for (int i = 0; i < n; ++i) all.push_back(m.id_of(i));
    std::vector<ElementId> opt = offline_opt(m, all).elements;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      auto s_ids = ids_of_mask(m, mask);
      LaminarMatroid sub = m.restricted(s_ids);
      std::vector<ElementId> opt_sub = offline_opt(sub, s_ids).elements;
      std::vector<ElementId> opt_and_s;
      std::set_intersection(opt.begin(), opt.end(), s_ids.begin(), s_ids.end(),
                            std::back_inserter(opt_and_s));
      REQUIRE(is_subset(opt_and_s, opt_sub));
    }
  }
}

TEST_CASE("independence counter matches full recheck under add/remove") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const int n = 7;
    LaminarMatroid m = random_instance(n, 6000 + seed);
    IndependenceCounter counter(m);
    std::vector<int> chosen;
    std::uint64_t state = seed * 2654435761u + 1;
    auto next = [&]() { return state = state * 6364136223846793005ULL + 1442695040888963407ULL; };
    for (int step = 0; step < 200; ++step) {
      int e = static_cast<int>(next() % n);
      bool in = std::find(chosen.begin(), chosen.end(), e) != chosen.end();
      if (in && next() % 2 == 0) {
        counter.remove(e);
        chosen.erase(std::find(chosen.begin(), chosen.end(), e));
      } else if (!in) {
        std::vector<int> with = chosen;
        with.push_back(e);
        REQUIRE(counter.can_add(e) == m.is_independent_indices(with));
        if (counter.can_add(e)) {
          counter.add(e);
          chosen.push_back(e);
        }
      }
      REQUIRE(m.is_independent_indices(chosen));
    }
  }
}

TEST_CASE("opt weight never below any independent subset weight") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 6;
    LaminarMatroid m = random_instance(n, 7000 + seed);
    std::vector<ElementId> all;
    for (int i = 0; i < n; ++i) all.push_back(m.id_of(i));
    double opt_w = weight_of(m, offline_opt(m, all).elements);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      auto ids = ids_of_mask(m, mask);
      if (m.is_independent(ids)) {
        REQUIRE(opt_w >= weight_of(m, ids) - 1e-12);
      }
    }
  }
}
