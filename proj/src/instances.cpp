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

#include "lms/instances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lms/rng.hpp"

namespace lms {

namespace {

using nlohmann::json;

std::vector<Element> draw_elements(const GeneratorSpec& spec, SplitMix64& rng) {
  std::vector<Element> elements(spec.n);
  auto draw = [&]() -> double {
    double u = rng.next_open01();
    switch (spec.weights) {
      case WeightDistribution::kUniform01:
        return u;
      case WeightDistribution::kExponential1:
        return -std::log(u);
      case WeightDistribution::kPareto:
        return std::pow(u, -1.0 / spec.pareto_alpha);
    }
    return u;
  };
  for (int i = 0; i < spec.n; ++i) elements[i] = {i, draw()};
  // Continuous draws collide only at the representation's precision;
  // redraw until weights are pairwise distinct.
  for (bool again = true; again;) {
    again = false;
    std::vector<std::pair<double, int>> by_weight;
    for (const Element& e : elements) by_weight.emplace_back(e.weight, e.id);
    std::sort(by_weight.begin(), by_weight.end());
    for (std::size_t i = 1; i < by_weight.size(); ++i) {
      if (by_weight[i].first == by_weight[i - 1].first) {
        elements[by_weight[i].second].weight = draw();
        again = true;
      }
    }
  }
  return elements;
}

std::vector<ElementId> id_range(int lo, int hi) {
  std::vector<ElementId> ids;
  ids.reserve(hi - lo);
  for (int i = lo; i < hi; ++i) ids.push_back(i);
  return ids;
}

void build_random_family(const std::vector<int>& pool, int depth,
                         std::optional<std::int64_t> parent, SplitMix64& rng,
                         std::vector<SetSpec>& out) {
  if (depth <= 0 || pool.size() < 2) return;
  // Split the pool into up to three random blocks; blocks of two or more
  // elements become sets and recurse.
  std::vector<int> shuffled = pool;
  for (std::size_t i = shuffled.size(); i > 1; --i) {
    std::swap(shuffled[i - 1], shuffled[rng.next() % i]);
  }
  const int parts = 1 + static_cast<int>(rng.next() % 3);
  std::vector<std::vector<int>> blocks(parts);
  for (std::size_t i = 0; i < shuffled.size(); ++i) {
    blocks[i % parts].push_back(shuffled[i]);
  }
  for (auto& block : blocks) {
    if (block.size() < 2) continue;
    std::sort(block.begin(), block.end());
    SetSpec spec;
    spec.id = static_cast<std::int64_t>(out.size());
    spec.capacity = 1 + static_cast<int>(rng.next() % (block.size() - 1));
    spec.parent = parent;
    for (int e : block) spec.members.push_back(e);
    std::int64_t self = spec.id;
    out.push_back(std::move(spec));
    build_random_family(block, depth - 1, self, rng, out);
  }
}

double parse_weight(const json& value, const std::string& context) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_string()) {
    throw ParseError(context + ": weight must be a number or decimal string");
  }
  const std::string text = value.get<std::string>();
  char* end = nullptr;
  double w = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || !std::isfinite(w)) {
    throw ParseError(context + ": cannot parse weight '" + text + "'");
  }
  return w;
}

std::string format_weight(double w) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  return buf;
}

}  // namespace

LaminarMatroid generate(const GeneratorSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("generate: n must be >= 1");
  for (int c : spec.capacities) {
    if (c < 1) throw std::invalid_argument("generate: capacities must be >= 1");
  }
  SplitMix64 root(spec.seed);
  SplitMix64 weight_rng(root.next());
  SplitMix64 family_rng(root.next());
  std::vector<Element> elements = draw_elements(spec, weight_rng);
  std::vector<SetSpec> sets;

  switch (spec.kind) {
    case MatroidKind::kUniform: {
      if (spec.capacities.size() != 1) {
        throw std::invalid_argument("generate: uniform kind takes exactly one capacity");
      }
      SetSpec s;
      s.id = 0;
      s.capacity = spec.capacities[0];
      s.members = id_range(0, spec.n);
      sets.push_back(std::move(s));
      break;
    }
    case MatroidKind::kPartition: {
      const int parts = static_cast<int>(spec.capacities.size());
      if (parts < 1) {
        throw std::invalid_argument("generate: partition kind needs a capacity list");
      }
      if (parts > spec.n) {
        throw std::invalid_argument("generate: capacity list longer than n");
      }
      int start = 0;
      for (int p = 0; p < parts; ++p) {
        int size = spec.n / parts + (p < spec.n % parts ? 1 : 0);
        SetSpec s;
        s.id = p;
        s.capacity = spec.capacities[p];
        s.members = id_range(start, start + size);
        start += size;
        sets.push_back(std::move(s));
      }
      break;
    }
    case MatroidKind::kChain: {
      const int k = static_cast<int>(spec.capacities.size());
      if (k < 1) {
        throw std::invalid_argument("generate: chain kind needs a capacity list");
      }
      for (int i = 1; i < k; ++i) {
        if (spec.capacities[i] <= spec.capacities[i - 1]) {
          throw std::invalid_argument(
              "generate: chain capacities must be strictly increasing");
        }
      }
      if (spec.n < spec.capacities[k - 1] + 1) {
        throw std::invalid_argument("generate: chain needs n > outermost capacity");
      }
      // Innermost set first; each set one element larger than its capacity,
      // the outermost covering everything, so none is vacuous.
      for (int i = 0; i < k; ++i) {
        int size = (i == k - 1) ? spec.n : spec.capacities[i] + 1;
        SetSpec s;
        s.id = i;
        s.capacity = spec.capacities[i];
        if (i < k - 1) s.parent = i + 1;
        s.members = id_range(0, size);
        sets.push_back(std::move(s));
      }
      break;
    }
    case MatroidKind::kRandomLaminar: {
      if (spec.depth < 1) {
        throw std::invalid_argument("generate: depth must be >= 1");
      }
      std::vector<int> pool;
      for (int i = 0; i < spec.n; ++i) pool.push_back(i);
      build_random_family(pool, spec.depth, std::nullopt, family_rng, sets);
      break;
    }
  }

  LaminarMatroid m(std::move(elements), std::move(sets));
  if (spec.kind == MatroidKind::kRandomLaminar) m = m.normalized();
  if (!m.is_valid()) {
    throw std::logic_error("generate produced an invalid matroid: " +
                           m.validate().front());
  }
  return m;
}

std::string instance_to_json(const LaminarMatroid& m) {
  json doc;
  doc["elements"] = json::array();
  for (const Element& e : m.elements()) {
    doc["elements"].push_back({{"id", e.id}, {"weight", format_weight(e.weight)}});
  }
  doc["sets"] = json::array();
  for (const SetSpec& s : m.set_specs()) {
    json js = {{"id", s.id}, {"capacity", s.capacity}, {"members", s.members}};
    js["parent"] = s.parent ? json(*s.parent) : json(nullptr);
    doc["sets"].push_back(std::move(js));
  }
  return doc.dump(2) + "\n";
}

LaminarMatroid instance_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("instance document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("elements") || !doc.contains("sets")) {
    throw ParseError("instance document: expected object with 'elements' and 'sets'");
  }

  std::vector<Element> elements;
  int i = 0;
  for (const json& je : doc["elements"]) {
    const std::string context = "elements[" + std::to_string(i++) + "]";
    if (!je.is_object() || !je.contains("id") || !je.contains("weight")) {
      throw ParseError(context + ": expected {id, weight}");
    }
    if (!je["id"].is_number_integer()) {
      throw ParseError(context + ": id must be an integer");
    }
    elements.push_back({je["id"].get<ElementId>(), parse_weight(je["weight"], context)});
  }

  std::vector<SetSpec> sets;
  i = 0;
  for (const json& js : doc["sets"]) {
    const std::string context = "sets[" + std::to_string(i++) + "]";
    if (!js.is_object() || !js.contains("id") || !js.contains("capacity") ||
        !js.contains("members")) {
      throw ParseError(context + ": expected {id, capacity, parent, members}");
    }
    SetSpec s;
    if (!js["id"].is_number_integer() || !js["capacity"].is_number_integer()) {
      throw ParseError(context + ": id and capacity must be integers");
    }
    s.id = js["id"].get<std::int64_t>();
    s.capacity = js["capacity"].get<int>();
    if (js.contains("parent") && !js["parent"].is_null()) {
      if (!js["parent"].is_number_integer()) {
        throw ParseError(context + ": parent must be a set id or null");
      }
      s.parent = js["parent"].get<std::int64_t>();
    }
    if (!js["members"].is_array()) {
      throw ParseError(context + ": members must be an array of element ids");
    }
    for (const json& jm : js["members"]) {
      if (!jm.is_number_integer()) {
        throw ParseError(context + ": members must be integers");
      }
      s.members.push_back(jm.get<ElementId>());
    }
    sets.push_back(std::move(s));
  }

  LaminarMatroid m(std::move(elements), std::move(sets));
  if (!m.is_valid()) {
    std::ostringstream msg;
    msg << "invalid instance:";
    for (const std::string& v : m.validate()) msg << "\n  - " << v;
    throw ParseError(msg.str());
  }
  return m;
}

void write_instance(const LaminarMatroid& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out << instance_to_json(m);
  if (!out) throw ParseError("failed writing " + path);
}

LaminarMatroid read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

}  // namespace lms
