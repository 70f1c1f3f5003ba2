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

#include "lms/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "lms/bounds.hpp"
#include "lms/rng.hpp"

namespace lms {

namespace {

void check_spec(const AlgorithmSpec& spec) {
  if (!(spec.t0 > 0.0 && spec.t0 < 1.0)) {
    throw std::invalid_argument("t0 must lie strictly between 0 and 1");
  }
}

void check_schedule(const LaminarMatroid& m, const ArrivalSchedule& schedule) {
  if (static_cast<int>(schedule.times.size()) != m.num_elements()) {
    throw std::invalid_argument("schedule/matroid mismatch: " +
                                std::to_string(schedule.times.size()) +
                                " times for " +
                                std::to_string(m.num_elements()) + " elements");
  }
}

std::vector<int> arrival_order(const ArrivalSchedule& schedule) {
  std::vector<int> order(schedule.times.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return schedule.times[a] < schedule.times[b];
  });
  return order;
}

std::vector<int> all_indices(const LaminarMatroid& m) {
  std::vector<int> all(m.num_elements());
  for (int i = 0; i < m.num_elements(); ++i) all[i] = i;
  return all;
}

}  // namespace

ArrivalSchedule sample_schedule(const LaminarMatroid& m, std::uint64_t seed) {
  const int n = m.num_elements();
  if (n == 0) throw std::invalid_argument("sample_schedule: empty ground set");
  ArrivalSchedule schedule;
  schedule.seed = seed;
  schedule.times.resize(n);
  SplitMix64 rng(seed);
  for (int i = 0; i < n; ++i) schedule.times[i] = rng.next_open01();
  // Ties have measure zero at double precision; redraw them anyway.
  for (bool again = true; again;) {
    again = false;
    std::vector<int> order = arrival_order(schedule);
    for (int i = 1; i < n; ++i) {
      if (schedule.times[order[i]] == schedule.times[order[i - 1]]) {
        schedule.times[order[i]] = rng.next_open01();
        again = true;
      }
    }
  }
  return schedule;
}

RunningOptimum::RunningOptimum(const LaminarMatroid& m)
    : matroid_(&m),
      counter_(m),
      in_opt_(m.num_elements(), 0),
      chosen_(m.nodes().size()) {}

void RunningOptimum::reset() {
  counter_.reset();
  std::fill(in_opt_.begin(), in_opt_.end(), 0);
  for (auto& s : chosen_) s.clear();
}

int RunningOptimum::deepest_saturated(int elem_index) const {
  const auto& nodes = matroid_->nodes();
  for (int n = matroid_->deepest_node(elem_index); n != -1; n = nodes[n].parent) {
    if (counter_.used(n) >= nodes[n].capacity) return n;
  }
  return -1;
}

void RunningOptimum::insert(int elem_index) {
  const auto& nodes = matroid_->nodes();
  counter_.add(elem_index);
  in_opt_[elem_index] = 1;
  const double w = matroid_->weight(elem_index);
  for (int n = matroid_->deepest_node(elem_index); n != -1; n = nodes[n].parent) {
    chosen_[n].emplace(w, elem_index);
  }
}

void RunningOptimum::erase(int elem_index) {
  const auto& nodes = matroid_->nodes();
  counter_.remove(elem_index);
  in_opt_[elem_index] = 0;
  const double w = matroid_->weight(elem_index);
  for (int n = matroid_->deepest_node(elem_index); n != -1; n = nodes[n].parent) {
    chosen_[n].erase({w, elem_index});
  }
}

bool RunningOptimum::would_admit(int elem_index) const {
  if (in_opt_[elem_index]) return true;
  const int saturated = deepest_saturated(elem_index);
  if (saturated == -1) return true;
  // The lightest chosen element of the deepest saturated set is the only
  // candidate to displace.
  return matroid_->weight(elem_index) > chosen_[saturated].begin()->first;
}

bool RunningOptimum::arrive(int elem_index) {
  const int saturated = deepest_saturated(elem_index);
  if (saturated == -1) {
    insert(elem_index);
    return true;
  }
  const auto lightest = *chosen_[saturated].begin();
  if (matroid_->weight(elem_index) > lightest.first) {
    erase(lightest.second);
    insert(elem_index);
    return true;
  }
  return false;
}

std::vector<int> RunningOptimum::current() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(in_opt_.size()); ++i) {
    if (in_opt_[i]) out.push_back(i);
  }
  return out;
}

namespace {

// Shared arrival loop: `in_reference_opt` evaluates the algorithm's second
// condition for the element that just arrived.
template <typename Cond2>
RunOutcome run_loop(const LaminarMatroid& m, const ArrivalSchedule& schedule,
                    const AlgorithmSpec& spec, const TraceSink& trace,
                    const std::vector<int>& opt_full, Cond2&& in_reference_opt) {
  IndependenceCounter alg(m);
  std::vector<char> in_opt_full(m.num_elements(), 0);
  for (int e : opt_full) in_opt_full[e] = 1;

  RunOutcome outcome;
  outcome.opt = opt_full;
  outcome.schedule_seed = schedule.seed;
  for (int e : arrival_order(schedule)) {
    const double t = schedule.times[e];
    const bool cond1 = t > spec.t0;
    const bool cond2 = in_reference_opt(e, t);
    const bool cond3 = alg.can_add(e);
    // Elements of the full-horizon optimum stay in the reference optimum no
    // matter when they arrive; a violation means the incremental optimum
    // went wrong.
    if (in_opt_full[e] && !cond2) {
      throw std::logic_error("optimum element failed the membership condition");
    }
    const bool selected = cond1 && cond2 && cond3;
    if (selected) {
      alg.add(e);
      outcome.selected.push_back(e);
    }
    if (trace) {
      trace({m.id_of(e), t, cond1, cond2, cond3, selected});
    }
  }
  std::sort(outcome.selected.begin(), outcome.selected.end());
  return outcome;
}

}  // namespace

RunOutcome run(const LaminarMatroid& m, const ArrivalSchedule& schedule,
               const AlgorithmSpec& spec, const TraceSink& trace) {
  check_spec(spec);
  check_schedule(m, schedule);
  const std::vector<int> opt_full = offline_opt_indices(m, all_indices(m));

  if (spec.kind == AlgorithmKind::kCurrentOptGreedy) {
    RunningOptimum running(m);
    return run_loop(m, schedule, spec, trace, opt_full,
                    [&](int e, double) { return running.arrive(e); });
  }

  // Sample-phase variant: the reference optimum is fixed at time t0.
  RunningOptimum phase(m);
  for (int e : arrival_order(schedule)) {
    if (schedule.times[e] <= spec.t0) phase.arrive(e);
  }
  return run_loop(m, schedule, spec, trace, opt_full, [&](int e, double t) {
    return t <= spec.t0 ? phase.contains(e) : phase.would_admit(e);
  });
}

RunOutcome run_reference(const LaminarMatroid& m, const ArrivalSchedule& schedule,
                         const AlgorithmSpec& spec) {
  check_spec(spec);
  check_schedule(m, schedule);
  const std::vector<int> opt_full = offline_opt_indices(m, all_indices(m));

  if (spec.kind == AlgorithmKind::kCurrentOptGreedy) {
    std::vector<int> arrived;
    return run_loop(m, schedule, spec, nullptr, opt_full, [&](int e, double) {
      arrived.push_back(e);
      std::vector<int> opt_t = offline_opt_indices(m, arrived);
      return std::binary_search(opt_t.begin(), opt_t.end(), e);
    });
  }

  std::vector<int> phase;
  for (int e = 0; e < m.num_elements(); ++e) {
    if (schedule.times[e] <= spec.t0) phase.push_back(e);
  }
  return run_loop(m, schedule, spec, nullptr, opt_full, [&](int e, double t) {
    std::vector<int> pool = phase;
    if (t > spec.t0) pool.push_back(e);
    std::vector<int> opt_phase = offline_opt_indices(m, pool);
    return std::binary_search(opt_phase.begin(), opt_phase.end(), e);
  });
}

CompetitiveEstimate monte_carlo(const LaminarMatroid& m, const AlgorithmSpec& spec,
                                std::uint64_t trials, std::uint64_t base_seed,
                                int workers, std::ostream* trace) {
  check_spec(spec);
  if (trials < 1) throw std::invalid_argument("monte_carlo: trials must be >= 1");
  if (m.num_elements() == 0) {
    throw std::invalid_argument("monte_carlo: empty ground set");
  }

  const std::vector<int> opt_full = offline_opt_indices(m, all_indices(m));
  std::vector<int> opt_pos(m.num_elements(), -1);
  for (std::size_t i = 0; i < opt_full.size(); ++i) opt_pos[opt_full[i]] = static_cast<int>(i);

  const int worker_count = std::max(
      1, std::min<int>(workers, static_cast<int>(std::min<std::uint64_t>(
                                    trials, std::numeric_limits<int>::max()))));
  std::vector<std::vector<std::uint64_t>> counts(
      worker_count, std::vector<std::uint64_t>(opt_full.size(), 0));
  std::vector<double> alg_weights(trials, 0.0);
  std::vector<std::string> trace_lines(trace ? trials : 0);
  std::vector<std::exception_ptr> errors(worker_count);

  auto work = [&](int w, std::uint64_t lo, std::uint64_t hi) {
    try {
      for (std::uint64_t trial = lo; trial < hi; ++trial) {
        TraceSink sink = nullptr;
        if (trace) {
          std::string* line = &trace_lines[trial];
          sink = [line, trial](const ArrivalRecord& r) {
            char local[256];
            std::snprintf(local, sizeof(local),
                          "{\"trial\":%llu,\"element\":%lld,\"time\":%.17g,"
                          "\"cond1\":%s,\"cond2\":%s,\"cond3\":%s,\"selected\":%s}\n",
                          static_cast<unsigned long long>(trial),
                          static_cast<long long>(r.element), r.time,
                          r.cond1 ? "true" : "false", r.cond2 ? "true" : "false",
                          r.cond3 ? "true" : "false", r.selected ? "true" : "false");
            line->append(local);
          };
        }
        ArrivalSchedule schedule = sample_schedule(m, base_seed + trial);
        RunOutcome outcome = run(m, schedule, spec, sink);
        double w_alg = 0.0;
        for (int e : outcome.selected) {
          w_alg += m.weight(e);
          if (opt_pos[e] >= 0) ++counts[w][opt_pos[e]];
        }
        alg_weights[trial] = w_alg;
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (worker_count == 1) {
    work(0, 0, trials);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(worker_count);
    for (int w = 0; w < worker_count; ++w) {
      const std::uint64_t lo = trials * w / worker_count;
      const std::uint64_t hi = trials * (w + 1) / worker_count;
      pool.emplace_back(work, w, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  if (trace) {
    for (const std::string& line : trace_lines) *trace << line;
  }

  CompetitiveEstimate estimate;
  estimate.trials = trials;
  estimate.opt_weight = total_weight(m, opt_full);
  double mean_alg = 0.0;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    mean_alg += alg_weights[trial];
  }
  mean_alg /= static_cast<double>(trials);
  estimate.utility_ratio =
      estimate.opt_weight > 0.0 ? mean_alg / estimate.opt_weight : 0.0;

  estimate.min_frequency = opt_full.empty() ? 0.0 : 1.0;
  estimate.per_element.reserve(opt_full.size());
  for (std::size_t i = 0; i < opt_full.size(); ++i) {
    std::uint64_t hits = 0;
    for (int w = 0; w < worker_count; ++w) hits += counts[w][i];
    const double p = static_cast<double>(hits) / static_cast<double>(trials);
    CompetitiveEstimate::PerElement row;
    row.id = m.id_of(opt_full[i]);
    row.weight = m.weight(opt_full[i]);
    row.frequency = p;
    row.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    estimate.per_element.push_back(row);
    estimate.min_frequency = std::min(estimate.min_frequency, p);
  }
  std::sort(estimate.per_element.begin(), estimate.per_element.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  return estimate;
}

std::vector<double> qualified_times(const LaminarMatroid& m,
                                    const ArrivalSchedule& schedule,
                                    int node_index, double t) {
  check_schedule(m, schedule);
  if (node_index < 0 || node_index >= static_cast<int>(m.nodes().size())) {
    throw std::invalid_argument("qualified_times: node not in family");
  }
  if (!(t > 0.0 && t <= 1.0)) {
    throw std::invalid_argument("qualified_times: t must lie in (0, 1]");
  }
  const FamilyNode& node = m.nodes()[node_index];

  // (time, element index in the submatroid), arrivals strictly before t.
  std::vector<std::pair<double, int>> arrivals;
  const LaminarMatroid* sub = &m;
  LaminarMatroid storage;
  if (static_cast<int>(node.members.size()) == m.num_elements()) {
    // The node covers the ground set; restriction would be a copy.
    for (int e : node.members) {
      if (schedule.times[e] < t) arrivals.emplace_back(schedule.times[e], e);
    }
  } else {
    std::vector<ElementId> ids;
    ids.reserve(node.members.size());
    for (int e : node.members) ids.push_back(m.id_of(e));
    storage = m.restricted(ids);
    sub = &storage;
    for (int e : node.members) {
      if (schedule.times[e] < t) {
        arrivals.emplace_back(schedule.times[e], storage.index_of(m.id_of(e)));
      }
    }
  }
  std::sort(arrivals.begin(), arrivals.end());

  RunningOptimum running(*sub);
  std::vector<double> qualified;
  for (const auto& [time, e] : arrivals) {
    if (running.arrive(e)) qualified.push_back(time);
  }
  std::reverse(qualified.begin(), qualified.end());
  return qualified;
}

LemmaTestResult lemma_distribution_test(int capacity, int n_elements, double t,
                                        std::uint64_t trials, std::uint64_t seed) {
  if (capacity < 1 || n_elements < capacity || trials < 1 || !(t > 0.0 && t <= 1.0)) {
    throw std::invalid_argument("lemma_distribution_test: degenerate parameters");
  }

  SplitMix64 root(seed);
  const std::uint64_t weight_seed = root.next();
  const std::uint64_t schedule_base = root.next();

  std::vector<Element> elements(n_elements);
  SplitMix64 weight_rng(weight_seed);
  for (int i = 0; i < n_elements; ++i) elements[i] = {i, weight_rng.next_open01()};
  SetSpec all;
  all.id = 0;
  all.capacity = capacity;
  for (int i = 0; i < n_elements; ++i) all.members.push_back(i);
  LaminarMatroid m(std::move(elements), {all});
  if (!m.is_valid()) {
    // Collisions among n uniform doubles; retry with a shifted stream.
    return lemma_distribution_test(capacity, n_elements, t, trials, seed + 0x9E37);
  }

  std::vector<double> last_qualified, cth_qualified;
  last_qualified.reserve(trials);
  cth_qualified.reserve(trials);
  std::uint64_t discarded = 0;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    ArrivalSchedule schedule = sample_schedule(m, schedule_base + trial);
    std::vector<double> q = qualified_times(m, schedule, 0, t);
    if (static_cast<int>(q.size()) < capacity) {
      ++discarded;
      continue;
    }
    last_qualified.push_back(std::log(t / q[0]));
    cth_qualified.push_back(std::log(t / q[capacity - 1]));
  }

  LemmaTestResult result;
  result.trials = trials;
  result.discarded = discarded;
  result.discard_rate = static_cast<double>(discarded) / static_cast<double>(trials);
  const std::uint64_t effective = trials - discarded;
  if (effective == 0) {
    throw std::runtime_error(
        "lemma_distribution_test: every trial had fewer qualified arrivals "
        "than the capacity");
  }
  const double rate = capacity;
  result.ks_exp = ks_statistic(std::move(last_qualified),
                               [rate](double x) { return exponential_cdf(x, rate); });
  result.ks_gamma = ks_statistic(std::move(cth_qualified), [capacity](double x) {
    return x <= 0.0 ? 0.0 : gamma_cdf(x, capacity);
  });
  result.critical_value_95 = 1.36 / std::sqrt(static_cast<double>(effective));
  return result;
}

double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, (i + 1) / n - f);
    d = std::max(d, f - i / n);
  }
  return d;
}

double exponential_cdf(double x, double rate) {
  return x <= 0.0 ? 0.0 : 1.0 - std::exp(-rate * x);
}

}  // namespace lms
