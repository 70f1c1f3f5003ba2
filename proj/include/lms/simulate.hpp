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
#include <functional>
#include <iosfwd>
#include <set>
#include <vector>

#include "lms/matroid.hpp"

namespace lms {

// One sampled run of the continuous-time arrival model: times[i] is the
// arrival time of element index i, uniform in (0, 1), pairwise distinct.
struct ArrivalSchedule {
  std::vector<double> times;
  std::uint64_t seed = 0;
};

ArrivalSchedule sample_schedule(const LaminarMatroid& m, std::uint64_t seed);

enum class AlgorithmKind {
  // Selects an arrival iff it belongs to the running optimum over all
  // elements arrived so far (CLI token "paper").
  kCurrentOptGreedy,
  // Selects an arrival iff it belongs to the optimum over the sample phase
  // E(t0) plus the arrival itself (CLI token "mtw").
  kSampleOptGreedy,
};

struct AlgorithmSpec {
  AlgorithmKind kind = AlgorithmKind::kCurrentOptGreedy;
  double t0 = 0.7;
};

// One trace record per arrival. cond1: arrived after the threshold;
// cond2: belongs to the algorithm's reference optimum; cond3: keeps the
// selection independent.
struct ArrivalRecord {
  ElementId element = 0;
  double time = 0.0;
  bool cond1 = false;
  bool cond2 = false;
  bool cond3 = false;
  bool selected = false;
};

using TraceSink = std::function<void(const ArrivalRecord&)>;

struct RunOutcome {
  std::vector<int> selected;  // element indices, ascending
  std::vector<int> opt;       // offline optimum over the full ground set
  std::uint64_t schedule_seed = 0;
};

// Maintains the maximum-weight independent set while elements arrive one at
// a time. Each arrival changes the optimum by at most one swap: the element
// either stays out, enters directly, or displaces the lightest chosen
// element of the deepest saturated set containing it.
class RunningOptimum {
 public:
  explicit RunningOptimum(const LaminarMatroid& m);

  // Processes an arrival; returns true iff the element enters the optimum.
  bool arrive(int elem_index);
  // Whether inserting the element would (or did) put it in the optimum,
  // without mutating state.
  bool would_admit(int elem_index) const;
  bool contains(int elem_index) const { return in_opt_[elem_index] != 0; }
  std::vector<int> current() const;  // ascending element indices
  void reset();

 private:
  int deepest_saturated(int elem_index) const;
  void insert(int elem_index);
  void erase(int elem_index);

  const LaminarMatroid* matroid_;
  IndependenceCounter counter_;
  std::vector<char> in_opt_;
  // Chosen members per node ordered by weight; front() is the lightest.
  std::vector<std::set<std::pair<double, int>>> chosen_;
  // Chosen elements outside every family set are unconstrained and tracked
  // only via in_opt_.
};

RunOutcome run(const LaminarMatroid& m, const ArrivalSchedule& schedule,
               const AlgorithmSpec& spec, const TraceSink& trace = nullptr);

// Recomputes the reference optimum from scratch at every arrival; used for
// differential testing against run().
RunOutcome run_reference(const LaminarMatroid& m, const ArrivalSchedule& schedule,
                         const AlgorithmSpec& spec);

struct CompetitiveEstimate {
  std::uint64_t trials = 0;
  double opt_weight = 0.0;
  double utility_ratio = 0.0;   // mean selected weight / optimum weight
  double min_frequency = 0.0;   // over elements of the optimum
  struct PerElement {
    ElementId id = 0;
    double weight = 0.0;
    double frequency = 0.0;
    double std_error = 0.0;
  };
  std::vector<PerElement> per_element;  // optimum elements, ascending id
};

// Runs `trials` independent simulations with schedule seeds base_seed + 0
// ... base_seed + trials - 1. The estimate is identical for every worker
// count. When `trace` is non-null, one line-delimited JSON record per
// arrival is written, grouped by trial in seed order.
CompetitiveEstimate monte_carlo(const LaminarMatroid& m, const AlgorithmSpec& spec,
                                std::uint64_t trials, std::uint64_t base_seed,
                                int workers, std::ostream* trace = nullptr);

// Arrival times, descending, of the elements of the node that belonged to
// the optimum of the node's submatroid at their own arrival, restricted to
// arrivals strictly before t.
std::vector<double> qualified_times(const LaminarMatroid& m,
                                    const ArrivalSchedule& schedule,
                                    int node_index, double t);

struct LemmaTestResult {
  double ks_exp = 0.0;          // KS distance of ln(t/t_{-1}) vs Exp(capacity)
  double ks_gamma = 0.0;        // KS distance of ln(t/t_{-c}) vs Gamma(c, c)
  std::uint64_t trials = 0;
  std::uint64_t discarded = 0;  // trials with fewer than c qualified arrivals
  double discard_rate = 0.0;
  double critical_value_95 = 0.0;  // 1.36 / sqrt(effective trials)
};

// Builds a single-set matroid (capacity, n_elements) and measures how the
// log-ratios of qualified arrival times fit the Exponential and Gamma
// targets over `trials` sampled schedules.
LemmaTestResult lemma_distribution_test(int capacity, int n_elements, double t,
                                        std::uint64_t trials, std::uint64_t seed);

// One-sample Kolmogorov-Smirnov statistic against a CDF.
double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf);

double exponential_cdf(double x, double rate);

}  // namespace lms
