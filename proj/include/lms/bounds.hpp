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

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lms {

// Raised when the geometric tail bound of the survival sum diverges
// (e*x >= 1, i.e. the threshold time is at or below e^(-1/e)).
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// CDF at x of the Gamma distribution whose shape and rate both equal
// `shape`: the regularized lower incomplete gamma P(shape, shape*x).
// Series expansion for small arguments, Lentz continued fraction otherwise;
// absolute error below 1e-12.
double gamma_cdf(double x, int shape);

// Same CDF through the complementary Erlang sum, evaluated in log space.
// An independent formula used to cross-check gamma_cdf.
double gamma_cdf_erlang(double x, int shape);

struct SurvivalSum {
  double partial = 0.0;  // sum_{i=1..K} gamma_cdf(x, i)
  double tail = 0.0;     // certified upper bound on the remainder past K
};

// Splits sum_i gamma_cdf(x, i) at truncation K. The remainder is bounded by
// the geometric series sum_{i>K} (e*x)^i, which converges only for e*x < 1;
// with include_tail and e*x >= 1 a ConvergenceError is thrown. Without
// include_tail the tail is reported as zero (finite sums need none).
SurvivalSum survival_sum(double x, int truncation, bool include_tail);

struct BoundQuery {
  double t0 = 0.7;
  std::optional<int> max_rank;  // nullopt: sum over all capacities
  int truncation = 3000;
  double quadrature_tol = 1e-9;
};

struct BoundResult {
  double lower_bound = 0.0;  // certified: integral minus integrated tail bound
  double tail_error = 0.0;
  double ratio = 0.0;        // 1 / lower_bound
  double t0 = 0.0;
};

// Lower bound on the probability that any fixed element of the optimum is
// selected: the integral over arrival times t* in [t0, 1] of
// 1 - sum_i gamma_cdf(ln(t*/t0), i), summed to min(truncation, max_rank).
// The integrated tail bound is subtracted, so the result is certified up to
// the quadrature tolerance.
BoundResult selection_prob_lower_bound(const BoundQuery& q);

struct OptimizeResult {
  double t0_star = 0.0;
  double ratio = 0.0;
  double lower_bound = 0.0;
};

// Maximizes the lower bound over the admissible threshold interval:
// (e^(-1/e), 1) when the sum is unbounded, (0, 1) otherwise. Coarse grid
// scan followed by golden-section refinement to |dt0| <= 1e-4.
OptimizeResult optimize_t0(std::optional<int> max_rank, int truncation = 3000,
                           double quadrature_tol = 1e-9);

struct RatioRow {
  std::optional<int> rank;  // nullopt: unbounded
  double t0_star = 0.0;
  double ratio = 0.0;
};

std::vector<RatioRow> ratio_table(const std::vector<int>& ranks,
                                  bool include_infinite, int truncation = 3000,
                                  double quadrature_tol = 1e-9);

// CSV with header "rank,t0_star,ratio"; the unbounded row prints as "inf".
std::string ratio_table_csv(const std::vector<RatioRow>& rows);

}  // namespace lms
