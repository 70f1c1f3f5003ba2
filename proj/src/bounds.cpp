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

#include "lms/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace lms {

namespace {

constexpr double kEulerE = 2.718281828459045235360287;

// Lower regularized incomplete gamma P(a, z) by power series; valid and
// fast for z < a + 1.
double gamma_p_series(double a, double z) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= z / (a + n);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum * std::exp(a * std::log(z) - z - std::lgamma(a));
}

// Upper regularized incomplete gamma Q(a, z) by modified Lentz continued
// fraction; valid for z >= a + 1.
double gamma_q_continued_fraction(double a, double z) {
  const double tiny = 1e-300;
  double b = z + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(a * std::log(z) - z - std::lgamma(a)) * h;
}

// Recursive adaptive Simpson with the classic (S_left+S_right-S)/15 error
// estimate.
template <typename F>
double simpson_recurse(const F& f, double a, double fa, double b, double fb,
                       double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double err = left + right - whole;
  if (depth <= 0 || std::fabs(err) <= 15.0 * tol) {
    return left + right + err / 15.0;
  }
  return simpson_recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

// Partial survival sum. The series prefactor exp(i*ln(i*x) - i*x - lgamma(i))
// is built with lgamma carried incrementally across shapes, which keeps the
// 3000-term sum to one log and one exp per term. Early exit: once the
// certified geometric remainder past i drops below 1e-17 the skipped terms
// cannot move the sum at the per-term accuracy.
double survival_partial(double x, int truncation) {
  if (x <= 0.0) return 0.0;
  const double ex = kEulerE * x;
  const double lnx = std::log(x);
  double geometric = 1.0;          // (e*x)^i
  double lgamma_i = 0.0;           // lgamma(i), starting at i = 1
  double lgamma_comp = 0.0;        // Kahan compensation for the log sum
  double sum = 0.0;
  for (int i = 1; i <= truncation; ++i) {
    const double a = i;
    const double z = a * x;
    const double lni = std::log(a);
    if (z < a + 1.0) {
      double term = 1.0 / a;
      double series = term;
      for (int n = 1; n < 10000; ++n) {
        term *= z / (a + n);
        series += term;
        if (term < series * 1e-17) break;
      }
      sum += series * std::exp(a * (lni + lnx) - z - lgamma_i);
    } else {
      sum += gamma_cdf(x, i);
    }
    const double y = lni - lgamma_comp;
    const double t = lgamma_i + y;
    lgamma_comp = (t - lgamma_i) - y;
    lgamma_i = t;
    if (ex < 1.0) {
      geometric *= ex;
      if (geometric * ex / (1.0 - ex) < 1e-17) break;
    }
  }
  return sum;
}

double tail_bound(double x, int truncation) {
  if (x <= 0.0) return 0.0;
  const double ex = kEulerE * x;
  return std::pow(ex, truncation + 1) / (1.0 - ex);
}

void validate_query(const BoundQuery& q) {
  if (!(q.t0 > 0.0 && q.t0 < 1.0)) {
    throw std::invalid_argument("t0 must lie strictly between 0 and 1");
  }
  if (q.truncation < 1) {
    throw std::invalid_argument("truncation must be >= 1");
  }
  if (!(q.quadrature_tol > 0.0)) {
    throw std::invalid_argument("quadrature tolerance must be positive");
  }
  if (q.max_rank && *q.max_rank < 1) {
    throw std::invalid_argument("max rank must be >= 1");
  }
}

}  // namespace

double gamma_cdf(double x, int shape) {
  if (shape < 1) throw std::invalid_argument("gamma_cdf: shape must be >= 1");
  if (x < 0.0) throw std::invalid_argument("gamma_cdf: x must be >= 0");
  if (x == 0.0) return 0.0;
  const double a = shape;
  const double z = a * x;
  if (z < a + 1.0) {
    return std::min(1.0, gamma_p_series(a, z));
  }
  return std::min(1.0, std::max(0.0, 1.0 - gamma_q_continued_fraction(a, z)));
}

double gamma_cdf_erlang(double x, int shape) {
  if (shape < 1) throw std::invalid_argument("gamma_cdf_erlang: shape must be >= 1");
  if (x < 0.0) throw std::invalid_argument("gamma_cdf_erlang: x must be >= 0");
  if (x == 0.0) return 0.0;
  const double z = static_cast<double>(shape) * x;
  const double logz = std::log(z);
  double survivor = 0.0;
  for (int j = 0; j < shape; ++j) {
    survivor += std::exp(j * logz - z - std::lgamma(j + 1.0));
  }
  return std::max(0.0, 1.0 - survivor);
}

SurvivalSum survival_sum(double x, int truncation, bool include_tail) {
  if (x < 0.0) throw std::invalid_argument("survival_sum: x must be >= 0");
  if (truncation < 1) throw std::invalid_argument("survival_sum: truncation must be >= 1");
  SurvivalSum out;
  if (x == 0.0) return out;
  out.partial = survival_partial(x, truncation);
  if (include_tail) {
    if (kEulerE * x >= 1.0) {
      throw ConvergenceError(
          "survival sum tail diverges: e*x >= 1 (x = " + std::to_string(x) + ")");
    }
    out.tail = tail_bound(x, truncation);
  }
  return out;
}

BoundResult selection_prob_lower_bound(const BoundQuery& q) {
  validate_query(q);
  const bool needs_tail = !q.max_rank || *q.max_rank > q.truncation;
  if (needs_tail && kEulerE * std::log(1.0 / q.t0) >= 1.0) {
    throw ConvergenceError(
        "tail bound diverges at t* = 1: t0 must exceed e^(-1/e) ~= 0.6922 "
        "when the capacity sum is unbounded");
  }
  const int terms = q.max_rank ? std::min(q.truncation, *q.max_rank) : q.truncation;

  const double integral = adaptive_simpson(
      [&](double ts) { return 1.0 - survival_partial(std::log(ts / q.t0), terms); },
      q.t0, 1.0, q.quadrature_tol);

  double tail_integral = 0.0;
  if (needs_tail) {
    tail_integral = adaptive_simpson(
        [&](double ts) { return tail_bound(std::log(ts / q.t0), q.truncation); },
        q.t0, 1.0, std::min(q.quadrature_tol, 1e-12));
  }

  BoundResult out;
  out.t0 = q.t0;
  out.tail_error = tail_integral;
  out.lower_bound = std::max(0.0, integral - tail_integral);
  out.ratio = out.lower_bound > 0.0
                  ? 1.0 / out.lower_bound
                  : std::numeric_limits<double>::infinity();
  return out;
}

OptimizeResult optimize_t0(std::optional<int> max_rank, int truncation,
                           double quadrature_tol) {
  const bool needs_tail = !max_rank || *max_rank > truncation;
  // With a tail term the threshold must stay above e^(-1/e) for convergence.
  const double lo = needs_tail ? std::exp(-1.0 / kEulerE) + 1e-6 : 1e-4;
  const double hi = 1.0 - 1e-6;

  double best_t0 = lo;
  double best_val = -std::numeric_limits<double>::infinity();
  auto consider = [&](double t0) {
    // Near the divergence boundary the integrated tail penalty explodes;
    // 1 - t0 - tail is an upper envelope of the objective, so thresholds
    // that cannot beat the incumbent are skipped before the expensive
    // 3000-term integral.
    if (needs_tail) {
      const double envelope =
          1.0 - t0 -
          adaptive_simpson(
              [&](double ts) { return tail_bound(std::log(ts / t0), truncation); },
              t0, 1.0, 1e-12);
      if (envelope <= best_val) return envelope;
    }
    BoundQuery q;
    q.t0 = t0;
    q.max_rank = max_rank;
    q.truncation = truncation;
    q.quadrature_tol = quadrature_tol;
    const double v = selection_prob_lower_bound(q).lower_bound;
    if (v > best_val) {
      best_val = v;
      best_t0 = t0;
    }
    return v;
  };

  // Coarse scan to bracket the maximum, then golden-section refinement.
  const int kGrid = 64;
  std::vector<double> grid(kGrid), values(kGrid);
  for (int i = kGrid - 1; i >= 0; --i) {
    grid[i] = lo + (hi - lo) * i / (kGrid - 1);
    values[i] = consider(grid[i]);
  }
  int peak = static_cast<int>(std::max_element(values.begin(), values.end()) -
                              values.begin());
  double a = grid[std::max(0, peak - 1)];
  double b = grid[std::min(kGrid - 1, peak + 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = consider(x1);
  double f2 = consider(x2);
  while (b - a > 1e-5) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = consider(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = consider(x1);
    }
  }

  OptimizeResult out;
  out.t0_star = best_t0;
  out.lower_bound = best_val;
  out.ratio = best_val > 0.0 ? 1.0 / best_val
                             : std::numeric_limits<double>::infinity();
  return out;
}

std::vector<RatioRow> ratio_table(const std::vector<int>& ranks,
                                  bool include_infinite, int truncation,
                                  double quadrature_tol) {
  if (ranks.empty() && !include_infinite) {
    throw std::invalid_argument("ratio_table: ranks must be nonempty");
  }
  std::vector<RatioRow> rows;
  for (int rank : ranks) {
    OptimizeResult r = optimize_t0(rank, truncation, quadrature_tol);
    rows.push_back({rank, r.t0_star, r.ratio});
  }
  if (include_infinite) {
    OptimizeResult r = optimize_t0(std::nullopt, truncation, quadrature_tol);
    rows.push_back({std::nullopt, r.t0_star, r.ratio});
  }
  return rows;
}

std::string ratio_table_csv(const std::vector<RatioRow>& rows) {
  std::ostringstream out;
  out << "rank,t0_star,ratio\n";
  char buf[96];
  for (const RatioRow& row : rows) {
    if (row.rank) {
      std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f\n", *row.rank, row.t0_star,
                    row.ratio);
    } else {
      std::snprintf(buf, sizeof(buf), "inf,%.6f,%.6f\n", row.t0_star, row.ratio);
    }
    out << buf;
  }
  return out.str();
}

}  // namespace lms
