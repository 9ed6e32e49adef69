// Copyright 2026 dpreg contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Privacy accounting, calibrated noise, and the stability-based histogram.
//
// Budgets are (epsilon, delta) approximate-DP pairs. epsilon may be +infinity,
// which switches every mechanism off (no noise is drawn); this is how the
// degenerate "non-private" limits are exercised in tests.

#ifndef DPREG_PRIVACY_HPP_
#define DPREG_PRIVACY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "dpreg/common.hpp"

namespace dpreg {

struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;

  // epsilon > 0 (infinity allowed), 0 < delta < 1.
  void validate() const {
    require(epsilon > 0.0 && !std::isnan(epsilon),
            "privacy budget: epsilon must be positive");
    require(delta > 0.0 && delta < 1.0,
            "privacy budget: delta must lie in (0, 1)");
  }

  bool unbounded() const { return std::isinf(epsilon); }

  PrivacyBudget scaled(double fraction) const {
    return {epsilon * fraction, delta * fraction};
  }

  // k equal shares; basic composition of the shares never exceeds *this.
  std::vector<PrivacyBudget> split(std::size_t k) const {
    require(k >= 1, "privacy budget: cannot split into zero parts");
    const double kd = static_cast<double>(k);
    return std::vector<PrivacyBudget>(k, {epsilon / kd, delta / kd});
  }

  friend bool operator==(const PrivacyBudget&, const PrivacyBudget&) = default;
};

inline PrivacyBudget make_budget(double epsilon, double delta) {
  PrivacyBudget b{epsilon, delta};
  b.validate();
  return b;
}

// Zero-concentrated DP parameter.
struct ZcdpBudget {
  double rho = 0.0;

  // An epsilon-parameterized mechanism in the "rho = eps^2 / 2" convention.
  static ZcdpBudget from_epsilon(double epsilon) {
    require(epsilon > 0.0, "zcdp: epsilon must be positive");
    return {0.5 * epsilon * epsilon};
  }

  // Largest rho whose conversion at budget.delta stays within budget.epsilon,
  // i.e. the positive root of rho + 2 sqrt(rho L) = eps with L = log(1/delta).
  static ZcdpBudget from_approx_dp(const PrivacyBudget& budget) {
    budget.validate();
    if (budget.unbounded()) return {std::numeric_limits<double>::infinity()};
    const double l = std::log(1.0 / budget.delta);
    const double root = budget.epsilon / (std::sqrt(l + budget.epsilon) +
                                          std::sqrt(l));
    return {root * root};
  }

  // rho-zCDP implies (rho + 2 sqrt(rho log(1/delta)), delta)-DP.
  PrivacyBudget to_approx_dp(double delta) const {
    require(rho > 0.0, "zcdp: rho must be positive");
    require(delta > 0.0 && delta < 1.0, "zcdp: delta must lie in (0, 1)");
    if (std::isinf(rho)) return {rho, delta};
    return {rho + 2.0 * std::sqrt(rho * std::log(1.0 / delta)), delta};
  }
};

// Total guarantee of the regression estimators for parameters (epsilon,
// delta): (eps^2/2 + eps sqrt(2 log(1/delta)), delta).
inline PrivacyBudget estimator_budget(double epsilon, double delta) {
  return ZcdpBudget::from_epsilon(epsilon).to_approx_dp(delta);
}

// Basic composition: (sum eps, sum delta). Empty input gives (0, 0).
inline PrivacyBudget compose(std::span<const PrivacyBudget> budgets) {
  PrivacyBudget total{0.0, 0.0};
  for (const PrivacyBudget& b : budgets) {
    total.epsilon += b.epsilon;
    total.delta += b.delta;
  }
  return total;
}

// Mechanisms run on disjoint row sets.
inline PrivacyBudget compose_parallel(std::span<const PrivacyBudget> budgets) {
  PrivacyBudget total{0.0, 0.0};
  for (const PrivacyBudget& b : budgets) {
    total.epsilon = std::max(total.epsilon, b.epsilon);
    total.delta = std::max(total.delta, b.delta);
  }
  return total;
}

// Advanced composition of N adaptive (eps, delta_i)-DP steps:
// (eps sqrt(6 N log(1/delta')), delta' + N delta_i).
inline PrivacyBudget advanced_compose(const PrivacyBudget& per_step,
                                      std::size_t steps, double delta_prime) {
  per_step.validate();
  require(delta_prime > 0.0 && delta_prime < 1.0,
          "advanced_compose: delta' must lie in (0, 1)");
  const double n = static_cast<double>(steps);
  return {per_step.epsilon * std::sqrt(6.0 * n * std::log(1.0 / delta_prime)),
          delta_prime + n * per_step.delta};
}

// Standard deviation of the Gaussian mechanism meeting `budget` for the given
// L2 sensitivity (calibrated through zCDP). Zero when the budget is unbounded.
inline double gaussian_sigma(double l2_sensitivity,
                             const PrivacyBudget& budget) {
  require(l2_sensitivity >= 0.0, "gaussian_sigma: negative sensitivity");
  if (budget.unbounded()) return 0.0;
  const double rho = ZcdpBudget::from_approx_dp(budget).rho;
  return l2_sensitivity / std::sqrt(2.0 * rho);
}

inline double laplace_noise(double scale, Rng& rng) {
  require(scale > 0.0 && std::isfinite(scale),
          "laplace_noise: scale must be positive and finite");
  std::exponential_distribution<double> exp1(1.0);
  const double a = exp1(rng);
  const double b = exp1(rng);
  return scale * (a - b);
}

// Symmetric d x d matrix whose upper triangle (diagonal included) is i.i.d.
// N(0, sigma^2).
inline Matrix symmetric_gaussian_matrix(std::size_t d, double sigma, Rng& rng) {
  require(d >= 1, "symmetric_gaussian_matrix: dimension must be positive");
  require(sigma > 0.0 && std::isfinite(sigma),
          "symmetric_gaussian_matrix: sigma must be positive and finite");
  std::normal_distribution<double> normal(0.0, sigma);
  const auto n = static_cast<Eigen::Index>(d);
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      m(i, j) = normal(rng);
      m(j, i) = m(i, j);
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Stability-based histogram over the bins [k w, (k+1) w), k in Z.

struct HistogramResult {
  std::int64_t bin_index = 0;
  double bin_lower = 0.0;
  double bin_width = 0.0;
  double noisy_mass = 0.0;

  double bin_upper() const { return bin_lower + bin_width; }
};

inline std::int64_t bin_of(double value, double bin_width) {
  const double k = std::floor(value / bin_width);
  require(std::isfinite(k) && std::abs(k) < 0x1p62,
          "histogram: value outside the representable bin range");
  return static_cast<std::int64_t>(k);
}

// Normalized counts (count / n) of the occupied bins only.
inline std::map<std::int64_t, double> histogram_masses(
    std::span<const double> values, double bin_width) {
  require(bin_width > 0.0, "histogram: bin width must be positive");
  std::map<std::int64_t, double> masses;
  const double unit = 1.0 / static_cast<double>(values.size());
  for (double v : values) masses[bin_of(v, bin_width)] += unit;
  return masses;
}

inline double histogram_threshold(std::size_t n, const PrivacyBudget& budget,
                                  double gamma) {
  const double nd = static_cast<double>(n);
  if (budget.unbounded()) return 1.0 / nd;
  return 2.0 * std::log(2.0 / (budget.delta * gamma)) / (nd * budget.epsilon) +
         1.0 / nd;
}

// Releases the most frequent bin when its noisy mass clears the stability
// threshold; std::nullopt otherwise. Ties go to the lowest bin index.
inline std::optional<HistogramResult> dp_histogram(
    std::span<const double> values, double bin_width,
    const PrivacyBudget& budget, double gamma, Rng& rng) {
  require(!values.empty(), "dp_histogram: empty input");
  require(bin_width > 0.0 && std::isfinite(bin_width),
          "dp_histogram: bin width must be positive");
  require(gamma > 0.0 && gamma < 1.0, "dp_histogram: gamma must lie in (0, 1)");
  budget.validate();

  const std::size_t n = values.size();
  const double noise_scale =
      2.0 / (static_cast<double>(n) * budget.epsilon);
  const double threshold = histogram_threshold(n, budget, gamma);

  std::optional<HistogramResult> best;
  for (const auto& [bin, mass] : histogram_masses(values, bin_width)) {
    const double noisy =
        budget.unbounded() ? mass : mass + laplace_noise(noise_scale, rng);
    if (noisy > threshold && (!best || noisy > best->noisy_mass)) {
      best = HistogramResult{bin, static_cast<double>(bin) * bin_width,
                             bin_width, noisy};
    }
  }
  return best;
}

}  // namespace dpreg

#endif  // DPREG_PRIVACY_HPP_
