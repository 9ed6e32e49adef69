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

// (epsilon, delta)-DP mean of a univariate sub-gaussian sample whose mean is
// not bounded a priori.
//
// Phase 1 spends epsilon/2 (and all of delta) on a private histogram with bin
// width sqrt(variance_upper) to find where the data lives. Phase 2 clamps the
// sample to that bin widened by the sub-gaussian radius
// w * sqrt(2 log(2n / gamma)) on each side and releases the clamped mean with
// Laplace noise of scale width / (n * epsilon/2).

#ifndef DPREG_UNIVARIATE_MEAN_HPP_
#define DPREG_UNIVARIATE_MEAN_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>

#include "dpreg/privacy.hpp"

namespace dpreg {

inline constexpr std::size_t kMinUnivariateSamples = 10;

struct UnivariateMeanConfig {
  double variance_upper = 1.0;
  PrivacyBudget budget;
  double gamma = 0.05;

  void validate() const {
    require(variance_upper >= 1.0 && std::isfinite(variance_upper),
            "univariate mean: variance_upper must be >= 1");
    require(gamma > 0.0 && gamma < 1.0,
            "univariate mean: gamma must lie in (0, 1)");
    budget.validate();
  }
};

struct UnivariateMeanResult {
  double mean = 0.0;
  double lower = 0.0;  // clamping range
  double upper = 0.0;
  std::size_t clamped = 0;
};

inline double clamp_radius(std::size_t n, double bin_width, double gamma) {
  return bin_width *
         std::sqrt(2.0 * std::log(2.0 * static_cast<double>(n) / gamma));
}

inline std::optional<UnivariateMeanResult> estimate_mean_1d(
    std::span<const double> values, const UnivariateMeanConfig& cfg,
    Rng& rng) {
  cfg.validate();
  require(!values.empty(), "estimate_mean_1d: empty input");
  require(values.size() >= kMinUnivariateSamples,
          "estimate_mean_1d: need at least 10 samples");

  const std::size_t n = values.size();
  const PrivacyBudget locate{cfg.budget.epsilon / 2.0, cfg.budget.delta};
  const double release_epsilon = cfg.budget.epsilon / 2.0;
  const double w = std::sqrt(cfg.variance_upper);

  const std::optional<HistogramResult> bin =
      dp_histogram(values, w, locate, cfg.gamma, rng);
  if (!bin) return std::nullopt;

  const double r = clamp_radius(n, w, cfg.gamma);
  UnivariateMeanResult out;
  out.lower = bin->bin_lower - r;
  out.upper = bin->bin_upper() + r;

  double sum = 0.0;
  for (double v : values) {
    const double c = std::clamp(v, out.lower, out.upper);
    if (c != v) ++out.clamped;
    sum += c;
  }
  out.mean = sum / static_cast<double>(n);
  if (!cfg.budget.unbounded()) {
    const double width = out.upper - out.lower;
    out.mean += laplace_noise(
        width / (static_cast<double>(n) * release_epsilon), rng);
  }
  return out;
}

}  // namespace dpreg

#endif  // DPREG_UNIVARIATE_MEAN_HPP_
