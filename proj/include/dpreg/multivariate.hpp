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

// Private covariance and mean estimation for (sub-)gaussian vectors.
//
//   naive_pce            truncate, second moment, symmetric Gaussian noise,
//                        PSD projection
//   learn_preconditioner shrink the largest-variance eigendirections over
//                        O(log kappa) rounds of naive_pce
//   learn_covariance_hd  preconditioner + naive_pce on A x, mapped back
//   learn_mean_hd        preconditioner from paired differences, then the
//                        univariate estimator on every coordinate of A x
//   learn_gaussian_hd    both of the above on one dataset

#ifndef DPREG_MULTIVARIATE_HPP_
#define DPREG_MULTIVARIATE_HPP_

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "dpreg/linalg.hpp"
#include "dpreg/privacy.hpp"
#include "dpreg/univariate_mean.hpp"

namespace dpreg {

inline constexpr double kShrinkFactor = 0.7;
inline constexpr double kStopKappa = 4.0;
inline constexpr double kConditioningCeiling = 1000.0;

// ---------------------------------------------------------------------------
// Truncation and sensitivity.

// Squared norm at which rows are projected back onto the ball.
inline double truncation_radius_sq(std::size_t n, std::size_t d, double kappa,
                                   double gamma) {
  return kappa * static_cast<double>(d) *
         std::log(static_cast<double>(n) / gamma);
}

// Worst case of ||(x x^T - x' x'^T) / n||_F over ||x||, ||x'|| <= R. It equals
// sqrt(||x||^4 + ||x'||^4 - 2 (x.x')^2) / n, maximized by orthogonal rows at
// the radius.
inline double pce_sensitivity(std::size_t n, std::size_t d, double kappa,
                              double gamma) {
  return std::numbers::sqrt2 * truncation_radius_sq(n, d, kappa, gamma) /
         static_cast<double>(n);
}

// Triangle-inequality bound (||x||^2 + ||x'||^2) / n = (2/n) kappa d log(n/g).
inline double pce_sensitivity_bound(std::size_t n, std::size_t d, double kappa,
                                    double gamma) {
  return 2.0 * truncation_radius_sq(n, d, kappa, gamma) /
         static_cast<double>(n);
}

// Projects every row with squared norm above radius_sq onto the ball. Returns
// the number of rows touched.
inline std::size_t truncate_rows(Matrix& rows, double radius_sq) {
  std::size_t touched = 0;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const double sq = rows.row(i).squaredNorm();
    if (sq > radius_sq) {
      rows.row(i) *= std::sqrt(radius_sq / sq);
      ++touched;
    }
  }
  return touched;
}

// (x_{2i+1} - x_{2i}) / sqrt(2): zero-mean rows with the original covariance.
inline Matrix paired_differences(const Matrix& rows) {
  const Eigen::Index pairs = rows.rows() / 2;
  require(pairs >= 1, "paired_differences: need at least two rows");
  Matrix out(pairs, rows.cols());
  for (Eigen::Index i = 0; i < pairs; ++i) {
    out.row(i) = (rows.row(2 * i + 1) - rows.row(2 * i)) / std::numbers::sqrt2;
  }
  return out;
}

// ---------------------------------------------------------------------------
// NaivePCE

struct NaivePceResult {
  Matrix estimate;
  std::size_t truncated_rows = 0;
  bool rank_deficient = false;  // n < d
};

// Samples are treated as zero-mean.
inline NaivePceResult naive_pce(const Matrix& samples, double kappa,
                                const PrivacyBudget& budget, double gamma,
                                Rng& rng) {
  require(samples.rows() > 0, "naive_pce: no samples");
  require(samples.cols() > 0, "naive_pce: zero dimension");
  require(kappa >= 1.0 && std::isfinite(kappa), "naive_pce: kappa must be >= 1");
  require(gamma > 0.0 && gamma < 1.0, "naive_pce: gamma must lie in (0, 1)");
  budget.validate();

  const auto n = static_cast<std::size_t>(samples.rows());
  const auto d = static_cast<std::size_t>(samples.cols());

  NaivePceResult out;
  out.rank_deficient = n < d;
  Matrix rows = samples;
  out.truncated_rows =
      truncate_rows(rows, truncation_radius_sq(n, d, kappa, gamma));
  Matrix m = second_moment(rows);
  if (!budget.unbounded()) {
    const double sigma =
        gaussian_sigma(pce_sensitivity(n, d, kappa, gamma), budget);
    m += symmetric_gaussian_matrix(d, sigma, rng);
  }
  out.estimate = psd_project(m);
  return out;
}

// ---------------------------------------------------------------------------
// Preconditioner

struct Preconditioner {
  Matrix a;                // symmetric, invertible
  double kappa_in = 1.0;   // spectral bound supplied by the caller
  double kappa_out = 1.0;  // bound on A Sigma A after the last round
  int rounds = 0;

  Matrix inverse() const { return inverse_symmetric(a); }
};

// Rounds needed to bring kappa down to kStopKappa at kShrinkFactor per round.
// This never exceeds ceil(log(kappa) / log(1 / 0.7)).
inline int preconditioner_rounds(double kappa) {
  int rounds = 0;
  for (double k = kappa; k > kStopKappa; k *= kShrinkFactor) ++rounds;
  return rounds;
}

// Requires zero-mean samples and Sigma <= kappa I; with a smaller kappa there
// is no guarantee on the result.
inline Preconditioner learn_preconditioner(const Matrix& samples, double kappa,
                                           const PrivacyBudget& budget,
                                           double gamma, Rng& rng) {
  require(kappa >= 1.0 && std::isfinite(kappa),
          "learn_preconditioner: kappa must be >= 1");
  budget.validate();
  const Eigen::Index d = samples.cols();

  Preconditioner out;
  out.kappa_in = kappa;
  out.rounds = preconditioner_rounds(kappa);
  out.kappa_out = kappa;
  if (out.rounds == 0) {
    out.a = Matrix::Identity(d, d);
    return out;
  }

  const PrivacyBudget per_round = budget.split(out.rounds).front();
  // Accumulated (generally non-symmetric) transform; rows are mapped x -> G x.
  Matrix g = Matrix::Identity(d, d);
  double k = kappa;
  for (int round = 0; round < out.rounds; ++round) {
    const Matrix current = samples * g.transpose();
    const Matrix estimate =
        naive_pce(current, k, per_round, gamma, rng).estimate;
    const double k_next = kShrinkFactor * k;
    SymmetricEigen e = eigen_symmetric(estimate);
    Vector scale = Vector::Ones(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      if (e.values(i) > k / 2.0) scale(i) = std::sqrt(k_next / e.values(i));
    }
    g = from_eigen(scale, e.vectors) * g;
    k = k_next;
  }
  // The symmetric polar factor (G^T G)^{1/2} gives A Sigma A the spectrum of
  // G Sigma G^T.
  out.a = sqrt_psd(g.transpose() * g);
  out.kappa_out = k;
  return out;
}

// ---------------------------------------------------------------------------
// Covariance and mean

struct EstimationConfig {
  double kappa = 1.0;
  double alpha = 0.1;
  double gamma = 0.05;
  PrivacyBudget budget;

  void validate() const {
    require(kappa >= 1.0 && std::isfinite(kappa),
            "estimation config: kappa must be >= 1");
    require(alpha > 0.0 && alpha < 1.0,
            "estimation config: alpha must lie in (0, 1)");
    require(gamma > 0.0 && gamma < 1.0,
            "estimation config: gamma must lie in (0, 1)");
    budget.validate();
  }
};

struct CovarianceEstimate {
  Matrix cov_hat;
  Preconditioner preconditioner;
  std::size_t truncated_rows = 0;  // in the final naive_pce call
  bool rank_deficient = false;
};

// Zero-mean samples; callers with unknown mean pass paired_differences().
// The budget is shared equally by every naive_pce call (preconditioner rounds
// plus the final one).
inline CovarianceEstimate learn_covariance_hd(const Matrix& samples,
                                              const EstimationConfig& cfg,
                                              Rng& rng) {
  cfg.validate();
  require(samples.rows() > 0, "learn_covariance_hd: no samples");

  const int rounds = preconditioner_rounds(cfg.kappa);
  const std::vector<PrivacyBudget> shares = cfg.budget.split(rounds + 1);
  const PrivacyBudget preconditioner_budget =
      cfg.budget.scaled(static_cast<double>(rounds) / (rounds + 1));

  CovarianceEstimate out;
  out.preconditioner =
      rounds == 0
          ? learn_preconditioner(samples, cfg.kappa, cfg.budget, cfg.gamma, rng)
          : learn_preconditioner(samples, cfg.kappa, preconditioner_budget,
                                 cfg.gamma, rng);
  const Matrix& a = out.preconditioner.a;
  const NaivePceResult inner =
      naive_pce(samples * a, out.preconditioner.kappa_out, shares.back(),
                cfg.gamma, rng);
  const Matrix a_inv = out.preconditioner.inverse();
  out.cov_hat = symmetrize(a_inv * inner.estimate * a_inv);
  out.truncated_rows = inner.truncated_rows;
  out.rank_deficient = inner.rank_deficient;
  return out;
}

struct MeanEstimate {
  Vector mean_hat;
  Preconditioner preconditioner;
  std::size_t preconditioner_rows = 0;  // leading rows used for A
  std::size_t mean_rows = 0;            // trailing rows used for the mean
  std::size_t clamped_values = 0;
};

// Rows consumed by the preconditioner in learn_mean_hd: floor(2n/3), or none
// when kappa needs no preconditioning rounds.
inline std::size_t mean_preconditioner_rows(std::size_t n, double kappa) {
  return preconditioner_rounds(kappa) == 0 ? 0 : (2 * n) / 3;
}

// The preconditioner and the coordinate means read disjoint rows, so each part
// receives the full budget. The d coordinate releases share it equally, with
// confidence gamma / d each. Any coordinate failing to release yields nullopt.
inline std::optional<MeanEstimate> learn_mean_hd(const Matrix& samples,
                                                 const EstimationConfig& cfg,
                                                 Rng& rng) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(samples.rows());
  const auto d = static_cast<std::size_t>(samples.cols());
  require(n > 0 && d > 0, "learn_mean_hd: empty samples");

  MeanEstimate out;
  out.preconditioner_rows = mean_preconditioner_rows(n, cfg.kappa);
  out.mean_rows = n - out.preconditioner_rows;
  require(out.mean_rows >= kMinUnivariateSamples,
          "learn_mean_hd: too few rows left for the mean");

  if (out.preconditioner_rows == 0) {
    out.preconditioner =
        learn_preconditioner(samples, cfg.kappa, cfg.budget, cfg.gamma, rng);
  } else {
    const Matrix diffs = paired_differences(
        samples.topRows(static_cast<Eigen::Index>(out.preconditioner_rows)));
    out.preconditioner =
        learn_preconditioner(diffs, cfg.kappa, cfg.budget, cfg.gamma, rng);
  }

  const Matrix projected =
      samples.bottomRows(static_cast<Eigen::Index>(out.mean_rows)) *
      out.preconditioner.a;
  const PrivacyBudget per_coordinate = cfg.budget.split(d).front();
  UnivariateMeanConfig ucfg;
  ucfg.variance_upper = std::max(1.0, out.preconditioner.kappa_out);
  ucfg.budget = per_coordinate;
  ucfg.gamma = cfg.gamma / static_cast<double>(d);

  // Independent stream per coordinate, so the result does not depend on the
  // order in which coordinates are processed.
  const std::uint64_t stream_base = rng();
  Vector tilde(static_cast<Eigen::Index>(d));
  std::vector<double> column(out.mean_rows);
  for (std::size_t j = 0; j < d; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    for (std::size_t i = 0; i < out.mean_rows; ++i) {
      column[i] = projected(static_cast<Eigen::Index>(i), jj);
    }
    Rng coordinate_rng = derive_rng(stream_base, j);
    const std::optional<UnivariateMeanResult> r =
        estimate_mean_1d(column, ucfg, coordinate_rng);
    if (!r) return std::nullopt;
    tilde(jj) = r->mean;
    out.clamped_values += r->clamped;
  }
  out.mean_hat = out.preconditioner.inverse() * tilde;
  return out;
}

struct GaussianEstimate {
  Vector mean_hat;
  Matrix cov_hat;
  Preconditioner preconditioner;  // from the covariance call
  PrivacyBudget budget_spent;
  std::size_t truncated_rows = 0;
  std::size_t clamped_values = 0;
};

// Covariance from paired differences of all rows, mean from learn_mean_hd on
// all rows; each gets half of the budget (basic composition).
inline std::optional<GaussianEstimate> learn_gaussian_hd(
    const Matrix& samples, const EstimationConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::vector<PrivacyBudget> halves = cfg.budget.split(2);

  EstimationConfig cov_cfg = cfg;
  cov_cfg.budget = halves[0];
  CovarianceEstimate cov =
      learn_covariance_hd(paired_differences(samples), cov_cfg, rng);

  EstimationConfig mean_cfg = cfg;
  mean_cfg.budget = halves[1];
  std::optional<MeanEstimate> mean = learn_mean_hd(samples, mean_cfg, rng);
  if (!mean) return std::nullopt;

  GaussianEstimate out;
  out.mean_hat = std::move(mean->mean_hat);
  out.cov_hat = std::move(cov.cov_hat);
  out.preconditioner = std::move(cov.preconditioner);
  out.budget_spent = compose(halves);
  out.truncated_rows = cov.truncated_rows;
  out.clamped_values = mean->clamped_values;
  return out;
}

}  // namespace dpreg

#endif  // DPREG_MULTIVARIATE_HPP_
