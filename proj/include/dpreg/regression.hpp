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

// Private least squares fitting, binary regression and linear regression.
//
// All three estimators are (eps^2/2 + eps sqrt(2 log(1/delta)), delta)-DP for
// the user parameters (eps, delta). The least-squares estimators split that
// total into equal shares per private sub-call (basic composition); the linear
// estimator runs its two sub-calls on disjoint halves of the rows (parallel
// composition) and gives each the full total.

#ifndef DPREG_REGRESSION_HPP_
#define DPREG_REGRESSION_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dpreg/linalg.hpp"
#include "dpreg/multivariate.hpp"
#include "dpreg/privacy.hpp"

namespace dpreg {

struct LseConfig {
  double epsilon = 1.0;  // +infinity disables all noise
  double delta = 1e-6;
  double alpha = 0.1;  // accuracy of the covariate moments
  double eta = 0.1;    // accuracy of the label moment
  double gamma = 0.05;
  double kappa = 1.0;  // Sigma <= kappa I
  double c = 1.0;      // |y| <= c

  void validate() const {
    require(epsilon > 0.0 && !std::isnan(epsilon), "epsilon: must be positive");
    require(delta > 0.0 && delta < 1.0, "delta: must lie in (0, 1)");
    require(alpha > 0.0 && alpha < 1.0, "alpha: must lie in (0, 1)");
    require(eta > 0.0 && eta < 1.0, "eta: must lie in (0, 1)");
    require(gamma > 0.0 && gamma < 1.0, "gamma: must lie in (0, 1)");
    require(kappa >= 1.0 && std::isfinite(kappa), "kappa: must be >= 1");
    require(c > 0.0 && std::isfinite(c), "c: must be positive");
  }

  PrivacyBudget total_budget() const { return estimator_budget(epsilon, delta); }
};

struct LinearConfig {
  double epsilon = 1.0;
  double delta = 1e-6;
  double alpha = 0.1;
  double eta = 0.1;
  double gamma = 0.05;
  double kappa = 1.0;
  // Spectral bound for the covariance of (x, y). When unset it is derived from
  // beta_bound >= ||beta|| and sigma_bound >= sigma_eps.
  std::optional<double> kappa_prime;
  double beta_bound = 1.0;
  double sigma_bound = 1.0;

  void validate() const {
    LseConfig{epsilon, delta, alpha, eta, gamma, kappa, 1.0}.validate();
    require(!kappa_prime || (*kappa_prime >= 1.0 && std::isfinite(*kappa_prime)),
            "kappa_prime: must be >= 1");
    require(beta_bound >= 0.0 && sigma_bound >= 0.0,
            "beta_bound/sigma_bound: must be non-negative");
  }

  double effective_kappa_prime() const {
    if (kappa_prime) return *kappa_prime;
    return std::max(1.0, 2.0 * (beta_bound * beta_bound * kappa +
                                std::max(kappa, sigma_bound * sigma_bound)));
  }

  PrivacyBudget total_budget() const { return estimator_budget(epsilon, delta); }
};

// Private moments behind a least-squares estimate.
struct LseMoments {
  Matrix cov_hat;           // Sigma_hat_X
  Vector mean_hat;          // mu_hat_X (zero in binary mode)
  Vector label_moment_hat;  // mu_hat_{X,y}
};

struct RegressionEstimate {
  std::optional<Vector> beta_hat;  // nullopt is the bottom output
  std::map<std::string, double> diagnostics;
  PrivacyBudget budget_spent;
  std::vector<PrivacyBudget> stage_budgets;
  std::optional<LseMoments> moments;
  std::vector<std::string> warnings;
  std::string bottom_reason;

  bool bottom() const { return !beta_hat.has_value(); }
};

namespace internal {

inline std::size_t clamp_labels(Vector& y, double c) {
  std::size_t clamped = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double v = std::clamp(y(i), -c, c);
    if (v != y(i)) {
      y(i) = v;
      ++clamped;
    }
  }
  return clamped;
}

inline Matrix weight_rows(const Matrix& x, const Vector& y) {
  return (x.array().colwise() * y.array()).matrix();
}

// Solves m beta = rhs, or records the bottom output.
inline void finish(RegressionEstimate& out, const Matrix& m, const Vector& rhs) {
  out.diagnostics["condition_number"] = condition_number(m);
  if (!is_invertible_symmetric(m)) {
    out.bottom_reason = "moment matrix not invertible";
    return;
  }
  out.beta_hat = m.ldlt().solve(rhs);
  if (!out.beta_hat->allFinite()) {
    out.beta_hat.reset();
    out.bottom_reason = "non-finite solution";
  }
}

inline void record_budget(RegressionEstimate& out,
                          std::vector<PrivacyBudget> stages, bool parallel) {
  out.budget_spent = parallel ? compose_parallel(stages) : compose(stages);
  out.stage_budgets = std::move(stages);
  out.diagnostics["budget_epsilon"] = out.budget_spent.epsilon;
  out.diagnostics["budget_delta"] = out.budget_spent.delta;
}

}  // namespace internal

// Least squares fitting: beta_hat = (Sigma_hat + mu_hat mu_hat^T)^{-1} mu_hat_xy
// with Sigma_hat from paired differences, mu_hat and mu_hat_xy from
// learn_mean_hd (the latter with spectral bound c^2 kappa). Labels with
// |y| > c are clamped and counted in the warnings.
inline RegressionEstimate priv_learn_lse(const Dataset& data,
                                         const LseConfig& cfg, Rng& rng) {
  cfg.validate();
  data.validate();
  require(data.has_labels(), "priv_learn_lse: dataset has no labels");

  RegressionEstimate out;
  const PrivacyBudget total = cfg.total_budget();
  const std::vector<PrivacyBudget> stages = total.split(3);
  internal::record_budget(out, stages, /*parallel=*/false);

  Vector y = data.y;
  const std::size_t clamped = internal::clamp_labels(y, cfg.c);
  out.diagnostics["labels_clamped"] = static_cast<double>(clamped);
  if (clamped > 0) {
    out.warnings.push_back(std::to_string(clamped) +
                           " labels clamped to [-c, c]");
  }

  const EstimationConfig cov_cfg{cfg.kappa, cfg.alpha, cfg.gamma, stages[0]};
  const EstimationConfig mean_cfg{cfg.kappa, cfg.alpha, cfg.gamma, stages[1]};
  const EstimationConfig label_cfg{std::max(1.0, cfg.c * cfg.c * cfg.kappa),
                                   cfg.eta, cfg.gamma, stages[2]};

  const CovarianceEstimate cov =
      learn_covariance_hd(paired_differences(data.x), cov_cfg, rng);
  const std::optional<MeanEstimate> mean = learn_mean_hd(data.x, mean_cfg, rng);
  const std::optional<MeanEstimate> label_moment =
      learn_mean_hd(internal::weight_rows(data.x, y), label_cfg, rng);

  out.diagnostics["preconditioner_rounds"] = cov.preconditioner.rounds;
  out.diagnostics["truncated_rows"] = static_cast<double>(cov.truncated_rows);
  if (cov.rank_deficient) out.warnings.push_back("fewer pairs than dimensions");
  if (!mean || !label_moment) {
    out.bottom_reason = "mean estimate not released";
    return out;
  }
  out.diagnostics["clamped_values"] =
      static_cast<double>(mean->clamped_values + label_moment->clamped_values);

  const Matrix m =
      cov.cov_hat + mean->mean_hat * mean->mean_hat.transpose();
  out.moments = LseMoments{cov.cov_hat, mean->mean_hat, label_moment->mean_hat};
  internal::finish(out, m, label_moment->mean_hat);
  return out;
}

// Binary regression: the least-squares pipeline with mu_hat_X = 0. The
// covariance and label-moment calls each get half of the total budget. The
// estimate targets k * beta.
inline RegressionEstimate priv_learn_binary(const Dataset& data,
                                            const LseConfig& cfg, Rng& rng) {
  cfg.validate();
  data.validate();
  require(data.has_labels(), "priv_learn_binary: dataset has no labels");
  for (Eigen::Index i = 0; i < data.y.size(); ++i) {
    require(data.y(i) == 1.0 || data.y(i) == -1.0,
            "priv_learn_binary: labels must be -1 or +1");
  }
  require(cfg.c >= 1.0, "priv_learn_binary: c must be >= 1 for +-1 labels");

  RegressionEstimate out;
  const std::vector<PrivacyBudget> stages = cfg.total_budget().split(2);
  internal::record_budget(out, stages, /*parallel=*/false);
  out.diagnostics["labels_clamped"] = 0.0;

  const EstimationConfig cov_cfg{cfg.kappa, cfg.alpha, cfg.gamma, stages[0]};
  const EstimationConfig label_cfg{cfg.c * cfg.c * cfg.kappa, cfg.eta,
                                   cfg.gamma, stages[1]};
  const CovarianceEstimate cov = learn_covariance_hd(data.x, cov_cfg, rng);
  const std::optional<MeanEstimate> label_moment =
      learn_mean_hd(internal::weight_rows(data.x, data.y), label_cfg, rng);

  out.diagnostics["preconditioner_rounds"] = cov.preconditioner.rounds;
  out.diagnostics["truncated_rows"] = static_cast<double>(cov.truncated_rows);
  if (cov.rank_deficient) out.warnings.push_back("fewer rows than dimensions");
  if (!label_moment) {
    out.bottom_reason = "mean estimate not released";
    return out;
  }
  out.diagnostics["clamped_values"] =
      static_cast<double>(label_moment->clamped_values);
  out.moments = LseMoments{cov.cov_hat, Vector::Zero(data.x.cols()),
                           label_moment->mean_hat};
  internal::finish(out, cov.cov_hat, label_moment->mean_hat);
  return out;
}

// Rows [0, n/2) form z = (x, y) for the joint covariance; rows [n/2, n) give a
// fresh covariate covariance. beta_hat = Sigma_hat^{-1} (last column of
// Sigma'_hat, first d entries).
inline RegressionEstimate priv_learn_linear(const Dataset& data,
                                            const LinearConfig& cfg, Rng& rng) {
  cfg.validate();
  data.validate();
  require(data.has_labels(), "priv_learn_linear: dataset has no labels");
  const Eigen::Index n = data.x.rows();
  const Eigen::Index d = data.x.cols();
  const Eigen::Index half = n / 2;
  require(half >= 4, "priv_learn_linear: need at least 8 rows");

  RegressionEstimate out;
  const PrivacyBudget total = cfg.total_budget();
  internal::record_budget(out, {total, total}, /*parallel=*/true);

  bool binary_labels = true;
  for (Eigen::Index i = 0; i < n && binary_labels; ++i) {
    binary_labels = data.y(i) == 1.0 || data.y(i) == -1.0;
  }
  if (binary_labels) {
    out.warnings.push_back(
        "labels are all +-1; the linear model assumes real-valued labels");
  }

  Matrix z(half, d + 1);
  z.leftCols(d) = data.x.topRows(half);
  z.col(d) = data.y.head(half);
  const double kappa_prime = cfg.effective_kappa_prime();
  out.diagnostics["kappa_prime"] = kappa_prime;

  const EstimationConfig joint_cfg{kappa_prime, cfg.eta, cfg.gamma, total};
  const EstimationConfig cov_cfg{cfg.kappa, cfg.alpha, cfg.gamma, total};
  const CovarianceEstimate joint =
      learn_covariance_hd(paired_differences(z), joint_cfg, rng);
  const CovarianceEstimate cov = learn_covariance_hd(
      paired_differences(data.x.bottomRows(n - half)), cov_cfg, rng);

  out.diagnostics["preconditioner_rounds"] =
      joint.preconditioner.rounds + cov.preconditioner.rounds;
  out.diagnostics["truncated_rows"] =
      static_cast<double>(joint.truncated_rows + cov.truncated_rows);
  out.diagnostics["labels_clamped"] = 0.0;
  out.diagnostics["clamped_values"] = 0.0;

  const Vector sigma_beta = joint.cov_hat.col(d).head(d);
  internal::finish(out, cov.cov_hat, sigma_beta);
  return out;
}

// ---------------------------------------------------------------------------
// Covariance of (x, y) under y = beta^T x + N(0, sigma_eps^2).

inline Matrix block_sigma_prime(const Matrix& sigma, const Vector& beta,
                                double sigma_eps2) {
  require(sigma.rows() == sigma.cols(), "block_sigma_prime: sigma not square");
  require(beta.size() == sigma.rows(),
          "block_sigma_prime: beta length does not match sigma");
  require(sigma_eps2 >= 0.0, "block_sigma_prime: negative noise variance");
  const Eigen::Index d = sigma.rows();
  const Vector sb = sigma * beta;
  Matrix out(d + 1, d + 1);
  out.topLeftCorner(d, d) = sigma;
  out.topRightCorner(d, 1) = sb;
  out.bottomLeftCorner(1, d) = sb.transpose();
  out(d, d) = sigma_eps2 + beta.dot(sb);
  return out;
}

// 2 (beta^T Sigma beta + max(lambda_max(Sigma), sigma_eps^2)).
inline double block_lambda_max_bound(const Matrix& sigma, const Vector& beta,
                                     double sigma_eps2) {
  const Vector ev = eigen_symmetric(sigma).values;
  return 2.0 * (beta.dot(sigma * beta) +
                std::max(ev(ev.size() - 1), sigma_eps2));
}

// sigma_eps^2 lambda_min(Sigma) / (sigma_eps^2 + beta^T Sigma beta +
// lambda_min(Sigma)).
inline double block_lambda_min_bound(const Matrix& sigma, const Vector& beta,
                                     double sigma_eps2) {
  const double lmin = eigen_symmetric(sigma).values(0);
  return sigma_eps2 * lmin / (sigma_eps2 + beta.dot(sigma * beta) + lmin);
}

// Exact lambda_min of the block matrix for Sigma = kappa I: the smaller root
// of t^2 - (s + kappa ||beta||^2 + kappa) t + kappa s, s = sigma_eps^2,
// written in the cancellation-free form 2c / (b + sqrt(b^2 - 4c)).
inline double block_lambda_min_isotropic(double kappa, const Vector& beta,
                                         double sigma_eps2) {
  const double b = sigma_eps2 + kappa * beta.squaredNorm() + kappa;
  const double c = kappa * sigma_eps2;
  const double disc = std::max(0.0, b * b - 4.0 * c);
  return 2.0 * c / (b + std::sqrt(disc));
}

}  // namespace dpreg

#endif  // DPREG_REGRESSION_HPP_
