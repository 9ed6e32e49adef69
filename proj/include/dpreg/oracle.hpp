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

// Non-private ground truth used to evaluate the private estimators. Nothing in
// this header is differentially private.

#ifndef DPREG_ORACLE_HPP_
#define DPREG_ORACLE_HPP_

#include <cmath>
#include <numbers>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dpreg/linalg.hpp"
#include "dpreg/links.hpp"
#include "dpreg/regression.hpp"

namespace dpreg {

// Least squares solution via column-pivoted Householder QR.
inline Vector exact_lse(const Matrix& x, const Vector& y) {
  require(x.rows() == y.size(), "exact_lse: label count mismatch");
  require(x.rows() >= x.cols() && x.cols() > 0, "exact_lse: need n >= d");
  Eigen::ColPivHouseholderQR<Matrix> qr(x);
  qr.setThreshold(1e-12);
  require(qr.rank() == x.cols(), "exact_lse: X^T X is singular");
  return qr.solve(y);
}

// Second path through the normal equations (Cholesky of X^T X).
inline Vector exact_lse_normal_equations(const Matrix& x, const Vector& y) {
  require(x.rows() == y.size(), "exact_lse: label count mismatch");
  const Matrix gram = x.transpose() * x;
  require(is_invertible_symmetric(gram), "exact_lse: X^T X is singular");
  Eigen::LLT<Matrix> llt(gram);
  require(llt.info() == Eigen::Success, "exact_lse: X^T X is singular");
  return llt.solve(x.transpose() * y);
}

inline double finite_sample_factor(std::size_t n, std::size_t d) {
  require(n > d + 1, "finite sample factor needs n > d + 1");
  return static_cast<double>(n) / static_cast<double>(n - d - 1);
}

// E[((1/n) sum V V^T)^{-1}] = n / (n - d - 1) I for V ~ N(0, I_d).
inline double wishart_factor(std::size_t n, std::size_t d) {
  return finite_sample_factor(n, d);
}

// Monte-Carlo mean of the inverse empirical second moment of n standard
// normal vectors in R^d.
inline Matrix wishart_inverse_mean_mc(std::size_t n, std::size_t d,
                                      std::size_t trials, Rng& rng) {
  require(n > d + 1, "wishart_inverse_mean_mc: need n > d + 1");
  require(trials >= 1, "wishart_inverse_mean_mc: need at least one trial");
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto dd = static_cast<Eigen::Index>(d);
  Matrix v(static_cast<Eigen::Index>(n), dd);
  Matrix acc = Matrix::Zero(dd, dd);
  for (std::size_t t = 0; t < trials; ++t) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      for (Eigen::Index j = 0; j < dd; ++j) v(i, j) = normal(rng);
    }
    acc += second_moment(v).llt().solve(Matrix::Identity(dd, dd));
  }
  return acc / static_cast<double>(trials);
}

struct ScalingFactor {
  double k = 0.0;
  double standard_error = 0.0;
  double mean_slope = 0.0;  // E[f'(beta^T x)]
};

inline double projected_variance(const Vector& beta, const Matrix& sigma) {
  require(beta.size() == sigma.rows() && sigma.rows() == sigma.cols(),
          "projected_variance: dimension mismatch");
  return beta.dot(sigma * beta);
}

// E[f'(s)], s ~ N(0, variance), by adaptive Gauss-Kronrod on [-10 sd, 10 sd].
inline double expected_slope_quadrature(const Link& link, double variance) {
  require(variance >= 0.0 && std::isfinite(variance),
          "expected_slope_quadrature: invalid variance");
  if (variance == 0.0) return link.derivative(0.0);
  const double sd = std::sqrt(variance);
  const auto integrand = [&](double s) {
    const double z = s / sd;
    return link.derivative(s) * std::exp(-0.5 * z * z) /
           (sd * std::sqrt(2.0 * std::numbers::pi));
  };
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, -10.0 * sd, 10.0 * sd, 30, 1e-8, &error);
}

// k = (2n / (n - d - 1)) E[f'(beta^T x)], expectation by Monte Carlo.
inline ScalingFactor stein_k(const Link& link, const Vector& beta,
                             const Matrix& sigma, std::size_t n, std::size_t d,
                             std::size_t mc_samples, Rng& rng) {
  require(mc_samples >= 10000, "stein_k: need at least 1e4 Monte-Carlo draws");
  const double factor = 2.0 * finite_sample_factor(n, d);
  const double variance = projected_variance(beta, sigma);
  ScalingFactor out;
  if (variance == 0.0) {
    out.mean_slope = link.derivative(0.0);
    out.k = factor * out.mean_slope;
    return out;
  }
  std::normal_distribution<double> normal(0.0, std::sqrt(variance));
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < mc_samples; ++i) {
    const double v = link.derivative(normal(rng));
    sum += v;
    sum_sq += v * v;
  }
  const double m = static_cast<double>(mc_samples);
  out.mean_slope = sum / m;
  const double var = std::max(0.0, (sum_sq / m - out.mean_slope * out.mean_slope) *
                                       m / (m - 1.0));
  out.k = factor * out.mean_slope;
  out.standard_error = factor * std::sqrt(var / m);
  return out;
}

// Same target through quadrature; deterministic.
inline double stein_k_quadrature(const Link& link, const Vector& beta,
                                 const Matrix& sigma, std::size_t n,
                                 std::size_t d) {
  return 2.0 * finite_sample_factor(n, d) *
         expected_slope_quadrature(link, projected_variance(beta, sigma));
}

struct QDiagnostics {
  double q1_norm = 0.0;  // ||Sigma^{-1/2} Q1 Sigma^{-1/2}||_2
  double q2_norm = 0.0;  // ||Sigma^{-1/2} Q2||_2
};

// Q1 = Sigma_hat + mu_hat mu_hat^T - X^T X / n, Q2 = mu_hat_xy - X^T y / n,
// measured in the geometry of the true covariance.
inline QDiagnostics q_diagnostics(const LseMoments& moments, const Matrix& x,
                                  const Vector& y, const Matrix& sigma_true) {
  require(x.rows() == y.size(), "q_diagnostics: label count mismatch");
  const double n = static_cast<double>(x.rows());
  const Matrix q1 = moments.cov_hat +
                    moments.mean_hat * moments.mean_hat.transpose() -
                    x.transpose() * x / n;
  const Vector q2 = moments.label_moment_hat - x.transpose() * y / n;
  const Matrix w = inverse_sqrt_pd(sigma_true);
  return {spectral_norm_symmetric(w * q1 * w), (w * q2).norm()};
}

}  // namespace dpreg

#endif  // DPREG_ORACLE_HPP_
