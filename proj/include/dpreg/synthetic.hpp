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

// Seeded generators for the three regression settings.

#ifndef DPREG_SYNTHETIC_HPP_
#define DPREG_SYNTHETIC_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "dpreg/linalg.hpp"
#include "dpreg/links.hpp"

namespace dpreg {

enum class Setting { kLse, kBinary, kLinear };

inline std::string to_string(Setting s) {
  switch (s) {
    case Setting::kLse:
      return "lse";
    case Setting::kBinary:
      return "binary";
    case Setting::kLinear:
      return "linear";
  }
  return "unknown";
}

inline Setting setting_from_string(const std::string& s) {
  if (s == "lse") return Setting::kLse;
  if (s == "binary") return Setting::kBinary;
  if (s == "linear") return Setting::kLinear;
  throw_argument("setting: expected one of lse|binary|linear, got '" + s + "'");
}

struct GeneratorSpec {
  std::size_t d = 1;
  std::size_t n = 1;
  Vector mu;
  Matrix sigma;
  Setting setting = Setting::kLinear;
  Vector beta;
  double sigma_eps = 1.0;    // linear: noise standard deviation
  double c = 1.0;            // lse: label bound
  double label_noise = 0.1;  // lse: noise before clamping
  Link link = Link::logistic();
  std::uint64_t seed = 0;

  // Field-named errors. Sigma must be symmetric with eigenvalues >= 1; the
  // binary setting requires mu = 0.
  void validate() const {
    require(d >= 1, "d: must be positive");
    require(n >= 1, "n: must be positive");
    const auto dd = static_cast<Eigen::Index>(d);
    require(mu.size() == dd, "mu: length must equal d");
    require(sigma.rows() == dd && sigma.cols() == dd,
            "sigma: must be d x d");
    require(beta.size() == dd, "beta: length must equal d");
    require(mu.allFinite() && sigma.allFinite() && beta.allFinite(),
            "mu/sigma/beta: non-finite entry");
    require((sigma - sigma.transpose()).cwiseAbs().maxCoeff() <=
                1e-12 * std::max(1.0, sigma.cwiseAbs().maxCoeff()),
            "sigma: not symmetric");
    const Vector ev = eigen_symmetric(sigma).values;
    require(ev(0) >= 0.0, "sigma: not positive semidefinite (eigenvalue " +
                              std::to_string(ev(0)) + ")");
    require(ev(0) >= 1.0 - 1e-9,
            "sigma: eigenvalues must be >= 1 (I <= Sigma normalization)");
    switch (setting) {
      case Setting::kBinary:
        require(mu.isZero(0.0), "mu: binary setting requires zero mean");
        link.validate();
        break;
      case Setting::kLinear:
        require(sigma_eps > 0.0 && std::isfinite(sigma_eps),
                "sigma_eps: must be positive");
        break;
      case Setting::kLse:
        require(c > 0.0 && std::isfinite(c), "c: must be positive");
        require(label_noise >= 0.0, "label_noise: must be non-negative");
        break;
    }
  }
};

// n rows i.i.d. N(mu, Sigma), via the symmetric square root of Sigma.
inline Matrix sample_gaussian(const Vector& mu, const Matrix& sigma,
                              std::size_t n, Rng& rng) {
  require(sigma.rows() == sigma.cols() && sigma.rows() == mu.size(),
          "sample_gaussian: dimension mismatch");
  const SymmetricEigen e = eigen_symmetric(sigma);
  const double scale = std::max(1.0, std::abs(e.values(e.values.size() - 1)));
  require(e.values(0) >= -1e-10 * scale,
          "sample_gaussian: sigma is not positive semidefinite");
  const Matrix root = sqrt_psd(sigma);

  const Eigen::Index d = mu.size();
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(static_cast<Eigen::Index>(n), d);
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) z(i, j) = normal(rng);
  }
  Matrix x = z * root;  // root is symmetric
  x.rowwise() += mu.transpose();
  return x;
}

inline Matrix sample_gaussian(const GeneratorSpec& spec, Rng& rng) {
  return sample_gaussian(spec.mu, spec.sigma, spec.n, rng);
}

// y_i = +1 with probability f(beta^T x_i), else -1.
inline Vector label_binary(const Matrix& x, const Link& link,
                           const Vector& beta, Rng& rng) {
  require(beta.size() == x.cols(), "label_binary: beta length mismatch");
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Vector y(x.rows());
  const Vector s = x * beta;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    y(i) = uniform(rng) < link(s(i)) ? 1.0 : -1.0;
  }
  return y;
}

// y_i = beta^T x_i + N(0, sigma_eps^2); sigma_eps = 0 gives exact labels.
inline Vector label_linear(const Matrix& x, const Vector& beta,
                           double sigma_eps, Rng& rng) {
  require(beta.size() == x.cols(), "label_linear: beta length mismatch");
  require(sigma_eps >= 0.0, "label_linear: sigma_eps must be non-negative");
  Vector y = x * beta;
  if (sigma_eps > 0.0) {
    std::normal_distribution<double> noise(0.0, sigma_eps);
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += noise(rng);
  }
  return y;
}

// No model is assumed for least-squares fitting; this one is
// y = clamp(c tanh(beta^T x) + noise N(0, 1), -c, c).
inline Vector label_bounded(const Matrix& x, const Vector& beta, double c,
                            double noise_sd, Rng& rng) {
  require(beta.size() == x.cols(), "label_bounded: beta length mismatch");
  require(c > 0.0, "label_bounded: c must be positive");
  std::normal_distribution<double> noise(0.0, 1.0);
  Vector y(x.rows());
  const Vector s = x * beta;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double eps = noise_sd > 0.0 ? noise_sd * noise(rng) : 0.0;
    y(i) = std::clamp(c * std::tanh(s(i)) + eps, -c, c);
  }
  return y;
}

inline Dataset generate_dataset(const GeneratorSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  Dataset data;
  data.x = sample_gaussian(spec, rng);
  switch (spec.setting) {
    case Setting::kBinary:
      data.y = label_binary(data.x, spec.link, spec.beta, rng);
      break;
    case Setting::kLinear:
      data.y = label_linear(data.x, spec.beta, spec.sigma_eps, rng);
      break;
    case Setting::kLse:
      data.y = label_bounded(data.x, spec.beta, spec.c, spec.label_noise, rng);
      break;
  }
  return data;
}

}  // namespace dpreg

#endif  // DPREG_SYNTHETIC_HPP_
