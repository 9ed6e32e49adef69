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

// Small symmetric-matrix helpers shared by the estimators.

#ifndef DPREG_LINALG_HPP_
#define DPREG_LINALG_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dpreg/common.hpp"

namespace dpreg {

// Relative threshold below which an eigenvalue is treated as exactly zero.
inline constexpr double kEigenZeroTolerance = 1e-10;
// A symmetric matrix is "not invertible" when lambda_min < this * lambda_max.
inline constexpr double kInvertibilityTolerance = 1e-8;

inline Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

struct SymmetricEigen {
  Vector values;  // ascending
  Matrix vectors;
};

inline SymmetricEigen eigen_symmetric(const Matrix& m) {
  require(m.rows() == m.cols(), "eigen_symmetric: matrix is not square");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(m));
  require(solver.info() == Eigen::Success,
          "eigen_symmetric: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline Matrix from_eigen(const Vector& values, const Matrix& vectors) {
  return symmetrize(vectors * values.asDiagonal() * vectors.transpose());
}

// Largest absolute eigenvalue of a symmetric matrix.
inline double spectral_norm_symmetric(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Vector ev = eigen_symmetric(m).values;
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

// Metric projection onto the PSD cone: negative eigenvalues (and those within
// kEigenZeroTolerance * ||M||_2 of zero) become zero.
inline Matrix psd_project(const Matrix& m) {
  SymmetricEigen e = eigen_symmetric(m);
  const double scale = std::max(std::abs(e.values(0)),
                                std::abs(e.values(e.values.size() - 1)));
  const double floor = kEigenZeroTolerance * scale;
  bool changed = false;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (e.values(i) < floor) {
      changed = changed || e.values(i) != 0.0;
      e.values(i) = 0.0;
    }
  }
  if (!changed) return symmetrize(m);
  return from_eigen(e.values, e.vectors);
}

inline bool is_psd(const Matrix& m, double rel_tol = 1e-10) {
  const Vector ev = eigen_symmetric(m).values;
  const double scale = std::max(1.0, std::abs(ev(ev.size() - 1)));
  return ev(0) >= -rel_tol * scale;
}

// lambda_max / lambda_min; infinity when lambda_min <= 0.
inline double condition_number(const Matrix& m) {
  const Vector ev = eigen_symmetric(m).values;
  const double lo = ev(0);
  const double hi = ev(ev.size() - 1);
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

inline bool is_invertible_symmetric(const Matrix& m,
                                    double rel_tol = kInvertibilityTolerance) {
  if (!m.allFinite()) return false;
  const Vector ev = eigen_symmetric(m).values;
  const double hi = std::abs(ev(ev.size() - 1));
  return hi > 0.0 && ev(0) > rel_tol * hi;
}

// Matrix function f applied to the spectrum of a symmetric matrix.
template <typename F>
Matrix spectral_map(const Matrix& m, F&& f) {
  SymmetricEigen e = eigen_symmetric(m);
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    e.values(i) = f(e.values(i));
  }
  return from_eigen(e.values, e.vectors);
}

inline Matrix sqrt_psd(const Matrix& m) {
  return spectral_map(m, [](double v) { return std::sqrt(std::max(v, 0.0)); });
}

inline Matrix inverse_sqrt_pd(const Matrix& m) {
  return spectral_map(m, [](double v) {
    require(v > 0.0, "inverse_sqrt_pd: matrix is not positive definite");
    return 1.0 / std::sqrt(v);
  });
}

inline Matrix inverse_symmetric(const Matrix& m) {
  return spectral_map(m, [](double v) {
    require(v != 0.0, "inverse_symmetric: singular matrix");
    return 1.0 / v;
  });
}

// (1/n) sum_i x_i x_i^T, rows as samples.
inline Matrix second_moment(const Matrix& rows) {
  require(rows.rows() > 0, "second_moment: no rows");
  Matrix m = Matrix::Zero(rows.cols(), rows.cols());
  m.selfadjointView<Eigen::Lower>().rankUpdate(rows.transpose());
  const Matrix full = m.selfadjointView<Eigen::Lower>();
  return full / static_cast<double>(rows.rows());
}

inline double angle_degrees(const Vector& a, const Vector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double c = std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
  return std::acos(c) * 180.0 / std::numbers::pi;
}

}  // namespace dpreg

#endif  // DPREG_LINALG_HPP_
