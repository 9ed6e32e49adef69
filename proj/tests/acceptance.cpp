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

// Acceptance checks. Prints one PASS/FAIL line per criterion.
//
//   acceptance            run all criteria
//   acceptance --only N   run criterion N
//
// Exit status is 0 when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "dpreg/dpreg.hpp"

namespace {

using dpreg::Dataset;
using dpreg::Matrix;
using dpreg::Rng;
using dpreg::Vector;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Bottom outputs enter as +infinity so they can only hurt a median.
double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Matrix paired_second_moment(const Matrix& rows) {
  const Eigen::Index pairs = rows.rows() / 2;
  Matrix acc = Matrix::Zero(rows.cols(), rows.cols());
  for (Eigen::Index i = 0; i < pairs; ++i) {
    const Vector v = (rows.row(2 * i + 1) - rows.row(2 * i)).transpose();
    acc.noalias() += 0.5 * v * v.transpose();
  }
  return acc / static_cast<double>(pairs);
}

// Covariance with eigenvalues drawn from [lo, hi] in a random basis.
Matrix random_covariance(Eigen::Index d, double lo, double hi, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix g(d, d);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = normal(rng);
  const Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = qr.householderQ();
  Vector ev(d);
  for (Eigen::Index i = 0; i < d; ++i) ev(i) = u(rng);
  return dpreg::symmetrize(q * ev.asDiagonal() * q.transpose());
}

Vector random_vector(Eigen::Index d, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = u(rng);
  return v;
}

// ---------------------------------------------------------------------------
// 1. With epsilon = infinity the estimators reduce to plug-in moments.

Outcome criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(101);
  std::uniform_int_distribution<int> dim(1, 5);
  std::uniform_int_distribution<int> rows(1000, 10000);
  double worst_lse = 0.0;
  double worst_linear = 0.0;
  int bottoms = 0;
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index d = dim(rng);
    const auto n = static_cast<std::size_t>(rows(rng));

    // Least squares: (P + m m^T)^{-1} mean(y x).
    dpreg::GeneratorSpec lse;
    lse.d = static_cast<std::size_t>(d);
    lse.n = n;
    lse.mu = random_vector(d, -0.5, 0.5, rng);
    lse.sigma = random_covariance(d, 1.0, 2.0, rng);
    lse.beta = random_vector(d, -1.0, 1.0, rng);
    lse.setting = dpreg::Setting::kLse;
    lse.seed = 1000 + t;
    const Dataset a = dpreg::generate_dataset(lse);
    const Vector m = a.x.colwise().mean();
    const Vector rhs = (a.x.transpose() * a.y) / static_cast<double>(n);
    const Vector plug_lse =
        (paired_second_moment(a.x) + m * m.transpose()).fullPivLu().solve(rhs);
    dpreg::LseConfig lcfg;
    lcfg.epsilon = kInf;
    lcfg.kappa = 4.0;
    Rng r1(t);
    const dpreg::RegressionEstimate e1 = dpreg::priv_learn_lse(a, lcfg, r1);

    // Linear model: P_x^{-1} P_joint[0:d, d] over the two halves.
    dpreg::GeneratorSpec lin = lse;
    lin.setting = dpreg::Setting::kLinear;
    lin.sigma_eps = std::uniform_real_distribution<double>(0.3, 1.5)(rng);
    lin.seed = 2000 + t;
    const Dataset b = dpreg::generate_dataset(lin);
    const Eigen::Index half = b.x.rows() / 2;
    Matrix z(half, d + 1);
    z << b.x.topRows(half), b.y.head(half);
    const Vector plug_linear = paired_second_moment(b.x.bottomRows(b.x.rows() - half))
                                   .fullPivLu()
                                   .solve(paired_second_moment(z).col(d).head(d));
    dpreg::LinearConfig ncfg;
    ncfg.epsilon = kInf;
    ncfg.kappa = 4.0;
    ncfg.beta_bound = lin.beta.norm();
    ncfg.sigma_bound = lin.sigma_eps;
    Rng r2(t);
    const dpreg::RegressionEstimate e2 = dpreg::priv_learn_linear(b, ncfg, r2);

    if (e1.bottom() || e2.bottom()) {
      ++bottoms;
      continue;
    }
    worst_lse = std::max(worst_lse, (*e1.beta_hat - plug_lse).norm() / plug_lse.norm());
    worst_linear =
        std::max(worst_linear, (*e2.beta_hat - plug_linear).norm() / plug_linear.norm());
  }
  const double elapsed = seconds_since(start);
  const bool pass = bottoms == 0 && worst_lse <= 1e-6 && worst_linear <= 1e-6 && elapsed < 10.0;
  return {pass, fmt("20 instances, max relative error lse %.2e, linear %.2e, bottom %d, %.1f s",
                    worst_lse, worst_linear, bottoms, elapsed)};
}

// ---------------------------------------------------------------------------
// 2. Sensitivities at the truncation radius.

// ||S(D) - S(D')||_F for the truncated second moment S, D and D' equal except
// for row 0.
double frobenius_change(const Matrix& base, const Vector& x, const Vector& x_prime,
                        double radius_sq) {
  Matrix d1 = base;
  Matrix d2 = base;
  d1.row(0) = x.transpose();
  d2.row(0) = x_prime.transpose();
  dpreg::truncate_rows(d1, radius_sq);
  dpreg::truncate_rows(d2, radius_sq);
  return (dpreg::second_moment(d1) - dpreg::second_moment(d2)).norm();
}

Vector random_direction(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = normal(rng);
  return v / v.norm();
}

// Largest change over a family of adversarial neighbors: orthogonal and
// antipodal rows at the radius, rows far outside the ball, one row at the
// origin, and a random search with a local refinement.
double adversarial_frobenius(std::size_t n, std::size_t d, double kappa, double gamma,
                             Rng& rng) {
  const double r2 = dpreg::truncation_radius_sq(n, d, kappa, gamma);
  const double r = std::sqrt(r2);
  const auto dd = static_cast<Eigen::Index>(d);
  Matrix base = dpreg::sample_gaussian(Vector::Zero(dd), Matrix::Identity(dd, dd), n, rng);
  double best = 0.0;
  const Vector e1 = Vector::Unit(dd, 0);
  const Vector e2 = d > 1 ? Vector::Unit(dd, 1) : Vector(-e1);
  best = std::max(best, frobenius_change(base, r * e1, r * e2, r2));
  best = std::max(best, frobenius_change(base, r * e1, -r * e1, r2));
  best = std::max(best, frobenius_change(base, 50 * r * e1, 50 * r * e2, r2));
  best = std::max(best, frobenius_change(base, r * e1, Vector::Zero(dd), r2));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector best_x = r * e1;
  Vector best_y = r * e2;
  for (int i = 0; i < 2000; ++i) {
    const Vector x = r * std::sqrt(u(rng)) * random_direction(dd, rng);
    const Vector y = r * std::sqrt(u(rng)) * random_direction(dd, rng);
    const double v = frobenius_change(base, x, y, r2);
    if (v > best) {
      best = v;
      best_x = x;
      best_y = y;
    }
  }
  std::normal_distribution<double> step(0.0, 0.05 * r);
  for (int i = 0; i < 2000; ++i) {
    Vector x = best_x;
    Vector y = best_y;
    for (Eigen::Index j = 0; j < dd; ++j) {
      x(j) += step(rng);
      y(j) += step(rng);
    }
    const double v = frobenius_change(base, x, y, r2);
    if (v > best) {
      best = v;
      best_x = x;
      best_y = y;
    }
  }
  return best;
}

// Largest L1 change of the normalized histogram over every dataset of n <= 5
// values drawn from four bins and every substitution of one value.
struct HistogramSweep {
  std::size_t pairs = 0;
  std::size_t changed = 0;
  std::size_t exact = 0;
};

HistogramSweep exhaustive_histogram() {
  const std::vector<double> values{0.25, 0.75, 1.5, 2.5, 3.9};  // bins 0, 0, 1, 2, 3
  const auto k = static_cast<int>(values.size());
  HistogramSweep out;
  for (int n = 1; n <= 5; ++n) {
    int total = 1;
    for (int i = 0; i < n; ++i) total *= k;
    for (int code = 0; code < total; ++code) {
      std::vector<double> data(static_cast<std::size_t>(n));
      int c = code;
      for (int i = 0; i < n; ++i, c /= k) data[static_cast<std::size_t>(i)] = values[c % k];
      const auto base = dpreg::histogram_masses(data, 1.0);
      for (int pos = 0; pos < n; ++pos) {
        for (double v : values) {
          std::vector<double> other = data;
          other[static_cast<std::size_t>(pos)] = v;
          const auto swapped = dpreg::histogram_masses(other, 1.0);
          std::map<std::int64_t, double> diff;
          for (const auto& [bin, mass] : base) diff[bin] += mass;
          for (const auto& [bin, mass] : swapped) diff[bin] -= mass;
          // Count differences in units of 1/n.
          long units = 0;
          double l1 = 0.0;
          for (const auto& [bin, delta] : diff) {
            units += std::lround(std::abs(delta) * n);
            l1 += std::abs(delta);
          }
          ++out.pairs;
          const bool moved = dpreg::bin_of(v, 1.0) != dpreg::bin_of(data[static_cast<std::size_t>(pos)], 1.0);
          if (moved) {
            ++out.changed;
            if (units == 2 && std::abs(l1 - 2.0 / n) <= 4 * std::numeric_limits<double>::epsilon())
              ++out.exact;
          } else if (units == 0 && l1 == 0.0) {
            ++out.exact;
          }
        }
      }
    }
  }
  return out;
}

Outcome criterion_2() {
  Rng rng(202);
  struct Config {
    std::size_t n;
    std::size_t d;
    double kappa;
    double gamma;
  };
  const std::vector<Config> configs{
      {100, 2, 1.0, 0.05}, {1000, 5, 2.0, 0.05}, {500, 3, 4.0, 0.1}, {10000, 4, 1.0, 0.01}};
  double lo = kInf;
  double hi = 0.0;
  double tight_gap = 0.0;
  for (const Config& c : configs) {
    const double achieved = adversarial_frobenius(c.n, c.d, c.kappa, c.gamma, rng);
    const double bound = dpreg::pce_sensitivity_bound(c.n, c.d, c.kappa, c.gamma);
    const double tight = dpreg::pce_sensitivity(c.n, c.d, c.kappa, c.gamma);
    lo = std::min(lo, achieved / bound);
    hi = std::max(hi, achieved / bound);
    tight_gap = std::max(tight_gap, std::abs(achieved / tight - 1.0));
  }
  const HistogramSweep h = exhaustive_histogram();
  const bool frobenius_ok = lo >= 0.99 && hi <= 1.0;
  const bool histogram_ok = h.exact == h.pairs;
  return {frobenius_ok && histogram_ok,
          fmt("Frobenius change / (2/n)R^2 in [%.4f, %.4f] (need [0.99, 1]); change / "
              "(sqrt2/n)R^2 off by %.1e; histogram %zu/%zu substitutions exact "
              "(%zu move a value across bins, L1 = 2/n)",
              lo, hi, tight_gap, h.exact, h.pairs, h.changed)};
}

// ---------------------------------------------------------------------------
// 3. Preconditioner conditioning.

Outcome criterion_3() {
  const auto start = std::chrono::steady_clock::now();
  Vector diag = Vector::Ones(5);
  diag(0) = 100.0;
  const Matrix sigma = diag.asDiagonal();
  int good = 0;
  double worst_lo = kInf;
  double worst_hi = 0.0;
  for (int t = 0; t < 100; ++t) {
    Rng data_rng(3000 + t);
    const Matrix x = dpreg::sample_gaussian(Vector::Zero(5), sigma, 100000, data_rng);
    Rng rng(t);
    const dpreg::Preconditioner p =
        dpreg::learn_preconditioner(x, 100.0, dpreg::PrivacyBudget{1.0, 1e-6}, 0.05, rng);
    const Vector ev = dpreg::eigen_symmetric(p.a * sigma * p.a).values;
    worst_lo = std::min(worst_lo, ev(0));
    worst_hi = std::max(worst_hi, ev(4));
    if (ev(0) >= 0.5 && ev(4) <= 1000.0) ++good;
  }
  const double elapsed = seconds_since(start);
  return {good >= 90 && elapsed < 300.0,
          fmt("%d/100 trials with spectrum of A Sigma A in [0.5, 1000] (extremes %.3f, %.3f), "
              "%.1f s",
              good, worst_lo, worst_hi, elapsed)};
}

// ---------------------------------------------------------------------------
// 4. Least-squares error against the exact solution shrinks with n.

std::vector<double> sweep_errors(const dpreg::Json& experiment, std::size_t cells,
                                 std::vector<double>* bottom_rates = nullptr,
                                 bool use_angle = false) {
  const dpreg::ExperimentSpec spec = dpreg::experiment_from_json(experiment);
  const std::vector<dpreg::ResultRow> rows = dpreg::run_sweep(spec, 1);
  std::vector<std::vector<double>> per_cell(cells);
  std::vector<double> bottoms(cells, 0.0);
  for (const dpreg::ResultRow& r : rows) {
    const std::size_t cell = r.row_index / spec.trials;
    per_cell[cell].push_back(r.bottom_flag ? kInf : (use_angle ? r.angle_deg : r.error_l2));
    if (r.bottom_flag) bottoms[cell] += 1.0 / static_cast<double>(spec.trials);
  }
  if (bottom_rates) *bottom_rates = bottoms;
  std::vector<double> medians;
  for (auto& v : per_cell) medians.push_back(median(v));
  return medians;
}

Outcome criterion_4() {
  const dpreg::Json j = dpreg::Json::parse(R"({
    "generator": {"d": 3, "n": 1000, "setting": "lse", "beta": [1, -1, 0.5], "c": 1},
    "estimator": "lse",
    "config": {"epsilon": 1, "delta": 1e-6},
    "trials": 50,
    "seed": 404,
    "sweep": {"n": [1000, 10000, 100000]}
  })");
  std::vector<double> bottoms;
  const std::vector<double> m = sweep_errors(j, 3, &bottoms);
  const bool decreasing = m[0] > m[1] && m[1] > m[2];
  const double ratio = m[2] / m[0];
  return {decreasing && ratio <= 0.3,
          fmt("median error %.4f, %.4f, %.4f at n = 1e3, 1e4, 1e5 (bottom rate %.2f, %.2f, "
              "%.2f); ratio %.3f (need <= 0.3)",
              m[0], m[1], m[2], bottoms[0], bottoms[1], bottoms[2], ratio)};
}

// ---------------------------------------------------------------------------
// 5. Binary labels: direction and the scaling factor k.

Outcome criterion_5() {
  Vector beta = Vector::Zero(3);
  beta(0) = 2.0;
  const std::size_t n = 100000;
  Rng k_rng(505);
  const dpreg::ScalingFactor k = dpreg::stein_k(dpreg::Link::logistic(), beta,
                                                Matrix::Identity(3, 3), n, 3, 1000000, k_rng);
  std::vector<double> angles;
  std::vector<double> ratios;
  std::vector<double> control;
  dpreg::LseConfig cfg;
  cfg.epsilon = 1.0;
  for (int t = 0; t < 100; ++t) {
    dpreg::GeneratorSpec s;
    s.d = 3;
    s.n = n;
    s.mu = Vector::Zero(3);
    s.sigma = Matrix::Identity(3, 3);
    s.beta = beta;
    s.setting = dpreg::Setting::kBinary;
    s.seed = 5000 + t;
    Rng rng(t);
    const dpreg::RegressionEstimate est = dpreg::priv_learn_binary(dpreg::generate_dataset(s), cfg, rng);
    angles.push_back(est.bottom() ? kInf : dpreg::angle_degrees(*est.beta_hat, beta));
    ratios.push_back(est.bottom() ? kInf : est.beta_hat->norm() / (k.k * beta.norm()));

    s.beta = Vector::Zero(3);
    s.seed = 6000 + t;
    Rng rng0(1000 + t);
    const dpreg::RegressionEstimate zero = dpreg::priv_learn_binary(dpreg::generate_dataset(s), cfg, rng0);
    control.push_back(zero.bottom() ? kInf : zero.beta_hat->norm());
  }
  const double angle = median(angles);
  const double ratio = median(ratios);
  const double zero_norm = median(control);
  return {angle <= 10.0 && ratio >= 0.75 && ratio <= 1.25 && zero_norm <= 0.1,
          fmt("median angle %.2f deg (need <= 10), median |beta_hat|/|k beta| %.3f with k = %.4f "
              "(need [0.75, 1.25]), control median |beta_hat| %.4f (need <= 0.1)",
              angle, ratio, k.k, zero_norm)};
}

// ---------------------------------------------------------------------------
// 6. Mean inverse empirical second moment of Gaussian rows.

Outcome criterion_6() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(606);
  const Matrix mean = dpreg::wishart_inverse_mean_mc(50, 2, 10000, rng);
  const double f = 50.0 / 47.0;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) {
      const double target = i == j ? f : 0.0;
      worst = std::max(worst, std::abs(mean(i, j) - target) / f);
    }
  }
  const double elapsed = seconds_since(start);
  return {worst <= 0.02 && elapsed < 60.0,
          fmt("max entrywise deviation from (50/47) I is %.4f of 50/47 (need <= 0.02), "
              "diagonal %.4f, %.4f, %.2f s",
              worst, mean(0, 0), mean(1, 1), elapsed)};
}

// ---------------------------------------------------------------------------
// 7. Linear model recovery.

Outcome criterion_7() {
  dpreg::GeneratorSpec s;
  s.d = 3;
  s.n = 100000;
  s.mu = Vector::Zero(3);
  s.sigma = Matrix::Identity(3, 3);
  s.beta = Vector(3);
  s.beta << 1.0, -1.0, 0.0;
  s.sigma_eps = 0.5;
  dpreg::LinearConfig cfg;
  cfg.epsilon = 1.0;
  cfg.beta_bound = std::numbers::sqrt2;
  cfg.sigma_bound = 0.5;
  std::vector<double> errors;
  int bottoms = 0;
  for (int t = 0; t < 100; ++t) {
    s.seed = 7000 + t;
    Rng rng(t);
    const dpreg::RegressionEstimate est = dpreg::priv_learn_linear(dpreg::generate_dataset(s), cfg, rng);
    if (est.bottom()) ++bottoms;
    errors.push_back(est.bottom() ? kInf : (*est.beta_hat - s.beta).norm());
  }
  const double m = median(errors);
  return {m <= 0.2 && bottoms <= 5,
          fmt("median error %.4f (need <= 0.2), bottom rate %.2f (need <= 0.05)", m,
              bottoms / 100.0)};
}

// ---------------------------------------------------------------------------
// 8. Eigenvalue bounds of the covariance of (x, y).

Outcome criterion_8() {
  Rng rng(808);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  double max_slack_hi = kInf;
  double max_slack_lo = kInf;
  for (int t = 0; t < 1000; ++t) {
    const Eigen::Index d = dim(rng);
    const Matrix sigma = random_covariance(d, 1.0, 1.0 + 20.0 * u(rng), rng);
    const Vector beta = random_vector(d, -3.0, 3.0, rng);
    const double s2 = std::pow(10.0, 4.0 * u(rng) - 2.0);
    const Eigen::SelfAdjointEigenSolver<Matrix> es(dpreg::block_sigma_prime(sigma, beta, s2));
    const double lmin = es.eigenvalues()(0);
    const double lmax = es.eigenvalues()(d);
    // Upper bound 2 (beta^T Sigma beta + max(kappa, s2)) with kappa = lambda_max(Sigma),
    // lower bound s2 lambda_min(Sigma) / (s2 + beta^T Sigma beta + lambda_min(Sigma)).
    const Eigen::SelfAdjointEigenSolver<Matrix> cov(sigma);
    const double kappa = cov.eigenvalues()(d - 1);
    const double smin = cov.eigenvalues()(0);
    const double bsb = beta.dot(sigma * beta);
    const double upper = 2.0 * (bsb + std::max(kappa, s2));
    const double lower = s2 * smin / (s2 + bsb + smin);
    if (lmax > upper * (1 + 1e-12) || lmin < lower * (1 - 1e-12)) ++violations;
    if (std::abs(upper - dpreg::block_lambda_max_bound(sigma, beta, s2)) > 1e-12 * upper ||
        std::abs(lower - dpreg::block_lambda_min_bound(sigma, beta, s2)) > 1e-12 * upper) {
      ++violations;
    }
    max_slack_hi = std::min(max_slack_hi, upper / lmax);
    max_slack_lo = std::min(max_slack_lo, lmin / lower);
  }
  double worst_iso = 0.0;
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index d = dim(rng);
    const double kappa = 1.0 + 9.0 * u(rng);
    const Vector beta = random_vector(d, -3.0, 3.0, rng);
    const double s2 = std::pow(10.0, 4.0 * u(rng) - 2.0);
    const Eigen::SelfAdjointEigenSolver<Matrix> es(
        dpreg::block_sigma_prime(kappa * Matrix::Identity(d, d), beta, s2));
    worst_iso = std::max(
        worst_iso, std::abs(dpreg::block_lambda_min_isotropic(kappa, beta, s2) - es.eigenvalues()(0)));
  }
  return {violations == 0 && worst_iso <= 1e-8,
          fmt("1000 instances, %d violations (tightest upper/actual %.3f, actual/lower %.3f); "
              "isotropic closed form max deviation %.1e",
              violations, max_slack_hi, max_slack_lo, worst_iso)};
}

// ---------------------------------------------------------------------------
// 9. Scaling factor: analytic value at beta = 0, Monte Carlo vs quadrature.

Outcome criterion_9() {
  const dpreg::Link logistic = dpreg::Link::logistic();
  const bool quarter = logistic.derivative(0.0) == 0.25;
  struct Case {
    std::string name;
    dpreg::Link link;
    double scale;
  };
  const std::vector<Case> cases{{"logistic", logistic, 2.0},
                                {"logistic", logistic, 0.5},
                                {"smoothed-sign(1)", dpreg::Link::smoothed_sign(1.0), 1.0},
                                {"smoothed-sign(2)", dpreg::Link::smoothed_sign(2.0), 1.0},
                                {"smoothed-sign(5)", dpreg::Link::smoothed_sign(5.0), 1.0},
                                {"smoothed-sign(20)", dpreg::Link::smoothed_sign(20.0), 2.0}};
  Rng rng(909);
  double worst = 0.0;
  std::string worst_name;
  for (const Case& c : cases) {
    Vector beta = Vector::Zero(3);
    beta(0) = c.scale;
    const Matrix sigma = Matrix::Identity(3, 3);
    const dpreg::ScalingFactor mc = dpreg::stein_k(c.link, beta, sigma, 1000, 3, 1000000, rng);
    const double quad = dpreg::stein_k_quadrature(c.link, beta, sigma, 1000, 3);
    const double z = std::abs(mc.k - quad) / mc.standard_error;
    if (z > worst) {
      worst = z;
      worst_name = c.name;
    }
  }
  const dpreg::ScalingFactor zero = dpreg::stein_k(logistic, Vector::Zero(3),
                                                   Matrix::Identity(3, 3), 1000, 3, 10000, rng);
  const bool zero_exact = zero.mean_slope == 0.25;
  return {quarter && zero_exact && worst <= 3.0,
          fmt("f'(0) = 1/4 %s, beta = 0 slope exact %s; %zu links, worst |MC - quadrature| = "
              "%.2f SE (%s, need <= 3)",
              quarter ? "exact" : "wrong", zero_exact ? "yes" : "no", cases.size(), worst,
              worst_name.c_str())};
}

// ---------------------------------------------------------------------------
// 10. Reported budgets equal the closed form.

Outcome criterion_10() {
  const std::vector<double> epsilons{0.1, 0.5, 1.0, 2.0, 5.0};
  const std::vector<double> deltas{1e-3, 1e-6, 1e-9};
  int checked = 0;
  double worst = 0.0;
  bool stages_ok = true;
  for (const char* estimator : {"lse", "binary", "linear"}) {
    for (double eps : epsilons) {
      for (double delta : deltas) {
        dpreg::Json j = dpreg::Json::parse(R"({"trials": 1, "seed": 3})");
        j["estimator"] = estimator;
        j["config"] = {{"epsilon", eps}, {"delta", delta}};
        j["generator"] = {{"d", 2}, {"n", 400},
                          {"setting", std::string(estimator)},
                          {"beta", {1.0, -0.5}}};
        for (const dpreg::ResultRow& r : dpreg::run_sweep(dpreg::experiment_from_json(j))) {
          const double closed = eps * eps / 2.0 + eps * std::sqrt(2.0 * std::log(1.0 / delta));
          worst = std::max(worst, std::abs(r.budget_reported.epsilon - closed) / closed);
          worst = std::max(worst, std::abs(r.budget_reported.delta - delta) / delta);
          ++checked;
        }
        // The stage budgets compose back to the total.
        const dpreg::ExperimentSpec spec = dpreg::experiment_from_json(j);
        const dpreg::GeneratorSpec gen = dpreg::generator_from_json(spec.generator);
        Rng rng(0);
        const dpreg::RegressionEstimate est =
            dpreg::run_estimator(spec.estimator, dpreg::generate_dataset(gen), spec.config, rng);
        double eps_sum = 0.0;
        double eps_max = 0.0;
        for (const dpreg::PrivacyBudget& b : est.stage_budgets) {
          eps_sum += b.epsilon;
          eps_max = std::max(eps_max, b.epsilon);
        }
        const double composed = spec.estimator == dpreg::Estimator::kLinear ? eps_max : eps_sum;
        if (composed != est.budget_spent.epsilon) stages_ok = false;
      }
    }
  }
  return {worst <= 1e-13 && stages_ok,
          fmt("%d configurations, max relative deviation from eps^2/2 + eps sqrt(2 log(1/delta)) "
              "%.1e; stage budgets compose to the total: %s",
              checked, worst, stages_ok ? "yes" : "no")};
}

// ---------------------------------------------------------------------------
// 11. Byte-identical sweeps.

Outcome criterion_11() {
  const dpreg::Json j = dpreg::Json::parse(R"({
    "generator": {"d": 2, "n": 2000, "setting": "binary", "beta": [1, 0.5]},
    "estimator": "binary",
    "trials": 4,
    "seed": 1111,
    "sweep": {"n": [1000, 3000], "epsilon": [0.5, 2, "inf"], "d": [2, 3]}
  })");
  const dpreg::ExperimentSpec spec = dpreg::experiment_from_json(j);
  auto csv = [&](std::size_t jobs) {
    std::ostringstream out;
    dpreg::write_results_csv(dpreg::run_sweep(spec, jobs), out);
    return out.str();
  };
  const std::string first = csv(1);
  const std::string second = csv(1);
  const std::string threaded = csv(4);
  const bool same = first == second && first == threaded;
  return {same, fmt("%zu rows, repeat %s, 4 jobs %s", spec.total_rows(),
                    first == second ? "identical" : "differs",
                    first == threaded ? "identical" : "differs")};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "unbounded epsilon matches plug-in", criterion_1},
      {2, "sensitivity at the truncation radius", criterion_2},
      {3, "preconditioner conditioning", criterion_3},
      {4, "least-squares error trend", criterion_4},
      {5, "binary direction and scaling factor", criterion_5},
      {6, "inverse second moment factor", criterion_6},
      {7, "linear model recovery", criterion_7},
      {8, "block covariance eigenvalue bounds", criterion_8},
      {9, "scaling factor Monte Carlo vs quadrature", criterion_9},
      {10, "budget arithmetic", criterion_10},
      {11, "deterministic sweeps", criterion_11},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
      return 2;
    }
  }
  bool all_pass = true;
  bool ran = false;
  for (const Criterion& c : criteria()) {
    if (only != 0 && c.id != only) continue;
    ran = true;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title,
                o.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && o.pass;
  }
  if (!ran) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return all_pass ? 0 : 1;
}
