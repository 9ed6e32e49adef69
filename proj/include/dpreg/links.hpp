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

#ifndef DPREG_LINKS_HPP_
#define DPREG_LINKS_HPP_

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "dpreg/common.hpp"

namespace dpreg {

// Model function f of a binary GLM, Pr[y = +1 | x] = f(beta^T x), together
// with its derivative.
class Link {
 public:
  enum class Kind { kLogistic, kSmoothedSign, kCustom };

  static Link logistic() { return Link(Kind::kLogistic, 1.0); }

  // 1 / (1 + exp(-lambda x)): the [-1, 1] smoothed sign 2/(1+e^{-lx}) - 1
  // mapped affinely onto [0, 1].
  static Link smoothed_sign(double lambda) {
    require(lambda > 0.0 && std::isfinite(lambda),
            "smoothed_sign: lambda must be positive and finite");
    return Link(Kind::kSmoothedSign, lambda);
  }

  static Link custom(std::string name, std::function<double(double)> f,
                     std::function<double(double)> derivative) {
    require(static_cast<bool>(f) && static_cast<bool>(derivative),
            "custom link: f and f' are required");
    Link link(Kind::kCustom, 1.0);
    link.name_ = std::move(name);
    link.f_ = std::move(f);
    link.df_ = std::move(derivative);
    return link;
  }

  Kind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  const std::string& name() const { return name_; }

  double operator()(double x) const {
    if (kind_ == Kind::kCustom) return f_(x);
    return sigmoid(lambda_ * x);
  }

  double derivative(double x) const {
    if (kind_ == Kind::kCustom) return df_(x);
    const double s = sigmoid(lambda_ * x);
    return lambda_ * s * (1.0 - s);
  }

  // Sampled check of the range [0, 1] and monotonicity on [-lim, lim].
  void validate(double lim = 50.0, int points = 2001) const {
    double prev = -1.0;
    for (int i = 0; i < points; ++i) {
      const double x = -lim + 2.0 * lim * i / (points - 1);
      const double v = (*this)(x);
      require(v >= 0.0 && v <= 1.0, "link " + name_ + ": value outside [0, 1]");
      require(v >= prev, "link " + name_ + ": not non-decreasing");
      prev = v;
    }
  }

 private:
  Link(Kind kind, double lambda) : kind_(kind), lambda_(lambda) {
    name_ = kind == Kind::kLogistic ? "logistic" : "smoothed-sign";
  }

  static double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
  }

  Kind kind_;
  double lambda_;
  std::string name_;
  std::function<double(double)> f_;
  std::function<double(double)> df_;
};

}  // namespace dpreg

#endif  // DPREG_LINKS_HPP_
