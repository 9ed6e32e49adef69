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

#ifndef DPREG_COMMON_HPP_
#define DPREG_COMMON_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dpreg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Every randomized routine takes an explicit generator; identical seeds give
// bit-identical outputs.
using Rng = std::mt19937_64;

// splitmix64 finalizer over (base, stream). Used to derive independent streams
// for work that may be scheduled in any order.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Rng derive_rng(std::uint64_t base, std::uint64_t stream) {
  return Rng(mix_seed(base, stream));
}

[[noreturn]] inline void throw_argument(const std::string& what) {
  throw std::invalid_argument(what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) throw_argument(what);
}

// n x d covariates, optional length-n labels. One (x_i, y_i) row is the unit
// of privacy.
struct Dataset {
  Matrix x;
  Vector y;

  std::size_t rows() const { return static_cast<std::size_t>(x.rows()); }
  std::size_t dims() const { return static_cast<std::size_t>(x.cols()); }
  bool has_labels() const { return y.size() > 0; }

  void validate() const {
    require(x.rows() > 0 && x.cols() > 0, "dataset: empty covariate matrix");
    require(!has_labels() || y.size() == x.rows(),
            "dataset: label count does not match row count");
    require(x.allFinite(), "dataset: non-finite covariate");
    require(!has_labels() || y.allFinite(), "dataset: non-finite label");
  }
};

}  // namespace dpreg

#endif  // DPREG_COMMON_HPP_
