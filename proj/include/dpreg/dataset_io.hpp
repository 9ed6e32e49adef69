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

// Dataset CSV files (header x1,...,xd,y) and the JSON generator spec that is
// written next to them as a sidecar.

#ifndef DPREG_DATASET_IO_HPP_
#define DPREG_DATASET_IO_HPP_

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpreg/synthetic.hpp"

namespace dpreg {

using Json = nlohmann::json;

inline constexpr int kDatasetSchemaVersion = 1;

// 17 significant digits, enough to read back the same double; "inf", "-inf"
// and "nan" for non-finite values.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& text, const std::string& where) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  // ERANGE on underflow still yields the nearest subnormal; only overflow
  // is an error.
  require(end != begin && *end == '\0' && !(errno == ERANGE && std::isinf(v)),
          where + ": cannot parse number '" + text + "'");
  return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

inline void write_dataset_csv(const Dataset& data, std::ostream& out) {
  data.validate();
  require(data.has_labels(), "write_dataset_csv: dataset has no labels");
  for (Eigen::Index j = 0; j < data.x.cols(); ++j) {
    out << 'x' << (j + 1) << ',';
  }
  out << "y\n";
  for (Eigen::Index i = 0; i < data.x.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.x.cols(); ++j) {
      out << format_double(data.x(i, j)) << ',';
    }
    out << format_double(data.y(i)) << '\n';
  }
}

// Errors name the offending line (1-based, header is line 1).
inline Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)),
          "dataset csv: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_line(line);
  require(header.size() >= 2 && header.back() == "y",
          "dataset csv line 1: header must be x1,...,xd,y");
  const std::size_t d = header.size() - 1;
  for (std::size_t j = 0; j < d; ++j) {
    require(header[j] == "x" + std::to_string(j + 1),
            "dataset csv line 1: expected column x" + std::to_string(j + 1));
  }

  std::vector<double> values;
  std::size_t line_no = 1;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    const std::string where = "dataset csv line " + std::to_string(line_no);
    require(fields.size() == d + 1, where + ": expected " +
                                        std::to_string(d + 1) + " fields");
    for (const std::string& f : fields) values.push_back(parse_double(f, where));
    ++rows;
  }
  require(rows > 0, "dataset csv: no data rows");

  Dataset data;
  data.x.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(d));
  data.y.resize(static_cast<Eigen::Index>(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      data.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          values[i * (d + 1) + j];
    }
    data.y(static_cast<Eigen::Index>(i)) = values[i * (d + 1) + d];
  }
  return data;
}

// ---------------------------------------------------------------------------
// JSON

inline Json to_json(const Vector& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

inline Json to_json(const Matrix& m) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    j.push_back(std::move(row));
  }
  return j;
}

// Accepts a number or the strings "inf" / "infinity".
inline double json_number(const Json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") {
      return std::numeric_limits<double>::infinity();
    }
  }
  throw_argument(field + ": expected a number");
}

inline Vector vector_from_json(const Json& j, const std::string& field) {
  require(j.is_array(), field + ": expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) =
        json_number(j[i], field + "[" + std::to_string(i) + "]");
  }
  return v;
}

inline Matrix matrix_from_json(const Json& j, const std::string& field) {
  require(j.is_array() && !j.empty(), field + ": expected a non-empty matrix");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    require(j[i].is_array() && j[i].size() == cols,
            field + ": rows must be arrays of equal length");
    for (std::size_t k = 0; k < cols; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          json_number(j[i][k], field);
    }
  }
  return m;
}

inline Json link_to_json(const Link& link) {
  switch (link.kind()) {
    case Link::Kind::kLogistic:
      return {{"type", "logistic"}};
    case Link::Kind::kSmoothedSign:
      return {{"type", "smoothed-sign"}, {"lambda", link.lambda()}};
    case Link::Kind::kCustom:
      break;
  }
  throw_argument("link: custom links cannot be serialized");
}

inline Link link_from_json(const Json& j) {
  if (j.is_string()) return link_from_json(Json{{"type", j}});
  require(j.is_object() && j.contains("type"), "link: expected {\"type\": ...}");
  const std::string type = j.at("type").get<std::string>();
  if (type == "logistic") return Link::logistic();
  if (type == "smoothed-sign") {
    require(j.contains("lambda"), "link.lambda: required for smoothed-sign");
    return Link::smoothed_sign(json_number(j.at("lambda"), "link.lambda"));
  }
  throw_argument("link.type: expected logistic|smoothed-sign, got '" + type +
                 "'");
}

inline Json generator_to_json(const GeneratorSpec& spec) {
  Json j;
  j["schema_version"] = kDatasetSchemaVersion;
  j["d"] = spec.d;
  j["n"] = spec.n;
  j["seed"] = spec.seed;
  j["setting"] = to_string(spec.setting);
  j["mu"] = to_json(spec.mu);
  j["sigma"] = to_json(spec.sigma);
  j["beta"] = to_json(spec.beta);
  switch (spec.setting) {
    case Setting::kLinear:
      j["sigma_eps"] = spec.sigma_eps;
      break;
    case Setting::kBinary:
      j["link"] = link_to_json(spec.link);
      break;
    case Setting::kLse:
      j["c"] = spec.c;
      j["label_noise"] = spec.label_noise;
      break;
  }
  return j;
}

// Fills defaults (mu = 0, sigma = I, beta = 0) and validates. When
// `dimension_override` is non-zero, d is taken from it and mu/beta are padded
// with zeros or truncated; sigma must then be absent or a scalar multiple of I.
inline GeneratorSpec generator_from_json(const Json& j,
                                         std::size_t dimension_override = 0,
                                         std::size_t rows_override = 0) {
  require(j.is_object(), "generator: expected a JSON object");
  GeneratorSpec spec;
  const auto read_size = [&](const char* key) -> std::size_t {
    const Json& v = j.at(key);
    require(v.is_number_integer() && v.get<long long>() > 0,
            std::string(key) + ": expected a positive integer");
    return v.get<std::size_t>();
  };
  if (dimension_override > 0) {
    spec.d = dimension_override;
  } else {
    require(j.contains("d"), "d: required");
    spec.d = read_size("d");
  }
  if (rows_override > 0) {
    spec.n = rows_override;
  } else {
    require(j.contains("n"), "n: required");
    spec.n = read_size("n");
  }
  require(j.contains("setting"), "setting: required");
  spec.setting = setting_from_string(j.at("setting").get<std::string>());
  if (j.contains("seed")) {
    require(j.at("seed").is_number_unsigned() || j.at("seed").is_number_integer(),
            "seed: expected a non-negative integer");
    spec.seed = j.at("seed").get<std::uint64_t>();
  }

  const auto d = static_cast<Eigen::Index>(spec.d);
  const auto fit_length = [&](const char* key) -> Vector {
    Vector v = Vector::Zero(d);
    if (!j.contains(key)) return v;
    const Vector given = vector_from_json(j.at(key), key);
    if (dimension_override == 0) {
      require(given.size() == d, std::string(key) + ": length must equal d");
      return given;
    }
    const Eigen::Index m = std::min(d, given.size());
    v.head(m) = given.head(m);
    return v;
  };
  spec.mu = fit_length("mu");
  spec.beta = fit_length("beta");

  if (!j.contains("sigma")) {
    spec.sigma = Matrix::Identity(d, d);
  } else if (j.at("sigma").is_number()) {
    spec.sigma = j.at("sigma").get<double>() * Matrix::Identity(d, d);
  } else {
    spec.sigma = matrix_from_json(j.at("sigma"), "sigma");
    require(spec.sigma.rows() == d && spec.sigma.cols() == d,
            "sigma: must be d x d");
  }

  if (j.contains("sigma_eps")) {
    spec.sigma_eps = json_number(j.at("sigma_eps"), "sigma_eps");
  }
  if (j.contains("c")) spec.c = json_number(j.at("c"), "c");
  if (j.contains("label_noise")) {
    spec.label_noise = json_number(j.at("label_noise"), "label_noise");
  }
  if (j.contains("link")) spec.link = link_from_json(j.at("link"));
  spec.validate();
  return spec;
}

}  // namespace dpreg

#endif  // DPREG_DATASET_IO_HPP_
