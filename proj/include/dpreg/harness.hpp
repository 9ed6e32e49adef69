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

// Experiment sweeps: cross product of (d, n, epsilon) cells times trials, one
// result row per run. Row i uses seed base_seed + i, so the results CSV is a
// pure function of the experiment (runtime is only recorded on request).

#ifndef DPREG_HARNESS_HPP_
#define DPREG_HARNESS_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "dpreg/dataset_io.hpp"
#include "dpreg/oracle.hpp"
#include "dpreg/regression.hpp"

namespace dpreg {

inline constexpr int kResultsSchemaVersion = 1;

enum class Estimator { kLse, kBinary, kLinear };

inline Estimator estimator_from_string(const std::string& s) {
  if (s == "lse") return Estimator::kLse;
  if (s == "binary") return Estimator::kBinary;
  if (s == "linear") return Estimator::kLinear;
  throw_argument("estimator: expected one of lse|binary|linear, got '" + s +
                 "'");
}

inline std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::kLse:
      return "lse";
    case Estimator::kBinary:
      return "binary";
    case Estimator::kLinear:
      return "linear";
  }
  return "unknown";
}

// Union of the least-squares and linear configurations; each estimator reads
// the fields it needs.
struct EstimatorConfig {
  double epsilon = 1.0;
  double delta = 1e-6;
  double alpha = 0.1;
  double eta = 0.1;
  double gamma = 0.05;
  double kappa = 1.0;
  double c = 1.0;
  std::optional<double> kappa_prime;
  double beta_bound = 1.0;
  double sigma_bound = 1.0;

  LseConfig lse() const { return {epsilon, delta, alpha, eta, gamma, kappa, c}; }
  LinearConfig linear() const {
    return {epsilon, delta,       alpha,      eta,        gamma,
            kappa,   kappa_prime, beta_bound, sigma_bound};
  }
};

inline EstimatorConfig estimator_config_from_json(const Json& j) {
  EstimatorConfig cfg;
  if (j.is_null()) return cfg;
  require(j.is_object(), "config: expected a JSON object");
  const auto read = [&](const char* key, double& field) {
    if (j.contains(key)) field = json_number(j.at(key), std::string("config.") + key);
  };
  read("epsilon", cfg.epsilon);
  read("delta", cfg.delta);
  read("alpha", cfg.alpha);
  read("eta", cfg.eta);
  read("gamma", cfg.gamma);
  read("kappa", cfg.kappa);
  read("c", cfg.c);
  read("beta_bound", cfg.beta_bound);
  read("sigma_bound", cfg.sigma_bound);
  if (j.contains("kappa_prime")) {
    cfg.kappa_prime = json_number(j.at("kappa_prime"), "config.kappa_prime");
  }
  return cfg;
}

inline RegressionEstimate run_estimator(Estimator estimator,
                                        const Dataset& data,
                                        const EstimatorConfig& cfg, Rng& rng) {
  switch (estimator) {
    case Estimator::kLse:
      return priv_learn_lse(data, cfg.lse(), rng);
    case Estimator::kBinary:
      return priv_learn_binary(data, cfg.lse(), rng);
    case Estimator::kLinear:
      return priv_learn_linear(data, cfg.linear(), rng);
  }
  throw_argument("unknown estimator");
}

// What the estimate is compared against: the exact least-squares solution for
// the lse setting, k beta for binary labels, beta for the linear model. The
// angle for binary labels is measured against beta itself.
struct EvaluationTarget {
  Vector target;
  Vector direction;
};

inline EvaluationTarget evaluation_target(const GeneratorSpec& spec,
                                          const Dataset& data) {
  switch (spec.setting) {
    case Setting::kLse: {
      const Vector b = exact_lse(data.x, data.y);
      return {b, b};
    }
    case Setting::kBinary: {
      const double k = stein_k_quadrature(spec.link, spec.beta, spec.sigma,
                                          data.rows(), data.dims());
      return {k * spec.beta, spec.beta};
    }
    case Setting::kLinear:
      return {spec.beta, spec.beta};
  }
  throw_argument("unknown setting");
}

struct ResultRow {
  std::size_t row_index = 0;
  std::string setting;
  std::string estimator;
  std::size_t n = 0;
  std::size_t d = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double error_l2 = std::numeric_limits<double>::quiet_NaN();
  double angle_deg = std::numeric_limits<double>::quiet_NaN();
  bool bottom_flag = false;
  std::optional<double> runtime_ms;
  PrivacyBudget budget_reported;
};

struct ExperimentSpec {
  Json generator;
  Estimator estimator = Estimator::kLse;
  EstimatorConfig config;
  std::vector<std::size_t> n_values;
  std::vector<double> epsilon_values;
  std::vector<std::size_t> d_values;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::string output_path;

  std::size_t total_rows() const {
    return n_values.size() * epsilon_values.size() * d_values.size() * trials;
  }
};

inline ExperimentSpec experiment_from_json(const Json& j) {
  require(j.is_object(), "experiment: expected a JSON object");
  require(j.contains("generator"), "generator: required");
  require(j.contains("estimator"), "estimator: required");
  ExperimentSpec spec;
  spec.generator = j.at("generator");
  require(spec.generator.is_object(), "generator: expected a JSON object");
  spec.estimator = estimator_from_string(j.at("estimator").get<std::string>());
  spec.config =
      estimator_config_from_json(j.contains("config") ? j.at("config") : Json());
  if (j.contains("trials")) {
    require(j.at("trials").is_number_integer() &&
                j.at("trials").get<long long>() >= 1,
            "trials: must be an integer >= 1");
    spec.trials = j.at("trials").get<std::size_t>();
  }
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("output")) spec.output_path = j.at("output").get<std::string>();

  const Json sweep = j.contains("sweep") ? j.at("sweep") : Json::object();
  const auto sizes = [&](const char* key) -> std::vector<std::size_t> {
    std::vector<std::size_t> out;
    if (sweep.contains(key)) {
      const Json& list = sweep.at(key);
      require(list.is_array() && !list.empty(),
              std::string("sweep.") + key + ": must be a non-empty list");
      for (const Json& v : list) {
        require(v.is_number_integer() && v.get<long long>() > 0,
                std::string("sweep.") + key + ": entries must be positive integers");
        out.push_back(v.get<std::size_t>());
      }
    } else {
      require(spec.generator.contains(key),
              std::string(key) + ": required in generator or sweep");
      out.push_back(spec.generator.at(key).get<std::size_t>());
    }
    return out;
  };
  spec.n_values = sizes("n");
  spec.d_values = sizes("d");
  if (sweep.contains("epsilon")) {
    const Json& list = sweep.at("epsilon");
    require(list.is_array() && !list.empty(),
            "sweep.epsilon: must be a non-empty list");
    for (const Json& v : list) {
      spec.epsilon_values.push_back(json_number(v, "sweep.epsilon"));
    }
  } else {
    spec.epsilon_values.push_back(spec.config.epsilon);
  }
  for (double e : spec.epsilon_values) {
    require(e > 0.0, "sweep.epsilon: entries must be positive or \"inf\"");
  }
  return spec;
}

struct SweepCell {
  std::size_t d;
  std::size_t n;
  double epsilon;
  std::size_t trial;
};

// Row order: d, then n, then epsilon, then trial.
inline SweepCell cell_of(const ExperimentSpec& spec, std::size_t row) {
  const std::size_t t = row % spec.trials;
  std::size_t rest = row / spec.trials;
  const std::size_t e = rest % spec.epsilon_values.size();
  rest /= spec.epsilon_values.size();
  const std::size_t ni = rest % spec.n_values.size();
  const std::size_t di = rest / spec.n_values.size();
  return {spec.d_values[di], spec.n_values[ni], spec.epsilon_values[e], t};
}

inline ResultRow run_row(const ExperimentSpec& spec, std::size_t row,
                         bool timing) {
  const SweepCell cell = cell_of(spec, row);
  ResultRow out;
  out.row_index = row;
  out.estimator = to_string(spec.estimator);
  out.n = cell.n;
  out.d = cell.d;
  out.epsilon = cell.epsilon;
  out.delta = spec.config.delta;
  out.trial = cell.trial;
  out.seed = spec.seed + row;

  GeneratorSpec gen = generator_from_json(spec.generator, cell.d, cell.n);
  gen.seed = mix_seed(out.seed, 0);
  out.setting = to_string(gen.setting);
  const Dataset data = generate_dataset(gen);

  EstimatorConfig cfg = spec.config;
  cfg.epsilon = cell.epsilon;
  Rng rng = derive_rng(out.seed, 1);

  const auto start = std::chrono::steady_clock::now();
  const RegressionEstimate est = run_estimator(spec.estimator, data, cfg, rng);
  const auto stop = std::chrono::steady_clock::now();
  if (timing) {
    out.runtime_ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
  }
  out.budget_reported = est.budget_spent;
  out.bottom_flag = est.bottom();
  if (!out.bottom_flag) {
    const EvaluationTarget target = evaluation_target(gen, data);
    out.error_l2 = (*est.beta_hat - target.target).norm();
    out.angle_deg = angle_degrees(*est.beta_hat, target.direction);
  }
  return out;
}

// Runs every row on up to `jobs` threads; rows come back in row_index order.
inline std::vector<ResultRow> run_sweep(const ExperimentSpec& spec,
                                        std::size_t jobs = 1,
                                        bool timing = false) {
  const std::size_t total = spec.total_rows();
  require(total > 0, "sweep: no rows");
  std::vector<ResultRow> rows(total);
  jobs = std::clamp<std::size_t>(jobs, 1, total);
  if (jobs == 1) {
    for (std::size_t i = 0; i < total; ++i) rows[i] = run_row(spec, i, timing);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < total; i = next++) {
          rows[i] = run_row(spec, i, timing);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : workers) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

inline constexpr const char* kResultsHeader =
    "schema_version,row_index,setting,estimator,n,d,epsilon,delta,trial,seed,"
    "error_l2,angle_deg,bottom_flag,runtime_ms,budget_epsilon,budget_delta";

inline std::string optional_cell(double v) {
  return std::isnan(v) ? std::string() : format_double(v);
}

inline void write_results_csv(const std::vector<ResultRow>& rows,
                              std::ostream& out) {
  out << kResultsHeader << '\n';
  for (const ResultRow& r : rows) {
    out << kResultsSchemaVersion << ',' << r.row_index << ',' << r.setting
        << ',' << r.estimator << ',' << r.n << ',' << r.d << ','
        << format_double(r.epsilon) << ',' << format_double(r.delta) << ','
        << r.trial << ',' << r.seed << ','
        << (r.bottom_flag ? "" : optional_cell(r.error_l2)) << ','
        << (r.bottom_flag ? "" : optional_cell(r.angle_deg)) << ','
        << (r.bottom_flag ? "true" : "false") << ','
        << (r.runtime_ms ? format_double(*r.runtime_ms) : "") << ','
        << format_double(r.budget_reported.epsilon) << ','
        << format_double(r.budget_reported.delta) << '\n';
  }
}

inline std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "results csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == kResultsHeader, "results csv line 1: unexpected header");
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "results csv line " + std::to_string(line_no);
    const std::vector<std::string> f = split_csv_line(line);
    require(f.size() == 16, where + ": expected 16 fields");
    require(f[0] == std::to_string(kResultsSchemaVersion),
            where + ": unsupported schema_version " + f[0]);
    const auto number = [&](std::size_t i) { return parse_double(f[i], where); };
    const auto optional_number = [&](std::size_t i) {
      return f[i].empty() ? std::numeric_limits<double>::quiet_NaN()
                          : number(i);
    };
    ResultRow r;
    r.row_index = static_cast<std::size_t>(number(1));
    r.setting = f[2];
    r.estimator = f[3];
    r.n = static_cast<std::size_t>(number(4));
    r.d = static_cast<std::size_t>(number(5));
    r.epsilon = number(6);
    r.delta = number(7);
    r.trial = static_cast<std::size_t>(number(8));
    r.seed = std::stoull(f[9]);
    r.error_l2 = optional_number(10);
    r.angle_deg = optional_number(11);
    require(f[12] == "true" || f[12] == "false", where + ": bad bottom_flag");
    r.bottom_flag = f[12] == "true";
    if (!f[13].empty()) r.runtime_ms = number(13);
    r.budget_reported = {number(14), number(15)};
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Summaries

inline double median(std::vector<double> v) {
  std::erase_if(v, [](double x) { return std::isnan(x); });
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid),
                   v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(
      v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

struct CellSummary {
  std::string setting;
  std::string estimator;
  std::size_t n = 0;
  std::size_t d = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::size_t trials = 0;
  double bottom_rate = 0.0;
  double median_error_l2 = 0.0;
  double median_angle_deg = 0.0;
};

// Groups rows by cell in order of first appearance. Bottom rows count towards
// bottom_rate and are excluded from the medians.
inline std::vector<CellSummary> summarize(const std::vector<ResultRow>& rows) {
  using Key = std::tuple<std::string, std::string, std::size_t, std::size_t,
                         double, double>;
  std::vector<Key> order;
  std::map<Key, std::vector<const ResultRow*>> groups;
  for (const ResultRow& r : rows) {
    const Key key{r.setting, r.estimator, r.n, r.d, r.epsilon, r.delta};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }
  std::vector<CellSummary> out;
  for (const Key& key : order) {
    const auto& members = groups.at(key);
    CellSummary s;
    std::tie(s.setting, s.estimator, s.n, s.d, s.epsilon, s.delta) = key;
    s.trials = members.size();
    std::vector<double> errors;
    std::vector<double> angles;
    std::size_t bottoms = 0;
    for (const ResultRow* r : members) {
      if (r->bottom_flag) {
        ++bottoms;
        continue;
      }
      errors.push_back(r->error_l2);
      angles.push_back(r->angle_deg);
    }
    s.bottom_rate = static_cast<double>(bottoms) / static_cast<double>(s.trials);
    s.median_error_l2 = median(errors);
    s.median_angle_deg = median(angles);
    out.push_back(s);
  }
  return out;
}

inline void write_summary_csv(const std::vector<CellSummary>& cells,
                              std::ostream& out) {
  out << "setting,estimator,n,d,epsilon,delta,trials,bottom_rate,"
         "median_error_l2,median_angle_deg\n";
  for (const CellSummary& s : cells) {
    out << s.setting << ',' << s.estimator << ',' << s.n << ',' << s.d << ','
        << format_double(s.epsilon) << ',' << format_double(s.delta) << ','
        << s.trials << ',' << format_double(s.bottom_rate) << ','
        << optional_cell(s.median_error_l2) << ','
        << optional_cell(s.median_angle_deg) << '\n';
  }
}

}  // namespace dpreg

#endif  // DPREG_HARNESS_HPP_
