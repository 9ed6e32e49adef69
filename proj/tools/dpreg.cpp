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

// dpreg generate | fit | sweep | evaluate
//
// Exit codes: 0 success (a bottom estimate is a success), 1 runtime error,
// 2 usage error. DPREG_LOG sets the log level (trace..off, default warn).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "dpreg/dpreg.hpp"

namespace fs = std::filesystem;

namespace {

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("dpreg");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("DPREG_LOG")) {
    const spdlog::level::level_enum level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only honour names it knows.
    if (level != spdlog::level::off || std::string(env) == "off") {
      spdlog::set_level(level);
    } else {
      spdlog::warn("DPREG_LOG: unknown level '{}', keeping warn", env);
    }
  }
}

dpreg::Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return dpreg::Json::parse(in);
  } catch (const dpreg::Json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

// "out/data" and "out/data.csv" both name the pair out/data.csv + out/data.json.
fs::path strip_csv(const std::string& path) {
  fs::path p(path);
  if (p.extension() == ".csv") p.replace_extension();
  return p;
}

fs::path sidecar_of(const std::string& csv_path) {
  fs::path p(csv_path);
  p.replace_extension(".json");
  return p;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string spec;
  std::string out;
  std::optional<std::uint64_t> seed;
};

int run_generate(const GenerateArgs& args) {
  dpreg::GeneratorSpec spec = dpreg::generator_from_json(read_json_file(args.spec));
  if (args.seed) spec.seed = *args.seed;
  const dpreg::Dataset data = dpreg::generate_dataset(spec);

  const fs::path base = strip_csv(args.out);
  if (base.has_parent_path()) fs::create_directories(base.parent_path());
  const std::string csv = base.string() + ".csv";
  const std::string json = base.string() + ".json";
  {
    std::ofstream out = open_output(csv);
    dpreg::write_dataset_csv(data, out);
  }
  {
    std::ofstream out = open_output(json);
    out << dpreg::generator_to_json(spec).dump(2) << '\n';
  }
  spdlog::info("wrote {} rows to {} and {}", data.rows(), csv, json);
  return 0;
}

// ---------------------------------------------------------------------------

struct FitArgs {
  std::string data;
  std::string estimator = "lse";
  dpreg::EstimatorConfig config;
  std::string epsilon = "1";
  std::optional<double> kappa_prime;
  std::uint64_t seed = 0;
  bool evaluate = false;
  std::string out;
};

int run_fit(FitArgs args) {
  const dpreg::Estimator estimator = dpreg::estimator_from_string(args.estimator);
  args.config.epsilon = dpreg::json_number(
      args.epsilon == "inf" ? dpreg::Json("inf")
                            : dpreg::Json(dpreg::parse_double(args.epsilon, "--epsilon")),
      "--epsilon");
  args.config.kappa_prime = args.kappa_prime;

  std::optional<dpreg::GeneratorSpec> truth;
  if (args.evaluate) {
    const fs::path sidecar = sidecar_of(args.data);
    if (!fs::exists(sidecar)) {
      throw std::runtime_error("--evaluate needs the sidecar " + sidecar.string() +
                               " next to the dataset");
    }
    truth = dpreg::generator_from_json(read_json_file(sidecar.string()));
  }

  std::ifstream in(args.data);
  if (!in) throw std::runtime_error("cannot open " + args.data);
  const dpreg::Dataset data = dpreg::read_dataset_csv(in);
  if (truth) {
    if (truth->d != data.dims() || truth->n != data.rows()) {
      throw std::runtime_error("sidecar shape does not match " + args.data);
    }
  }

  dpreg::Rng rng = dpreg::derive_rng(args.seed, 1);
  const dpreg::RegressionEstimate est =
      dpreg::run_estimator(estimator, data, args.config, rng);
  for (const std::string& w : est.warnings) spdlog::warn("{}", w);

  dpreg::Json j;
  j["schema_version"] = dpreg::kResultsSchemaVersion;
  j["estimator"] = dpreg::to_string(estimator);
  j["n"] = data.rows();
  j["d"] = data.dims();
  j["epsilon"] = std::isinf(args.config.epsilon) ? dpreg::Json("inf")
                                                 : dpreg::Json(args.config.epsilon);
  j["delta"] = args.config.delta;
  j["seed"] = args.seed;
  j["bottom_flag"] = est.bottom();
  j["beta_hat"] = est.bottom() ? dpreg::Json(nullptr) : dpreg::to_json(*est.beta_hat);
  if (est.bottom()) j["bottom_reason"] = est.bottom_reason;
  j["budget_reported"] = {{"epsilon", std::isinf(est.budget_spent.epsilon)
                                         ? dpreg::Json("inf")
                                         : dpreg::Json(est.budget_spent.epsilon)},
                          {"delta", est.budget_spent.delta}};
  dpreg::Json diagnostics = dpreg::Json::object();
  for (const auto& [key, value] : est.diagnostics) {
    diagnostics[key] = std::isfinite(value) ? dpreg::Json(value)
                                            : dpreg::Json(dpreg::format_double(value));
  }
  j["diagnostics"] = diagnostics;
  j["warnings"] = est.warnings;
  if (truth) {
    j["setting"] = dpreg::to_string(truth->setting);
    if (!est.bottom()) {
      const dpreg::EvaluationTarget target = dpreg::evaluation_target(*truth, data);
      j["target"] = dpreg::to_json(target.target);
      j["error_l2"] = (*est.beta_hat - target.target).norm();
      const double angle = dpreg::angle_degrees(*est.beta_hat, target.direction);
      j["angle_deg"] = std::isnan(angle) ? dpreg::Json(nullptr) : dpreg::Json(angle);
    }
  }

  const std::string text = j.dump(2);
  if (args.out.empty()) {
    std::cout << text << '\n';
  } else {
    std::ofstream out = open_output(args.out);
    out << text << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
  std::string spec;
  std::string out;
  std::size_t jobs = 1;
  std::optional<std::uint64_t> seed;
  bool timing = false;
};

int run_sweep(const SweepArgs& args) {
  dpreg::ExperimentSpec spec = dpreg::experiment_from_json(read_json_file(args.spec));
  if (args.seed) spec.seed = *args.seed;
  std::string out_path = args.out.empty() ? spec.output_path : args.out;
  if (out_path.empty()) throw std::runtime_error("sweep: no --out and no \"output\" in spec");

  spdlog::info("sweep: {} rows on {} job(s)", spec.total_rows(), args.jobs);
  const std::vector<dpreg::ResultRow> rows =
      dpreg::run_sweep(spec, args.jobs, args.timing);
  const fs::path p(out_path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out = open_output(out_path);
  dpreg::write_results_csv(rows, out);
  spdlog::info("wrote {}", out_path);
  return 0;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string data;
  std::string out;
};

int run_evaluate(const EvaluateArgs& args) {
  std::ifstream in(args.data);
  if (!in) throw std::runtime_error("cannot open " + args.data);
  const std::vector<dpreg::CellSummary> cells =
      dpreg::summarize(dpreg::read_results_csv(in));
  if (args.out.empty()) {
    dpreg::write_summary_csv(cells, std::cout);
  } else {
    std::ofstream out = open_output(args.out);
    dpreg::write_summary_csv(cells, out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Differentially private regression toolkit"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "Write a synthetic dataset and its JSON sidecar");
  generate->add_option("--spec", gen.spec, "Generator spec (JSON)")->required()->check(CLI::ExistingFile);
  generate->add_option("--out", gen.out, "Output prefix; writes PREFIX.csv and PREFIX.json")->required();
  generate->add_option("--seed", gen.seed, "Override the seed in the generator file");

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Run one private estimator on a dataset");
  fit_cmd->add_option("--data", fit.data, "Dataset CSV")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--estimator", fit.estimator, "lse | binary | linear")
      ->check(CLI::IsMember({"lse", "binary", "linear"}))
      ->capture_default_str();
  fit_cmd->add_option("--epsilon", fit.epsilon, "Privacy parameter; 'inf' disables noise")->capture_default_str();
  fit_cmd->add_option("--delta", fit.config.delta)->capture_default_str();
  fit_cmd->add_option("--alpha", fit.config.alpha)->capture_default_str();
  fit_cmd->add_option("--eta", fit.config.eta)->capture_default_str();
  fit_cmd->add_option("--gamma", fit.config.gamma)->capture_default_str();
  fit_cmd->add_option("--kappa", fit.config.kappa, "Covariance spectral bound")->capture_default_str();
  fit_cmd->add_option("--c", fit.config.c, "Label bound (lse, binary)")->capture_default_str();
  fit_cmd->add_option("--kappa-prime", fit.kappa_prime, "Spectral bound of cov(x, y) (linear)");
  fit_cmd->add_option("--beta-bound", fit.config.beta_bound)->capture_default_str();
  fit_cmd->add_option("--sigma-bound", fit.config.sigma_bound)->capture_default_str();
  fit_cmd->add_option("--seed", fit.seed)->capture_default_str();
  fit_cmd->add_flag("--evaluate", fit.evaluate, "Compare against the sidecar ground truth");
  fit_cmd->add_option("--out", fit.out, "Write the JSON result here instead of stdout");

  SweepArgs sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run an experiment grid, one CSV row per run");
  sweep_cmd->add_option("--spec", sweep.spec, "Experiment spec (JSON)")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--out", sweep.out, "Results CSV (defaults to the experiment's output field)");
  sweep_cmd->add_option("--jobs", sweep.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  sweep_cmd->add_option("--seed", sweep.seed, "Override the base seed");
  sweep_cmd->add_flag("--timing", sweep.timing, "Record runtime_ms (makes the CSV non-reproducible)");

  EvaluateArgs eval;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Summarize a results CSV per cell");
  evaluate->add_option("--data", eval.data, "Results CSV")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--out", eval.out, "Summary CSV (defaults to stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*fit_cmd) return run_fit(fit);
    if (*sweep_cmd) return run_sweep(sweep);
    if (*evaluate) return run_evaluate(eval);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 2;
}
