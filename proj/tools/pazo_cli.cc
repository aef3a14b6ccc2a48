// Copyright 2026 The PAZO Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: run, sweep, accountant, gamma.
//
// Exit codes: 0 success, 2 configuration error, 3 calibration failure,
// 4 numeric divergence, 1 anything else.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pazo/config.h"
#include "pazo/errors.h"
#include "pazo/format.h"
#include "pazo/privacy.h"
#include "pazo/sweep.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCalibration = 3;
constexpr int kExitDivergence = 4;

pazo::ExperimentConfig load(const std::string& path) {
  pazo::ExperimentConfig config = pazo::parse_config(path);
  pazo::apply_env_overrides(config);
  return config;
}

int exit_code_for(const pazo::RunRecord& r) {
  switch (r.status) {
    case pazo::CellStatus::kOk:
      return kExitOk;
    case pazo::CellStatus::kCalibrationFailed:
      return kExitCalibration;
    case pazo::CellStatus::kDiverged:
      return kExitDivergence;
  }
  return kExitOther;
}

int cmd_run(const std::string& path) {
  const pazo::ExperimentConfig config = load(path);
  const double eps = config.epsilons.empty()
                         ? std::numeric_limits<double>::infinity()
                         : config.epsilons.front();
  const pazo::RunRecord rec =
      pazo::run_cell(config, eps, config.seeds.front());
  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);
  const auto log_path = dir / pazo::run_log_filename(rec);
  std::ofstream(log_path, std::ios::binary) << pazo::run_log_jsonl(rec);

  std::cout << "algorithm=" << rec.algorithm
            << " epsilon=" << pazo::format_double(rec.epsilon)
            << " seed=" << rec.seed << " sigma="
            << (rec.sigma ? pazo::format_double(*rec.sigma) : "unset");
  if (!rec.training.checkpoints.empty()) {
    const auto& last = rec.training.checkpoints.back();
    std::cout << " train_loss=" << pazo::format_double(last.train_loss)
              << " test_loss=" << pazo::format_double(last.test_loss);
    if (last.test_accuracy) {
      std::cout << " test_accuracy="
                << pazo::format_double(*last.test_accuracy);
    }
  }
  std::cout << " log=" << log_path.string() << "\n";
  if (!rec.message.empty()) std::cerr << "pazo: " << rec.message << "\n";
  return exit_code_for(rec);
}

int cmd_sweep(const std::string& path) {
  const pazo::ExperimentConfig config = load(path);
  const pazo::SweepResult result = pazo::run_sweep(config);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << result.summary;
  int code = kExitOk;
  for (const auto& r : result.records) {
    if (r.status == pazo::CellStatus::kCalibrationFailed) {
      code = kExitCalibration;
    } else if (r.status == pazo::CellStatus::kDiverged &&
               code == kExitOk) {
      code = kExitDivergence;
    }
  }
  return code;
}

struct AccountantArgs {
  std::optional<double> sigma;
  std::optional<double> epsilon;
  double delta = 1e-5;
  double clip = 1.0;
  std::size_t batch = 64;
  std::size_t n = 0;
  std::size_t T = 0;
  std::size_t q = 1;
};

int cmd_accountant(const AccountantArgs& a) {
  if (a.sigma.has_value() == a.epsilon.has_value()) {
    throw pazo::ConfigError("accountant: give exactly one of --sigma, "
                            "--epsilon");
  }
  pazo::PrivacySpec spec;
  spec.sigma = a.sigma;
  spec.epsilon = a.epsilon;
  spec.delta = a.delta;
  spec.clip_C = a.clip;
  spec.batch_b = a.batch;
  spec.dataset_n = a.n;
  spec.rounds_T = a.T;
  spec.queries_q = a.q;
  try {
    const std::string warning = spec.validate();
    if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
  } catch (const pazo::InvalidArgument& e) {
    throw pazo::ConfigError(e.what());
  }
  std::cout << pazo::to_key_values(pazo::complete_spec(spec)) << "\n";
  return kExitOk;
}

int cmd_gamma(const std::string& path, const std::string& trajectory) {
  const pazo::ExperimentConfig config = pazo::parse_config(path);
  const pazo::RunLog log = pazo::read_run_log(trajectory);
  const pazo::GammaReport report = pazo::gamma_from_run_log(config, log);
  for (std::size_t i = 0; i < report.values.size(); ++i) {
    std::cout << "iteration=" << log.iterations[i]
              << " gap=" << pazo::format_double(report.values[i]) << "\n";
  }
  std::cout << "gamma=" << pazo::format_double(report.gamma) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Private zeroth-order optimization toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Train one (epsilon, seed) cell");
  run->add_option("config", config_path, "Config file")->required();

  auto* sweep = app.add_subcommand("sweep", "Train every (epsilon, seed) cell");
  sweep->add_option("config", config_path, "Config file")->required();

  AccountantArgs acc;
  auto* accountant = app.add_subcommand(
      "accountant", "Complete a privacy spec from sigma or epsilon");
  accountant->add_option("--sigma", acc.sigma, "Noise multiplier");
  accountant->add_option("--epsilon", acc.epsilon, "Target epsilon");
  accountant->add_option("--delta", acc.delta, "Target delta");
  accountant->add_option("--clip", acc.clip, "Clipping threshold C");
  accountant->add_option("--batch", acc.batch, "Expected batch size b");
  accountant->add_option("--n", acc.n, "Private dataset size")->required();
  accountant->add_option("--T", acc.T, "Iterations")->required();
  accountant->add_option("--q", acc.q, "Queries per iteration");

  std::string trajectory;
  auto* gamma = app.add_subcommand(
      "gamma", "Gradient gap between public and private data along a run");
  gamma->add_option("config", config_path, "Config file")->required();
  gamma->add_option("--trajectory", trajectory, "Run log (JSONL)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(config_path);
    if (*sweep) return cmd_sweep(config_path);
    if (*accountant) return cmd_accountant(acc);
    if (*gamma) return cmd_gamma(config_path, trajectory);
  } catch (const pazo::ConfigError& e) {
    std::cerr << "pazo: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const pazo::DataError& e) {
    std::cerr << "pazo: data error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const pazo::InvalidArgument& e) {
    std::cerr << "pazo: invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const pazo::PrivacyError& e) {
    std::cerr << "pazo: calibration failed: " << e.what() << "\n";
    return kExitCalibration;
  } catch (const pazo::NumericError& e) {
    std::cerr << "pazo: numeric divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "pazo: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOther;
}
