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

#ifndef PAZO_CONFIG_H_
#define PAZO_CONFIG_H_

// Experiment configuration: flat "key = value" text with dotted section
// prefixes, '#' comments, and comma-separated lists.
//
//   problem.kind = logistic          # logistic | quadratic | csv
//   problem.dim = 100
//   split.shift = mean_shift
//   split.shift_magnitude = 0.25
//   algorithm.name = pazo-m
//   algorithm.alpha = 0.5
//   privacy.epsilon = 0.5, 1
//   train.T = 500
//   train.seeds = 0, 1, 2

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pazo/problems.h"
#include "pazo/training.h"

namespace pazo {

enum class ProblemKind { kLogistic, kQuadratic, kCsv };

struct ProblemSpec {
  ProblemKind kind = ProblemKind::kLogistic;
  std::size_t dim = 20;
  double mu_reg = 1e-3;  // logistic and csv
  // quadratic
  double mu = 0.5;
  double L = 2.0;
  double center_spread = 0.5;
  // csv
  std::string csv_path;
  bool csv_header = false;

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

struct ExperimentConfig {
  ProblemSpec problem;
  SplitSpec split;
  AlgorithmConfig algorithm = DpZeroConfig{};
  std::vector<double> epsilons = {1.0};
  double delta = 0.0;  // filled with 1/n_private when not given
  double clip_C = 1.0;
  std::size_t batch_b = 64;
  BatchSampling sampling = BatchSampling::kPoisson;
  std::size_t T = 100;
  std::size_t eval_every = 10;
  std::vector<std::uint64_t> seeds = {0};
  bool record_parameters = false;
  std::string output_dir = "pazo_out";

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

// Parses and validates; throws ConfigError listing unknown keys or naming the
// violated bound.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::string& path);

// Every key with its (possibly defaulted) value; parses back to an equal
// config.
std::string serialize_config(const ExperimentConfig& config);

// PAZO_SEED, when set, replaces the seed list with that single seed.
void apply_env_overrides(ExperimentConfig& config);

// Problem instance and index split for one run seed. The dataset is
// generated from split.seed + run_seed.
struct BuiltProblem {
  std::unique_ptr<Problem> problem;
  DataSplit split;
};

BuiltProblem build_problem(const ExperimentConfig& config,
                           std::uint64_t run_seed);

// Privacy spec for one (epsilon, config) cell, sigma not yet calibrated.
PrivacySpec privacy_spec_for(const ExperimentConfig& config, double epsilon);

}  // namespace pazo

#endif  // PAZO_CONFIG_H_
