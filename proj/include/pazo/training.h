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

#ifndef PAZO_TRAINING_H_
#define PAZO_TRAINING_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pazo/optimizers.h"
#include "pazo/privacy.h"
#include "pazo/problem.h"
#include "pazo/problems.h"
#include "pazo/rng.h"

namespace pazo {

// Non-private ZO reference: dpzero_step with sigma = 0 and C = inf.
struct MezoConfig {
  ZoConfig zo;

  friend bool operator==(const MezoConfig&, const MezoConfig&) = default;
};
struct DpZeroConfig {
  ZoConfig zo;

  friend bool operator==(const DpZeroConfig&, const DpZeroConfig&) = default;
};

// PAZO-P' is PazoPConfig with orthonormalize = false.
using AlgorithmConfig =
    std::variant<SgdConfig, MezoConfig, DpSgdConfig, DpZeroConfig, PazoMConfig,
                 PazoPConfig, PazoSConfig>;

// "sgd", "mezo", "dpsgd", "dpzero", "pazo-m", "pazo-p", "pazo-pprime",
// "pazo-s".
std::string algorithm_name(const AlgorithmConfig& config);
bool is_private(const AlgorithmConfig& config);
// Queries per iteration (1 for algorithms without a q knob).
std::size_t queries_per_iteration(const AlgorithmConfig& config);

enum class BatchSampling {
  kPoisson,  // each private sample joins with probability b/n (accounted)
  kShuffle,  // fixed-size uniform batches; accounting is approximate
};

// Private batch for iteration t.
std::vector<SampleId> sample_private_batch(std::span<const SampleId> ids,
                                           std::size_t batch_b,
                                           BatchSampling sampling,
                                           RngStream& rng);

// k public batches of size b'. When k * b' <= |public| they are disjoint
// parts of one draw without replacement; otherwise each batch is an
// independent draw without replacement of size min(b', |public|).
PublicBatches sample_public_batches(std::span<const SampleId> ids,
                                    std::size_t k, std::size_t batch_size,
                                    RngStream& rng);

struct TrainingOptions {
  std::size_t T = 100;
  std::size_t eval_every = 10;
  std::uint64_t seed = 0;
  std::optional<ParamVector> x0;  // zeros when unset
  BatchSampling sampling = BatchSampling::kPoisson;
  bool record_parameters = false;  // keep x at each checkpoint
  double divergence_threshold = 1e12;
};

struct Checkpoint {
  std::size_t iteration = 0;
  double train_loss = 0.0;
  double test_loss = 0.0;
  std::optional<double> test_accuracy;
  double grad_norm = 0.0;  // ||grad f(x)|| over all private samples
  std::optional<double> gamma;         // gap at this checkpoint
  std::optional<double> gamma_so_far;  // running max
  std::optional<std::size_t> selected;  // last PAZO-S choice
  std::optional<ParamVector> x;
};

enum class TerminationStatus { kCompleted, kDiverged, kNonFinite };

std::string to_string(TerminationStatus status);

struct TrainingRecord {
  std::string algorithm;
  std::vector<Checkpoint> checkpoints;
  std::vector<double> step_seconds;   // wall-clock around each step
  std::vector<OpCounts> ops;          // per iteration
  std::vector<int> selections;        // PAZO-S j* per iteration (0-based)
  TerminationStatus status = TerminationStatus::kCompleted;
  std::string message;
};

// Runs T iterations. Evaluates at t = 0, every eval_every iterations, and at
// the final iteration. Private algorithms require spec.sigma to be set and
// spec.rounds_T == options.T.
TrainingRecord run_training(const Problem& problem, const DataSplit& data,
                            const AlgorithmConfig& algorithm,
                            const PrivacySpec& spec,
                            const TrainingOptions& options);

}  // namespace pazo

#endif  // PAZO_TRAINING_H_
