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

#ifndef PAZO_OPTIMIZERS_H_
#define PAZO_OPTIMIZERS_H_

// Single-step update rules for the private zeroth-order family (DPZero and
// the three public-data-assisted variants), DP-SGD, and the non-private
// references. Each step is a pure function of (state, batches, config, spec):
// all randomness comes from child streams of the state's root streams keyed
// by the iteration counter, so replaying a step reproduces it bitwise.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pazo/param_vector.h"
#include "pazo/privacy.h"
#include "pazo/problem.h"
#include "pazo/rng.h"
#include "pazo/sampling.h"
#include "pazo/subspace.h"

namespace pazo {

struct OptState {
  ParamVector x;
  std::size_t t = 0;
  RngStream perturbation;  // ZO directions
  RngStream noise;         // privacy noise
  RngStream explore;       // PAZO-S exploratory candidate z'

  static OptState initial(ParamVector x0, std::uint64_t seed);
};

// Plain batch-mean gradient descent on private data; no clipping, no noise.
struct SgdConfig {
  double eta = 0.1;

  friend bool operator==(const SgdConfig&, const SgdConfig&) = default;
};

// Two-point ZO step on private data. With sigma = 0 and C = inf this is the
// non-private MeZO reference.
struct ZoConfig {
  double eta = 0.01;
  std::size_t q = 1;
  double lambda = 1e-2;
  // Sphere radius; unset means sqrt(d).
  std::optional<double> radius;
  DirectionKind direction = DirectionKind::kSphere;

  friend bool operator==(const ZoConfig&, const ZoConfig&) = default;
};

struct PazoMConfig {
  double eta = 0.1;
  double alpha = 0.5;
  std::size_t q = 1;
  double lambda = 1e-2;
  std::size_t public_batch = 16;
  DirectionKind direction = DirectionKind::kSphere;

  friend bool operator==(const PazoMConfig&, const PazoMConfig&) = default;
};

struct PazoPConfig {
  double eta = 0.5;
  std::size_t k = 3;
  std::size_t q = 1;
  double lambda = 1e-2;
  std::size_t public_batch = 16;
  // true: orthonormal basis (PAZO-P); false: unit-norm columns (PAZO-P').
  bool orthonormalize = true;

  friend bool operator==(const PazoPConfig&, const PazoPConfig&) = default;
};

struct PazoSConfig {
  double eta = 0.1;
  std::size_t k = 3;
  std::size_t public_batch = 16;
  // Standard deviation of the exploratory perturbation z'.
  double perturb_scale = 1e-3;

  friend bool operator==(const PazoSConfig&, const PazoSConfig&) = default;
};

struct DpSgdConfig {
  double eta = 0.1;

  friend bool operator==(const DpSgdConfig&, const DpSgdConfig&) = default;
};

// Operation ledger for one iteration. Private forwards count batch loss
// evaluations for ZO methods and per-sample forwards for first-order ones.
struct OpCounts {
  std::size_t private_forward = 0;
  std::size_t public_forward_backward = 0;
  std::size_t private_backward = 0;

  friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

enum class NoiseSite { kQuery, kSelection, kGradient };

struct NoiseDraw {
  NoiseSite site;
  double std;    // nominal standard deviation of the draw
  double value;  // realized noise
};

// Optional side channel filled by the step functions.
struct StepTrace {
  OpCounts ops;
  std::vector<NoiseDraw> noise;
  // Released (noisy, clipped) statistics: per-query mean deltas for ZO
  // methods, candidate losses for PAZO-S. Noise not included.
  std::vector<double> released;
  // PAZO-S: best public index j-hat and final choice j* (0-based; k is the
  // exploratory candidate).
  std::optional<std::size_t> best_public;
  std::optional<std::size_t> selected;
  std::vector<double> candidate_losses;
  std::size_t nonfinite_candidates = 0;
  // PAZO-P: rank after dropping dependent public gradients.
  std::optional<std::size_t> effective_k;
};

using PublicBatches = std::vector<std::vector<SampleId>>;

// Mean gradient over a non-empty batch.
ParamVector batch_mean_gradient(const Problem& problem,
                                std::span<const double> x,
                                std::span<const SampleId> batch);

OptState sgd_step(const OptState& state, const Problem& problem,
                  std::span<const SampleId> batch, const SgdConfig& cfg,
                  StepTrace* trace = nullptr);

OptState dpzero_step(const OptState& state, const Problem& problem,
                     std::span<const SampleId> private_batch,
                     const PrivacySpec& spec, const ZoConfig& cfg,
                     StepTrace* trace = nullptr);

OptState pazo_m_step(const OptState& state, const Problem& problem,
                     std::span<const SampleId> private_batch,
                     std::span<const SampleId> public_batch,
                     const PazoMConfig& cfg, const PrivacySpec& spec,
                     StepTrace* trace = nullptr);

OptState pazo_p_step(const OptState& state, const Problem& problem,
                     std::span<const SampleId> private_batch,
                     const PublicBatches& public_batches,
                     const PazoPConfig& cfg, const PrivacySpec& spec,
                     StepTrace* trace = nullptr);

// PAZO-P with a prebuilt search basis (columns already processed by
// orthonormalize_columns). public_forward_backward is not counted here.
OptState pazo_p_step_with_basis(const OptState& state, const Problem& problem,
                                std::span<const SampleId> private_batch,
                                const ColumnMatrix& basis,
                                const PazoPConfig& cfg,
                                const PrivacySpec& spec,
                                StepTrace* trace = nullptr);

OptState pazo_s_step(const OptState& state, const Problem& problem,
                     std::span<const SampleId> private_batch,
                     const PublicBatches& public_batches,
                     const PazoSConfig& cfg, const PrivacySpec& spec,
                     StepTrace* trace = nullptr);

// PAZO-S with the k raw public gradients supplied directly.
OptState pazo_s_step_with_candidates(const OptState& state,
                                     const Problem& problem,
                                     std::span<const SampleId> private_batch,
                                     const ColumnMatrix& gradients,
                                     const PazoSConfig& cfg,
                                     const PrivacySpec& spec,
                                     StepTrace* trace = nullptr);

OptState dpsgd_step(const OptState& state, const Problem& problem,
                    std::span<const SampleId> private_batch,
                    const PrivacySpec& spec, const DpSgdConfig& cfg,
                    StepTrace* trace = nullptr);

}  // namespace pazo

#endif  // PAZO_OPTIMIZERS_H_
