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

#ifndef PAZO_SAMPLING_H_
#define PAZO_SAMPLING_H_

#include <cstddef>
#include <limits>
#include <span>

#include "pazo/kernels.h"
#include "pazo/param_vector.h"
#include "pazo/problem.h"
#include "pazo/rng.h"

namespace pazo {

struct SphereSpec {
  std::size_t ambient_dim = 1;
  double radius = 1.0;

  // Radius sqrt(d): the classic two-point estimator.
  static SphereSpec standard(std::size_t d);
  // Radius d^{1/4}: norm-aligned estimator (E||g||^2 ~ ||grad f||^2).
  static SphereSpec norm_aligned(std::size_t d);
};

// How ZO perturbation directions are drawn.
enum class DirectionKind {
  kSphere,    // uniform on the sphere of the requested radius
  kGaussian,  // N(0, (r^2/d) I), same second moment as the sphere
};

// Uniform draw from radius * S^{d-1}: a Gaussian vector rescaled to the
// radius. A zero Gaussian draw is resampled.
ParamVector sample_sphere(const SphereSpec& spec, RngStream& rng);

ParamVector sample_direction(const SphereSpec& spec, DirectionKind kind,
                             RngStream& rng);

inline constexpr double kNoClip = std::numeric_limits<double>::infinity();

// (f(x + lambda u; id) - f(x - lambda u; id)) / (2 lambda).
double two_point_delta(const Problem& problem, std::span<const double> x,
                       std::span<const double> direction, double lambda,
                       SampleId id);

// Mean over batch of clip_C(two_point_delta). Batch must be non-empty.
double clipped_batch_delta(const Problem& problem, std::span<const double> x,
                           std::span<const double> direction, double lambda,
                           std::span<const SampleId> batch, double C,
                           Exec exec = Exec::kAuto);

// Monte Carlo average of g_lambda(x) = delta(u) * u over n_draws sphere
// directions, where delta is the unclipped two-point delta of the batch-mean
// loss. Test oracle for the smoothed gradient.
ParamVector mc_smoothed_gradient(const Problem& problem,
                                 std::span<const double> x,
                                 std::span<const SampleId> ids, double lambda,
                                 double radius, std::size_t n_draws,
                                 RngStream& rng);

}  // namespace pazo

#endif  // PAZO_SAMPLING_H_
