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

#include "pazo/sampling.h"

#include <cmath>
#include <string>
#include <vector>

#include "pazo/errors.h"

namespace pazo {

SphereSpec SphereSpec::standard(std::size_t d) {
  return {d, std::sqrt(static_cast<double>(d))};
}

SphereSpec SphereSpec::norm_aligned(std::size_t d) {
  return {d, std::pow(static_cast<double>(d), 0.25)};
}

ParamVector sample_sphere(const SphereSpec& spec, RngStream& rng) {
  if (spec.ambient_dim == 0) {
    throw InvalidArgument("sample_sphere: ambient_dim must be >= 1");
  }
  if (!(spec.radius > 0.0)) {
    throw InvalidArgument("sample_sphere: radius must be positive");
  }
  for (;;) {
    ParamVector u = gaussian_standard(rng, spec.ambient_dim);
    const double n = norm(u);
    if (n == 0.0 || !std::isfinite(n)) continue;
    const double scale = spec.radius / n;
    for (double& v : u) v *= scale;
    return u;
  }
}

ParamVector sample_direction(const SphereSpec& spec, DirectionKind kind,
                             RngStream& rng) {
  if (kind == DirectionKind::kSphere) return sample_sphere(spec, rng);
  ParamVector u = gaussian_standard(rng, spec.ambient_dim);
  const double scale =
      spec.radius / std::sqrt(static_cast<double>(spec.ambient_dim));
  for (double& v : u) v *= scale;
  return u;
}

double two_point_delta(const Problem& problem, std::span<const double> x,
                       std::span<const double> direction, double lambda,
                       SampleId id) {
  if (!(lambda > 0.0)) {
    throw InvalidArgument("two_point_delta: lambda must be positive");
  }
  const SampleId ids[] = {id};
  return kernels::clipped_delta_sum(problem, x, direction, lambda, ids,
                                    kNoClip, Exec::kSerial);
}

double clipped_batch_delta(const Problem& problem, std::span<const double> x,
                           std::span<const double> direction, double lambda,
                           std::span<const SampleId> batch, double C,
                           Exec exec) {
  if (batch.empty()) throw InvalidArgument("clipped_batch_delta: empty batch");
  if (!(lambda > 0.0)) {
    throw InvalidArgument("clipped_batch_delta: lambda must be positive");
  }
  if (!(C > 0.0)) throw InvalidArgument("clipped_batch_delta: C must be > 0");
  return kernels::clipped_delta_sum(problem, x, direction, lambda, batch, C,
                                    exec) /
         static_cast<double>(batch.size());
}

ParamVector mc_smoothed_gradient(const Problem& problem,
                                 std::span<const double> x,
                                 std::span<const SampleId> ids, double lambda,
                                 double radius, std::size_t n_draws,
                                 RngStream& rng) {
  if (n_draws == 0) {
    throw InvalidArgument("mc_smoothed_gradient: n_draws must be >= 1");
  }
  const SphereSpec sphere{problem.dim(), radius};
  ParamVector acc(problem.dim());
  for (std::size_t s = 0; s < n_draws; ++s) {
    const ParamVector u = sample_sphere(sphere, rng);
    const double delta = clipped_batch_delta(problem, x, u, lambda, ids,
                                             kNoClip, Exec::kSerial);
    axpy(delta, u, acc.span());
  }
  for (double& v : acc) v /= static_cast<double>(n_draws);
  return acc;
}

}  // namespace pazo
