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

#ifndef PAZO_METRICS_H_
#define PAZO_METRICS_H_

#include <optional>
#include <span>
#include <vector>

#include "pazo/kernels.h"
#include "pazo/param_vector.h"
#include "pazo/problem.h"
#include "pazo/subspace.h"

namespace pazo {

// Full-data mean gradient over ids (non-empty).
ParamVector mean_gradient(const Problem& problem, std::span<const double> x,
                          std::span<const SampleId> ids,
                          Exec exec = Exec::kAuto);

// ||grad f_public(x) - grad f_private(x)|| at each checkpoint, and their max.
struct GammaReport {
  std::vector<double> values;
  double gamma = 0.0;
};

GammaReport gamma_similarity(const Problem& problem,
                             std::span<const ParamVector> trajectory,
                             std::span<const SampleId> private_ids,
                             std::span<const SampleId> public_ids);

struct Evaluation {
  double mean_loss = 0.0;
  std::optional<double> accuracy;  // classification problems only
};

Evaluation evaluate(const Problem& problem, std::span<const double> x,
                    std::span<const SampleId> ids, Exec exec = Exec::kAuto);

// G G^T v for G with orthonormal columns (checked to 1e-10).
ParamVector bruteforce_projection(const ColumnMatrix& G,
                                  std::span<const double> v);

}  // namespace pazo

#endif  // PAZO_METRICS_H_
