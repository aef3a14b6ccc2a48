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

#include "pazo/metrics.h"

#include <algorithm>
#include <cmath>

#include "pazo/errors.h"

namespace pazo {

ParamVector mean_gradient(const Problem& problem, std::span<const double> x,
                          std::span<const SampleId> ids, Exec exec) {
  if (ids.empty()) throw InvalidArgument("mean_gradient: empty id set");
  ParamVector g = kernels::gradient_sum(problem, x, ids, exec);
  const double n = static_cast<double>(ids.size());
  for (double& v : g) v /= n;
  return g;
}

GammaReport gamma_similarity(const Problem& problem,
                             std::span<const ParamVector> trajectory,
                             std::span<const SampleId> private_ids,
                             std::span<const SampleId> public_ids) {
  if (private_ids.empty() || public_ids.empty()) {
    throw InvalidArgument("gamma_similarity: both id sets must be non-empty");
  }
  GammaReport report;
  report.values.reserve(trajectory.size());
  for (const ParamVector& x : trajectory) {
    const ParamVector g_priv = mean_gradient(problem, x, private_ids);
    const ParamVector g_pub = mean_gradient(problem, x, public_ids);
    const double gap = norm(g_pub - g_priv);
    report.values.push_back(gap);
    report.gamma = std::max(report.gamma, gap);
  }
  return report;
}

Evaluation evaluate(const Problem& problem, std::span<const double> x,
                    std::span<const SampleId> ids, Exec exec) {
  if (ids.empty()) throw InvalidArgument("evaluate: empty id set");
  const double n = static_cast<double>(ids.size());
  Evaluation out;
  out.mean_loss = kernels::loss_sum(problem, x, ids, exec) / n;
  if (problem.is_classifier()) {
    out.accuracy =
        static_cast<double>(kernels::count_correct(problem, x, ids, exec)) / n;
  }
  return out;
}

ParamVector bruteforce_projection(const ColumnMatrix& G,
                                  std::span<const double> v) {
  if (G.empty()) throw InvalidArgument("bruteforce_projection: empty basis");
  for (std::size_t a = 0; a < G.size(); ++a) {
    if (G[a].dim() != v.size()) {
      throw InvalidArgument("bruteforce_projection: dimension mismatch");
    }
    for (std::size_t b = a; b < G.size(); ++b) {
      const double expected = a == b ? 1.0 : 0.0;
      if (std::abs(dot(G[a], G[b]) - expected) > 1e-10) {
        throw InvalidArgument("bruteforce_projection: G is not orthonormal");
      }
    }
  }
  ParamVector out(v.size());
  for (const ParamVector& g : G) axpy(dot(g, v), g, out.span());
  return out;
}

}  // namespace pazo
