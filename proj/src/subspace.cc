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

#include "pazo/subspace.h"

#include <cmath>
#include <string>

#include "pazo/errors.h"

namespace pazo {

OrthoResult orthonormalize_columns(const ColumnMatrix& G, BasisMode mode) {
  if (G.empty()) throw InvalidArgument("orthonormalize_columns: no columns");
  const std::size_t d = G.front().dim();
  if (G.size() > d) {
    throw InvalidArgument("orthonormalize_columns: k=" +
                          std::to_string(G.size()) + " exceeds d=" +
                          std::to_string(d));
  }
  for (std::size_t j = 0; j < G.size(); ++j) {
    if (G[j].dim() != d) {
      throw InvalidArgument("orthonormalize_columns: column " +
                            std::to_string(j) + " has the wrong length");
    }
    const double n = norm(G[j]);
    if (n == 0.0 || !std::isfinite(n)) {
      throw InvalidArgument("orthonormalize_columns: column " +
                            std::to_string(j) + " is zero or not finite");
    }
  }

  OrthoResult out;
  if (mode == BasisMode::kNormalizeOnly) {
    for (const ParamVector& g : G) {
      const double n = norm(g);
      ParamVector q(g);
      for (double& v : q) v /= n;
      out.columns.push_back(std::move(q));
    }
    return out;
  }

  for (std::size_t j = 0; j < G.size(); ++j) {
    const double original = norm(G[j]);
    ParamVector v(G[j]);
    // Two MGS passes keep Q^T Q = I to working precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (const ParamVector& q : out.columns) {
        const double c = dot(q, v);
        axpy(-c, q, v.span());
      }
    }
    const double r = norm(v);
    if (r <= kRankTolerance * original) {
      out.dropped.push_back(j);
      continue;
    }
    for (double& x : v) x /= r;
    out.columns.push_back(std::move(v));
  }
  return out;
}

ParamVector apply_columns(const ColumnMatrix& G, std::span<const double> u) {
  if (G.size() != u.size()) {
    throw InvalidArgument("apply_columns: coefficient count mismatch");
  }
  ParamVector out(G.empty() ? 0 : G.front().dim());
  for (std::size_t j = 0; j < G.size(); ++j) {
    const double c = u[j];
    const ParamVector& g = G[j];
    for (std::size_t i = 0; i < out.dim(); ++i) out[i] += g[i] * c;
  }
  return out;
}

}  // namespace pazo
