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

#ifndef PAZO_SUBSPACE_H_
#define PAZO_SUBSPACE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "pazo/param_vector.h"

namespace pazo {

// d x k matrix stored as k columns of length d.
using ColumnMatrix = std::vector<ParamVector>;

enum class BasisMode {
  kOrthonormal,    // modified Gram-Schmidt, columns in input order
  kNormalizeOnly,  // unit-norm columns, directions unchanged
};

struct OrthoResult {
  ColumnMatrix columns;
  // Input indices removed as linearly dependent (orthonormal mode only).
  std::vector<std::size_t> dropped;

  std::size_t effective_k() const { return columns.size(); }
};

// Relative residual norm under which a column counts as dependent.
inline constexpr double kRankTolerance = 1e-10;

// Builds the search basis from public gradients. Throws InvalidArgument on a
// zero (or non-finite) column, naming its index, or when k > d.
OrthoResult orthonormalize_columns(const ColumnMatrix& G, BasisMode mode);

// G u for a d x k column matrix and u in R^k.
ParamVector apply_columns(const ColumnMatrix& G, std::span<const double> u);

}  // namespace pazo

#endif  // PAZO_SUBSPACE_H_
