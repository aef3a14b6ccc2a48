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

#ifndef PAZO_PROBLEM_H_
#define PAZO_PROBLEM_H_

#include <cstddef>
#include <optional>
#include <span>

#include "pazo/param_vector.h"

namespace pazo {

using SampleId = std::size_t;

// Per-sample objective f(x; sample). Implementations are immutable after
// construction and must be safe to call concurrently from several threads.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual std::size_t dim() const = 0;
  virtual std::size_t num_samples() const = 0;

  virtual double eval_one(std::span<const double> x, SampleId id) const = 0;
  // Writes the analytic gradient of eval_one into out (size dim()).
  virtual void grad_one_into(std::span<const double> x, SampleId id,
                             std::span<double> out) const = 0;

  ParamVector grad_one(std::span<const double> x, SampleId id) const {
    ParamVector g(dim());
    grad_one_into(x, id, g.span());
    return g;
  }

  // Smoothness constant L, when known analytically.
  virtual std::optional<double> smoothness_L() const { return std::nullopt; }
  // Lipschitz constant M, when known analytically.
  virtual std::optional<double> lipschitz_M() const { return std::nullopt; }

  // Classification problems report whether x predicts the sample's label.
  virtual bool is_classifier() const { return false; }
  virtual bool predicts_correctly(std::span<const double> /*x*/,
                                  SampleId /*id*/) const {
    return false;
  }
};

}  // namespace pazo

#endif  // PAZO_PROBLEM_H_
