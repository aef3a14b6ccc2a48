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

#ifndef PAZO_KERNELS_H_
#define PAZO_KERNELS_H_

// Batch reductions over private/public samples.
//
// Each kernel has a serial reference path and an OpenMP path. The OpenMP path
// evaluates samples concurrently into a per-sample buffer and then reduces the
// buffer sequentially in batch order, which is the same summation order as
// the serial path. Both paths therefore return bitwise-identical results for
// any thread count.

#include <cstddef>
#include <span>

#include "pazo/param_vector.h"
#include "pazo/problem.h"

namespace pazo {

enum class Exec {
  kSerial,    // reference implementation
  kParallel,  // always open an OpenMP region
  kAuto,      // OpenMP only when batch_size * dim is large enough to pay off
};

// Work (samples x dimension) above which kAuto goes parallel.
inline constexpr std::size_t kAutoParallelWork = 1 << 16;

// Hard clamp sign(v) * min(|v|, C). C may be +infinity.
double clip_scalar(double v, double C);

// Rescales g in place so that ||g|| <= C.
void clip_vector(std::span<double> g, double C);

namespace kernels {

double loss_sum(const Problem& problem, std::span<const double> x,
                std::span<const SampleId> ids, Exec exec = Exec::kAuto);

// sum_i clip_C(f(x; i)).
double clipped_loss_sum(const Problem& problem, std::span<const double> x,
                        std::span<const SampleId> ids, double C,
                        Exec exec = Exec::kAuto);

// sum_i clip_C((f(x + lambda u; i) - f(x - lambda u; i)) / (2 lambda)).
// Throws NumericError naming the probe (+ or -) and sample whose loss is not
// finite.
double clipped_delta_sum(const Problem& problem, std::span<const double> x,
                         std::span<const double> direction, double lambda,
                         std::span<const SampleId> ids, double C,
                         Exec exec = Exec::kAuto);

// sum_i grad f(x; i).
ParamVector gradient_sum(const Problem& problem, std::span<const double> x,
                         std::span<const SampleId> ids,
                         Exec exec = Exec::kAuto);

// sum_i clip(grad f(x; i), C) with per-sample L2 clipping.
ParamVector clipped_gradient_sum(const Problem& problem,
                                 std::span<const double> x,
                                 std::span<const SampleId> ids, double C,
                                 Exec exec = Exec::kAuto);

std::size_t count_correct(const Problem& problem, std::span<const double> x,
                          std::span<const SampleId> ids,
                          Exec exec = Exec::kAuto);

}  // namespace kernels
}  // namespace pazo

#endif  // PAZO_KERNELS_H_
