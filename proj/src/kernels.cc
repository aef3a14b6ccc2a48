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

#include "pazo/kernels.h"

#include <cmath>
#include <string>
#include <vector>

#include "pazo/errors.h"

namespace pazo {

double clip_scalar(double v, double C) {
  if (std::isnan(v)) return v;
  if (std::abs(v) <= C) return v;
  return std::copysign(C, v);
}

void clip_vector(std::span<double> g, double C) {
  const double n = norm(g);
  if (n <= C) return;
  const double scale = C / n;
  for (double& v : g) v *= scale;
}

namespace kernels {
namespace {

bool go_parallel(Exec exec, std::size_t n, std::size_t dim) {
  switch (exec) {
    case Exec::kSerial:
      return false;
    case Exec::kParallel:
      return true;
    case Exec::kAuto:
      return n * dim >= kAutoParallelWork;
  }
  return false;
}

// Runs body(i) for i in [0, n), concurrently when requested.
template <typename Body>
void for_each_index(std::size_t n, bool parallel, Body&& body) {
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(static) if (parallel)
  for (long long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

double ordered_sum(const std::vector<double>& values) {
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc;
}

// Adds the rows of a (n x dim) row-major buffer in row order.
ParamVector ordered_row_sum(const std::vector<double>& rows, std::size_t n,
                            std::size_t dim) {
  ParamVector acc(dim);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = rows.data() + i * dim;
    for (std::size_t j = 0; j < dim; ++j) acc[j] += row[j];
  }
  return acc;
}

void probe_point(std::span<const double> x, std::span<const double> u,
                 double step, std::span<double> out) {
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = x[j] + step * u[j];
}

void throw_nonfinite_probe(char sign, SampleId id, double value) {
  throw NumericError(std::string("two-point probe f(x ") + sign +
                     " lambda u) is not finite (" + std::to_string(value) +
                     ") on sample " + std::to_string(id));
}

}  // namespace

double loss_sum(const Problem& problem, std::span<const double> x,
                std::span<const SampleId> ids, Exec exec) {
  if (exec == Exec::kSerial) {
    double acc = 0.0;
    for (SampleId id : ids) acc += problem.eval_one(x, id);
    return acc;
  }
  std::vector<double> values(ids.size());
  for_each_index(ids.size(), go_parallel(exec, ids.size(), problem.dim()),
                 [&](std::size_t i) { values[i] = problem.eval_one(x, ids[i]); });
  return ordered_sum(values);
}

double clipped_loss_sum(const Problem& problem, std::span<const double> x,
                        std::span<const SampleId> ids, double C, Exec exec) {
  if (exec == Exec::kSerial) {
    double acc = 0.0;
    for (SampleId id : ids) acc += clip_scalar(problem.eval_one(x, id), C);
    return acc;
  }
  std::vector<double> values(ids.size());
  for_each_index(ids.size(), go_parallel(exec, ids.size(), problem.dim()),
                 [&](std::size_t i) {
                   values[i] = clip_scalar(problem.eval_one(x, ids[i]), C);
                 });
  return ordered_sum(values);
}

double clipped_delta_sum(const Problem& problem, std::span<const double> x,
                         std::span<const double> direction, double lambda,
                         std::span<const SampleId> ids, double C, Exec exec) {
  const std::size_t d = problem.dim();
  std::vector<double> plus(d), minus(d);
  probe_point(x, direction, lambda, plus);
  probe_point(x, direction, -lambda, minus);

  if (exec == Exec::kSerial) {
    double acc = 0.0;
    for (SampleId id : ids) {
      const double fp = problem.eval_one(plus, id);
      if (!std::isfinite(fp)) throw_nonfinite_probe('+', id, fp);
      const double fm = problem.eval_one(minus, id);
      if (!std::isfinite(fm)) throw_nonfinite_probe('-', id, fm);
      acc += clip_scalar((fp - fm) / (2.0 * lambda), C);
    }
    return acc;
  }

  std::vector<double> fplus(ids.size()), fminus(ids.size());
  for_each_index(ids.size(), go_parallel(exec, ids.size(), d),
                 [&](std::size_t i) {
                   fplus[i] = problem.eval_one(plus, ids[i]);
                   fminus[i] = problem.eval_one(minus, ids[i]);
                 });
  double acc = 0.0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!std::isfinite(fplus[i])) throw_nonfinite_probe('+', ids[i], fplus[i]);
    if (!std::isfinite(fminus[i])) {
      throw_nonfinite_probe('-', ids[i], fminus[i]);
    }
    acc += clip_scalar((fplus[i] - fminus[i]) / (2.0 * lambda), C);
  }
  return acc;
}

ParamVector gradient_sum(const Problem& problem, std::span<const double> x,
                         std::span<const SampleId> ids, Exec exec) {
  const std::size_t d = problem.dim();
  if (exec == Exec::kSerial) {
    ParamVector acc(d), g(d);
    for (SampleId id : ids) {
      problem.grad_one_into(x, id, g.span());
      for (std::size_t j = 0; j < d; ++j) acc[j] += g[j];
    }
    return acc;
  }
  std::vector<double> rows(ids.size() * d);
  for_each_index(ids.size(), go_parallel(exec, ids.size(), d),
                 [&](std::size_t i) {
                   problem.grad_one_into(
                       x, ids[i], std::span<double>(rows.data() + i * d, d));
                 });
  return ordered_row_sum(rows, ids.size(), d);
}

ParamVector clipped_gradient_sum(const Problem& problem,
                                 std::span<const double> x,
                                 std::span<const SampleId> ids, double C,
                                 Exec exec) {
  const std::size_t d = problem.dim();
  if (exec == Exec::kSerial) {
    ParamVector acc(d), g(d);
    for (SampleId id : ids) {
      problem.grad_one_into(x, id, g.span());
      clip_vector(g.span(), C);
      for (std::size_t j = 0; j < d; ++j) acc[j] += g[j];
    }
    return acc;
  }
  std::vector<double> rows(ids.size() * d);
  for_each_index(ids.size(), go_parallel(exec, ids.size(), d),
                 [&](std::size_t i) {
                   std::span<double> row(rows.data() + i * d, d);
                   problem.grad_one_into(x, ids[i], row);
                   clip_vector(row, C);
                 });
  return ordered_row_sum(rows, ids.size(), d);
}

std::size_t count_correct(const Problem& problem, std::span<const double> x,
                          std::span<const SampleId> ids, Exec exec) {
  if (exec == Exec::kSerial) {
    std::size_t n = 0;
    for (SampleId id : ids) n += problem.predicts_correctly(x, id) ? 1 : 0;
    return n;
  }
  std::vector<unsigned char> hit(ids.size());
  for_each_index(ids.size(), go_parallel(exec, ids.size(), problem.dim()),
                 [&](std::size_t i) {
                   hit[i] = problem.predicts_correctly(x, ids[i]) ? 1 : 0;
                 });
  std::size_t n = 0;
  for (unsigned char h : hit) n += h;
  return n;
}

}  // namespace kernels
}  // namespace pazo
