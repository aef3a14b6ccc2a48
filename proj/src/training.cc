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

#include "pazo/training.h"

#include <chrono>
#include <cmath>
#include <type_traits>
#include <utility>

#include "pazo/errors.h"
#include "pazo/metrics.h"

namespace pazo {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::string algorithm_name(const AlgorithmConfig& config) {
  return std::visit(
      Overloaded{
          [](const SgdConfig&) { return std::string("sgd"); },
          [](const MezoConfig&) { return std::string("mezo"); },
          [](const DpSgdConfig&) { return std::string("dpsgd"); },
          [](const DpZeroConfig&) { return std::string("dpzero"); },
          [](const PazoMConfig&) { return std::string("pazo-m"); },
          [](const PazoPConfig& c) {
            return std::string(c.orthonormalize ? "pazo-p" : "pazo-pprime");
          },
          [](const PazoSConfig&) { return std::string("pazo-s"); },
      },
      config);
}

bool is_private(const AlgorithmConfig& config) {
  return !std::holds_alternative<SgdConfig>(config) &&
         !std::holds_alternative<MezoConfig>(config);
}

std::size_t queries_per_iteration(const AlgorithmConfig& config) {
  return std::visit(
      Overloaded{
          [](const MezoConfig& c) { return c.zo.q; },
          [](const DpZeroConfig& c) { return c.zo.q; },
          [](const PazoMConfig& c) { return c.q; },
          [](const PazoPConfig& c) { return c.q; },
          [](const auto&) { return std::size_t{1}; },
      },
      config);
}

std::string to_string(TerminationStatus status) {
  switch (status) {
    case TerminationStatus::kCompleted:
      return "completed";
    case TerminationStatus::kDiverged:
      return "diverged";
    case TerminationStatus::kNonFinite:
      return "non-finite";
  }
  return "unknown";
}

std::vector<SampleId> sample_private_batch(std::span<const SampleId> ids,
                                           std::size_t batch_b,
                                           BatchSampling sampling,
                                           RngStream& rng) {
  if (ids.empty()) throw InvalidArgument("private batch: no private samples");
  std::vector<SampleId> batch;
  if (sampling == BatchSampling::kPoisson) {
    const double rate =
        static_cast<double>(batch_b) / static_cast<double>(ids.size());
    for (SampleId id : ids) {
      if (rng.next_uniform() < rate) batch.push_back(id);
    }
    return batch;
  }
  std::vector<SampleId> pool(ids.begin(), ids.end());
  const std::size_t m = std::min(batch_b, pool.size());
  for (std::size_t i = 0; i < m; ++i) {
    std::swap(pool[i], pool[i + rng.next_below(pool.size() - i)]);
  }
  pool.resize(m);
  return pool;
}

namespace {

std::vector<SampleId> draw_without_replacement(std::span<const SampleId> ids,
                                               std::size_t m, RngStream& rng) {
  std::vector<SampleId> pool(ids.begin(), ids.end());
  m = std::min(m, pool.size());
  for (std::size_t i = 0; i < m; ++i) {
    std::swap(pool[i], pool[i + rng.next_below(pool.size() - i)]);
  }
  pool.resize(m);
  return pool;
}

}  // namespace

PublicBatches sample_public_batches(std::span<const SampleId> ids,
                                    std::size_t k, std::size_t batch_size,
                                    RngStream& rng) {
  if (ids.empty()) throw InvalidArgument("public batch: no public samples");
  if (k == 0 || batch_size == 0) {
    throw InvalidArgument("public batch: k and batch size must be >= 1");
  }
  PublicBatches batches(k);
  if (k * batch_size <= ids.size()) {
    const auto draw = draw_without_replacement(ids, k * batch_size, rng);
    for (std::size_t j = 0; j < k; ++j) {
      batches[j].assign(draw.begin() + j * batch_size,
                        draw.begin() + (j + 1) * batch_size);
    }
    return batches;
  }
  for (std::size_t j = 0; j < k; ++j) {
    batches[j] = draw_without_replacement(ids, batch_size, rng);
  }
  return batches;
}

namespace {

struct Driver {
  const Problem& problem;
  const DataSplit& data;
  const AlgorithmConfig& algorithm;
  PrivacySpec spec;
  const TrainingOptions& options;
  RngStream batch_root;
  RngStream public_root;

  OptState step(const OptState& state, std::span<const SampleId> batch,
                StepTrace& trace) {
    RngStream public_rng = public_root.child(state.t);
    return std::visit(
        Overloaded{
            [&](const SgdConfig& c) {
              return sgd_step(state, problem, batch, c, &trace);
            },
            [&](const MezoConfig& c) {
              PrivacySpec open = spec;
              open.sigma = 0.0;
              open.clip_C = kNoClip;
              return dpzero_step(state, problem, batch, open, c.zo, &trace);
            },
            [&](const DpSgdConfig& c) {
              return dpsgd_step(state, problem, batch, spec, c, &trace);
            },
            [&](const DpZeroConfig& c) {
              return dpzero_step(state, problem, batch, spec, c.zo, &trace);
            },
            [&](const PazoMConfig& c) {
              const auto pub = sample_public_batches(data.public_ids, 1,
                                                     c.public_batch, public_rng);
              return pazo_m_step(state, problem, batch, pub.front(), c, spec,
                                 &trace);
            },
            [&](const PazoPConfig& c) {
              const auto pub = sample_public_batches(data.public_ids, c.k,
                                                     c.public_batch, public_rng);
              return pazo_p_step(state, problem, batch, pub, c, spec, &trace);
            },
            [&](const PazoSConfig& c) {
              const auto pub = sample_public_batches(data.public_ids, c.k,
                                                     c.public_batch, public_rng);
              return pazo_s_step(state, problem, batch, pub, c, spec, &trace);
            },
        },
        algorithm);
  }

  Checkpoint evaluate_at(const OptState& state, double& gamma_max) const {
    Checkpoint cp;
    cp.iteration = state.t;
    cp.train_loss = evaluate(problem, state.x, data.private_ids).mean_loss;
    const auto& test_ids = data.test_ids.empty() ? data.private_ids
                                                 : data.test_ids;
    const Evaluation test = evaluate(problem, state.x, test_ids);
    cp.test_loss = test.mean_loss;
    cp.test_accuracy = test.accuracy;
    const ParamVector g_priv =
        mean_gradient(problem, state.x, data.private_ids);
    cp.grad_norm = norm(g_priv);
    if (!data.public_ids.empty()) {
      const ParamVector g_pub =
          mean_gradient(problem, state.x, data.public_ids);
      const double gap = norm(g_pub - g_priv);
      gamma_max = std::max(gamma_max, gap);
      cp.gamma = gap;
      cp.gamma_so_far = gamma_max;
    }
    if (options.record_parameters) cp.x = state.x;
    return cp;
  }
};

}  // namespace

TrainingRecord run_training(const Problem& problem, const DataSplit& data,
                            const AlgorithmConfig& algorithm,
                            const PrivacySpec& spec,
                            const TrainingOptions& options) {
  if (options.eval_every == 0) {
    throw InvalidArgument("run_training: eval_every must be >= 1");
  }
  if (data.private_ids.empty()) {
    throw InvalidArgument("run_training: no private samples");
  }
  const bool needs_public =
      std::holds_alternative<PazoMConfig>(algorithm) ||
      std::holds_alternative<PazoPConfig>(algorithm) ||
      std::holds_alternative<PazoSConfig>(algorithm);
  if (needs_public && data.public_ids.empty()) {
    throw InvalidArgument("run_training: " + algorithm_name(algorithm) +
                          " needs public samples");
  }
  if (is_private(algorithm)) {
    if (!spec.sigma) {
      throw InvalidArgument("run_training: privacy spec is not calibrated");
    }
    if (spec.rounds_T != options.T) {
      throw InvalidArgument("run_training: spec.rounds_T != T");
    }
  }

  Driver driver{problem,
                data,
                algorithm,
                spec,
                options,
                RngStream(options.seed, "batch"),
                RngStream(options.seed, "public")};
  if (!driver.spec.sigma) driver.spec.sigma = 0.0;

  TrainingRecord record;
  record.algorithm = algorithm_name(algorithm);
  OptState state = OptState::initial(
      options.x0.value_or(ParamVector(problem.dim())), options.seed);
  if (state.x.dim() != problem.dim()) {
    throw InvalidArgument("run_training: x0 has the wrong dimension");
  }

  double gamma_max = 0.0;
  std::optional<std::size_t> last_selection;

  auto checkpoint = [&]() {
    Checkpoint cp = driver.evaluate_at(state, gamma_max);
    cp.selected = last_selection;
    const bool diverged = !std::isfinite(cp.train_loss) ||
                          cp.train_loss > options.divergence_threshold;
    record.checkpoints.push_back(std::move(cp));
    if (diverged) {
      record.status = TerminationStatus::kDiverged;
      record.message = "training loss exceeded " +
                       std::to_string(options.divergence_threshold) +
                       " at iteration " + std::to_string(state.t);
    }
    return !diverged;
  };

  if (!checkpoint()) return record;
  for (std::size_t t = 0; t < options.T; ++t) {
    RngStream batch_rng = driver.batch_root.child(t);
    const std::vector<SampleId> batch = sample_private_batch(
        data.private_ids, spec.batch_b, options.sampling, batch_rng);
    StepTrace trace;
    const auto start = std::chrono::steady_clock::now();
    try {
      state = driver.step(state, batch, trace);
    } catch (const NumericError& e) {
      record.status = TerminationStatus::kNonFinite;
      record.message = e.what();
      return record;
    }
    const auto stop = std::chrono::steady_clock::now();
    record.step_seconds.push_back(
        std::chrono::duration<double>(stop - start).count());
    record.ops.push_back(trace.ops);
    if (trace.selected) {
      last_selection = trace.selected;
      record.selections.push_back(static_cast<int>(*trace.selected));
    }
    const bool due = state.t % options.eval_every == 0 || state.t == options.T;
    if (due && !checkpoint()) return record;
  }
  return record;
}

}  // namespace pazo
