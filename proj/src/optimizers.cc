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

#include "pazo/optimizers.h"

#include <cmath>
#include <limits>
#include <string>

#include "pazo/errors.h"
#include "pazo/kernels.h"

namespace pazo {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

// x_{t+1} = x_t - eta * update.
OptState advance(const OptState& state, double eta,
                 std::span<const double> update) {
  OptState next = state;
  for (std::size_t i = 0; i < next.x.dim(); ++i) {
    next.x[i] = state.x[i] - eta * update[i];
  }
  if (!next.x.all_finite()) {
    throw NumericError("non-finite parameters after step at iteration " +
                       std::to_string(state.t));
  }
  next.t = state.t + 1;
  return next;
}

// g~/q: average over q queries of (clipped batch delta / b + z) * direction.
// direction_for(rng) draws the query direction in R^d.
template <typename DirectionFn>
ParamVector private_zo_estimate(const OptState& state, const Problem& problem,
                                std::span<const SampleId> batch,
                                const PrivacySpec& spec, std::size_t q,
                                double lambda, DirectionFn&& direction_for,
                                StepTrace* trace) {
  require(q >= 1, "ZO step: q must be >= 1");
  require(lambda > 0.0, "ZO step: lambda must be > 0");
  PrivacySpec per_query = spec;
  per_query.queries_q = q;
  const double b = static_cast<double>(spec.batch_b);
  const double noise_std = query_noise_std(per_query);

  ParamVector acc(problem.dim());
  for (std::size_t j = 0; j < q; ++j) {
    RngStream direction_rng = state.perturbation.child(state.t).child(j);
    const ParamVector u = direction_for(direction_rng);
    const double released =
        kernels::clipped_delta_sum(problem, state.x, u, lambda, batch,
                                   spec.clip_C) /
        b;
    RngStream noise_rng = state.noise.child(state.t).child(j);
    const double z = noise_for_query(per_query, noise_rng);
    axpy(released + z, u, acc.span());
    if (trace) {
      trace->ops.private_forward += 2;
      trace->released.push_back(released);
      trace->noise.push_back({NoiseSite::kQuery, noise_std, z});
    }
  }
  for (double& v : acc) v /= static_cast<double>(q);
  return acc;
}

std::size_t argmin_lowest(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < values.size(); ++j) {
    if (values[j] < values[best]) best = j;
  }
  return best;
}

ColumnMatrix public_gradients(const Problem& problem, std::span<const double> x,
                              const PublicBatches& batches,
                              StepTrace* trace) {
  ColumnMatrix G;
  G.reserve(batches.size());
  for (const auto& batch : batches) {
    G.push_back(batch_mean_gradient(problem, x, batch));
    if (trace) trace->ops.public_forward_backward += 1;
  }
  return G;
}

}  // namespace

OptState OptState::initial(ParamVector x0, std::uint64_t seed) {
  return OptState{std::move(x0), 0, RngStream(seed, "perturbation"),
                  RngStream(seed, "noise"), RngStream(seed, "explore")};
}

ParamVector batch_mean_gradient(const Problem& problem,
                                std::span<const double> x,
                                std::span<const SampleId> batch) {
  require(!batch.empty(), "batch_mean_gradient: empty batch");
  ParamVector g = kernels::gradient_sum(problem, x, batch);
  const double n = static_cast<double>(batch.size());
  for (double& v : g) v /= n;
  return g;
}

OptState sgd_step(const OptState& state, const Problem& problem,
                  std::span<const SampleId> batch, const SgdConfig& cfg,
                  StepTrace* trace) {
  if (batch.empty()) {
    OptState next = state;
    next.t += 1;
    return next;
  }
  const ParamVector g = batch_mean_gradient(problem, state.x, batch);
  if (trace) {
    trace->ops.private_forward += batch.size();
    trace->ops.private_backward += batch.size();
  }
  return advance(state, cfg.eta, g);
}

OptState dpzero_step(const OptState& state, const Problem& problem,
                     std::span<const SampleId> private_batch,
                     const PrivacySpec& spec, const ZoConfig& cfg,
                     StepTrace* trace) {
  const std::size_t d = problem.dim();
  const SphereSpec sphere{
      d, cfg.radius.value_or(std::sqrt(static_cast<double>(d)))};
  const ParamVector update = private_zo_estimate(
      state, problem, private_batch, spec, cfg.q, cfg.lambda,
      [&](RngStream& rng) { return sample_direction(sphere, cfg.direction, rng); },
      trace);
  return advance(state, cfg.eta, update);
}

OptState pazo_m_step(const OptState& state, const Problem& problem,
                     std::span<const SampleId> private_batch,
                     std::span<const SampleId> public_batch,
                     const PazoMConfig& cfg, const PrivacySpec& spec,
                     StepTrace* trace) {
  require(cfg.alpha >= 0.0 && cfg.alpha <= 1.0,
          "PAZO-M: alpha must lie in [0, 1]");
  require(!public_batch.empty(), "PAZO-M: public batch is empty");
  const ParamVector g_pub = batch_mean_gradient(problem, state.x, public_batch);
  if (trace) trace->ops.public_forward_backward += 1;

  const SphereSpec sphere = SphereSpec::norm_aligned(problem.dim());
  const ParamVector zo = private_zo_estimate(
      state, problem, private_batch, spec, cfg.q, cfg.lambda,
      [&](RngStream& rng) { return sample_direction(sphere, cfg.direction, rng); },
      trace);

  ParamVector mixed(problem.dim());
  for (std::size_t i = 0; i < mixed.dim(); ++i) {
    mixed[i] = cfg.alpha * g_pub[i] + (1.0 - cfg.alpha) * zo[i];
  }
  return advance(state, cfg.eta, mixed);
}

OptState pazo_p_step(const OptState& state, const Problem& problem,
                     std::span<const SampleId> private_batch,
                     const PublicBatches& public_batches,
                     const PazoPConfig& cfg, const PrivacySpec& spec,
                     StepTrace* trace) {
  require(cfg.k >= 1 && cfg.k <= problem.dim(), "PAZO-P: need 1 <= k <= d");
  require(public_batches.size() == cfg.k,
          "PAZO-P: expected exactly k public batches");
  const ColumnMatrix G =
      public_gradients(problem, state.x, public_batches, trace);
  const OrthoResult basis = orthonormalize_columns(
      G, cfg.orthonormalize ? BasisMode::kOrthonormal
                            : BasisMode::kNormalizeOnly);
  return pazo_p_step_with_basis(state, problem, private_batch, basis.columns,
                                cfg, spec, trace);
}

OptState pazo_p_step_with_basis(const OptState& state, const Problem& problem,
                                std::span<const SampleId> private_batch,
                                const ColumnMatrix& basis,
                                const PazoPConfig& cfg,
                                const PrivacySpec& spec, StepTrace* trace) {
  const std::size_t k = basis.size();
  if (k == 0) throw InvalidArgument("PAZO-P: effective k is 0");
  if (trace) trace->effective_k = k;
  const SphereSpec sphere = SphereSpec::standard(k);
  const ParamVector update = private_zo_estimate(
      state, problem, private_batch, spec, cfg.q, cfg.lambda,
      [&](RngStream& rng) {
        const ParamVector u = sample_sphere(sphere, rng);
        return apply_columns(basis, u);
      },
      trace);
  return advance(state, cfg.eta, update);
}

OptState pazo_s_step(const OptState& state, const Problem& problem,
                     std::span<const SampleId> private_batch,
                     const PublicBatches& public_batches,
                     const PazoSConfig& cfg, const PrivacySpec& spec,
                     StepTrace* trace) {
  require(cfg.k >= 1, "PAZO-S: k must be >= 1");
  require(public_batches.size() == cfg.k,
          "PAZO-S: expected exactly k public batches");
  const ColumnMatrix G =
      public_gradients(problem, state.x, public_batches, trace);
  return pazo_s_step_with_candidates(state, problem, private_batch, G, cfg,
                                     spec, trace);
}

OptState pazo_s_step_with_candidates(const OptState& state,
                                     const Problem& problem,
                                     std::span<const SampleId> private_batch,
                                     const ColumnMatrix& gradients,
                                     const PazoSConfig& cfg,
                                     const PrivacySpec& spec,
                                     StepTrace* trace) {
  const std::size_t k = gradients.size();
  require(k >= 1, "PAZO-S: need at least one candidate gradient");
  require(cfg.perturb_scale >= 0.0, "PAZO-S: perturb_scale must be >= 0");
  const double b = static_cast<double>(spec.batch_b);
  const double noise_std = selection_noise_std(spec, k);
  const std::size_t d = problem.dim();

  ParamVector probe(d);
  // Noisy clipped mean loss at x - eta * g; the noise draw for candidate j
  // comes from its own child stream.
  auto release = [&](const ParamVector& g, std::size_t j) {
    for (std::size_t i = 0; i < d; ++i) probe[i] = state.x[i] - cfg.eta * g[i];
    const double clipped_mean =
        kernels::clipped_loss_sum(problem, probe, private_batch, spec.clip_C) /
        b;
    RngStream noise_rng = state.noise.child(state.t).child(j);
    const double z = noise_for_selection(spec, k, noise_rng);
    double f = clipped_mean + z;
    if (trace) {
      trace->ops.private_forward += 1;
      trace->released.push_back(clipped_mean);
      trace->noise.push_back({NoiseSite::kSelection, noise_std, z});
    }
    if (!std::isfinite(f)) {
      f = std::numeric_limits<double>::infinity();
      if (trace) trace->nonfinite_candidates += 1;
    }
    return f;
  };

  std::vector<double> losses(k + 1);
  for (std::size_t j = 0; j < k; ++j) losses[j] = release(gradients[j], j);
  const std::size_t best =
      argmin_lowest(std::span<const double>(losses.data(), k));

  RngStream explore_rng = state.explore.child(state.t);
  ParamVector extra = gradients[best];
  for (std::size_t i = 0; i < d; ++i) {
    const double z = explore_rng.next_gaussian();
    extra[i] += cfg.perturb_scale == 0.0 ? 0.0 : cfg.perturb_scale * z;
  }
  losses[k] = release(extra, k);
  const std::size_t chosen = argmin_lowest(losses);

  if (trace) {
    trace->best_public = best;
    trace->selected = chosen;
    trace->candidate_losses = losses;
  }
  return advance(state, cfg.eta, chosen == k ? extra : gradients[chosen]);
}

OptState dpsgd_step(const OptState& state, const Problem& problem,
                    std::span<const SampleId> private_batch,
                    const PrivacySpec& spec, const DpSgdConfig& cfg,
                    StepTrace* trace) {
  const std::size_t d = problem.dim();
  const double b = static_cast<double>(spec.batch_b);
  ParamVector update = kernels::clipped_gradient_sum(problem, state.x,
                                                     private_batch, spec.clip_C);
  for (double& v : update) v /= b;

  const double std_dev = gradient_noise_std(spec);
  RngStream noise_rng = state.noise.child(state.t);
  for (std::size_t i = 0; i < d; ++i) {
    const double z = noise_rng.next_gaussian();
    const double noise = std_dev == 0.0 ? 0.0 : std_dev * z;
    update[i] += noise;
    if (trace) trace->noise.push_back({NoiseSite::kGradient, std_dev, noise});
  }
  if (trace) {
    trace->ops.private_forward += private_batch.size();
    trace->ops.private_backward += private_batch.size();
  }
  return advance(state, cfg.eta, update);
}

}  // namespace pazo
