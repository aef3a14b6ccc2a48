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

#ifndef PAZO_PRIVACY_H_
#define PAZO_PRIVACY_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pazo/rng.h"

namespace pazo {

// Privacy parameters of one training run.
//
// Either epsilon or sigma may be missing at construction; complete_spec()
// fills in the missing one with the accountant. sigma == 0 denotes a
// non-private run (no noise is added).
struct PrivacySpec {
  std::optional<double> epsilon;
  double delta = 1e-5;
  double clip_C = 1.0;
  std::optional<double> sigma;
  std::size_t batch_b = 64;      // expected private batch size
  std::size_t dataset_n = 1;     // private dataset size
  std::size_t rounds_T = 1;      // iterations
  std::size_t queries_q = 1;     // ZO queries per iteration

  double sampling_rate() const {
    return static_cast<double>(batch_b) / static_cast<double>(dataset_n);
  }

  // Throws InvalidArgument on violated invariants. Returns a warning string
  // (possibly empty) for soft violations such as delta >= 1/n.
  std::string validate() const;

  // sigma, or throws InvalidArgument if unset.
  double noise_multiplier() const;

  // Every field needed to draw noise and report (epsilon, delta) is set.
  bool complete() const { return epsilon.has_value() && sigma.has_value(); }
};

// Standard deviation of one per-query ZO noise draw: sqrt(q) * C * sigma / b.
double query_noise_std(const PrivacySpec& spec);
// Standard deviation of one PAZO-S loss-release draw: sqrt(k+1) * C * sigma / b.
double selection_noise_std(const PrivacySpec& spec, std::size_t k);
// Per-coordinate standard deviation of the DP-SGD noise vector: C * sigma / b.
double gradient_noise_std(const PrivacySpec& spec);

// One draw from N(0, q C^2 sigma^2 / b^2). Always consumes one Gaussian from
// rng, so the stream position does not depend on sigma.
double noise_for_query(const PrivacySpec& spec, RngStream& rng);
// One draw from N(0, (k+1) C^2 sigma^2 / b^2). k must be >= 1.
double noise_for_selection(const PrivacySpec& spec, std::size_t k,
                           RngStream& rng);

// Conversion from Renyi DP to (epsilon, delta).
enum class RdpConversion {
  // eps = rdp + log((a-1)/a) - (log delta + log a) / (a - 1)
  kImproved,
  // eps = rdp + log(1/delta) / (a - 1)
  kClassic,
};

struct AccountantOptions {
  std::vector<double> orders = default_orders();
  RdpConversion conversion = RdpConversion::kImproved;

  // 1.25, 1.5, ..., 64 followed by a sparse tail of larger integer orders
  // used when the noise is large.
  static std::vector<double> default_orders();
};

// Renyi DP of one step of the Poisson-subsampled Gaussian mechanism with
// sampling rate q, noise multiplier sigma, at order alpha > 1.
double rdp_subsampled_gaussian(double q, double sigma, double alpha);

struct EpsilonResult {
  double epsilon;
  double order;  // order attaining the minimum
};

// (epsilon, delta) bound for T-fold composition of the Poisson-subsampled
// Gaussian mechanism at rate b/n. Throws PrivacyError if no order gives a
// finite bound.
EpsilonResult accountant_epsilon_detail(double sigma, std::size_t batch_b,
                                        std::size_t dataset_n,
                                        std::size_t rounds_T, double delta,
                                        const AccountantOptions& options = {});

double accountant_epsilon(double sigma, std::size_t batch_b,
                          std::size_t dataset_n, std::size_t rounds_T,
                          double delta, const AccountantOptions& options = {});

inline constexpr double kMinCalibratedSigma = 1e-2;
inline constexpr double kMaxCalibratedSigma = 1e4;

// Smallest sigma (to relative tolerance 1e-3) in [1e-2, 1e4] whose accounted
// epsilon does not exceed epsilon_target. Throws PrivacyError when the target
// is unreachable in that range.
double calibrate_sigma(double epsilon_target, double delta,
                       std::size_t batch_b, std::size_t dataset_n,
                       std::size_t rounds_T,
                       const AccountantOptions& options = {});

// Fills whichever of epsilon / sigma is missing.
PrivacySpec complete_spec(PrivacySpec spec,
                          const AccountantOptions& options = {});

// "epsilon=... delta=... sigma=..." single-line rendering.
std::string to_key_values(const PrivacySpec& spec);

}  // namespace pazo

#endif  // PAZO_PRIVACY_H_
