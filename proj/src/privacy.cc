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

#include "pazo/privacy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "pazo/errors.h"
#include "pazo/format.h"

namespace pazo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// log(exp(a) - exp(b)), a >= b.
double log_sub(double a, double b) {
  if (b == -kInf) return a;
  if (a <= b) return -kInf;
  return a + std::log1p(-std::exp(b - a));
}

double log_erfc(double x) {
  if (x < 25.0) return std::log(std::erfc(x));
  // Asymptotic expansion; erfc underflows past x ~ 26.
  const double x2 = x * x;
  return -x2 - std::log(x) - 0.5 * std::log(std::numbers::pi) +
         std::log1p(-1.0 / (2.0 * x2) + 3.0 / (4.0 * x2 * x2) -
                    15.0 / (8.0 * x2 * x2 * x2));
}

double log_binom_int(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// log A_alpha for integer alpha.
double log_a_int(double q, double sigma, double alpha) {
  double log_a = -kInf;
  const auto n = static_cast<long>(alpha);
  for (long i = 0; i <= n; ++i) {
    const double di = static_cast<double>(i);
    const double log_coef = log_binom_int(alpha, di) + di * std::log(q) +
                            (alpha - di) * std::log1p(-q);
    const double s = log_coef + (di * di - di) / (2.0 * sigma * sigma);
    log_a = log_add(log_a, s);
  }
  return log_a;
}

// log A_alpha for fractional alpha, via the two-sided erfc series.
double log_a_frac(double q, double sigma, double alpha) {
  double log_a0 = -kInf;
  double log_a1 = -kInf;
  const double z0 = sigma * sigma * std::log(1.0 / q - 1.0) + 0.5;
  double coef = 1.0;  // binom(alpha, i), built incrementally
  for (int i = 0; i < 100000; ++i) {
    const double di = i;
    const double log_coef = std::log(std::abs(coef));
    const double j = alpha - di;
    const double log_t0 = log_coef + di * std::log(q) + j * std::log1p(-q);
    const double log_t1 = log_coef + j * std::log(q) + di * std::log1p(-q);
    const double log_e0 =
        std::log(0.5) + log_erfc((di - z0) / (std::numbers::sqrt2 * sigma));
    const double log_e1 =
        std::log(0.5) + log_erfc((z0 - j) / (std::numbers::sqrt2 * sigma));
    const double log_s0 = log_t0 + (di * di - di) / (2.0 * sigma * sigma) + log_e0;
    const double log_s1 = log_t1 + (j * j - j) / (2.0 * sigma * sigma) + log_e1;
    if (coef > 0) {
      log_a0 = log_add(log_a0, log_s0);
      log_a1 = log_add(log_a1, log_s1);
    } else {
      log_a0 = log_sub(log_a0, log_s0);
      log_a1 = log_sub(log_a1, log_s1);
    }
    if (std::max(log_s0, log_s1) < -30.0) break;
    coef *= (alpha - di) / (di + 1.0);
    if (coef == 0.0) break;
  }
  return log_add(log_a0, log_a1);
}

double convert(double rdp, double alpha, double delta, RdpConversion conv) {
  if (!std::isfinite(rdp)) return kInf;
  if (conv == RdpConversion::kClassic) {
    return rdp + std::log(1.0 / delta) / (alpha - 1.0);
  }
  // delta >= sqrt(1 - exp(-rdp)) already gives epsilon = 0.
  if (delta * delta + std::expm1(-rdp) >= 0.0) return 0.0;
  if (alpha <= 1.01) return kInf;
  return rdp + std::log1p(-1.0 / alpha) -
         std::log(delta * alpha) / (alpha - 1.0);
}

void check_accountant_args(double sigma, std::size_t b, std::size_t n,
                           std::size_t T, double delta) {
  if (!(sigma > 0.0)) throw InvalidArgument("accountant: sigma must be > 0");
  if (b == 0 || b > n) {
    throw InvalidArgument("accountant: need 0 < batch_b <= dataset_n");
  }
  if (T == 0) throw InvalidArgument("accountant: rounds_T must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidArgument("accountant: delta must lie in (0, 1)");
  }
}

}  // namespace

std::string PrivacySpec::validate() const {
  if (epsilon && !(*epsilon > 0.0)) {
    throw InvalidArgument("privacy: epsilon must be > 0");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidArgument("privacy: delta must lie in (0, 1)");
  }
  if (!(clip_C > 0.0)) throw InvalidArgument("privacy: clip_C must be > 0");
  if (sigma && !(*sigma >= 0.0 && std::isfinite(*sigma))) {
    throw InvalidArgument("privacy: sigma must be finite and >= 0");
  }
  if (batch_b == 0 || dataset_n == 0 || batch_b > dataset_n) {
    throw InvalidArgument("privacy: need 0 < batch_b <= dataset_n");
  }
  if (rounds_T == 0) throw InvalidArgument("privacy: rounds_T must be >= 1");
  if (queries_q == 0) throw InvalidArgument("privacy: queries_q must be >= 1");
  if (!epsilon && !sigma) {
    throw InvalidArgument("privacy: at least one of epsilon, sigma is needed");
  }
  if (delta >= 1.0 / static_cast<double>(dataset_n)) {
    return "delta >= 1/n (" + format_double(delta) +
           "); guarantees are weak at this delta";
  }
  return {};
}

double PrivacySpec::noise_multiplier() const {
  if (!sigma) throw InvalidArgument("privacy: sigma is not set");
  return *sigma;
}

namespace {

double scaled_std(const PrivacySpec& spec, double multiplicity) {
  const double sigma = spec.noise_multiplier();
  if (sigma == 0.0) return 0.0;
  if (!std::isfinite(spec.clip_C)) {
    throw InvalidArgument("privacy noise needs a finite clip_C when sigma > 0");
  }
  return std::sqrt(multiplicity) * spec.clip_C * sigma /
         static_cast<double>(spec.batch_b);
}

}  // namespace

double query_noise_std(const PrivacySpec& spec) {
  return scaled_std(spec, static_cast<double>(spec.queries_q));
}

double selection_noise_std(const PrivacySpec& spec, std::size_t k) {
  if (k == 0) throw InvalidArgument("selection noise: k must be >= 1");
  return scaled_std(spec, static_cast<double>(k + 1));
}

double gradient_noise_std(const PrivacySpec& spec) {
  return scaled_std(spec, 1.0);
}

double noise_for_query(const PrivacySpec& spec, RngStream& rng) {
  const double z = rng.next_gaussian();
  const double s = query_noise_std(spec);
  return s == 0.0 ? 0.0 : s * z;
}

double noise_for_selection(const PrivacySpec& spec, std::size_t k,
                           RngStream& rng) {
  const double z = rng.next_gaussian();
  const double s = selection_noise_std(spec, k);
  return s == 0.0 ? 0.0 : s * z;
}

std::vector<double> AccountantOptions::default_orders() {
  std::vector<double> orders;
  for (int i = 5; i <= 256; ++i) orders.push_back(0.25 * i);
  for (double a : {80.0, 96.0, 128.0, 192.0, 256.0, 384.0, 512.0, 768.0,
                   1024.0, 1536.0, 2048.0, 3072.0, 4096.0}) {
    orders.push_back(a);
  }
  return orders;
}

double rdp_subsampled_gaussian(double q, double sigma, double alpha) {
  if (!(alpha > 1.0)) throw InvalidArgument("rdp: order must be > 1");
  if (q == 0.0) return 0.0;
  if (q == 1.0) return alpha / (2.0 * sigma * sigma);
  const double log_a = alpha == std::floor(alpha)
                           ? log_a_int(q, sigma, alpha)
                           : log_a_frac(q, sigma, alpha);
  return log_a / (alpha - 1.0);
}

EpsilonResult accountant_epsilon_detail(double sigma, std::size_t batch_b,
                                        std::size_t dataset_n,
                                        std::size_t rounds_T, double delta,
                                        const AccountantOptions& options) {
  check_accountant_args(sigma, batch_b, dataset_n, rounds_T, delta);
  const double q =
      static_cast<double>(batch_b) / static_cast<double>(dataset_n);
  EpsilonResult best{kInf, 0.0};
  for (double alpha : options.orders) {
    const double rdp = static_cast<double>(rounds_T) *
                       rdp_subsampled_gaussian(q, sigma, alpha);
    const double eps = convert(rdp, alpha, delta, options.conversion);
    if (eps < best.epsilon) best = {eps, alpha};
  }
  if (!std::isfinite(best.epsilon)) {
    throw PrivacyError("accountant: no finite (epsilon, delta) bound at sigma=" +
                       format_double(sigma) + " for the configured orders");
  }
  best.epsilon = std::max(0.0, best.epsilon);
  return best;
}

double accountant_epsilon(double sigma, std::size_t batch_b,
                          std::size_t dataset_n, std::size_t rounds_T,
                          double delta, const AccountantOptions& options) {
  return accountant_epsilon_detail(sigma, batch_b, dataset_n, rounds_T, delta,
                                   options)
      .epsilon;
}

double calibrate_sigma(double epsilon_target, double delta,
                       std::size_t batch_b, std::size_t dataset_n,
                       std::size_t rounds_T,
                       const AccountantOptions& options) {
  if (!(epsilon_target > 0.0)) {
    throw InvalidArgument("calibrate_sigma: epsilon_target must be > 0");
  }
  auto eps_at = [&](double sigma) {
    try {
      return accountant_epsilon(sigma, batch_b, dataset_n, rounds_T, delta,
                                options);
    } catch (const PrivacyError&) {
      return kInf;
    }
  };
  double hi = kMaxCalibratedSigma;
  if (eps_at(hi) > epsilon_target) {
    throw PrivacyError("calibrate_sigma: epsilon=" +
                       format_double(epsilon_target) +
                       " is unreachable for sigma <= " + format_double(hi));
  }
  double lo = kMinCalibratedSigma;
  if (eps_at(lo) <= epsilon_target) return lo;
  // Invariant: eps(lo) > target >= eps(hi). Bisect in log space.
  while (hi / lo > 1.0 + 1e-3) {
    const double mid = std::sqrt(lo * hi);
    if (eps_at(mid) <= epsilon_target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

PrivacySpec complete_spec(PrivacySpec spec, const AccountantOptions& options) {
  spec.validate();
  if (!spec.sigma) {
    spec.sigma = calibrate_sigma(*spec.epsilon, spec.delta, spec.batch_b,
                                 spec.dataset_n, spec.rounds_T, options);
  }
  if (!spec.epsilon) {
    spec.epsilon = *spec.sigma == 0.0
                       ? kInf
                       : accountant_epsilon(*spec.sigma, spec.batch_b,
                                            spec.dataset_n, spec.rounds_T,
                                            spec.delta, options);
  }
  return spec;
}

std::string to_key_values(const PrivacySpec& spec) {
  std::ostringstream os;
  os << "epsilon=" << (spec.epsilon ? format_double(*spec.epsilon) : "unset")
     << " delta=" << format_double(spec.delta)
     << " sigma=" << (spec.sigma ? format_double(*spec.sigma) : "unset")
     << " clip_C=" << format_double(spec.clip_C) << " batch_b=" << spec.batch_b
     << " dataset_n=" << spec.dataset_n << " rounds_T=" << spec.rounds_T
     << " queries_q=" << spec.queries_q;
  return os.str();
}

}  // namespace pazo
