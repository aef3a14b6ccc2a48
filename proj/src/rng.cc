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

#include "pazo/rng.h"

#include <cmath>
#include <numbers>
#include <utility>

#include "pazo/errors.h"

namespace pazo {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t derive(std::uint64_t key, std::uint64_t salt) {
  return mix64(mix64(key ^ kGolden) + mix64(salt + 0x632BE59BD9B4E019ULL));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::string_view label)
    : seed_(seed),
      label_(label),
      key_(derive(mix64(seed), fnv1a(label))) {}

RngStream::RngStream(std::uint64_t seed, std::string label, std::uint64_t key)
    : seed_(seed), label_(std::move(label)), key_(key) {}

RngStream RngStream::child(std::string_view label) const {
  // Tag label children differently from index children.
  return RngStream(seed_, label_ + "/" + std::string(label),
                   derive(key_, fnv1a(label) ^ 0x5bd1e995ULL));
}

RngStream RngStream::child(std::uint64_t index) const {
  return RngStream(seed_, label_ + "/" + std::to_string(index),
                   derive(key_ + 0xA0761D6478BD642FULL, index));
}

std::uint64_t RngStream::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double RngStream::next_uniform() {
  // 53 random bits, shifted off zero: values in (0, 1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::next_gaussian() {
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("next_below: bound must be positive");
  // Rejection sampling to avoid modulo bias.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % bound;
}

ParamVector gaussian_standard(RngStream& rng, std::size_t n) {
  if (n == 0) throw InvalidArgument("gaussian_standard: empty request (n = 0)");
  ParamVector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = rng.next_gaussian();
  return out;
}

}  // namespace pazo
