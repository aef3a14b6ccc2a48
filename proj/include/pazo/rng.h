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

#ifndef PAZO_RNG_H_
#define PAZO_RNG_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "pazo/param_vector.h"

namespace pazo {

// Counter-based random stream.
//
// Draw i of a stream is a pure function of (key, i), where the key is derived
// from the 64-bit seed and the label path used to reach the stream. Streams
// are single-owner; concurrent consumers get their own child streams via
// child(), which never advances the parent.
//
// Normals are produced with Box-Muller from our own uniforms so that results
// do not depend on the standard library's distribution implementations.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view label);

  // Independent child streams. Children with different labels/indices, and
  // the parent itself, produce statistically independent sequences.
  RngStream child(std::string_view label) const;
  RngStream child(std::uint64_t index) const;

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1).
  double next_uniform();
  double next_gaussian();
  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t next_below(std::uint64_t bound);

  std::uint64_t seed() const { return seed_; }
  const std::string& label() const { return label_; }
  std::uint64_t draws() const { return counter_; }

 private:
  RngStream(std::uint64_t seed, std::string label, std::uint64_t key);

  std::uint64_t seed_;
  std::string label_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// n i.i.d. standard normal draws. Throws InvalidArgument when n == 0.
ParamVector gaussian_standard(RngStream& rng, std::size_t n);

}  // namespace pazo

#endif  // PAZO_RNG_H_
