// Copyright 2026 The ECBA Workbench Authors
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

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace ecba {

/// Counter-based Philox4x32-10 generator.
///
/// Every draw is a pure function of (key, stream, counter), so results are
/// identical across platforms, compilers and thread schedules. The 64-bit
/// seed forms the key and the 64-bit stream id occupies the upper half of
/// the 128-bit counter block; the lower half counts blocks.
///
/// All floating-point helpers are derived from raw 64-bit words with
/// explicit arithmetic. Standard-library distributions are avoided because
/// their output is implementation defined.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() { return next_u64(); }
  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1].
  double uniform_open_closed();
  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t uniform_int(std::uint64_t bound);
  bool bernoulli(double p);
  /// Standard normal via Box-Muller.
  double normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int available_ = 0;
  bool have_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// One Philox4x32-10 block. Exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                         std::array<std::uint32_t, 2> key);

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view bytes);

/// Child seed for a named stage of the seed-derivation tree.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label);
/// Child seed for the i-th member of an indexed family (realizations, shots).
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label,
                          std::uint64_t index);

}  // namespace ecba
