// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace tsnpdc {

/// Counter-based generator (Philox4x32-10). The output depends only on
/// (key, counter), so a substream can be created anywhere without
/// consuming draws from another one.
class Rng {
 public:
  Rng() = default;
  explicit Rng(std::uint64_t seed) : key_(seed) {}

  /// Independent substream; the same (parent key, id) always yields the
  /// same child, regardless of how many values either has produced.
  Rng substream(std::uint64_t id) const;
  Rng substream(std::string_view name) const;

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 bits of resolution.
  double next_unit();
  /// Uniform integer in [0, bound); bound > 0. Lemire's multiply-shift with
  /// rejection, so the result is exact on every platform.
  std::uint64_t next_below(std::uint64_t bound);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }
  void seek(std::uint64_t counter) { counter_ = counter; }

  static std::array<std::uint32_t, 4> philox(std::uint64_t key, std::uint64_t counter_hi,
                                             std::uint64_t counter_lo);

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text);

}  // namespace tsnpdc
