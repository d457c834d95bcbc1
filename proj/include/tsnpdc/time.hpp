// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "tsnpdc/error.hpp"

namespace tsnpdc {

__extension__ using uint128 = unsigned __int128;

/// Nanosecond instant or duration. Integer arithmetic only; values are kept
/// below 2^63 so that differences always fit in a signed 64-bit integer.
class TimeNs {
 public:
  static constexpr std::uint64_t kLimit = std::uint64_t{1} << 63;

  constexpr TimeNs() = default;
  constexpr explicit TimeNs(std::uint64_t ns) : value_(ns) {}

  constexpr std::uint64_t count() const { return value_; }
  constexpr std::int64_t signed_count() const { return static_cast<std::int64_t>(value_); }

  static constexpr TimeNs zero() { return TimeNs{0}; }
  static constexpr TimeNs max() { return TimeNs{kLimit - 1}; }

  friend constexpr auto operator<=>(TimeNs, TimeNs) = default;

  friend TimeNs operator+(TimeNs a, TimeNs b) {
    if (b.value_ >= kLimit - a.value_) throw TimeOverflow("time addition exceeds 2^63 ns");
    return TimeNs{a.value_ + b.value_};
  }
  friend TimeNs operator-(TimeNs a, TimeNs b) {
    if (b.value_ > a.value_) throw TimeOverflow("negative duration");
    return TimeNs{a.value_ - b.value_};
  }
  friend TimeNs operator*(TimeNs a, std::uint64_t k) {
    if (k != 0 && a.value_ > (kLimit - 1) / k) throw TimeOverflow("time multiplication exceeds 2^63 ns");
    return TimeNs{a.value_ * k};
  }
  friend std::uint64_t operator/(TimeNs a, TimeNs b) { return a.value_ / b.value_; }
  friend TimeNs operator%(TimeNs a, TimeNs b) { return TimeNs{a.value_ % b.value_}; }

  TimeNs& operator+=(TimeNs other) { return *this = *this + other; }
  TimeNs& operator-=(TimeNs other) { return *this = *this - other; }

 private:
  std::uint64_t value_ = 0;
};

constexpr TimeNs ns(std::uint64_t v) { return TimeNs{v}; }
constexpr TimeNs us(std::uint64_t v) { return TimeNs{v * 1'000}; }
constexpr TimeNs ms(std::uint64_t v) { return TimeNs{v * 1'000'000}; }
constexpr TimeNs sec(std::uint64_t v) { return TimeNs{v * 1'000'000'000}; }

/// Parses "50ns", "100us", "100µs", "17.1ms", "1s". Decimal fractions are
/// converted exactly; a result that is not a whole number of ns is rejected.
TimeNs parse_duration(std::string_view text);

/// Shortest exact rendering with the largest unit that divides evenly.
std::string format_duration(TimeNs t);

}  // namespace tsnpdc
