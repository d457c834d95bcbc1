// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsnpdc/time.hpp"

#include <cctype>

namespace tsnpdc {

namespace {

struct Unit {
  std::string_view suffix;
  std::uint64_t scale;
};

constexpr Unit kUnits[] = {
    {"ns", 1}, {"us", 1'000}, {"\xC2\xB5s", 1'000}, {"ms", 1'000'000}, {"s", 1'000'000'000},
};

}  // namespace

TimeNs parse_duration(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  std::size_t digits_end = 0;
  while (digits_end < text.size() &&
         (std::isdigit(static_cast<unsigned char>(text[digits_end])) || text[digits_end] == '.'))
    ++digits_end;
  std::string_view number = text.substr(0, digits_end);
  std::string_view suffix = trim(text.substr(digits_end));
  if (number.empty()) throw BadParams("bad duration '" + std::string(text) + "'");

  std::uint64_t scale = 0;
  for (const auto& u : kUnits)
    if (suffix == u.suffix) scale = u.scale;
  if (scale == 0) throw BadParams("duration '" + std::string(text) + "' needs a ns/us/ms/s suffix");

  std::uint64_t whole = 0;
  std::uint64_t frac = 0;
  std::uint64_t frac_div = 1;
  bool seen_dot = false;
  for (char c : number) {
    if (c == '.') {
      if (seen_dot) throw BadParams("bad duration '" + std::string(text) + "'");
      seen_dot = true;
      continue;
    }
    auto d = static_cast<std::uint64_t>(c - '0');
    if (!seen_dot) {
      if (whole > (TimeNs::kLimit - 1) / 10) throw TimeOverflow("duration too large");
      whole = whole * 10 + d;
    } else {
      if (frac_div >= 1'000'000'000) throw BadParams("duration '" + std::string(text) + "' is finer than 1 ns");
      frac = frac * 10 + d;
      frac_div *= 10;
    }
  }
  if ((frac * scale) % frac_div != 0)
    throw BadParams("duration '" + std::string(text) + "' is not a whole number of ns");
  return TimeNs{whole} * scale + TimeNs{frac * scale / frac_div};
}

std::string format_duration(TimeNs t) {
  const std::uint64_t v = t.count();
  if (v == 0) return "0ns";
  if (v % 1'000'000'000 == 0) return std::to_string(v / 1'000'000'000) + "s";
  if (v % 1'000'000 == 0) return std::to_string(v / 1'000'000) + "ms";
  if (v % 1'000 == 0) return std::to_string(v / 1'000) + "us";
  return std::to_string(v) + "ns";
}

}  // namespace tsnpdc
