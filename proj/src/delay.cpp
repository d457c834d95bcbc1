// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsnpdc/delay.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tsnpdc {

namespace {

constexpr double kMassTolerance = 0.01;
// Sums closer to 1 than this are kept as-is so that save/load is bit-exact.
constexpr double kRescaleEpsilon = 1e-12;

}  // namespace

DelayHistogram::DelayHistogram(std::vector<HistogramBin> bins) : bins_(std::move(bins)) {
  using Kind = HistogramError::Kind;
  if (bins_.empty()) throw HistogramError(Kind::MalformedRow, "histogram needs at least one bin");
  double sum = 0.0;
  for (std::size_t i = 0; i < bins_.size(); ++i) {
    const double p = bins_[i].probability;
    if (!std::isfinite(p) || p < 0.0)
      throw HistogramError(Kind::MalformedRow, "bin " + std::to_string(i) + " has an invalid probability");
    if (i > 0 && bins_[i].upper_edge <= bins_[i - 1].upper_edge)
      throw HistogramError(Kind::NonMonotoneEdges, "bin edges must be strictly increasing (bin " +
                                                       std::to_string(i) + ")");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kMassTolerance)
    throw HistogramError(Kind::BadMass, "probabilities sum to " + std::to_string(sum));
  if (std::abs(sum - 1.0) > kRescaleEpsilon)
    for (auto& b : bins_) b.probability /= sum;

  cumulative_.reserve(bins_.size());
  double acc = 0.0;
  for (const auto& b : bins_) {
    acc += b.probability;
    cumulative_.push_back(acc);
  }
}

TimeNs DelayHistogram::quantile(double p) const {
  p = std::clamp(p, 0.0, 1.0);
  if (p <= cumulative_.front()) return bins_.front().upper_edge;
  auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), p);
  std::size_t i;
  if (it == cumulative_.end()) {
    // p is above the accumulated mass only through rounding: last bin with mass.
    i = bins_.size() - 1;
    while (i > 0 && bins_[i].probability == 0.0) --i;
    return bins_[i].upper_edge;
  }
  i = static_cast<std::size_t>(it - cumulative_.begin());
  const std::uint64_t lower = bins_[i - 1].upper_edge.count();
  const std::uint64_t width = bins_[i].upper_edge.count() - lower;
  const double frac = (p - cumulative_[i - 1]) / bins_[i].probability;
  auto step = static_cast<std::uint64_t>(std::ceil(frac * static_cast<double>(width)));
  return TimeNs{lower + std::min(step, width)};
}

double DelayHistogram::cdf(TimeNs t) const {
  if (t < bins_.front().upper_edge) return 0.0;
  if (t >= bins_.back().upper_edge) return 1.0;
  auto it = std::lower_bound(bins_.begin(), bins_.end(), t,
                             [](const HistogramBin& b, TimeNs v) { return b.upper_edge < v; });
  const auto i = static_cast<std::size_t>(it - bins_.begin());
  if (i == 0) return cumulative_[0];
  const double lower = static_cast<double>(bins_[i - 1].upper_edge.count());
  const double width = static_cast<double>(bins_[i].upper_edge.count()) - lower;
  return cumulative_[i - 1] + bins_[i].probability * (static_cast<double>(t.count()) - lower) / width;
}

TimeNs DelayHistogram::sample(Rng& rng) const {
  const double u_bin = rng.next_unit();
  const double u_pos = rng.next_unit();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u_bin);
  std::size_t i = it == cumulative_.end() ? bins_.size() - 1 : static_cast<std::size_t>(it - cumulative_.begin());
  while (i > 0 && bins_[i].probability == 0.0) --i;
  if (i == 0) return bins_.front().upper_edge;
  const std::uint64_t lower = bins_[i - 1].upper_edge.count();
  const std::uint64_t width = bins_[i].upper_edge.count() - lower;
  auto pos = static_cast<std::uint64_t>(u_pos * static_cast<double>(width));
  return TimeNs{lower + 1 + std::min(pos, width - 1)};
}

DelayHistogram load_histogram(std::string_view csv) {
  using Kind = HistogramError::Kind;
  std::vector<HistogramBin> bins;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!csv.empty()) {
    auto nl = csv.find('\n');
    std::string_view line = csv.substr(0, nl);
    csv = nl == std::string_view::npos ? std::string_view{} : csv.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "upper_edge_ns,probability")
        throw HistogramError(Kind::MalformedRow, "line 1: expected header 'upper_edge_ns,probability'");
      header_seen = true;
      continue;
    }
    auto comma = line.find(',');
    auto bad = [&] {
      return HistogramError(Kind::MalformedRow, "line " + std::to_string(line_no) + ": malformed row '" +
                                                    std::string(line) + "'");
    };
    if (comma == std::string_view::npos) throw bad();
    std::string_view edge_text = line.substr(0, comma);
    std::string_view prob_text = line.substr(comma + 1);
    // Accept exponent notation for edges such as 14e6.
    double edge_value = 0.0;
    auto r1 = std::from_chars(edge_text.data(), edge_text.data() + edge_text.size(), edge_value);
    if (r1.ec != std::errc{} || r1.ptr != edge_text.data() + edge_text.size() || edge_value < 0 ||
        edge_value != std::floor(edge_value) || edge_value >= 9.2e18)
      throw bad();
    double prob = 0.0;
    auto r2 = std::from_chars(prob_text.data(), prob_text.data() + prob_text.size(), prob);
    if (r2.ec != std::errc{} || r2.ptr != prob_text.data() + prob_text.size()) throw bad();
    bins.push_back({TimeNs{static_cast<std::uint64_t>(edge_value)}, prob});
  }
  if (!header_seen || bins.empty()) throw HistogramError(Kind::MalformedRow, "histogram CSV has no rows");
  return DelayHistogram(std::move(bins));
}

DelayHistogram load_histogram_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open histogram file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_histogram(buf.str());
}

std::string save_histogram(const DelayHistogram& hist) {
  std::string out = "upper_edge_ns,probability\n";
  char buf[64];
  for (const auto& b : hist.bins()) {
    out += std::to_string(b.upper_edge.count());
    out += ',';
    auto r = std::to_chars(buf, buf + sizeof buf, b.probability);
    out.append(buf, r.ptr);
    out += '\n';
  }
  return out;
}

DelayHistogram synth_histogram(TimeNs median, TimeNs max, TimeNs min, std::size_t n_bins) {
  if (!(min < median && median < max) || n_bins == 0)
    throw BadParams("synth_histogram needs min < median < max and n_bins > 0");
  const double lo = static_cast<double>(min.count());
  const double mid = static_cast<double>(median.count());
  const double hi = static_cast<double>(max.count());
  const double core = mid - lo;
  const double tail = hi - mid;
  const double half_core = core / 2.0;

  // Tail density starts at the core's peak 1/core and decays with scale tau so
  // that the tail carries exactly half of the mass.
  double tau = 0.0;
  const bool uniform_tail = half_core >= tail;
  if (!uniform_tail) {
    auto mass = [&](double t) { return t * -std::expm1(-tail / t); };
    double a = tail * 1e-9;
    double b = tail * 1e9;
    for (int it = 0; it < 300; ++it) {
      const double m = std::sqrt(a * b);
      (mass(m) < half_core ? a : b) = m;
    }
    tau = std::sqrt(a * b);
  }
  auto cdf = [&](double t) {
    if (t <= mid) {
      const double x = (t - lo) / core;
      return 0.5 * x * x;
    }
    if (uniform_tail) return 0.5 + 0.5 * (t - mid) / tail;
    return 0.5 + (tau / core) * -std::expm1(-(t - mid) / tau);
  };

  const std::uint64_t span = max.count() - min.count();
  const std::uint64_t n = std::min<std::uint64_t>(n_bins, span);
  std::vector<HistogramBin> bins;
  bins.reserve(n + 1);
  bins.push_back({min, 0.0});
  std::uint64_t prev = min.count();
  for (std::uint64_t k = 1; k <= n; ++k) {
    const auto edge = min.count() + static_cast<std::uint64_t>(
                                        (static_cast<uint128>(span) * k + n / 2) / n);
    bins.push_back({TimeNs{edge}, cdf(static_cast<double>(edge)) - cdf(static_cast<double>(prev))});
    prev = edge;
  }
  bins.back().upper_edge = max;
  return DelayHistogram(std::move(bins));
}

}  // namespace tsnpdc
