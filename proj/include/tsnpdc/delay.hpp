// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tsnpdc/rng.hpp"
#include "tsnpdc/time.hpp"

namespace tsnpdc {

struct HistogramBin {
  TimeNs upper_edge;
  double probability = 0.0;
};

/// Binned empirical one-way delay distribution.
///
/// Bin i covers (upper_edge[i-1], upper_edge[i]]. The first bin is a point
/// mass at its own edge, which is also min_delay; a histogram written with a
/// leading zero-probability row therefore starts its support at that edge.
class DelayHistogram {
 public:
  DelayHistogram() = default;
  /// Validates edges and mass; rescales mass within 1% of unity.
  explicit DelayHistogram(std::vector<HistogramBin> bins);

  const std::vector<HistogramBin>& bins() const { return bins_; }
  TimeNs min_delay() const { return bins_.front().upper_edge; }
  TimeNs max_delay() const { return bins_.back().upper_edge; }

  /// Smallest t with CDF(t) >= p, interpolating linearly inside a bin.
  TimeNs quantile(double p) const;
  double cdf(TimeNs t) const;
  /// Inverse-CDF draw: bin by cumulative mass, uniform inside the bin.
  /// Consumes exactly two values from `rng`.
  TimeNs sample(Rng& rng) const;

  friend bool operator==(const DelayHistogram& a, const DelayHistogram& b) {
    if (a.bins_.size() != b.bins_.size()) return false;
    for (std::size_t i = 0; i < a.bins_.size(); ++i)
      if (a.bins_[i].upper_edge != b.bins_[i].upper_edge || a.bins_[i].probability != b.bins_[i].probability)
        return false;
    return true;
  }

 private:
  std::vector<HistogramBin> bins_;
  std::vector<double> cumulative_;
};

/// Parses `upper_edge_ns,probability` CSV (header required).
DelayHistogram load_histogram(std::string_view csv);
DelayHistogram load_histogram_file(const std::string& path);
/// Round-trips bit-exactly through load_histogram.
std::string save_histogram(const DelayHistogram& hist);

/// Right-skewed synthetic histogram on [min, max]: a triangular core rising to
/// the median and carrying half of the mass, followed by an exponentially
/// decaying tail truncated at max. Throws BadParams unless min < median < max.
DelayHistogram synth_histogram(TimeNs median, TimeNs max, TimeNs min, std::size_t n_bins);

}  // namespace tsnpdc
