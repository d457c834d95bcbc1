// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tsnpdc/scenario.hpp"
#include "tsnpdc/scheduler.hpp"

namespace tsnpdc {

class ScheduleInfeasible : public Error {
 public:
  explicit ScheduleInfeasible(SynthesisResult result)
      : Error(std::string("no schedule (") + to_string(result.status) + "): " + result.witness),
        result_(std::move(result)) {}
  const SynthesisResult& result() const { return result_; }

 private:
  SynthesisResult result_;
};

struct StreamMetrics {
  std::string id;
  Direction direction = Direction::Wired;
  std::uint64_t injected = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped_late = 0;
  std::uint64_t in_flight = 0;  // still inside the network at the horizon
  std::uint64_t deadline_misses = 0;
  TimeNs latency_min;
  double latency_mean = 0.0;  // ns
  TimeNs latency_max;
  TimeNs p50, p99, p99999;
  TimeNs jitter;  // latency_max - latency_min
  // Time spent inside the 6G bridge, wireless streams only.
  TimeNs residence_min, residence_max;
  /// Distinct listener arrival instants modulo the period.
  std::uint64_t arrival_offsets = 0;
};

struct PortMetrics {
  std::string node;
  std::string link;
  double gate_utilization = 0.0;
  double link_utilization = 0.0;
  std::uint64_t max_depth = 0;
};

struct MetricsReport {
  std::string scenario;
  std::string residence;
  std::string pdc_mode;
  std::uint64_t seed = 0;
  std::uint64_t hypercycles = 0;
  TimeNs hypercycle;
  std::vector<StreamMetrics> streams;
  std::vector<PortMetrics> ports;
  std::uint64_t hold_high_water = 0;
  /// Wireless stream with the largest maximum latency (any stream if none).
  std::string worst_stream;
};

struct FrameRecord {
  std::size_t stream = 0;
  std::uint64_t seq = 0;
  TimeNs talker_tx;
  TimeNs listener_arrival;
  std::optional<TimeNs> residence;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> cycles;
  std::optional<std::string> trace_path;
  /// Use this schedule instead of synthesizing one.
  std::optional<Schedule> schedule;
  std::function<void(const FrameRecord&)> on_delivery;
  /// Every wireless delay draw: stream index, frame sequence number, delay.
  std::function<void(std::size_t, std::uint64_t, TimeNs)> on_wireless_sample;
};

/// Synthesizes the schedule for the scenario's residence selector (unless one
/// is given), then simulates `cycles` hypercycles of talker releases and
/// drains in-flight frames. Throws ScheduleInfeasible.
MetricsReport run_experiment(const Scenario& scenario, const RunOptions& options = {});

struct SweepOptions {
  std::vector<TimeNs> slots{us(1), us(10), us(100), us(250), us(500)};
  std::size_t sets = 100;
  std::uint64_t seed = 1;
  /// 0: TSNPDC_THREADS if set, else the hardware concurrency.
  unsigned threads = 0;
  std::size_t wired_per_partition = 15;
  std::size_t uplink_candidates = 100;
  std::size_t downlink_candidates = 100;
};

struct SweepCell {
  TimeNs slot;
  std::size_t set = 0;
  std::size_t uplink = 0;
  std::size_t downlink = 0;
  std::size_t wired = 0;
  std::size_t wireless() const { return uplink + downlink; }
};

struct SweepRow {
  TimeNs slot;
  std::size_t sets = 0;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;  // admitted wireless streams
};

struct SweepReport {
  std::vector<SweepCell> cells;  // ordered by (slot, set)
  std::vector<SweepRow> summary;
};

/// Random candidate set on the scenario's topology: wired streams inside each
/// partition around the 6G bridge, uplink and downlink streams across it,
/// with random talker phases and end points.
std::vector<Stream> generate_stream_set(const Scenario& base, std::uint64_t seed, std::size_t set_index,
                                        const SweepOptions& options);

/// For every slot size and stream set, greedy admission with the residence
/// interval virtual-slot PDC guarantees at target = histogram max.
SweepReport sweep_slot_sizes(const Scenario& base, const SweepOptions& options);

/// Worker count: TSNPDC_THREADS caps the hardware concurrency.
unsigned worker_threads(unsigned requested = 0);

enum class ReportFormat { Csv, Json };
ReportFormat format_for_path(const std::string& path);

std::string report_csv(const MetricsReport& report);
std::string report_json(const MetricsReport& report);
std::string report_csv(const SweepReport& report);
std::string report_json(const SweepReport& report);
void emit_report(const MetricsReport& report, ReportFormat format, const std::string& path);
void emit_report(const SweepReport& report, ReportFormat format, const std::string& path);

}  // namespace tsnpdc
