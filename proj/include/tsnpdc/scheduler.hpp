// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsnpdc/network.hpp"
#include "tsnpdc/port.hpp"

namespace tsnpdc {

struct ResidenceInterval {
  TimeNs lo;
  TimeNs hi;
  friend bool operator==(const ResidenceInterval&, const ResidenceInterval&) = default;
};

/// Residence time of a frame inside the logical 6G bridge, as assumed by the
/// scheduler. Wired hops have zero residence.
struct ResidenceModel {
  enum class Kind { Constant, Interval };
  Kind kind = Kind::Constant;
  ResidenceInterval uplink;
  ResidenceInterval downlink;
  /// Per-stream overrides (a PDC mapping with per-stream targets).
  std::map<std::string, ResidenceInterval> per_stream;

  static ResidenceModel constant(TimeNs uplink, TimeNs downlink);
  static ResidenceModel interval(ResidenceInterval uplink, ResidenceInterval downlink);
  ResidenceInterval for_stream(const Stream& stream) const;
  /// Throws BadParams if a constant model has lo != hi or any lo > hi.
  void validate() const;
};

struct ScheduledHop {
  std::string node;  // transmitting node
  std::string link;
  /// Transmission start of the frame released in the first period, measured
  /// from the hypercycle start. Not reduced modulo the hypercycle: a frame
  /// whose path crosses the hypercycle boundary keeps increasing offsets.
  TimeNs offset;
  unsigned queue = 7;
};

struct PortKey {
  std::string node;
  std::string link;
  friend auto operator<=>(const PortKey&, const PortKey&) = default;
};

struct Schedule {
  TimeNs hypercycle;
  std::map<std::string, std::vector<ScheduledHop>> streams;
  std::map<PortKey, GateControlList> gcls;
};

struct ScheduleReport {
  std::vector<std::string> scheduled;
  std::vector<std::string> rejected;
  std::map<std::string, TimeNs> latency_bound;
  std::map<std::string, TimeNs> jitter_bound;
  Schedule schedule;
};

struct SynthesisOptions {
  std::uint64_t step_budget = 10'000'000;
};

struct SynthesisResult {
  enum class Status { Feasible, Infeasible, Unknown };
  Status status = Status::Infeasible;
  std::optional<Schedule> schedule;
  /// Unsatisfied-constraint witness when not feasible.
  std::string witness;
  std::uint64_t steps = 0;
  explicit operator bool() const { return status == Status::Feasible; }
};

const char* to_string(SynthesisResult::Status status);

/// Per-stream offsets satisfying link non-overlap, path ordering, frame
/// isolation per egress queue against the full residence interval, and
/// deadlines. GCLs open each queue exactly over its transmission windows.
SynthesisResult synthesize(std::span<const Stream> streams, const Topology& topology, const ResidenceModel& residence,
                           const SynthesisOptions& options = {});

/// Greedy admission in (deadline, id) order; admitted streams keep their
/// offsets while later candidates are tried.
ScheduleReport max_schedulable(std::span<const Stream> candidates, const Topology& topology,
                               const ResidenceModel& residence, const SynthesisOptions& options = {});

/// Independent checker; one human-readable line per violation.
std::vector<std::string> verify_schedule(const Schedule& schedule, std::span<const Stream> streams,
                                         const Topology& topology, const ResidenceModel& residence);

/// Opens each queue of each port over the listed windows (taken modulo the
/// cycle). Windows are [start, start + length).
GateControlList derive_gcl(TimeNs cycle, const std::vector<std::pair<unsigned, std::pair<TimeNs, TimeNs>>>& windows);

std::string schedule_to_json(const Schedule& schedule);
Schedule schedule_from_json(const std::string& text);
void save_schedule(const Schedule& schedule, const std::string& path);
Schedule load_schedule(const std::string& path);

}  // namespace tsnpdc
