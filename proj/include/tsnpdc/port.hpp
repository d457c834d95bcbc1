// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "tsnpdc/network.hpp"
#include "tsnpdc/sim.hpp"

namespace tsnpdc {

inline constexpr unsigned kNumQueues = 8;

struct GclEntry {
  std::uint8_t gate_states = 0;  // bit q set: gate of queue q open
  TimeNs duration;
};

struct GateState {
  bool open = false;
  /// End of the current contiguous open interval (exclusive); equals t when
  /// closed; t + cycle_time for a gate that never closes.
  TimeNs open_until;
};

/// Cyclic 802.1Qbv gate control list. Gate intervals are half-open
/// [start, end): a gate that opens at t is open at t, one that closes at t is
/// closed at t.
class GateControlList {
 public:
  GateControlList() : GateControlList(ms(1), TimeNs{}, {{0xFF, ms(1)}}) {}
  /// Throws BadParams unless durations are positive and sum to cycle_time.
  GateControlList(TimeNs cycle_time, TimeNs base_time, std::vector<GclEntry> entries);

  static GateControlList always_open(TimeNs cycle_time);

  TimeNs cycle_time() const { return cycle_time_; }
  TimeNs base_time() const { return base_time_; }
  const std::vector<GclEntry>& entries() const { return entries_; }

  /// Fraction of the cycle during which at least one gate is open.
  double utilization() const;

  /// Earliest instant > t at which the gate of `queue` opens, i.e. the start
  /// of its next open interval. nullopt if the gate never opens.
  std::optional<TimeNs> next_open_start(unsigned queue, TimeNs t) const;

  GateState state(unsigned queue, TimeNs t) const;

 private:
  struct Interval {
    std::uint64_t start;  // cycle-relative
    std::uint64_t end;    // may exceed the cycle when wrapping
  };
  std::uint64_t phase_of(TimeNs t) const;

  TimeNs cycle_time_;
  TimeNs base_time_;
  std::vector<GclEntry> entries_;
  std::array<std::vector<Interval>, kNumQueues> open_;  // merged, sorted by start
  std::array<bool, kNumQueues> always_open_{};
};

GateState gate_open(const GateControlList& gcl, unsigned queue, TimeNs t);

/// 802.1Qbv egress port: up to eight FIFO queues, GCL-driven gates,
/// strict-priority selection with a gate-fit check, no preemption.
class EgressPort {
 public:
  /// Called when a frame starts transmission; `end` is when the last bit
  /// leaves the port.
  using TransmitFn = std::function<void(sim::Engine&, Frame, TimeNs start, TimeNs end)>;

  EgressPort(std::size_t node, std::size_t link, std::uint64_t speed_bps, GateControlList gcl,
             std::optional<std::size_t> queue_capacity = std::nullopt);

  void on_transmit(TransmitFn fn) { transmit_ = std::move(fn); }

  /// Appends to queue `queue` at engine.now(); schedules a selection if the
  /// port is idle. Throws QueueOverflow past the configured capacity.
  void enqueue(sim::Engine& engine, Frame frame, unsigned queue);

  /// Picks the highest-index non-empty queue whose gate is open at t and
  /// whose head frame fits before the gate closes; dequeues it and marks the
  /// port busy. Requires the port to be idle at t.
  std::optional<Frame> select_transmission(TimeNs t);

  bool idle(TimeNs t) const { return busy_until_ <= t; }
  TimeNs busy_until() const { return busy_until_; }
  const GateControlList& gcl() const { return gcl_; }
  std::size_t node() const { return node_; }
  std::size_t link() const { return link_; }
  std::size_t depth(unsigned queue) const { return queues_.at(queue).size(); }
  std::size_t max_depth() const { return max_depth_; }
  std::uint64_t transmitted() const { return transmitted_; }
  TimeNs busy_time() const { return busy_time_; }

 private:
  void request_selection(sim::Engine& engine, TimeNs at);
  void run_selection(sim::Engine& engine);

  std::size_t node_;
  std::size_t link_;
  std::uint64_t speed_bps_;
  GateControlList gcl_;
  std::optional<std::size_t> capacity_;
  std::array<std::deque<Frame>, kNumQueues> queues_;
  TransmitFn transmit_;
  TimeNs busy_until_{};
  std::optional<TimeNs> selection_pending_at_;
  std::optional<TimeNs> wake_pending_at_;
  std::size_t max_depth_ = 0;
  std::uint64_t transmitted_ = 0;
  TimeNs busy_time_{};
};

}  // namespace tsnpdc
