// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <unordered_set>
#include <vector>

#include "tsnpdc/time.hpp"

namespace tsnpdc::sim {

/// Tie-break classes for events at the same instant; lower fires first.
enum class Priority : std::uint8_t {
  GateChange = 0,
  FrameArrival = 1,
  TransmissionStart = 2,
};

class Engine;

using Action = std::function<void(Engine&)>;

struct EventHandle {
  std::uint64_t sequence = 0;
};

/// Deterministic discrete-event engine. Events are ordered by
/// (fire_at, priority, insertion sequence), so no two events compare equal.
class Engine {
 public:
  TimeNs now() const { return now_; }

  /// Throws PastEvent if `fire_at` is before now().
  EventHandle schedule(TimeNs fire_at, Priority priority, Action action);

  /// Returns false if the event already fired or was cancelled.
  bool cancel(EventHandle handle);

  /// Executes every event with fire_at <= t_end and leaves now() == t_end.
  std::uint64_t run_until(TimeNs t_end);

  std::size_t pending() const { return heap_.size() - cancelled_.size(); }
  std::uint64_t fired_total() const { return fired_total_; }

 private:
  struct Event {
    TimeNs fire_at;
    Priority priority;
    std::uint64_t sequence;
    Action action;
  };
  static bool later(const Event& a, const Event& b);

  void push(Event ev);
  Event pop();

  std::vector<Event> heap_;
  std::unordered_set<std::uint64_t> cancelled_;
  std::unordered_set<std::uint64_t> live_;
  TimeNs now_{};
  std::uint64_t next_sequence_ = 1;
  std::uint64_t fired_total_ = 0;
};

}  // namespace tsnpdc::sim
