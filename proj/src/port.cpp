// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsnpdc/port.hpp"

#include <algorithm>

namespace tsnpdc {

GateControlList::GateControlList(TimeNs cycle_time, TimeNs base_time, std::vector<GclEntry> entries)
    : cycle_time_(cycle_time), base_time_(base_time), entries_(std::move(entries)) {
  if (cycle_time_.count() == 0) throw BadParams("GCL cycle time must be positive");
  if (entries_.empty()) throw BadParams("GCL needs at least one entry");
  std::uint64_t sum = 0;
  for (const auto& e : entries_) {
    if (e.duration.count() == 0) throw BadParams("GCL entry durations must be positive");
    sum += e.duration.count();
  }
  if (sum != cycle_time_.count()) throw BadParams("GCL durations must sum to the cycle time");

  const std::uint64_t cycle = cycle_time_.count();
  for (unsigned q = 0; q < kNumQueues; ++q) {
    auto& list = open_[q];
    std::uint64_t at = 0;
    for (const auto& e : entries_) {
      if (e.gate_states & (1u << q)) {
        if (!list.empty() && list.back().end == at)
          list.back().end = at + e.duration.count();
        else
          list.push_back({at, at + e.duration.count()});
      }
      at += e.duration.count();
    }
    if (list.size() == 1 && list.front().start == 0 && list.front().end == cycle) {
      always_open_[q] = true;
    } else if (list.size() >= 2 && list.front().start == 0 && list.back().end == cycle) {
      list.back().end = cycle + list.front().end;
      list.erase(list.begin());
    }
  }
}

GateControlList GateControlList::always_open(TimeNs cycle_time) {
  return GateControlList(cycle_time, TimeNs{}, {{0xFF, cycle_time}});
}

double GateControlList::utilization() const {
  std::uint64_t open = 0;
  for (const auto& e : entries_)
    if (e.gate_states != 0) open += e.duration.count();
  return static_cast<double>(open) / static_cast<double>(cycle_time_.count());
}

std::uint64_t GateControlList::phase_of(TimeNs t) const {
  const std::uint64_t cycle = cycle_time_.count();
  if (t >= base_time_) return (t - base_time_).count() % cycle;
  return (cycle - (base_time_ - t).count() % cycle) % cycle;
}

GateState GateControlList::state(unsigned queue, TimeNs t) const {
  if (queue >= kNumQueues) throw BadParams("queue index out of range");
  if (always_open_[queue]) return {true, t + cycle_time_};
  const auto& list = open_[queue];
  if (list.empty()) return {false, t};
  const std::uint64_t x = phase_of(t);
  auto it = std::upper_bound(list.begin(), list.end(), x,
                             [](std::uint64_t v, const Interval& iv) { return v < iv.start; });
  if (it != list.begin()) {
    const auto& iv = *std::prev(it);
    if (x < iv.end) return {true, t + TimeNs{iv.end - x}};
  }
  // Head of a wrapped interval that started in the previous cycle.
  const auto& last = list.back();
  const std::uint64_t xw = x + cycle_time_.count();
  if (last.start <= xw && xw < last.end) return {true, t + TimeNs{last.end - xw}};
  return {false, t};
}

std::optional<TimeNs> GateControlList::next_open_start(unsigned queue, TimeNs t) const {
  if (queue >= kNumQueues) throw BadParams("queue index out of range");
  const auto& list = open_[queue];
  if (always_open_[queue] || list.empty()) return std::nullopt;
  const std::uint64_t x = phase_of(t);
  auto it = std::upper_bound(list.begin(), list.end(), x,
                             [](std::uint64_t v, const Interval& iv) { return v < iv.start; });
  if (it != list.end()) return t + TimeNs{it->start - x};
  return t + TimeNs{list.front().start + cycle_time_.count() - x};
}

GateState gate_open(const GateControlList& gcl, unsigned queue, TimeNs t) { return gcl.state(queue, t); }

EgressPort::EgressPort(std::size_t node, std::size_t link, std::uint64_t speed_bps, GateControlList gcl,
                       std::optional<std::size_t> queue_capacity)
    : node_(node), link_(link), speed_bps_(speed_bps), gcl_(std::move(gcl)), capacity_(queue_capacity) {
  if (speed_bps_ == 0) throw BadParams("egress port speed must be positive");
}

void EgressPort::enqueue(sim::Engine& engine, Frame frame, unsigned queue) {
  if (queue >= kNumQueues) throw BadParams("queue index out of range");
  auto& q = queues_[queue];
  if (capacity_ && q.size() >= *capacity_)
    throw QueueOverflow("queue " + std::to_string(queue) + " of port on link " + std::to_string(link_) +
                        " is full");
  frame.trace.push_back({node_, engine.now(), engine.now()});
  q.push_back(std::move(frame));
  std::size_t total = 0;
  for (const auto& each : queues_) total += each.size();
  max_depth_ = std::max(max_depth_, total);
  if (idle(engine.now())) request_selection(engine, engine.now());
}

std::optional<Frame> EgressPort::select_transmission(TimeNs t) {
  if (!idle(t)) return std::nullopt;
  for (int q = kNumQueues - 1; q >= 0; --q) {
    auto& queue = queues_[static_cast<unsigned>(q)];
    if (queue.empty()) continue;
    const GateState gate = gcl_.state(static_cast<unsigned>(q), t);
    if (!gate.open) continue;
    const TimeNs tx = transmission_time(queue.front().size, speed_bps_);
    if (t + tx > gate.open_until) continue;
    Frame f = std::move(queue.front());
    queue.pop_front();
    busy_until_ = t + tx;
    busy_time_ += tx;
    ++transmitted_;
    if (!f.trace.empty()) f.trace.back().dequeue = t;
    return f;
  }
  return std::nullopt;
}

void EgressPort::request_selection(sim::Engine& engine, TimeNs at) {
  if (selection_pending_at_ && *selection_pending_at_ == at) return;
  selection_pending_at_ = at;
  engine.schedule(at, sim::Priority::TransmissionStart, [this](sim::Engine& e) {
    selection_pending_at_.reset();
    run_selection(e);
  });
}

void EgressPort::run_selection(sim::Engine& engine) {
  const TimeNs t = engine.now();
  if (!idle(t)) return;
  if (auto f = select_transmission(t)) {
    const TimeNs end = busy_until_;
    if (transmit_) transmit_(engine, std::move(*f), t, end);
    request_selection(engine, end);
    return;
  }
  // Nothing eligible: wake up at the next gate opening of a backlogged queue.
  std::optional<TimeNs> wake;
  for (unsigned q = 0; q < kNumQueues; ++q) {
    if (queues_[q].empty()) continue;
    if (auto next = gcl_.next_open_start(q, t)) wake = wake ? std::min(*wake, *next) : *next;
  }
  if (!wake || (wake_pending_at_ && *wake_pending_at_ <= *wake && *wake_pending_at_ > t)) return;
  wake_pending_at_ = *wake;
  engine.schedule(*wake, sim::Priority::GateChange, [this](sim::Engine& e) {
    if (wake_pending_at_ && *wake_pending_at_ == e.now()) wake_pending_at_.reset();
    request_selection(e, e.now());
  });
}

}  // namespace tsnpdc
