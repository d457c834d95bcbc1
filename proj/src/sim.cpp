// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsnpdc/sim.hpp"

#include <algorithm>

namespace tsnpdc::sim {

bool Engine::later(const Event& a, const Event& b) {
  if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
  if (a.priority != b.priority) return a.priority > b.priority;
  return a.sequence > b.sequence;
}

void Engine::push(Event ev) {
  heap_.push_back(std::move(ev));
  std::push_heap(heap_.begin(), heap_.end(), later);
}

Engine::Event Engine::pop() {
  std::pop_heap(heap_.begin(), heap_.end(), later);
  Event ev = std::move(heap_.back());
  heap_.pop_back();
  return ev;
}

EventHandle Engine::schedule(TimeNs fire_at, Priority priority, Action action) {
  if (fire_at < now_)
    throw PastEvent("event at " + std::to_string(fire_at.count()) + " ns is before now (" +
                    std::to_string(now_.count()) + " ns)");
  const std::uint64_t seq = next_sequence_++;
  push(Event{fire_at, priority, seq, std::move(action)});
  live_.insert(seq);
  return EventHandle{seq};
}

bool Engine::cancel(EventHandle handle) {
  if (live_.erase(handle.sequence) == 0) return false;
  cancelled_.insert(handle.sequence);
  return true;
}

std::uint64_t Engine::run_until(TimeNs t_end) {
  if (t_end < now_) throw PastEvent("run_until target is before now");
  std::uint64_t fired = 0;
  while (!heap_.empty() && heap_.front().fire_at <= t_end) {
    Event ev = pop();
    if (cancelled_.erase(ev.sequence) != 0) continue;
    live_.erase(ev.sequence);
    now_ = ev.fire_at;
    ev.action(*this);
    ++fired;
  }
  now_ = t_end;
  fired_total_ += fired;
  return fired;
}

}  // namespace tsnpdc::sim
