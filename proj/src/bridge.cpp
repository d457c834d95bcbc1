// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsnpdc/bridge.hpp"

namespace tsnpdc {

namespace {

constexpr std::uint64_t kWrapHorizonSlots = std::uint64_t{1} << 15;

bool uses_timestamps(const PdcConfig& config) {
  return config.mode == PdcMode::Timestamp ||
         (config.mode == PdcMode::VirtualSlot && config.emulate_uniform_jitter);
}

TimeNs round_up(TimeNs value, TimeNs step) {
  const std::uint64_t rem = value.count() % step.count();
  return rem == 0 ? value : value + TimeNs{step.count() - rem};
}

}  // namespace

const char* to_string(PdcMode mode) {
  switch (mode) {
    case PdcMode::Off: return "off";
    case PdcMode::Timestamp: return "timestamp";
    case PdcMode::VirtualSlot: return "virtual_slot";
  }
  return "?";
}

PdcMode parse_pdc_mode(std::string_view text) {
  if (text == "off") return PdcMode::Off;
  if (text == "timestamp") return PdcMode::Timestamp;
  if (text == "virtual_slot") return PdcMode::VirtualSlot;
  throw BadParams("unknown PDC mode '" + std::string(text) + "'");
}

TimeNs PdcConfig::target_for(const std::string& stream_id, Direction direction) const {
  if (auto it = per_stream.find(stream_id); it != per_stream.end()) return it->second;
  if (direction == Direction::Uplink && default_uplink) return *default_uplink;
  if (direction == Direction::Downlink && default_downlink) return *default_downlink;
  return default_target;
}

std::vector<std::string> normalize_pdc(PdcConfig& config, TimeNs max_wireless_delay) {
  std::vector<std::string> warnings;
  if (config.mode != PdcMode::VirtualSlot) return warnings;
  if (config.slot_size.count() == 0) throw BadParams("virtual-slot PDC needs a positive slot size");
  auto fix = [&](TimeNs& target, const std::string& what) {
    const TimeNs rounded = round_up(target, config.slot_size);
    if (rounded != target)
      warnings.push_back(what + " target " + format_duration(target) + " rounded up to " +
                         format_duration(rounded) + " (slot " + format_duration(config.slot_size) + ")");
    target = rounded;
    // The egress slot is unwrapped with a signed 16-bit distance from the
    // arrival slot, which lies in [target - max delay, target] slots.
    const std::uint64_t hold = target / config.slot_size;
    const std::uint64_t span = max_wireless_delay / config.slot_size + 1;
    if (hold >= kWrapHorizonSlots || (span > hold && span - hold > kWrapHorizonSlots))
      throw BadParams(what + " target " + format_duration(target) +
                      " exceeds the unambiguous 16-bit slot horizon for slot " + format_duration(config.slot_size));
  };
  fix(config.default_target, "default");
  if (config.default_uplink) fix(*config.default_uplink, "uplink default");
  if (config.default_downlink) fix(*config.default_downlink, "downlink default");
  for (auto& [id, target] : config.per_stream) fix(target, "stream " + id);
  return warnings;
}

std::uint64_t SlotClock::slot_of(TimeNs t) const {
  if (t < epoch) throw BadParams("instant precedes the slot clock epoch");
  return (t - epoch) / slot_size;
}

Frame ingress_mark(Frame frame, TimeNs t_in, const PdcConfig& config, const SlotClock& clock) {
  if (config.mode == PdcMode::Off) throw ModeMismatch("ingress_mark called with PDC off");
  if (uses_timestamps(config)) {
    frame.ingress_timestamp = t_in;
    return frame;
  }
  return push_rtag(std::move(frame), clock.slot_id(t_in));
}

TimeNs wireless_traverse(TimeNs t_in, Direction direction, const DelayHistogram& uplink,
                         const DelayHistogram& downlink, Rng& rng) {
  switch (direction) {
    case Direction::Uplink: return t_in + uplink.sample(rng);
    case Direction::Downlink: return t_in + downlink.sample(rng);
    case Direction::Wired: break;
  }
  throw BadParams("wireless traversal needs an uplink or downlink direction");
}

ReleaseDecision compute_release(const Frame& frame, TimeNs t_arrival, TimeNs target, const PdcConfig& config,
                                const SlotClock& clock, TimeNs extra_hold) {
  auto late = [&]() -> ReleaseDecision {
    if (config.drop_late) return Drop{"late"};
    return Forward{};
  };
  switch (config.mode) {
    case PdcMode::Off:
      return Forward{};
    case PdcMode::Timestamp:
    case PdcMode::VirtualSlot:
      break;
  }
  if (uses_timestamps(config)) {
    if (!frame.ingress_timestamp) throw ModeMismatch("frame carries no ingress timestamp");
    const TimeNs t_in = *frame.ingress_timestamp;
    const TimeNs residence = t_arrival >= t_in ? t_arrival - t_in : TimeNs{};
    if (residence > target) return late();
    return Release{t_in + target + extra_hold};
  }

  if (frame.rtags.empty()) throw ModeMismatch("frame carries no PDC R-Tag");
  if (target.count() % clock.slot_size.count() != 0)
    throw BadParams("virtual-slot target must be a multiple of the slot size");
  const std::uint64_t hold_slots = target / clock.slot_size;
  if (hold_slots >= kWrapHorizonSlots) throw BadParams("virtual-slot target exceeds the 16-bit slot horizon");
  const auto egress_id = static_cast<std::uint16_t>(frame.rtags.front().sequence_number + hold_slots);
  const std::uint64_t now_slot = clock.slot_of(t_arrival);
  const auto delta = static_cast<std::int16_t>(static_cast<std::uint16_t>(egress_id - (now_slot & 0xFFFF)));
  if (delta < 0 && static_cast<std::uint64_t>(-delta) > now_slot) return late();
  const std::uint64_t release_slot = now_slot + static_cast<std::uint64_t>(static_cast<std::int64_t>(delta));
  const TimeNs at = clock.slot_start(release_slot);
  if (at < t_arrival) return late();
  return Release{at};
}

void HoldBuffer::hold(TimeNs release_at, std::uint64_t ingress_order, Frame frame) {
  pending_.insert(Entry{release_at, ingress_order, std::move(frame)});
  high_water_ = std::max(high_water_, pending_.size());
}

std::optional<TimeNs> HoldBuffer::next_release() const {
  if (pending_.empty()) return std::nullopt;
  return pending_.begin()->release_at;
}

std::vector<Frame> egress_release(HoldBuffer& buffer, TimeNs t) {
  std::vector<Frame> out;
  while (!buffer.pending_.empty() && buffer.pending_.begin()->release_at <= t) {
    auto node = buffer.pending_.extract(buffer.pending_.begin());
    Frame f = std::move(node.value().frame);
    if (buffer.strip_pdc_tag_) f = pop_rtag(std::move(f)).first;
    f.ingress_timestamp.reset();
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace tsnpdc
