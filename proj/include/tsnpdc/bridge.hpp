// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tsnpdc/delay.hpp"
#include "tsnpdc/network.hpp"

namespace tsnpdc {

enum class PdcMode { Off, Timestamp, VirtualSlot };

const char* to_string(PdcMode mode);
PdcMode parse_pdc_mode(std::string_view text);

/// Packet delay correction settings of one logical 6G-TSN bridge.
struct PdcConfig {
  PdcMode mode = PdcMode::Off;
  /// Per-stream target residence time, keyed by stream id.
  std::map<std::string, TimeNs> per_stream;
  /// Fallback for streams without a mapping. The per-direction values, when
  /// set, take precedence over `default_target`.
  TimeNs default_target{};
  std::optional<TimeNs> default_uplink;
  std::optional<TimeNs> default_downlink;
  TimeNs slot_size = us(100);
  bool drop_late = true;
  /// Virtual-slot mode only: instead of slot mechanics, hold to the target and
  /// add uniform jitter in [0, slot_size), as a slot-emulating simulator does.
  bool emulate_uniform_jitter = false;
  /// DS-TT clock offset relative to the NW-TT clock, in ns.
  std::int64_t sync_error_ns = 0;

  TimeNs target_for(const std::string& stream_id, Direction direction) const;
};

/// Rounds every virtual-slot target up to a multiple of the slot size and
/// checks the 16-bit wrap horizon (target and max delay - target both under
/// 2^15 slots). Returns one warning per rounded target; throws BadParams on
/// an invalid config.
std::vector<std::string> normalize_pdc(PdcConfig& config, TimeNs max_wireless_delay);

/// Synchronized slot counter: slot k covers [epoch + k*slot, epoch + (k+1)*slot).
struct SlotClock {
  TimeNs slot_size = us(100);
  TimeNs epoch{};

  std::uint64_t slot_of(TimeNs t) const;
  std::uint16_t slot_id(TimeNs t) const { return static_cast<std::uint16_t>(slot_of(t) & 0xFFFF); }
  TimeNs slot_start(std::uint64_t slot) const { return epoch + slot_size * slot; }
};

/// Ingress TT: timestamp mode annotates T_i = t_in; virtual-slot mode pushes
/// an R-Tag carrying the 16-bit ingress slot ID.
Frame ingress_mark(Frame frame, TimeNs t_in, const PdcConfig& config, const SlotClock& clock);

/// Arrival instant at the egress TT after one draw from the direction's
/// delay distribution.
TimeNs wireless_traverse(TimeNs t_in, Direction direction, const DelayHistogram& uplink,
                         const DelayHistogram& downlink, Rng& rng);

struct Release {
  TimeNs at;
};
struct Drop {
  std::string reason;
};
struct Forward {};
using ReleaseDecision = std::variant<Release, Drop, Forward>;

/// Egress TT hold decision. `extra_hold` is added to the timestamp-mode
/// release (used for uniform-jitter emulation). Late frames are dropped when
/// drop_late is set and forwarded immediately otherwise. Throws ModeMismatch
/// if the frame was not marked under the configured mode.
ReleaseDecision compute_release(const Frame& frame, TimeNs t_arrival, TimeNs target, const PdcConfig& config,
                                const SlotClock& clock, TimeNs extra_hold = {});

/// Hold-and-forward buffer at an egress TT.
class HoldBuffer {
 public:
  explicit HoldBuffer(bool strip_pdc_tag = false) : strip_pdc_tag_(strip_pdc_tag) {}

  /// `ingress_order` breaks ties between equal release instants.
  void hold(TimeNs release_at, std::uint64_t ingress_order, Frame frame);

  std::size_t size() const { return pending_.size(); }
  std::size_t high_water_mark() const { return high_water_; }
  std::optional<TimeNs> next_release() const;

 private:
  friend std::vector<Frame> egress_release(HoldBuffer& buffer, TimeNs t);

  struct Entry {
    TimeNs release_at;
    std::uint64_t order;
    mutable Frame frame;
    bool operator<(const Entry& o) const {
      return release_at != o.release_at ? release_at < o.release_at : order < o.order;
    }
  };
  std::set<Entry> pending_;
  bool strip_pdc_tag_;
  std::size_t high_water_ = 0;
};

/// Pops every frame due at or before t, in release order, removing the PDC
/// R-Tag in virtual-slot mode.
std::vector<Frame> egress_release(HoldBuffer& buffer, TimeNs t);

}  // namespace tsnpdc
