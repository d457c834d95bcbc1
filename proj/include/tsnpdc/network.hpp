// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tsnpdc/time.hpp"

namespace tsnpdc {

enum class NodeKind { EndStation, TsnBridge, SixgBridge };
enum class Direction { Wired, Uplink, Downlink };

const char* to_string(NodeKind kind);
const char* to_string(Direction direction);
NodeKind parse_node_kind(std::string_view text);
Direction parse_direction(std::string_view text);

struct Node {
  std::string id;
  NodeKind kind = NodeKind::EndStation;
  /// Sixg-bridge only: links attached to DS-TT ports. Every other link of the
  /// node is attached to the NW-TT.
  std::vector<std::string> device_side;
};

struct Link {
  std::string id;
  std::string a;
  std::string b;
  std::uint64_t speed_bps = 100'000'000;
  TimeNs propagation = ns(50);
};

/// One directed traversal of a link: the frame leaves `from` and enters `to`.
struct Hop {
  std::size_t link = 0;
  std::size_t from = 0;
  std::size_t to = 0;
};

class Topology {
 public:
  Topology() = default;
  Topology(std::vector<Node> nodes, std::vector<Link> links);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }

  std::optional<std::size_t> node_index(std::string_view id) const;
  std::optional<std::size_t> link_index(std::string_view id) const;
  /// Link connecting two nodes, if any.
  std::optional<std::size_t> link_between(std::string_view a, std::string_view b) const;

  /// True if `link` attaches to a DS-TT port of sixg-bridge `node`.
  bool is_device_side(std::size_t node, std::size_t link) const;

 private:
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::unordered_map<std::string, std::size_t> node_by_id_;
  std::unordered_map<std::string, std::size_t> link_by_id_;
};

struct Stream {
  std::string id;
  std::string talker;
  std::string listener;
  std::vector<std::string> route;  // link ids, talker to listener
  TimeNs period = ms(20);
  /// Release instant of each frame within its period at the talker.
  TimeNs phase{};
  std::uint32_t frame_size = 100;  // MAC frame bytes incl. header and FCS
  TimeNs deadline = ms(20);
  /// Zero means no jitter requirement.
  TimeNs jitter_req{};
  std::uint8_t pcp = 7;
  double reliability = 1.0;
  Direction direction = Direction::Wired;
};

/// IEEE 802.1CB redundancy tag as carried in the frame header.
struct RTag {
  std::uint16_t reserved = 0;
  std::uint16_t sequence_number = 0;
  friend bool operator==(const RTag&, const RTag&) = default;
};

struct HopRecord {
  std::size_t node = 0;
  TimeNs enqueue;
  TimeNs dequeue;
};

struct Frame {
  std::size_t stream = 0;  // index into the scenario's stream list
  std::uint64_t seq = 0;
  TimeNs talker_tx_time;
  std::uint32_t size = 0;
  /// Outermost tag first.
  std::vector<RTag> rtags;
  std::vector<HopRecord> trace;

  // Bridge-internal annotations; never leave the sixg-bridge.
  std::optional<TimeNs> ingress_timestamp;
  TimeNs bridge_ingress;
  TimeNs bridge_egress;
};

inline constexpr std::uint32_t kWireOverheadBytes = 20;  // preamble 7 + SFD 1 + IPG 12

/// On-wire serialization time, rounded up to whole ns.
TimeNs transmission_time(std::uint64_t frame_size, std::uint64_t speed_bps);

/// Least common multiple of the periods; throws TimeOverflow past 2^63 ns.
TimeNs hypercycle(std::span<const TimeNs> periods);

Frame push_rtag(Frame frame, std::uint16_t slot_id);
/// Removes the outermost R-Tag only. Throws MissingTag on a tagless frame.
std::pair<Frame, std::uint16_t> pop_rtag(Frame frame);

/// Resolves a stream's route into directed hops; nullopt if any link is
/// missing or the links do not form a path from talker to listener.
std::optional<std::vector<Hop>> resolve_route(const Topology& topology, const Stream& stream);

/// Empty iff every route exists, every wireless stream crosses exactly one
/// sixg-bridge in its declared direction, and every PCP is in range.
std::vector<std::string> validate_scenario(const Topology& topology, std::span<const Stream> streams);

}  // namespace tsnpdc
