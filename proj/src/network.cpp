// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsnpdc/network.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace tsnpdc {

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::EndStation: return "end-station";
    case NodeKind::TsnBridge: return "tsn-bridge";
    case NodeKind::SixgBridge: return "sixg-bridge";
  }
  return "?";
}

const char* to_string(Direction direction) {
  switch (direction) {
    case Direction::Wired: return "wired";
    case Direction::Uplink: return "uplink";
    case Direction::Downlink: return "downlink";
  }
  return "?";
}

NodeKind parse_node_kind(std::string_view text) {
  if (text == "end-station") return NodeKind::EndStation;
  if (text == "tsn-bridge") return NodeKind::TsnBridge;
  if (text == "sixg-bridge") return NodeKind::SixgBridge;
  throw BadParams("unknown node kind '" + std::string(text) + "'");
}

Direction parse_direction(std::string_view text) {
  if (text == "wired") return Direction::Wired;
  if (text == "uplink") return Direction::Uplink;
  if (text == "downlink") return Direction::Downlink;
  throw BadParams("unknown direction '" + std::string(text) + "'");
}

Topology::Topology(std::vector<Node> nodes, std::vector<Link> links)
    : nodes_(std::move(nodes)), links_(std::move(links)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) node_by_id_.emplace(nodes_[i].id, i);
  for (std::size_t i = 0; i < links_.size(); ++i) link_by_id_.emplace(links_[i].id, i);
}

std::optional<std::size_t> Topology::node_index(std::string_view id) const {
  auto it = node_by_id_.find(std::string(id));
  if (it == node_by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Topology::link_index(std::string_view id) const {
  auto it = link_by_id_.find(std::string(id));
  if (it == link_by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Topology::link_between(std::string_view a, std::string_view b) const {
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const auto& l = links_[i];
    if ((l.a == a && l.b == b) || (l.a == b && l.b == a)) return i;
  }
  return std::nullopt;
}

bool Topology::is_device_side(std::size_t node, std::size_t link) const {
  const auto& n = nodes_.at(node);
  return std::find(n.device_side.begin(), n.device_side.end(), links_.at(link).id) != n.device_side.end();
}

TimeNs transmission_time(std::uint64_t frame_size, std::uint64_t speed_bps) {
  if (speed_bps == 0) throw BadParams("link speed must be positive");
  // bits * 1e9 / speed, rounded up; split to stay inside 64 bits.
  const std::uint64_t bits = (frame_size + kWireOverheadBytes) * 8;
  const std::uint64_t whole = bits / speed_bps;
  const std::uint64_t rest = bits % speed_bps;
  const uint128 frac = static_cast<uint128>(rest) * 1'000'000'000u;
  const auto frac_ns = static_cast<std::uint64_t>((frac + speed_bps - 1) / speed_bps);
  return TimeNs{whole} * 1'000'000'000 + TimeNs{frac_ns};
}

TimeNs hypercycle(std::span<const TimeNs> periods) {
  if (periods.empty()) throw BadParams("hypercycle of an empty period set");
  std::uint64_t acc = 1;
  for (TimeNs p : periods) {
    if (p.count() == 0) throw BadParams("period must be positive");
    const std::uint64_t g = std::gcd(acc, p.count());
    const uint128 l = static_cast<uint128>(acc / g) * p.count();
    if (l >= TimeNs::kLimit) throw TimeOverflow("hypercycle exceeds 2^63 ns");
    acc = static_cast<std::uint64_t>(l);
  }
  return TimeNs{acc};
}

Frame push_rtag(Frame frame, std::uint16_t slot_id) {
  frame.rtags.insert(frame.rtags.begin(), RTag{0, slot_id});
  return frame;
}

std::pair<Frame, std::uint16_t> pop_rtag(Frame frame) {
  if (frame.rtags.empty()) throw MissingTag("frame carries no PDC R-Tag");
  const std::uint16_t slot = frame.rtags.front().sequence_number;
  frame.rtags.erase(frame.rtags.begin());
  return {std::move(frame), slot};
}

std::optional<std::vector<Hop>> resolve_route(const Topology& topology, const Stream& stream) {
  auto at = topology.node_index(stream.talker);
  auto dest = topology.node_index(stream.listener);
  if (!at || !dest || stream.route.empty()) return std::nullopt;
  std::vector<Hop> hops;
  std::set<std::size_t> visited{*at};
  std::size_t cur = *at;
  for (const auto& lid : stream.route) {
    auto li = topology.link_index(lid);
    if (!li) return std::nullopt;
    const auto& link = topology.links()[*li];
    auto a = topology.node_index(link.a);
    auto b = topology.node_index(link.b);
    if (!a || !b) return std::nullopt;
    std::size_t next;
    if (*a == cur)
      next = *b;
    else if (*b == cur)
      next = *a;
    else
      return std::nullopt;
    if (!visited.insert(next).second) return std::nullopt;
    hops.push_back(Hop{*li, cur, next});
    cur = next;
  }
  if (cur != *dest) return std::nullopt;
  return hops;
}

std::vector<std::string> validate_scenario(const Topology& topology, std::span<const Stream> streams) {
  std::vector<std::string> out;
  for (const auto& l : topology.links()) {
    if (!topology.node_index(l.a) || !topology.node_index(l.b))
      out.push_back("link " + l.id + " references an unknown node");
    if (l.speed_bps == 0) out.push_back("link " + l.id + " has zero speed");
  }
  for (const auto& n : topology.nodes()) {
    for (const auto& lid : n.device_side) {
      auto li = topology.link_index(lid);
      if (!li || (topology.links()[*li].a != n.id && topology.links()[*li].b != n.id))
        out.push_back("node " + n.id + " lists device-side link " + lid + " that is not attached to it");
    }
  }

  std::set<std::string> ids;
  for (const auto& s : streams) {
    const std::string who = "stream " + s.id;
    if (!ids.insert(s.id).second) out.push_back(who + ": duplicate id");
    if (s.pcp > 7) out.push_back(who + ": PCP out of range");
    if (s.period.count() == 0) out.push_back(who + ": period must be positive");
    if (s.deadline.count() == 0) out.push_back(who + ": deadline must be positive");
    if (s.phase >= s.period && s.period.count() != 0) out.push_back(who + ": phase must be inside the period");
    if (!(s.reliability > 0.0 && s.reliability <= 1.0)) out.push_back(who + ": reliability outside (0,1]");
    for (const auto& lid : s.route)
      if (!topology.link_index(lid)) out.push_back(who + ": route references missing link " + lid);

    auto hops = resolve_route(topology, s);
    if (!hops) {
      bool reported_missing = std::any_of(s.route.begin(), s.route.end(),
                                          [&](const auto& l) { return !topology.link_index(l); });
      if (!reported_missing) out.push_back(who + ": route is not a simple path from talker to listener");
      continue;
    }
    int crossings = 0;
    bool direction_ok = true;
    for (std::size_t h = 0; h + 1 < hops->size(); ++h) {
      const std::size_t node = (*hops)[h].to;
      if (topology.nodes()[node].kind != NodeKind::SixgBridge) continue;
      ++crossings;
      const bool in_device = topology.is_device_side(node, (*hops)[h].link);
      const bool out_device = topology.is_device_side(node, (*hops)[h + 1].link);
      Direction actual = in_device && !out_device   ? Direction::Uplink
                         : !in_device && out_device ? Direction::Downlink
                                                    : Direction::Wired;
      if (actual != s.direction) direction_ok = false;
    }
    if (topology.nodes()[hops->front().from].kind == NodeKind::SixgBridge ||
        topology.nodes()[hops->back().to].kind == NodeKind::SixgBridge)
      out.push_back(who + ": a sixg-bridge cannot be a talker or listener");

    if (s.direction == Direction::Wired) {
      if (crossings != 0) out.push_back(who + ": wired stream crosses a sixg-bridge");
    } else {
      if (crossings != 1)
        out.push_back(who + ": wireless stream must cross exactly one sixg-bridge (crosses " +
                      std::to_string(crossings) + ")");
      else if (!direction_ok)
        out.push_back(who + ": declared " + to_string(s.direction) + " but route crosses the bridge the other way");
    }
  }
  return out;
}

}  // namespace tsnpdc
