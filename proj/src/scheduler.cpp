// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsnpdc/scheduler.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace tsnpdc {

ResidenceModel ResidenceModel::constant(TimeNs uplink, TimeNs downlink) {
  ResidenceModel m;
  m.kind = Kind::Constant;
  m.uplink = {uplink, uplink};
  m.downlink = {downlink, downlink};
  return m;
}

ResidenceModel ResidenceModel::interval(ResidenceInterval uplink, ResidenceInterval downlink) {
  ResidenceModel m;
  m.kind = Kind::Interval;
  m.uplink = uplink;
  m.downlink = downlink;
  m.validate();
  return m;
}

ResidenceInterval ResidenceModel::for_stream(const Stream& stream) const {
  if (stream.direction == Direction::Wired) return {};
  if (auto it = per_stream.find(stream.id); it != per_stream.end()) return it->second;
  return stream.direction == Direction::Uplink ? uplink : downlink;
}

void ResidenceModel::validate() const {
  auto check = [this](const ResidenceInterval& r, const std::string& what) {
    if (r.lo > r.hi) throw BadParams(what + ": residence lo > hi");
    if (kind == Kind::Constant && r.lo != r.hi) throw BadParams(what + ": constant residence needs lo == hi");
  };
  check(uplink, "uplink");
  check(downlink, "downlink");
  for (const auto& [id, r] : per_stream) check(r, id);
}

const char* to_string(SynthesisResult::Status status) {
  switch (status) {
    case SynthesisResult::Status::Feasible: return "feasible";
    case SynthesisResult::Status::Infeasible: return "infeasible";
    case SynthesisResult::Status::Unknown: return "unknown";
  }
  return "?";
}

GateControlList derive_gcl(TimeNs cycle, const std::vector<std::pair<unsigned, std::pair<TimeNs, TimeNs>>>& windows) {
  const std::uint64_t c = cycle.count();
  // +1/-1 sweep per queue over [0, cycle).
  std::vector<std::tuple<std::uint64_t, unsigned, int>> events;
  for (const auto& [q, w] : windows) {
    if (q >= kNumQueues) throw BadParams("queue index out of range");
    const std::uint64_t len = w.second.count();
    if (len == 0) continue;
    if (len >= c) {
      events.emplace_back(0, q, +1);
      events.emplace_back(c, q, -1);
      continue;
    }
    const std::uint64_t a = w.first.count() % c;
    if (a + len <= c) {
      events.emplace_back(a, q, +1);
      events.emplace_back(a + len, q, -1);
    } else {
      events.emplace_back(a, q, +1);
      events.emplace_back(c, q, -1);
      events.emplace_back(0, q, +1);
      events.emplace_back(a + len - c, q, -1);
    }
  }
  std::sort(events.begin(), events.end());
  std::array<int, kNumQueues> open{};
  std::vector<GclEntry> entries;
  std::uint64_t pos = 0;
  auto mask = [&open] {
    std::uint8_t m = 0;
    for (unsigned q = 0; q < kNumQueues; ++q)
      if (open[q] > 0) m |= static_cast<std::uint8_t>(1u << q);
    return m;
  };
  auto emit = [&entries](std::uint8_t m, std::uint64_t len) {
    if (len == 0) return;
    if (!entries.empty() && entries.back().gate_states == m)
      entries.back().duration += ns(len);
    else
      entries.push_back({m, ns(len)});
  };
  for (std::size_t i = 0; i < events.size();) {
    const std::uint64_t at = std::get<0>(events[i]);
    emit(mask(), at - pos);
    pos = at;
    for (; i < events.size() && std::get<0>(events[i]) == at; ++i) open[std::get<1>(events[i])] += std::get<2>(events[i]);
  }
  emit(mask(), c - pos);
  return GateControlList(cycle, TimeNs{}, std::move(entries));
}

namespace {

// Half-open intervals on [0, H) with owners. Entries of different owners
// never overlap once committed.
class IntervalSet {
 public:
  struct Hit {
    std::uint64_t shift;  // how far the query start must move to clear it
    int owner;
  };

  void insert(std::uint64_t a, std::uint64_t b, int owner) {
    entries_.emplace(a, Entry{b, owner});
    max_len_ = std::max(max_len_, b - a);
  }

  void erase_owner(int owner) {
    std::erase_if(entries_, [owner](const auto& kv) { return kv.second.owner == owner; });
  }

  // First stored interval overlapping [a, b).
  std::optional<std::pair<std::uint64_t, int>> overlap(std::uint64_t a, std::uint64_t b) const {
    auto it = entries_.lower_bound(a > max_len_ ? a - max_len_ : 0);
    for (; it != entries_.end() && it->first < b; ++it)
      if (it->second.end > a) return std::pair{it->second.end, it->second.owner};
    return std::nullopt;
  }

  // Query [x, x + len) taken modulo h.
  std::optional<Hit> conflict(std::uint64_t x, std::uint64_t len, std::uint64_t h) const {
    if (entries_.empty() || len == 0) return std::nullopt;
    if (len >= h) return Hit{h, entries_.begin()->second.owner};
    const std::uint64_t a = x % h;
    if (auto o = overlap(a, std::min(a + len, h))) return Hit{o->first - a, o->second};
    if (a + len > h)
      if (auto o = overlap(0, a + len - h)) return Hit{o->first + h - a, o->second};
    return std::nullopt;
  }

  void insert_mod(std::uint64_t x, std::uint64_t len, std::uint64_t h, int owner) {
    if (len == 0) return;
    const std::uint64_t a = x % h;
    if (a + len <= h) {
      insert(a, a + len, owner);
    } else {
      insert(a, h, owner);
      insert(0, a + len - h, owner);
    }
  }

 private:
  struct Entry {
    std::uint64_t end;
    int owner;
  };
  std::multimap<std::uint64_t, Entry> entries_;
  std::uint64_t max_len_ = 0;
};

struct HopInfo {
  std::size_t link = 0, from = 0, to = 0;
  std::size_t port = 0;
  std::uint64_t tx = 0, prop = 0;
  // Residence at `to` before the next hop's egress queue.
  std::uint64_t res_lo = 0, res_hi = 0;
};

struct StreamInfo {
  const Stream* stream = nullptr;
  std::vector<HopInfo> hops;
  std::uint64_t period = 0, phase = 0, deadline = 0;
  unsigned queue = 7;
  // suffix[h]: minimum time from transmission start at hop h to listener arrival.
  std::vector<std::uint64_t> suffix;
};

enum class Outcome { Placed, Failed, Budget };

struct Placement {
  Outcome outcome = Outcome::Failed;
  std::vector<std::uint64_t> offsets;
  std::set<int> culprits;
  std::string witness;
};

class Solver {
 public:
  Solver(const Topology& topology, const ResidenceModel& residence, std::span<const Stream> streams,
         std::uint64_t budget)
      : topology_(topology), budget_(budget) {
    residence.validate();
    std::vector<TimeNs> periods;
    for (const auto& s : streams) periods.push_back(s.period);
    hypercycle_ = periods.empty() ? 1 : hypercycle(periods).count();
    for (const auto& s : streams) infos_.push_back(describe(s, residence));
    windows_.resize(port_ids_.size());
    occupancy_.resize(port_ids_.size());
  }

  std::uint64_t hypercycle_ns() const { return hypercycle_; }
  std::uint64_t steps() const { return steps_; }
  const StreamInfo& info(std::size_t i) const { return infos_.at(i); }
  bool routable(std::size_t i) const { return !infos_[i].hops.empty(); }

  Placement place(int idx) {
    const StreamInfo& si = infos_[static_cast<std::size_t>(idx)];
    Placement r;
    const std::size_t n = si.hops.size();
    const std::uint64_t H = hypercycle_;
    const std::uint64_t instances = H / si.period;
    std::vector<std::uint64_t> o(n, 0), lbx(n, 0);
    std::size_t h = 0;
    while (h < n) {
      const HopInfo& hop = si.hops[h];
      std::uint64_t earliest = si.phase, e_lo = si.phase;
      if (h > 0) {
        const HopInfo& prev = si.hops[h - 1];
        const std::uint64_t arr = o[h - 1] + prev.tx + prev.prop;
        earliest = arr + prev.res_hi;
        e_lo = arr + prev.res_lo;
      }
      std::uint64_t cand = std::max(earliest, lbx[h]);
      const std::uint64_t ub = si.phase + si.deadline >= si.suffix[h] ? si.phase + si.deadline - si.suffix[h] : 0;
      bool restarted = false;
      for (;;) {
        if (++steps_ > budget_) {
          r.outcome = Outcome::Budget;
          r.witness = "step budget exhausted";
          return r;
        }
        if (cand > ub || si.phase + si.deadline < si.suffix[h]) {
          r.witness = "stream " + si.stream->id + ": deadline cannot be met at hop " + std::to_string(h) + " (link " +
                      topology_.links()[hop.link].id + ")";
          return r;
        }
        bool moved = false;
        for (std::uint64_t k = 0; k < instances && !moved; ++k) {
          if (auto hit = windows_[hop.port].conflict(cand + k * si.period, hop.tx, H)) {
            r.culprits.insert(hit->owner);
            cand += hit->shift;
            moved = true;
          }
        }
        if (moved) continue;
        std::optional<IntervalSet::Hit> blocking;
        for (std::uint64_t k = 0; k < instances && !blocking; ++k)
            blocking = occupancy_[hop.port][si.queue].conflict(e_lo + k * si.period, cand - e_lo + 1, H);
        if (blocking) {
          r.culprits.insert(blocking->owner);
          if (h == 0 || blocking->shift >= H) {
            r.witness = "stream " + si.stream->id + ": frame isolation conflict with stream " +
                        infos_[static_cast<std::size_t>(blocking->owner)].stream->id + " at the talker port";
            return r;
          }
          // Only a later enqueue helps: push the previous hop back.
          lbx[h - 1] = o[h - 1] + blocking->shift;
          --h;
          restarted = true;
          break;
        }
        o[h] = cand;
        break;
      }
      if (!restarted) ++h;
    }
    r.outcome = Outcome::Placed;
    r.offsets = std::move(o);
    return r;
  }

  void commit(int idx, const std::vector<std::uint64_t>& offsets) {
    const StreamInfo& si = infos_[static_cast<std::size_t>(idx)];
    const std::uint64_t H = hypercycle_;
    for (std::size_t h = 0; h < si.hops.size(); ++h) {
      const HopInfo& hop = si.hops[h];
      std::uint64_t e_lo = si.phase;
      if (h > 0) e_lo = offsets[h - 1] + si.hops[h - 1].tx + si.hops[h - 1].prop + si.hops[h - 1].res_lo;
      for (std::uint64_t k = 0; k < H / si.period; ++k) {
        windows_[hop.port].insert_mod(offsets[h] + k * si.period, hop.tx, H, idx);
        occupancy_[hop.port][si.queue].insert_mod(e_lo + k * si.period, offsets[h] - e_lo + 1, H, idx);
      }
    }
    placed_[idx] = offsets;
  }

  void uncommit(int idx) {
    const StreamInfo& si = infos_[static_cast<std::size_t>(idx)];
    for (const auto& hop : si.hops) {
      windows_[hop.port].erase_owner(idx);
      occupancy_[hop.port][si.queue].erase_owner(idx);
    }
    placed_.erase(idx);
  }

  Schedule build() const {
    Schedule out;
    out.hypercycle = ns(hypercycle_);
    std::map<PortKey, std::vector<std::pair<unsigned, std::pair<TimeNs, TimeNs>>>> per_port;
    for (const auto& [idx, offsets] : placed_) {
      const StreamInfo& si = infos_[static_cast<std::size_t>(idx)];
      auto& hops = out.streams[si.stream->id];
      for (std::size_t h = 0; h < si.hops.size(); ++h) {
        const HopInfo& hop = si.hops[h];
        PortKey key{topology_.nodes()[hop.from].id, topology_.links()[hop.link].id};
        hops.push_back({key.node, key.link, ns(offsets[h]), si.queue});
        auto& w = per_port[key];
        for (std::uint64_t k = 0; k < hypercycle_ / si.period; ++k)
          w.push_back({si.queue, {ns(offsets[h] + k * si.period), ns(hop.tx)}});
      }
    }
    for (const auto& [key, w] : per_port) out.gcls.emplace(key, derive_gcl(out.hypercycle, w));
    return out;
  }

  TimeNs latency_bound(int idx) const {
    const StreamInfo& si = infos_[static_cast<std::size_t>(idx)];
    const auto& o = placed_.at(idx);
    const HopInfo& last = si.hops.back();
    return ns(o.back() + last.tx + last.prop - si.phase);
  }

 private:
  StreamInfo describe(const Stream& s, const ResidenceModel& residence) {
    StreamInfo si;
    si.stream = &s;
    si.period = s.period.count();
    si.phase = s.phase.count();
    si.deadline = s.deadline.count();
    si.queue = s.pcp;
    auto route = resolve_route(topology_, s);
    if (!route || si.period == 0 || si.queue >= kNumQueues) return si;
    const ResidenceInterval res = residence.for_stream(s);
    for (const Hop& hop : *route) {
      HopInfo hi;
      hi.link = hop.link;
      hi.from = hop.from;
      hi.to = hop.to;
      const Link& l = topology_.links()[hop.link];
      hi.tx = transmission_time(s.frame_size, l.speed_bps).count();
      hi.prop = l.propagation.count();
      if (topology_.nodes()[hop.to].kind == NodeKind::SixgBridge) {
        hi.res_lo = res.lo.count();
        hi.res_hi = res.hi.count();
      }
      const auto key = std::pair{hop.from, hop.link};
      auto [it, inserted] = port_ids_.emplace(key, port_ids_.size());
      hi.port = it->second;
      si.hops.push_back(hi);
    }
    si.suffix.assign(si.hops.size(), 0);
    std::uint64_t acc = 0;
    for (std::size_t h = si.hops.size(); h-- > 0;) {
      if (h + 1 < si.hops.size()) acc += si.hops[h].res_hi;
      acc += si.hops[h].tx + si.hops[h].prop;
      si.suffix[h] = acc;
    }
    return si;
  }

  const Topology& topology_;
  std::uint64_t budget_;
  std::uint64_t steps_ = 0;
  std::uint64_t hypercycle_ = 1;
  std::vector<StreamInfo> infos_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> port_ids_;
  std::vector<IntervalSet> windows_;
  std::vector<std::array<IntervalSet, kNumQueues>> occupancy_;
  std::map<int, std::vector<std::uint64_t>> placed_;
};

std::vector<std::size_t> admission_order(std::span<const Stream> streams) {
  std::vector<std::size_t> order(streams.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (streams[a].deadline != streams[b].deadline) return streams[a].deadline < streams[b].deadline;
    return streams[a].id < streams[b].id;
  });
  return order;
}

}  // namespace

SynthesisResult synthesize(std::span<const Stream> streams, const Topology& topology, const ResidenceModel& residence,
                           const SynthesisOptions& options) {
  SynthesisResult result;
  if (auto problems = validate_scenario(topology, streams); !problems.empty()) throw ValidationError(problems);
  Solver solver(topology, residence, streams, options.step_budget);

  std::vector<int> order;
  for (std::size_t i : admission_order(streams)) order.push_back(static_cast<int>(i));
  std::set<std::vector<int>> tried{order};
  std::size_t pos = 0;
  while (pos < order.size()) {
    Placement p = solver.place(order[pos]);
    result.steps = solver.steps();
    if (p.outcome == Outcome::Placed) {
      solver.commit(order[pos], p.offsets);
      ++pos;
      continue;
    }
    if (p.outcome == Outcome::Budget) {
      result.status = SynthesisResult::Status::Unknown;
      result.witness = p.witness;
      return result;
    }
    // Backjump: let the failing stream go ahead of its most recent culprit.
    std::vector<std::size_t> culprit_pos;
    for (std::size_t j = 0; j < pos; ++j)
      if (p.culprits.contains(order[j])) culprit_pos.push_back(j);
    bool jumped = false;
    for (auto it = culprit_pos.rbegin(); it != culprit_pos.rend() && !jumped; ++it) {
      std::vector<int> next = order;
      const int failing = next[pos];
      next.erase(next.begin() + static_cast<std::ptrdiff_t>(pos));
      next.insert(next.begin() + static_cast<std::ptrdiff_t>(*it), failing);
      if (!tried.insert(next).second) continue;
      for (std::size_t j = *it; j < pos; ++j) solver.uncommit(order[j]);
      order = std::move(next);
      pos = *it;
      jumped = true;
    }
    if (!jumped) {
      result.status = SynthesisResult::Status::Infeasible;
      result.witness = p.witness;
      return result;
    }
  }
  result.status = SynthesisResult::Status::Feasible;
  result.schedule = solver.build();
  return result;
}

ScheduleReport max_schedulable(std::span<const Stream> candidates, const Topology& topology,
                               const ResidenceModel& residence, const SynthesisOptions& options) {
  ScheduleReport report;
  Solver solver(topology, residence, candidates, options.step_budget);
  for (std::size_t i : admission_order(candidates)) {
    const int idx = static_cast<int>(i);
    const Stream& s = candidates[i];
    bool ok = false;
    if (solver.routable(i) && validate_scenario(topology, std::span<const Stream>(&s, 1)).empty()) {
      Placement p = solver.place(idx);
      if (p.outcome == Outcome::Placed) {
        solver.commit(idx, p.offsets);
        ok = true;
      }
    }
    if (ok) {
      report.scheduled.push_back(s.id);
      report.latency_bound[s.id] = solver.latency_bound(idx);
      report.jitter_bound[s.id] = TimeNs{};
    } else {
      report.rejected.push_back(s.id);
    }
  }
  report.schedule = solver.build();
  return report;
}

// ---------------------------------------------------------------------------
// Independent checker. Works on unwrapped absolute times and compares every
// pair of frame instances against every hypercycle shift that can matter.

namespace {

struct Span {
  std::int64_t a, b;  // half-open
  std::string stream;
  std::uint64_t instance;
};

bool overlaps_mod(const Span& x, const Span& y, std::int64_t h) {
  // Smallest and largest shift m with y + m*h possibly meeting x.
  const std::int64_t lo = (x.a - y.b) / h - 1;
  const std::int64_t hi = (x.b - y.a) / h + 1;
  for (std::int64_t m = lo; m <= hi; ++m)
    if (y.a + m * h < x.b && x.a < y.b + m * h) return true;
  return false;
}

std::string fmt(std::int64_t v) { return format_duration(ns(static_cast<std::uint64_t>(v < 0 ? -v : v))); }

}  // namespace

std::vector<std::string> verify_schedule(const Schedule& schedule, std::span<const Stream> streams,
                                         const Topology& topology, const ResidenceModel& residence) {
  std::vector<std::string> v;
  if (schedule.hypercycle == TimeNs{}) {
    v.push_back("hypercycle is zero");
    return v;
  }
  const auto H = schedule.hypercycle.signed_count();
  std::map<PortKey, std::vector<Span>> windows;
  std::map<std::pair<PortKey, unsigned>, std::vector<Span>> queues;

  for (const Stream& s : streams) {
    auto it = schedule.streams.find(s.id);
    if (it == schedule.streams.end()) {
      v.push_back(s.id + ": not in schedule");
      continue;
    }
    const auto& hops = it->second;
    if (H % s.period.signed_count() != 0) v.push_back(s.id + ": period does not divide the hypercycle");
    if (hops.size() != s.route.size()) {
      v.push_back(s.id + ": offset count does not match the route");
      continue;
    }
    ResidenceInterval res{};
    if (s.direction != Direction::Wired) {
      auto ov = residence.per_stream.find(s.id);
      res = ov != residence.per_stream.end() ? ov->second
                                              : (s.direction == Direction::Uplink ? residence.uplink : residence.downlink);
    }
    std::string prev_node = s.talker;
    std::int64_t arrive_lo = s.phase.signed_count(), arrive_hi = arrive_lo;
    bool route_ok = true;
    for (std::size_t h = 0; h < hops.size(); ++h) {
      const auto& hop = hops[h];
      auto li = topology.link_index(s.route[h]);
      if (!li || hop.link != s.route[h]) {
        v.push_back(s.id + ": hop " + std::to_string(h) + " is on the wrong link");
        route_ok = false;
        break;
      }
      const Link& link = topology.links()[*li];
      if (hop.node != prev_node || (link.a != prev_node && link.b != prev_node)) {
        v.push_back(s.id + ": hop " + std::to_string(h) + " transmitted by the wrong node");
        route_ok = false;
        break;
      }
      const std::string next_node = link.a == prev_node ? link.b : link.a;
      const std::int64_t o = hop.offset.signed_count();
      // Serialization time recomputed from first principles.
      const std::int64_t bits = (static_cast<std::int64_t>(s.frame_size) + 20) * 8;
      const std::int64_t tx = static_cast<std::int64_t>(
          (static_cast<uint128>(bits) * 1'000'000'000u + link.speed_bps - 1) / link.speed_bps);
      if (o < arrive_hi)
        v.push_back("C2 " + s.id + ": hop " + std::to_string(h) + " starts " + fmt(arrive_hi - o) +
                    " before the frame can be there");
      if (hop.queue >= 8) v.push_back(s.id + ": queue index out of range");
      const PortKey key{hop.node, hop.link};
      for (std::int64_t k = 0; k < H / s.period.signed_count(); ++k) {
        const std::int64_t shift = k * s.period.signed_count();
        windows[key].push_back({o + shift, o + tx + shift, s.id, static_cast<std::uint64_t>(k)});
        queues[{key, hop.queue}].push_back({arrive_lo + shift, o + 1 + shift, s.id, static_cast<std::uint64_t>(k)});
      }
      auto gcl = schedule.gcls.find(key);
      if (gcl == schedule.gcls.end()) {
        v.push_back("GCL missing for " + key.node + "/" + key.link);
      } else {
        const auto st = gcl->second.state(hop.queue, ns(static_cast<std::uint64_t>(o % H)));
        if (!st.open || (st.open_until - ns(static_cast<std::uint64_t>(o % H))).signed_count() < tx)
          v.push_back("GCL " + key.node + "/" + key.link + " does not open for " + s.id + " hop " + std::to_string(h));
      }
      arrive_lo = o + tx + link.propagation.signed_count();
      arrive_hi = arrive_lo;
      if (topology.node_index(next_node) &&
          topology.nodes()[*topology.node_index(next_node)].kind == NodeKind::SixgBridge) {
        arrive_lo += res.lo.signed_count();
        arrive_hi += res.hi.signed_count();
      }
      prev_node = next_node;
    }
    if (!route_ok) continue;
    if (prev_node != s.listener) v.push_back(s.id + ": route does not end at the listener");
    const std::int64_t latency = arrive_hi - s.phase.signed_count();
    if (latency > s.deadline.signed_count())
      v.push_back("C4 " + s.id + ": latency " + fmt(latency) + " exceeds deadline " + format_duration(s.deadline));
    // Every hop is gated at its scheduled offset, so the listener arrival is
    // the same in every period whatever the residence inside [lo, hi].
    if (s.jitter_req != TimeNs{} && arrive_hi != arrive_lo)
      v.push_back("C5 " + s.id + ": listener arrival spread exceeds jitter requirement");
  }

  for (const auto& [key, spans] : windows)
    for (std::size_t i = 0; i < spans.size(); ++i)
      for (std::size_t j = i + 1; j < spans.size(); ++j)
        if (spans[i].stream != spans[j].stream && overlaps_mod(spans[i], spans[j], H))
          v.push_back("C1 " + key.node + "/" + key.link + ": " + spans[i].stream + "#" +
                      std::to_string(spans[i].instance) + " overlaps " + spans[j].stream + "#" +
                      std::to_string(spans[j].instance));
  for (const auto& [kq, spans] : queues)
    for (std::size_t i = 0; i < spans.size(); ++i)
      for (std::size_t j = i + 1; j < spans.size(); ++j)
        if (spans[i].stream != spans[j].stream && overlaps_mod(spans[i], spans[j], H))
          v.push_back("C3 " + kq.first.node + "/" + kq.first.link + " q" + std::to_string(kq.second) + ": " +
                      spans[i].stream + "#" + std::to_string(spans[i].instance) + " shares the queue with " +
                      spans[j].stream + "#" + std::to_string(spans[j].instance));
  for (const auto& [key, gcl] : schedule.gcls)
    if (gcl.cycle_time() != schedule.hypercycle) v.push_back("GCL " + key.node + "/" + key.link + ": cycle mismatch");
  return v;
}

// ---------------------------------------------------------------------------

std::string schedule_to_json(const Schedule& schedule) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["hypercycle_ns"] = schedule.hypercycle.count();
  j["streams"] = ordered_json::array();
  for (const auto& [id, hops] : schedule.streams) {
    ordered_json s;
    s["id"] = id;
    s["hops"] = ordered_json::array();
    for (const auto& h : hops)
      s["hops"].push_back({{"node", h.node}, {"link", h.link}, {"offset_ns", h.offset.count()}, {"queue", h.queue}});
    j["streams"].push_back(std::move(s));
  }
  j["gcls"] = ordered_json::array();
  for (const auto& [key, gcl] : schedule.gcls) {
    ordered_json g;
    g["node"] = key.node;
    g["link"] = key.link;
    g["cycle_ns"] = gcl.cycle_time().count();
    g["base_ns"] = gcl.base_time().count();
    g["entries"] = ordered_json::array();
    for (const auto& e : gcl.entries()) g["entries"].push_back({{"gates", e.gate_states}, {"duration_ns", e.duration.count()}});
    j["gcls"].push_back(std::move(g));
  }
  return j.dump(2) + "\n";
}

Schedule schedule_from_json(const std::string& text) {
  Schedule out;
  try {
    const auto j = nlohmann::json::parse(text);
    out.hypercycle = ns(j.at("hypercycle_ns").get<std::uint64_t>());
    for (const auto& s : j.at("streams")) {
      auto& hops = out.streams[s.at("id").get<std::string>()];
      for (const auto& h : s.at("hops"))
        hops.push_back({h.at("node").get<std::string>(), h.at("link").get<std::string>(),
                        ns(h.at("offset_ns").get<std::uint64_t>()), h.at("queue").get<unsigned>()});
    }
    for (const auto& g : j.at("gcls")) {
      std::vector<GclEntry> entries;
      for (const auto& e : g.at("entries"))
        entries.push_back({e.at("gates").get<std::uint8_t>(), ns(e.at("duration_ns").get<std::uint64_t>())});
      out.gcls.emplace(PortKey{g.at("node").get<std::string>(), g.at("link").get<std::string>()},
                       GateControlList(ns(g.at("cycle_ns").get<std::uint64_t>()),
                                       ns(g.at("base_ns").get<std::uint64_t>()), std::move(entries)));
    }
  } catch (const nlohmann::json::exception& e) {
    throw BadParams(std::string("schedule file: ") + e.what());
  }
  return out;
}

void save_schedule(const Schedule& schedule, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << schedule_to_json(schedule);
  if (!f) throw IoError("write failed: " + path);
}

Schedule load_schedule(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return schedule_from_json(ss.str());
}

}  // namespace tsnpdc
