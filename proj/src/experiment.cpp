// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsnpdc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <set>

#include "tsnpdc/bridge.hpp"
#include "tsnpdc/port.hpp"
#include "tsnpdc/sim.hpp"

namespace tsnpdc {

namespace {

struct StreamState {
  const Stream* stream = nullptr;
  std::vector<Hop> hops;
  std::vector<EgressPort*> ports;  // one per hop
  Rng rng;
  std::uint64_t injected = 0, delivered = 0, dropped = 0, misses = 0;
  std::vector<std::uint64_t> latencies;
  std::set<std::uint64_t> offsets;
  std::optional<TimeNs> res_min, res_max;
};

// Nearest-rank percentile over sorted values.
TimeNs percentile(const std::vector<std::uint64_t>& sorted, double p) {
  if (sorted.empty()) return {};
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size())));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return ns(sorted[rank - 1]);
}

TimeNs shift(TimeNs t, std::int64_t by) {
  if (by >= 0) return t + ns(static_cast<std::uint64_t>(by));
  const TimeNs back = ns(static_cast<std::uint64_t>(-by));
  return t > back ? t - back : TimeNs{};
}

class Simulation {
 public:
  Simulation(const Scenario& sc, const Schedule& schedule, std::uint64_t seed, const RunOptions& options)
      : sc_(sc), schedule_(schedule), options_(options), root_(seed), clock_{sc.pdc.slot_size, TimeNs{}} {
    const Topology& topo = sc.topology;
    for (const Stream& s : sc.streams) {
      StreamState st;
      st.stream = &s;
      st.hops = *resolve_route(topo, s);
      for (const Hop& hop : st.hops) st.ports.push_back(&port(hop.from, hop.link));
      st.rng = root_.substream(s.id + "|" + to_string(s.direction));
      streams_.push_back(std::move(st));
    }
    for (auto& [key, p] : ports_) {
      const std::size_t link = key.second;
      p->on_transmit([this, link, from = key.first](sim::Engine& e, Frame f, TimeNs, TimeNs end) {
        const Link& l = sc_.topology.links()[link];
        const std::size_t to = *sc_.topology.node_index(l.a == sc_.topology.nodes()[from].id ? l.b : l.a);
        e.schedule(end + l.propagation, sim::Priority::FrameArrival,
                   [this, to, f = std::move(f)](sim::Engine& eng) mutable { arrive(eng, std::move(f), to); });
      });
    }
    if (options.trace_path) {
      trace_.open(*options.trace_path, std::ios::binary);
      if (!trace_) throw IoError("cannot write trace " + *options.trace_path);
      trace_ << "stream,seq,talker_tx_ns,listener_arrival_ns,latency_ns\n";
    }
  }

  void run(std::uint64_t cycles) {
    const TimeNs H = schedule_.hypercycle;
    release_end_ = H * cycles;
    TimeNs drain = H;
    for (const Stream& s : sc_.streams) drain = std::max(drain, s.deadline * 2);
    if (!sc_.uplink.bins().empty()) drain += std::max(sc_.uplink.max_delay(), sc_.downlink.max_delay());
    for (std::size_t i = 0; i < streams_.size(); ++i) schedule_release(i, 0);
    engine_.run_until(release_end_ + drain);
    end_ = engine_.now();
  }

  MetricsReport report(std::uint64_t seed, std::uint64_t cycles) {
    MetricsReport r;
    r.scenario = sc_.name;
    r.residence = to_string(sc_.residence);
    r.pdc_mode = to_string(sc_.pdc.mode);
    if (sc_.pdc.mode == PdcMode::VirtualSlot && sc_.pdc.emulate_uniform_jitter) r.pdc_mode = "virtual_slot_emulated";
    r.seed = seed;
    r.hypercycles = cycles;
    r.hypercycle = schedule_.hypercycle;
    TimeNs worst_wireless{}, worst_any{};
    bool have_wireless = false;
    for (auto& st : streams_) {
      StreamMetrics m;
      m.id = st.stream->id;
      m.direction = st.stream->direction;
      m.injected = st.injected;
      m.delivered = st.delivered;
      m.dropped_late = st.dropped;
      m.in_flight = st.injected - st.delivered - st.dropped;
      m.deadline_misses = st.misses;
      std::sort(st.latencies.begin(), st.latencies.end());
      if (!st.latencies.empty()) {
        m.latency_min = ns(st.latencies.front());
        m.latency_max = ns(st.latencies.back());
        long double sum = 0;
        for (auto v : st.latencies) sum += static_cast<long double>(v);
        m.latency_mean = static_cast<double>(sum / static_cast<long double>(st.latencies.size()));
        m.p50 = percentile(st.latencies, 0.5);
        m.p99 = percentile(st.latencies, 0.99);
        m.p99999 = percentile(st.latencies, 0.99999);
        m.jitter = m.latency_max - m.latency_min;
      }
      if (st.res_min) {
        m.residence_min = *st.res_min;
        m.residence_max = *st.res_max;
      }
      m.arrival_offsets = st.offsets.size();
      if (m.direction != Direction::Wired) {
        if (!have_wireless || m.latency_max > worst_wireless) {
          worst_wireless = m.latency_max;
          r.worst_stream = m.id;
        }
        have_wireless = true;
      } else if (!have_wireless && (r.worst_stream.empty() || m.latency_max > worst_any)) {
        worst_any = m.latency_max;
        r.worst_stream = m.id;
      }
      r.streams.push_back(std::move(m));
    }
    for (const auto& [key, p] : ports_) {
      PortMetrics pm;
      pm.node = sc_.topology.nodes()[key.first].id;
      pm.link = sc_.topology.links()[key.second].id;
      pm.gate_utilization = p->gcl().utilization();
      pm.link_utilization =
          end_.count() == 0 ? 0.0 : static_cast<double>(p->busy_time().count()) / static_cast<double>(end_.count());
      pm.max_depth = p->max_depth();
      r.ports.push_back(pm);
    }
    std::sort(r.ports.begin(), r.ports.end(),
              [](const PortMetrics& a, const PortMetrics& b) { return std::tie(a.node, a.link) < std::tie(b.node, b.link); });
    for (const auto& [key, b] : holds_) r.hold_high_water = std::max<std::uint64_t>(r.hold_high_water, b->high_water_mark());
    return r;
  }

 private:
  EgressPort& port(std::size_t node, std::size_t link) {
    auto& slot = ports_[{node, link}];
    if (!slot) {
      const Link& l = sc_.topology.links()[link];
      const PortKey key{sc_.topology.nodes()[node].id, l.id};
      auto g = schedule_.gcls.find(key);
      GateControlList gcl =
          g != schedule_.gcls.end() ? g->second : GateControlList::always_open(schedule_.hypercycle);
      slot = std::make_unique<EgressPort>(node, link, l.speed_bps, std::move(gcl));
    }
    return *slot;
  }

  void schedule_release(std::size_t i, std::uint64_t seq) {
    const Stream& s = *streams_[i].stream;
    const TimeNs at = s.period * seq + s.phase;
    if (at >= release_end_) return;
    engine_.schedule(at, sim::Priority::FrameArrival, [this, i, seq, at](sim::Engine& e) {
      StreamState& st = streams_[i];
      Frame f;
      f.stream = i;
      f.seq = seq;
      f.talker_tx_time = at;
      f.size = st.stream->frame_size;
      ++st.injected;
      st.ports[0]->enqueue(e, std::move(f), st.stream->pcp);
      schedule_release(i, seq + 1);
    });
  }

  // DS-TT clock offset; the NW-TT is the reference.
  std::int64_t ingress_skew(Direction d) const { return d == Direction::Uplink ? sc_.pdc.sync_error_ns : 0; }
  std::int64_t egress_skew(Direction d) const { return d == Direction::Downlink ? sc_.pdc.sync_error_ns : 0; }

  void arrive(sim::Engine& e, Frame f, std::size_t node) {
    StreamState& st = streams_[f.stream];
    const std::size_t h = f.trace.size();
    if (h == st.hops.size()) {
      deliver(e.now(), std::move(f));
      return;
    }
    if (sc_.topology.nodes()[node].kind != NodeKind::SixgBridge) {
      st.ports[h]->enqueue(e, std::move(f), st.stream->pcp);
      return;
    }
    // Ingress TT, then the wireless segment.
    const Direction dir = st.stream->direction;
    const TimeNs t_in = e.now();
    f.bridge_ingress = t_in;
    if (sc_.pdc.mode != PdcMode::Off) f = ingress_mark(std::move(f), shift(t_in, ingress_skew(dir)), sc_.pdc, clock_);
    Rng rng = st.rng;
    rng.seek(f.seq * 4);
    const TimeNs t_out = wireless_traverse(t_in, dir, sc_.uplink, sc_.downlink, rng);
    if (options_.on_wireless_sample) options_.on_wireless_sample(f.stream, f.seq, t_out - t_in);
    TimeNs extra{};
    if (sc_.pdc.mode == PdcMode::VirtualSlot && sc_.pdc.emulate_uniform_jitter)
      extra = ns(rng.next_below(sc_.pdc.slot_size.count()));
    e.schedule(t_out, sim::Priority::FrameArrival, [this, h, extra, f = std::move(f)](sim::Engine& eng) mutable {
      egress_tt(eng, std::move(f), h, extra);
    });
  }

  void egress_tt(sim::Engine& e, Frame f, std::size_t h, TimeNs extra) {
    StreamState& st = streams_[f.stream];
    const Direction dir = st.stream->direction;
    if (sc_.pdc.mode == PdcMode::Off) {
      forward(e, std::move(f), h);
      return;
    }
    const std::int64_t skew = egress_skew(dir);
    const TimeNs target = sc_.pdc.target_for(st.stream->id, dir);
    auto decision = compute_release(f, shift(e.now(), skew), target, sc_.pdc, clock_, extra);
    if (std::holds_alternative<Drop>(decision)) {
      ++st.dropped;
      return;
    }
    if (std::holds_alternative<Forward>(decision)) {
      strip(f);
      forward(e, std::move(f), h);
      return;
    }
    const TimeNs at = std::max(e.now(), shift(std::get<Release>(decision).at, -skew));
    auto& buffer = hold_buffer(st.hops[h].from, st.hops[h].link);
    buffer.hold(at, hold_order_++, std::move(f));
    e.schedule(at, sim::Priority::FrameArrival, [this, &buffer](sim::Engine& eng) {
      for (Frame& out : egress_release(buffer, eng.now())) {
        const std::size_t hop = out.trace.size();
        forward(eng, std::move(out), hop);
      }
    });
  }

  void strip(Frame& f) {
    if (sc_.pdc.mode == PdcMode::VirtualSlot && !sc_.pdc.emulate_uniform_jitter && !f.rtags.empty())
      f = pop_rtag(std::move(f)).first;
    f.ingress_timestamp.reset();
  }

  void forward(sim::Engine& e, Frame f, std::size_t h) {
    StreamState& st = streams_[f.stream];
    f.bridge_egress = e.now();
    const TimeNs residence = f.bridge_egress - f.bridge_ingress;
    st.res_min = st.res_min ? std::min(*st.res_min, residence) : residence;
    st.res_max = st.res_max ? std::max(*st.res_max, residence) : residence;
    st.ports[h]->enqueue(e, std::move(f), st.stream->pcp);
  }

  HoldBuffer& hold_buffer(std::size_t node, std::size_t link) {
    auto& b = holds_[{node, link}];
    if (!b) b = std::make_unique<HoldBuffer>(sc_.pdc.mode == PdcMode::VirtualSlot && !sc_.pdc.emulate_uniform_jitter);
    return *b;
  }

  void deliver(TimeNs t, Frame f) {
    StreamState& st = streams_[f.stream];
    const Stream& s = *st.stream;
    const TimeNs latency = t - f.talker_tx_time;
    ++st.delivered;
    if (latency > s.deadline) ++st.misses;
    st.latencies.push_back(latency.count());
    st.offsets.insert((t.count() + s.period.count() - s.phase.count() % s.period.count()) % s.period.count());
    std::optional<TimeNs> residence;
    if (s.direction != Direction::Wired) residence = f.bridge_egress - f.bridge_ingress;
    if (options_.on_delivery) options_.on_delivery({f.stream, f.seq, f.talker_tx_time, t, residence});
    if (trace_.is_open())
      trace_ << s.id << ',' << f.seq << ',' << f.talker_tx_time.count() << ',' << t.count() << ',' << latency.count()
             << '\n';
  }

  const Scenario& sc_;
  const Schedule& schedule_;
  const RunOptions& options_;
  Rng root_;
  SlotClock clock_;
  sim::Engine engine_;
  std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<EgressPort>> ports_;
  std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<HoldBuffer>> holds_;
  std::vector<StreamState> streams_;
  std::uint64_t hold_order_ = 0;
  TimeNs release_end_, end_;
  std::ofstream trace_;
};

}  // namespace

MetricsReport run_experiment(const Scenario& scenario, const RunOptions& options) {
  if (auto problems = validate_scenario(scenario.topology, scenario.streams); !problems.empty())
    throw ValidationError(problems);
  Schedule schedule;
  if (options.schedule) {
    schedule = *options.schedule;
  } else {
    SynthesisResult r = synthesize(scenario.streams, scenario.topology, residence_model(scenario));
    if (!r) throw ScheduleInfeasible(std::move(r));
    schedule = std::move(*r.schedule);
  }
  const std::uint64_t seed = options.seed.value_or(scenario.seed);
  const std::uint64_t cycles = options.cycles.value_or(scenario.cycles);
  Simulation sim(scenario, schedule, seed, options);
  sim.run(cycles);
  return sim.report(seed, cycles);
}

}  // namespace tsnpdc
