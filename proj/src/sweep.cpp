// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <deque>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "tsnpdc/experiment.hpp"

namespace tsnpdc {

namespace {

struct Partition {
  bool device_side = false;
  std::vector<std::size_t> stations;
};

// Neighbours as (node, link) pairs.
std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency(const Topology& topo) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(topo.nodes().size());
  for (std::size_t l = 0; l < topo.links().size(); ++l) {
    const auto a = *topo.node_index(topo.links()[l].a), b = *topo.node_index(topo.links()[l].b);
    adj[a].emplace_back(b, l);
    adj[b].emplace_back(a, l);
  }
  return adj;
}

std::vector<std::string> shortest_route(const Topology& topo,
                                        const std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& adj,
                                        std::size_t from, std::size_t to) {
  std::vector<std::optional<std::pair<std::size_t, std::size_t>>> prev(adj.size());
  std::vector<bool> seen(adj.size(), false);
  std::deque<std::size_t> todo{from};
  seen[from] = true;
  while (!todo.empty()) {
    const std::size_t n = todo.front();
    todo.pop_front();
    for (auto [m, l] : adj[n])
      if (!seen[m]) {
        seen[m] = true;
        prev[m] = {n, l};
        todo.push_back(m);
      }
  }
  std::vector<std::string> route;
  for (std::size_t n = to; n != from; n = prev[n]->first) {
    if (!prev[n]) return {};
    route.push_back(topo.links()[prev[n]->second].id);
  }
  std::reverse(route.begin(), route.end());
  return route;
}

std::vector<Partition> partitions(const Topology& topo,
                                  const std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& adj) {
  std::vector<Partition> out;
  std::vector<int> comp(topo.nodes().size(), -1);
  for (std::size_t start = 0; start < topo.nodes().size(); ++start) {
    if (comp[start] >= 0 || topo.nodes()[start].kind == NodeKind::SixgBridge) continue;
    Partition p;
    std::deque<std::size_t> todo{start};
    comp[start] = static_cast<int>(out.size());
    while (!todo.empty()) {
      const std::size_t n = todo.front();
      todo.pop_front();
      if (topo.nodes()[n].kind == NodeKind::EndStation) p.stations.push_back(n);
      for (auto [m, l] : adj[n]) {
        if (topo.nodes()[m].kind == NodeKind::SixgBridge) {
          if (topo.is_device_side(m, l)) p.device_side = true;
          continue;
        }
        if (comp[m] < 0) {
          comp[m] = static_cast<int>(out.size());
          todo.push_back(m);
        }
      }
    }
    std::sort(p.stations.begin(), p.stations.end());
    out.push_back(std::move(p));
  }
  return out;
}

std::string numbered(const std::string& prefix, std::size_t i) {
  std::string n = std::to_string(i);
  return prefix + std::string(n.size() < 3 ? 3 - n.size() : 0, '0') + n;
}

double quantile7(std::vector<double> v, double p) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (v[hi] - v[lo]) * (pos - static_cast<double>(lo));
}

}  // namespace

unsigned worker_threads(unsigned requested) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TSNPDC_THREADS")) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(env, &end, 10);
    if (end != env && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, n);
}

std::vector<Stream> generate_stream_set(const Scenario& base, std::uint64_t seed, std::size_t set_index,
                                        const SweepOptions& options) {
  const Topology& topo = base.topology;
  const auto adj = adjacency(topo);
  const auto parts = partitions(topo, adj);
  Rng rng = Rng(seed).substream(set_index);
  std::vector<Stream> out;

  auto make = [&](std::string id, std::size_t talker, std::size_t listener, TimeNs period, TimeNs jitter,
                  Direction dir) {
    Stream s;
    s.id = std::move(id);
    s.talker = topo.nodes()[talker].id;
    s.listener = topo.nodes()[listener].id;
    s.route = shortest_route(topo, adj, talker, listener);
    s.period = s.deadline = period;
    s.phase = us(rng.next_below(period.count() / 1000));
    s.jitter_req = jitter;
    s.direction = dir;
    out.push_back(std::move(s));
  };

  std::vector<std::size_t> device, network;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const auto& st = parts[p].stations;
    auto& side = parts[p].device_side ? device : network;
    side.insert(side.end(), st.begin(), st.end());
    if (st.size() < 2) continue;
    for (std::size_t i = 0; i < options.wired_per_partition; ++i) {
      const std::size_t a = rng.next_below(st.size());
      std::size_t b = rng.next_below(st.size() - 1);
      if (b >= a) ++b;
      make(numbered("p" + std::to_string(p) + "-w", i), st[a], st[b], ms(5), us(1), Direction::Wired);
    }
  }
  if (device.empty() || network.empty()) return out;
  const std::size_t n = std::max(options.uplink_candidates, options.downlink_candidates);
  for (std::size_t i = 0; i < n; ++i) {
    // Interleaved ids keep uplink and downlink alternating in admission order.
    if (i < options.uplink_candidates)
      make(numbered("x", i) + "-ul", device[rng.next_below(device.size())], network[rng.next_below(network.size())],
           ms(20), us(100), Direction::Uplink);
    if (i < options.downlink_candidates)
      make(numbered("x", i) + "-dl", network[rng.next_below(network.size())], device[rng.next_below(device.size())],
           ms(20), us(100), Direction::Downlink);
  }
  return out;
}

SweepReport sweep_slot_sizes(const Scenario& base, const SweepOptions& options) {
  SweepReport report;
  for (TimeNs slot : options.slots)
    for (std::size_t set = 0; set < options.sets; ++set) report.cells.push_back({slot, set, 0, 0, 0});

  std::vector<std::vector<Stream>> sets(options.sets);
  std::atomic<std::size_t> next_set{0}, next_cell{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto guarded = [&](auto&& body) {
    try {
      body();
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  auto run_pool = [&](auto&& body) {
    const unsigned n = worker_threads(options.threads);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n; ++w) pool.emplace_back([&] { guarded(body); });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  };

  run_pool([&] {
    for (std::size_t i; (i = next_set++) < sets.size();) sets[i] = generate_stream_set(base, options.seed, i, options);
  });
  const TimeNs up_max = base.uplink.max_delay(), down_max = base.downlink.max_delay();
  run_pool([&] {
    for (std::size_t c; (c = next_cell++) < report.cells.size();) {
      SweepCell& cell = report.cells[c];
      PdcConfig pdc;
      pdc.mode = PdcMode::VirtualSlot;
      pdc.slot_size = cell.slot;
      pdc.default_uplink = up_max;
      pdc.default_downlink = down_max;
      normalize_pdc(pdc, std::max(up_max, down_max));
      auto model = ResidenceModel::interval(pdc_interval(pdc, *pdc.default_uplink),
                                            pdc_interval(pdc, *pdc.default_downlink));
      const auto& candidates = sets[cell.set];
      const ScheduleReport r = max_schedulable(candidates, base.topology, model);
      std::set<std::string> admitted(r.scheduled.begin(), r.scheduled.end());
      for (const auto& s : candidates) {
        if (!admitted.contains(s.id)) continue;
        if (s.direction == Direction::Uplink) ++cell.uplink;
        else if (s.direction == Direction::Downlink) ++cell.downlink;
        else ++cell.wired;
      }
    }
  });

  for (TimeNs slot : options.slots) {
    std::vector<double> v;
    for (const auto& c : report.cells)
      if (c.slot == slot) v.push_back(static_cast<double>(c.wireless()));
    SweepRow row;
    row.slot = slot;
    row.sets = v.size();
    if (!v.empty()) {
      row.min = *std::min_element(v.begin(), v.end());
      row.max = *std::max_element(v.begin(), v.end());
      row.q1 = quantile7(v, 0.25);
      row.median = quantile7(v, 0.5);
      row.q3 = quantile7(v, 0.75);
    }
    report.summary.push_back(row);
  }
  return report;
}

}  // namespace tsnpdc
