// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <vector>

#include "tsnpdc/port.hpp"

using namespace tsnpdc;

namespace {

const GateControlList kGcl(ms(1), us(200), {{0x80, us(100)}, {0x00, us(900)}});

Frame frame(std::size_t stream, std::uint64_t seq, std::uint32_t size = 100) {
  Frame f;
  f.stream = stream;
  f.seq = seq;
  f.size = size;
  return f;
}

struct Sent {
  std::size_t stream;
  std::uint64_t seq;
  TimeNs start;
  TimeNs end;
};

}  // namespace

TEST_SUITE("tsn-port") {
  TEST_CASE("gate_open inside, at the end of, and across cycles") {
    const TimeNs base = us(200);
    auto s = gate_open(kGcl, 7, base + us(50));
    CHECK(s.open);
    CHECK(s.open_until == base + us(100));
    CHECK_FALSE(gate_open(kGcl, 7, base + us(100)).open);
    CHECK(gate_open(kGcl, 7, base).open);
    CHECK_FALSE(gate_open(kGcl, 3, base + us(50)).open);
    // One cycle later and one cycle before the base time.
    CHECK(gate_open(kGcl, 7, base + ms(1) + us(99)).open_until == base + ms(1) + us(100));
    // Before the base time the schedule extends backwards: phase of 10 us is 810 us.
    CHECK_FALSE(gate_open(kGcl, 7, us(10)).open);
    GateControlList late(ms(1), us(900), {{0x80, us(200)}, {0x00, us(800)}});
    CHECK(gate_open(late, 7, us(50)).open);
    CHECK(gate_open(late, 7, us(50)).open_until == us(100));
  }

  TEST_CASE("always-open gate reports one cycle of lookahead") {
    auto g = GateControlList::always_open(ms(2));
    auto s = gate_open(g, 0, us(123));
    CHECK(s.open);
    CHECK(s.open_until == us(123) + ms(2));
  }

  TEST_CASE("adjacent open entries merge, including across the cycle boundary") {
    GateControlList g(us(100), TimeNs{}, {{0x80, us(10)}, {0x00, us(60)}, {0x80, us(20)}, {0x81, us(10)}});
    auto s = gate_open(g, 7, us(75));
    CHECK(s.open);
    CHECK(s.open_until == us(110));  // wraps into the next cycle's first entry
    CHECK(gate_open(g, 7, us(105)).open_until == us(110));
    CHECK(g.next_open_start(7, us(30)) == us(70));
    CHECK(g.next_open_start(7, us(75)) == us(170));
  }

  TEST_CASE("GCL invariants are enforced") {
    CHECK_THROWS_AS(GateControlList(us(100), TimeNs{}, {{0x80, us(50)}}), BadParams);
    CHECK_THROWS_AS(GateControlList(us(100), TimeNs{}, {{0x80, us(100)}, {0x00, ns(0)}}), BadParams);
  }

  TEST_CASE("selection: priority order, gate-fit, closed gates") {
    GateControlList both(ms(1), TimeNs{}, {{0x88, ms(1)}});
    EgressPort port(0, 0, 100'000'000, both);
    sim::Engine e;
    port.enqueue(e, frame(1, 0), 3);
    port.enqueue(e, frame(2, 0), 7);
    auto f = port.select_transmission(TimeNs{});
    REQUIRE(f);
    CHECK(f->stream == 2);

    // Head needs 9.6 us but the gate closes 5 us later.
    GateControlList short_gate(ms(1), TimeNs{}, {{0x80, us(100)}, {0x00, us(900)}});
    EgressPort p2(0, 0, 100'000'000, short_gate);
    sim::Engine e2;
    e2.run_until(us(95));
    p2.enqueue(e2, frame(1, 0), 7);
    CHECK_FALSE(p2.select_transmission(us(95)));

    GateControlList closed(ms(1), TimeNs{}, {{0x00, ms(1)}});
    EgressPort p3(0, 0, 100'000'000, closed);
    sim::Engine e3;
    p3.enqueue(e3, frame(1, 0), 7);
    CHECK_FALSE(p3.select_transmission(TimeNs{}));
  }

  TEST_CASE("open gate transmits at enqueue time; FIFO within a queue; closed gate holds") {
    EgressPort port(0, 0, 100'000'000, kGcl);
    std::vector<Sent> sent;
    port.on_transmit([&](sim::Engine&, Frame f, TimeNs start, TimeNs end) {
      sent.push_back({f.stream, f.seq, start, end});
    });
    sim::Engine e;
    e.run_until(us(210));
    port.enqueue(e, frame(1, 0), 7);
    port.enqueue(e, frame(1, 1), 7);
    e.run_until(us(600));
    port.enqueue(e, frame(2, 0), 7);
    e.run_until(ms(3));
    REQUIRE(sent.size() == 3);
    CHECK(sent[0].start == us(210));
    CHECK(sent[0].seq == 0);
    CHECK(sent[1].start == us(210) + ns(9600));
    CHECK(sent[1].seq == 1);
    CHECK(sent[2].stream == 2);
    CHECK(sent[2].start == us(1200));  // next gate opening
  }

  TEST_CASE("always-open single queue degenerates to FIFO at line rate") {
    // Analytic oracle: start_i = max(arrival_i, end_{i-1}), end_i = start_i + tx.
    EgressPort port(0, 0, 100'000'000, GateControlList::always_open(ms(1)));
    std::vector<Sent> sent;
    port.on_transmit([&](sim::Engine&, Frame f, TimeNs start, TimeNs end) {
      sent.push_back({f.stream, f.seq, start, end});
    });
    sim::Engine e;
    std::vector<TimeNs> arrivals;
    std::uint64_t x = 5;
    TimeNs t{};
    for (int i = 0; i < 300; ++i) {
      x = x * 6364136223846793005ull + 1442695040888963407ull;
      t += ns((x >> 40) % 15000);
      arrivals.push_back(t);
    }
    for (std::size_t i = 0; i < arrivals.size(); ++i) {
      e.schedule(arrivals[i], sim::Priority::FrameArrival,
                 [&port, i](sim::Engine& eng) { port.enqueue(eng, frame(0, i), 0); });
    }
    e.run_until(sec(1));
    REQUIRE(sent.size() == arrivals.size());
    TimeNs prev_end{};
    for (std::size_t i = 0; i < sent.size(); ++i) {
      const TimeNs start = std::max(arrivals[i], prev_end);
      CHECK(sent[i].seq == i);
      CHECK(sent[i].start == start);
      prev_end = start + ns(9600);
    }
  }

  TEST_CASE("queue capacity") {
    EgressPort port(0, 0, 100'000'000, GateControlList(ms(1), TimeNs{}, {{0x00, ms(1)}}), 2);
    sim::Engine e;
    port.enqueue(e, frame(0, 0), 7);
    port.enqueue(e, frame(0, 1), 7);
    CHECK_THROWS_AS(port.enqueue(e, frame(0, 2), 7), QueueOverflow);
  }
}
