// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <set>
#include <variant>

#include "tsnpdc/bridge.hpp"

using namespace tsnpdc;

namespace {

PdcConfig slot_config(TimeNs slot) {
  PdcConfig c;
  c.mode = PdcMode::VirtualSlot;
  c.slot_size = slot;
  return c;
}

PdcConfig timestamp_config() {
  PdcConfig c;
  c.mode = PdcMode::Timestamp;
  return c;
}

}  // namespace

TEST_SUITE("sixg-bridge") {
  TEST_CASE("ingress slot ID is floor((t - epoch) / slot)") {
    const SlotClock clock{us(100), us(1000)};
    const auto cfg = slot_config(us(100));
    for (std::uint64_t off : {0ull, 99'999ull, 100'000ull, 350'000ull, 12'345'678ull}) {
      Frame f = ingress_mark(Frame{}, clock.epoch + ns(off), cfg, clock);
      REQUIRE(f.rtags.size() == 1);
      CHECK(f.rtags.front().sequence_number == (off / 100'000) % 65536);
    }
    CHECK(ingress_mark(Frame{}, clock.epoch + us(350), cfg, clock).rtags.front().sequence_number == 3);
  }

  TEST_CASE("slot ID wraps after 65535") {
    const SlotClock clock{us(1), TimeNs{}};
    const auto cfg = slot_config(us(1));
    CHECK(ingress_mark(Frame{}, us(65535), cfg, clock).rtags.front().sequence_number == 65535);
    CHECK(ingress_mark(Frame{}, us(65536), cfg, clock).rtags.front().sequence_number == 0);
  }

  TEST_CASE("timestamp mode records the exact ingress instant") {
    Frame f = ingress_mark(Frame{}, ns(123456789), timestamp_config(), SlotClock{});
    CHECK(f.ingress_timestamp == ns(123456789));
    CHECK(f.rtags.empty());
  }

  TEST_CASE("worked example: slots 3 and 7 with a 3-slot target leave in slots 6 and 10") {
    const SlotClock clock{us(100), TimeNs{}};
    const auto cfg = slot_config(us(100));
    for (auto [in, out] : {std::pair{3u, 6u}, std::pair{7u, 10u}}) {
      Frame f = ingress_mark(Frame{}, clock.slot_start(in) + us(40), cfg, clock);
      auto d = compute_release(f, clock.slot_start(in) + us(160), us(300), cfg, clock);
      REQUIRE(std::holds_alternative<Release>(d));
      CHECK(clock.slot_of(std::get<Release>(d).at) == out);
      CHECK(std::get<Release>(d).at == clock.slot_start(out));
    }
  }

  TEST_CASE("release across the 16-bit wrap is unwrapped relative to arrival") {
    const SlotClock clock{us(1), TimeNs{}};
    const auto cfg = slot_config(us(1));
    Frame f = ingress_mark(Frame{}, us(65534), cfg, clock);
    auto d = compute_release(f, us(65537), us(10), cfg, clock);
    REQUIRE(std::holds_alternative<Release>(d));
    CHECK(std::get<Release>(d).at == us(65544));
  }

  TEST_CASE("timestamp hold and late filtering") {
    auto cfg = timestamp_config();
    Frame f = ingress_mark(Frame{}, ms(100), cfg, SlotClock{});
    auto d = compute_release(f, ms(100) + us(6380), ms(14), cfg, SlotClock{});
    REQUIRE(std::holds_alternative<Release>(d));
    CHECK(std::get<Release>(d).at - (ms(100) + us(6380)) == us(7620));
    CHECK(std::get<Release>(d).at == ms(114));

    CHECK(std::holds_alternative<Drop>(compute_release(f, ms(115), ms(14), cfg, SlotClock{})));
    cfg.drop_late = false;
    CHECK(std::holds_alternative<Forward>(compute_release(f, ms(115), ms(14), cfg, SlotClock{})));
  }

  TEST_CASE("late virtual-slot frames") {
    const SlotClock clock{us(100), TimeNs{}};
    const auto cfg = slot_config(us(100));
    Frame f = ingress_mark(Frame{}, us(350), cfg, clock);
    // Egress slot 6 starts at 600 us; arriving at 601 us is late.
    CHECK(std::holds_alternative<Drop>(compute_release(f, us(601), us(300), cfg, clock)));
    CHECK(std::holds_alternative<Release>(compute_release(f, us(600), us(300), cfg, clock)));
  }

  TEST_CASE("PDC off forwards immediately; mismatched marks are rejected") {
    PdcConfig off;
    CHECK(std::holds_alternative<Forward>(compute_release(Frame{}, ms(1), ms(14), off, SlotClock{})));
    CHECK_THROWS_AS(ingress_mark(Frame{}, ms(1), off, SlotClock{}), ModeMismatch);
    const SlotClock clock{us(100), TimeNs{}};
    Frame stamped = ingress_mark(Frame{}, ms(1), timestamp_config(), clock);
    CHECK_THROWS_AS(compute_release(stamped, ms(2), ms(14), slot_config(us(100)), clock), ModeMismatch);
    Frame tagged = ingress_mark(Frame{}, ms(1), slot_config(us(100)), clock);
    CHECK_THROWS_AS(compute_release(tagged, ms(2), ms(14), timestamp_config(), clock), ModeMismatch);
  }

  TEST_CASE("wireless traversal") {
    auto point = load_histogram("upper_edge_ns,probability\n10000000,1\n");
    Rng rng(9);
    CHECK(wireless_traverse(ms(3), Direction::Uplink, point, point, rng) == ms(13));
    CHECK_THROWS_AS(wireless_traverse(ms(3), Direction::Wired, point, point, rng), BadParams);

    // Two streams sent at the same instant arrive in both orders over many trials.
    auto hist = synth_histogram(us(6380), ms(14), ms(2), 200);
    Rng root(77);
    bool first = false, second = false;
    for (std::uint64_t trial = 0; trial < 10'000; ++trial) {
      Rng a = root.substream(2 * trial), b = root.substream(2 * trial + 1);
      const TimeNs ta = wireless_traverse(ms(1), Direction::Uplink, hist, hist, a);
      const TimeNs tb = wireless_traverse(ms(1), Direction::Uplink, hist, hist, b);
      REQUIRE(ta <= ms(15));
      (ta < tb ? first : second) = true;
    }
    CHECK(first);
    CHECK(second);
  }

  TEST_CASE("hold buffer releases in release order and strips the PDC tag") {
    HoldBuffer buf(true);
    Frame f1, f2, f3;
    f1.seq = 1;
    f2.seq = 2;
    f3.seq = 3;
    f1.rtags = {RTag{0, 5}, RTag{0, 99}};
    f2.rtags = {RTag{0, 6}};
    f3.rtags = {RTag{0, 7}};
    buf.hold(ms(10), 2, f2);
    buf.hold(ms(10), 1, f1);
    buf.hold(ms(12), 3, f3);
    CHECK(egress_release(buf, ms(9)).empty());
    auto out = egress_release(buf, ms(10));
    REQUIRE(out.size() == 2);
    CHECK(out[0].seq == 1);
    CHECK(out[1].seq == 2);
    REQUIRE(out[0].rtags.size() == 1);
    CHECK(out[0].rtags[0].sequence_number == 99);
    CHECK(out[1].rtags.empty());
    CHECK(buf.high_water_mark() == 3);
    HoldBuffer empty;
    CHECK(egress_release(empty, ms(100)).empty());
  }

  TEST_CASE("target rounding and wrap-horizon checks") {
    PdcConfig cfg = slot_config(us(500));
    cfg.default_target = us(17100);
    cfg.per_stream["s1"] = ms(14);
    auto warnings = normalize_pdc(cfg, us(17100));
    CHECK(cfg.default_target == us(17500));
    CHECK(cfg.per_stream["s1"] == ms(14));
    CHECK(warnings.size() == 1);

    PdcConfig tiny = slot_config(ns(100));
    tiny.default_target = ms(14);
    CHECK_THROWS_AS(normalize_pdc(tiny, us(17100)), BadParams);
  }

  TEST_CASE("per-stream mapping with default") {
    PdcConfig c = timestamp_config();
    c.per_stream["stream1"] = ms(10);
    c.default_target = ms(15);
    CHECK(c.target_for("stream1", Direction::Uplink) == ms(10));
    CHECK(c.target_for("stream2", Direction::Uplink) == ms(15));
    c.default_downlink = us(17100);
    CHECK(c.target_for("stream2", Direction::Downlink) == us(17100));
  }
}
