// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "tsnpdc/scenario.hpp"

using namespace tsnpdc;

namespace {

// Two device-side talkers, a 6G bridge, one backbone bridge and a server.
const std::string kTopology = R"(
[histograms]
uplink = { median = "6ms", max = "14ms", min = "2ms", bins = 100 }
downlink = { median = "5ms", max = "17ms", min = "2ms", bins = 100 }

[link_defaults]
speed_bps = 100_000_000
propagation = "50ns"

[stream_defaults]
period = "20ms"
frame_size = 100

[[nodes]]
id = "agv1"
kind = "end-station"

[[nodes]]
id = "agv2"
kind = "end-station"

[[nodes]]
id = "6g"
kind = "sixg-bridge"
device_side = ["agv1--6g", "agv2--6g"]

[[nodes]]
id = "b1"
kind = "tsn-bridge"

[[nodes]]
id = "srv"
kind = "end-station"

[[links]]
a = "agv1"
b = "6g"

[[links]]
a = "agv2"
b = "6g"

[[links]]
a = "6g"
b = "b1"

[[links]]
id = "uplink-to-srv"
a = "b1"
b = "srv"

[[streams]]
id = "stream1"
talker = "agv1"
listener = "srv"
path = ["agv1", "6g", "b1", "srv"]

[[streams]]
id = "stream2"
talker = "srv"
listener = "agv2"
route = ["uplink-to-srv", "6g--b1", "agv2--6g"]
deadline = "19ms"
phase = "250us"
)";

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("tsnpdc-scenario-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("topology, defaults and inferred directions") {
  const Scenario sc = parse_scenario(kTopology + "\n[experiment]\nresidence = \"max\"\n");
  CHECK(sc.topology.nodes().size() == 5);
  REQUIRE(sc.topology.links().size() == 4);
  CHECK(sc.topology.links()[0].id == "agv1--6g");
  CHECK(sc.topology.links()[3].id == "uplink-to-srv");
  CHECK(sc.topology.links()[0].speed_bps == 100'000'000);
  CHECK(sc.topology.links()[0].propagation == ns(50));
  REQUIRE(sc.streams.size() == 2);
  CHECK(sc.streams[0].direction == Direction::Uplink);
  CHECK(sc.streams[1].direction == Direction::Downlink);
  CHECK(sc.streams[0].period == ms(20));
  CHECK(sc.streams[0].deadline == ms(20));
  CHECK(sc.streams[1].deadline == ms(19));
  CHECK(sc.streams[1].phase == us(250));
  CHECK(sc.streams[0].frame_size == 100);
  CHECK(sc.uplink.max_delay() == ms(14));
  CHECK(sc.downlink.max_delay() == ms(17));
  CHECK(sc.residence == ResidenceSelector::Max);
  CHECK(sc.pdc.mode == PdcMode::Off);
  CHECK(sc.cycles == 10000);
}

TEST_CASE("the default residence selector needs a pdc mode when wireless streams exist") {
  CHECK_THROWS_AS(parse_scenario(kTopology + "\n[experiment]\nresidence = \"pdc\"\n"), ValidationError);
  CHECK_NOTHROW(parse_scenario(kTopology + "\n[experiment]\nresidence = \"max\"\n"));
}

TEST_CASE("per-stream targets with a default") {
  const Scenario sc = parse_scenario(kTopology + R"(
[pdc]
mode = "timestamp"
default = "15ms"
mapping = [ { stream = "stream1", target = "10ms" } ]
)");
  CHECK(sc.pdc.target_for("stream1", Direction::Uplink) == ms(10));
  CHECK(sc.pdc.target_for("stream2", Direction::Downlink) == ms(15));
  const auto model = residence_model(sc);
  CHECK(model.for_stream(sc.streams[0]).lo == ms(10));
  CHECK(model.for_stream(sc.streams[1]).hi == ms(15));
}

TEST_CASE("target \"max\" resolves to each direction's histogram maximum") {
  const Scenario sc = parse_scenario(kTopology + "\n[pdc]\nmode = \"timestamp\"\ndefault = \"max\"\n");
  CHECK(sc.pdc.target_for("stream1", Direction::Uplink) == ms(14));
  CHECK(sc.pdc.target_for("stream2", Direction::Downlink) == ms(17));
}

TEST_CASE("virtual slot targets are rounded up with a warning") {
  const Scenario sc = parse_scenario(kTopology + R"(
[pdc]
mode = "virtual_slot"
slot = "500us"
default_uplink = "14ms"
default_downlink = "17.1ms"
)");
  CHECK(sc.pdc.target_for("stream2", Direction::Downlink) == us(17500));
  CHECK(sc.warnings.size() == 1);
  const auto model = residence_model(sc);
  // (target - slot, target] with integer nanoseconds.
  CHECK(model.for_stream(sc.streams[0]).lo == us(14000) - us(500) + ns(1));
  CHECK(model.for_stream(sc.streams[0]).hi == us(14000));
}

TEST_CASE("med and max selectors read the histograms") {
  Scenario sc = parse_scenario(kTopology + "\n[experiment]\nresidence = \"max\"\n");
  auto m = residence_model(sc);
  CHECK(m.kind == ResidenceModel::Kind::Constant);
  CHECK(m.uplink.lo == ms(14));
  CHECK(m.downlink.hi == ms(17));
  sc.residence = ResidenceSelector::Med;
  m = residence_model(sc);
  CHECK(m.uplink.lo == sc.uplink.quantile(0.5));
  CHECK(m.downlink.lo == sc.downlink.quantile(0.5));
}

TEST_CASE("syntax errors carry line and column") {
  const std::string text = "[experiment]\nname = \"x\"\nseed = @\n";
  try {
    parse_scenario(text);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 8);
  }
  CHECK_THROWS_AS(parse_scenario("[experiment]\nseed = 1\nseed = 2\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario("[experiment]\nname = \"open\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario("[experiment]\nbogus = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario("[[nodes]]\nid = \"x\"\nkind = \"router\"\n"), ParseError);
}

TEST_CASE("semantic errors are validation errors") {
  // Unknown node in a link.
  CHECK_THROWS_AS(parse_scenario(kTopology + "\n[[links]]\na = \"b1\"\nb = \"nowhere\"\n"), ValidationError);
  // Mapping names a stream that does not exist.
  CHECK_THROWS_AS(parse_scenario(kTopology + R"(
[pdc]
mode = "timestamp"
default = "15ms"
mapping = [ { stream = "ghost", target = "10ms" } ]
)"),
                  ValidationError);
  // Virtual-slot target beyond the 16-bit horizon.
  CHECK_THROWS_AS(parse_scenario(kTopology + "\n[pdc]\nmode = \"virtual_slot\"\nslot = \"100ns\"\ndefault = \"max\"\n"),
                  ValidationError);
}

TEST_CASE("histogram files resolve relative to the scenario and must exist") {
  TempDir dir;
  {
    std::ofstream f(dir.path / "up.csv");
    f << save_histogram(synth_histogram(ms(6), ms(14), ms(2), 50));
  }
  std::string text = kTopology + "\n[experiment]\nresidence = \"med\"\n";
  const auto at = text.find("uplink = {");
  const auto end = text.find('\n', at);
  text.replace(at, end - at, "uplink = \"up.csv\"");
  {
    std::ofstream f(dir.path / "ok.scenario");
    f << text;
  }
  const Scenario sc = load_scenario((dir.path / "ok.scenario").string());
  CHECK(sc.uplink.max_delay() == ms(14));

  std::filesystem::remove(dir.path / "up.csv");
  CHECK_THROWS_AS(load_scenario((dir.path / "ok.scenario").string()), ValidationError);
  CHECK_THROWS_AS(load_scenario((dir.path / "absent.scenario").string()), IoError);
}

TEST_CASE("residence intervals per pdc mode") {
  PdcConfig c;
  c.mode = PdcMode::Timestamp;
  CHECK(pdc_interval(c, ms(14)).lo == ms(14));
  CHECK(pdc_interval(c, ms(14)).hi == ms(14));
  c.sync_error_ns = -300;
  CHECK(pdc_interval(c, ms(14)).lo == ms(14) - ns(300));
  CHECK(pdc_interval(c, ms(14)).hi == ms(14) + ns(300));
  c.sync_error_ns = 0;
  c.mode = PdcMode::VirtualSlot;
  c.slot_size = us(100);
  CHECK(pdc_interval(c, ms(14)).lo == ms(14) - us(100) + ns(1));
  CHECK(pdc_interval(c, ms(14)).hi == ms(14));
  c.emulate_uniform_jitter = true;
  CHECK(pdc_interval(c, ms(14)).lo == ms(14));
  CHECK(pdc_interval(c, ms(14)).hi == ms(14) + us(100) - ns(1));
}

TEST_CASE("shipped scenarios load") {
  for (const char* name : {"fig3.scenario", "fig6.scenario"}) {
    CAPTURE(name);
    const Scenario sc = load_scenario(std::string(TSNPDC_SCENARIO_DIR) + "/" + name);
    CHECK(!sc.streams.empty());
  }
  const Scenario fig6 = load_scenario(std::string(TSNPDC_SCENARIO_DIR) + "/fig6.scenario");
  std::size_t ul = 0, dl = 0, wired = 0;
  for (const auto& s : fig6.streams)
    (s.direction == Direction::Uplink ? ul : s.direction == Direction::Downlink ? dl : wired)++;
  CHECK(ul == 50);
  CHECK(dl == 50);
  CHECK(wired == 10);
}
