// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <fstream>

#include <json.hpp>

#include "tsnpdc/experiment.hpp"

namespace tsnpdc {

namespace {

using nlohmann::ordered_json;

std::string num(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

constexpr const char* kStreamHeader =
    "stream,direction,injected,delivered,dropped_late,in_flight,deadline_misses,latency_min_ns,latency_mean_ns,"
    "latency_max_ns,p50_ns,p99_ns,p99999_ns,jitter_ns,residence_min_ns,residence_max_ns,arrival_offsets,worst\n";

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << text;
  if (!f) throw IoError("write failed: " + path);
}

}  // namespace

ReportFormat format_for_path(const std::string& path) {
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "json") return ReportFormat::Json;
  if (ext == "csv") return ReportFormat::Csv;
  throw BadParams("report path must end in .csv or .json: " + path);
}

std::string report_csv(const MetricsReport& r) {
  std::string out = kStreamHeader;
  for (const auto& s : r.streams) {
    out += s.id + ',' + to_string(s.direction) + ',' + std::to_string(s.injected) + ',' + std::to_string(s.delivered) +
           ',' + std::to_string(s.dropped_late) + ',' + std::to_string(s.in_flight) + ',' +
           std::to_string(s.deadline_misses) + ',' + std::to_string(s.latency_min.count()) + ',' +
           num(s.latency_mean) + ',' + std::to_string(s.latency_max.count()) + ',' + std::to_string(s.p50.count()) +
           ',' + std::to_string(s.p99.count()) + ',' + std::to_string(s.p99999.count()) + ',' +
           std::to_string(s.jitter.count()) + ',' + std::to_string(s.residence_min.count()) + ',' +
           std::to_string(s.residence_max.count()) + ',' + std::to_string(s.arrival_offsets) + ',' +
           (s.id == r.worst_stream ? "1" : "0") + '\n';
  }
  return out;
}

std::string report_json(const MetricsReport& r) {
  ordered_json j;
  j["scenario"] = r.scenario;
  j["residence"] = r.residence;
  j["pdc_mode"] = r.pdc_mode;
  j["seed"] = r.seed;
  j["hypercycles"] = r.hypercycles;
  j["hypercycle_ns"] = r.hypercycle.count();
  j["worst_stream"] = r.worst_stream;
  j["hold_high_water"] = r.hold_high_water;
  j["streams"] = ordered_json::array();
  for (const auto& s : r.streams) {
    j["streams"].push_back({{"stream", s.id},
                            {"direction", to_string(s.direction)},
                            {"injected", s.injected},
                            {"delivered", s.delivered},
                            {"dropped_late", s.dropped_late},
                            {"in_flight", s.in_flight},
                            {"deadline_misses", s.deadline_misses},
                            {"latency_min_ns", s.latency_min.count()},
                            {"latency_mean_ns", s.latency_mean},
                            {"latency_max_ns", s.latency_max.count()},
                            {"p50_ns", s.p50.count()},
                            {"p99_ns", s.p99.count()},
                            {"p99999_ns", s.p99999.count()},
                            {"jitter_ns", s.jitter.count()},
                            {"residence_min_ns", s.residence_min.count()},
                            {"residence_max_ns", s.residence_max.count()},
                            {"arrival_offsets", s.arrival_offsets}});
  }
  j["ports"] = ordered_json::array();
  for (const auto& p : r.ports)
    j["ports"].push_back({{"node", p.node},
                          {"link", p.link},
                          {"gate_utilization", p.gate_utilization},
                          {"link_utilization", p.link_utilization},
                          {"max_depth", p.max_depth}});
  return j.dump(2) + "\n";
}

std::string report_csv(const SweepReport& r) {
  std::string out = "slot_ns,sets,min,q1,median,q3,max\n";
  for (const auto& row : r.summary)
    out += std::to_string(row.slot.count()) + ',' + std::to_string(row.sets) + ',' + num(row.min) + ',' + num(row.q1) +
           ',' + num(row.median) + ',' + num(row.q3) + ',' + num(row.max) + '\n';
  return out;
}

std::string report_json(const SweepReport& r) {
  ordered_json j;
  j["summary"] = ordered_json::array();
  for (const auto& row : r.summary)
    j["summary"].push_back({{"slot_ns", row.slot.count()},
                            {"sets", row.sets},
                            {"min", row.min},
                            {"q1", row.q1},
                            {"median", row.median},
                            {"q3", row.q3},
                            {"max", row.max}});
  j["cells"] = ordered_json::array();
  for (const auto& c : r.cells)
    j["cells"].push_back({{"slot_ns", c.slot.count()},
                          {"set", c.set},
                          {"uplink", c.uplink},
                          {"downlink", c.downlink},
                          {"wired", c.wired}});
  return j.dump(2) + "\n";
}

void emit_report(const MetricsReport& report, ReportFormat format, const std::string& path) {
  write_file(path, format == ReportFormat::Csv ? report_csv(report) : report_json(report));
}

void emit_report(const SweepReport& report, ReportFormat format, const std::string& path) {
  write_file(path, format == ReportFormat::Csv ? report_csv(report) : report_json(report));
}

}  // namespace tsnpdc
