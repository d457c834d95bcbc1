// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: schedule, verify, run, sweep, synth-hist.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "tsnpdc/experiment.hpp"

namespace {

constexpr int kInfeasible = 2;
constexpr int kInvalid = 3;

std::vector<tsnpdc::TimeNs> parse_slots(const std::string& list) {
  std::vector<tsnpdc::TimeNs> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(tsnpdc::parse_duration(item));
  if (out.empty()) throw tsnpdc::BadParams("--slots needs at least one slot size");
  return out;
}

tsnpdc::Scenario load(const std::string& path, const std::string& residence, const std::string& pdc) {
  auto sc = tsnpdc::load_scenario(path);
  std::optional<tsnpdc::ResidenceSelector> sel;
  std::optional<tsnpdc::PdcMode> mode;
  if (!residence.empty()) sel = tsnpdc::parse_residence_selector(residence);
  if (!pdc.empty()) mode = tsnpdc::parse_pdc_mode(pdc);
  tsnpdc::override_selection(sc, sel, mode);
  for (const auto& w : sc.warnings) std::cerr << "warning: " << w << "\n";
  return sc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TSN schedule synthesis and packet delay correction simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_path, schedule_path, residence, pdc, trace_path, slots = "1us,10us,100us,250us,500us";
  std::uint64_t seed = 0, cycles = 0;
  std::size_t sets = 100;
  unsigned threads = 0;

  auto* schedule = app.add_subcommand("schedule", "synthesize a schedule for a scenario");
  schedule->add_option("scenario", scenario_path)->required();
  schedule->add_option("-o,--output", out_path, "schedule JSON")->required();
  schedule->add_option("--residence", residence, "override the residence selector: med, max or pdc");
  schedule->add_option("--pdc", pdc, "override the pdc mode: off, timestamp or virtual_slot");

  auto* verify = app.add_subcommand("verify", "check a schedule against a scenario");
  verify->add_option("schedule", schedule_path)->required();
  verify->add_option("scenario", scenario_path)->required();
  verify->add_option("--residence", residence, "override the residence selector: med, max or pdc");
  verify->add_option("--pdc", pdc, "override the pdc mode: off, timestamp or virtual_slot");

  auto* run = app.add_subcommand("run", "synthesize and simulate a scenario");
  run->add_option("scenario", scenario_path)->required();
  auto* seed_opt = run->add_option("--seed", seed);
  auto* cycles_opt = run->add_option("--cycles", cycles, "hypercycles to simulate");
  run->add_option("--trace", trace_path, "per-frame arrival CSV");
  run->add_option("--schedule", schedule_path, "use this schedule instead of synthesizing one");
  run->add_option("--residence", residence, "override the residence selector: med, max or pdc");
  run->add_option("--pdc", pdc, "override the pdc mode: off, timestamp or virtual_slot");
  run->add_option("-o,--output", out_path, "report .csv or .json")->required();

  auto* sweep = app.add_subcommand("sweep", "virtual slot size sweep of schedulable wireless streams");
  sweep->add_option("scenario", scenario_path)->required();
  sweep->add_option("--slots", slots, "comma-separated slot sizes");
  sweep->add_option("--sets", sets, "random stream sets per slot size");
  auto* sweep_seed = sweep->add_option("--seed", seed);
  sweep->add_option("--threads", threads, "worker threads (TSNPDC_THREADS caps this)");
  sweep->add_option("-o,--output", out_path, "sweep .csv or .json")->required();

  std::string median = "6.38ms", max = "14ms", min = "2ms";
  std::size_t bins = 400;
  auto* synth = app.add_subcommand("synth-hist", "write a synthetic delay histogram CSV");
  synth->add_option("--median", median);
  synth->add_option("--max", max);
  synth->add_option("--min", min);
  synth->add_option("--bins", bins);
  synth->add_option("-o,--output", out_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*schedule) {
      auto sc = load(scenario_path, residence, pdc);
      auto r = tsnpdc::synthesize(sc.streams, sc.topology, tsnpdc::residence_model(sc));
      if (!r) {
        std::cerr << tsnpdc::to_string(r.status) << ": " << r.witness << "\n";
        return kInfeasible;
      }
      tsnpdc::save_schedule(*r.schedule, out_path);
      std::cout << "scheduled " << r.schedule->streams.size() << " streams, hypercycle "
                << tsnpdc::format_duration(r.schedule->hypercycle) << "\n";
    } else if (*verify) {
      auto sc = load(scenario_path, residence, pdc);
      const auto sched = tsnpdc::load_schedule(schedule_path);
      const auto v = tsnpdc::verify_schedule(sched, sc.streams, sc.topology, tsnpdc::residence_model(sc));
      for (const auto& line : v) std::cout << line << "\n";
      if (!v.empty()) return kInfeasible;
      std::cout << "ok\n";
    } else if (*run) {
      auto sc = load(scenario_path, residence, pdc);
      tsnpdc::RunOptions opt;
      if (*seed_opt) opt.seed = seed;
      if (*cycles_opt) opt.cycles = cycles;
      if (!trace_path.empty()) opt.trace_path = trace_path;
      if (!schedule_path.empty()) opt.schedule = tsnpdc::load_schedule(schedule_path);
      const auto format = tsnpdc::format_for_path(out_path);
      const auto report = tsnpdc::run_experiment(sc, opt);
      tsnpdc::emit_report(report, format, out_path);
      std::uint64_t misses = 0;
      for (const auto& s : report.streams) misses += s.deadline_misses;
      std::cout << report.streams.size() << " streams, " << report.hypercycles << " hypercycles, " << misses
                << " deadline misses, worst " << report.worst_stream << "\n";
    } else if (*sweep) {
      auto sc = load(scenario_path, residence, pdc);
      tsnpdc::SweepOptions opt;
      opt.slots = parse_slots(slots);
      opt.sets = sets;
      opt.seed = *sweep_seed ? seed : sc.seed;
      opt.threads = threads;
      const auto format = tsnpdc::format_for_path(out_path);
      const auto report = tsnpdc::sweep_slot_sizes(sc, opt);
      tsnpdc::emit_report(report, format, out_path);
      for (const auto& row : report.summary)
        std::cout << tsnpdc::format_duration(row.slot) << ": median " << row.median << " admitted\n";
    } else if (*synth) {
      const auto h = tsnpdc::synth_histogram(tsnpdc::parse_duration(median), tsnpdc::parse_duration(max),
                                             tsnpdc::parse_duration(min), bins);
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw tsnpdc::IoError("cannot write " + out_path);
      f << tsnpdc::save_histogram(h);
    }
  } catch (const tsnpdc::ScheduleInfeasible& e) {
    std::cerr << e.what() << "\n";
    return kInfeasible;
  } catch (const tsnpdc::ParseError& e) {
    std::cerr << scenario_path << ":" << e.what() << "\n";
    return kInvalid;
  } catch (const tsnpdc::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kInvalid;
  } catch (const tsnpdc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
