// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tsnpdc/experiment.hpp"

namespace py = pybind11;
using namespace tsnpdc;

namespace {

Scenario load(const std::string& path, const std::optional<std::string>& residence,
              const std::optional<std::string>& pdc) {
  Scenario sc = load_scenario(path);
  std::optional<ResidenceSelector> sel;
  std::optional<PdcMode> mode;
  if (residence) sel = parse_residence_selector(*residence);
  if (pdc) mode = parse_pdc_mode(*pdc);
  override_selection(sc, sel, mode);
  return sc;
}

// Reports cross the boundary as JSON text; the Python side decodes them.
py::object from_json(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "TSN schedule synthesis and packet delay correction simulator";

  // Translators run newest first, so the base class goes in first.
  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", base);
  py::register_exception<ValidationError>(m, "ValidationError", base);
  py::register_exception<ScheduleInfeasible>(m, "ScheduleInfeasible", base);

  m.def("parse_duration", [](const std::string& s) { return parse_duration(s).count(); }, py::arg("text"),
        "Duration text such as '14ms' or '500us' to integer nanoseconds.");

  m.def(
      "scenario_info",
      [](const std::string& path) {
        const Scenario sc = load_scenario(path);
        py::dict d;
        d["name"] = sc.name;
        d["residence"] = to_string(sc.residence);
        d["pdc_mode"] = to_string(sc.pdc.mode);
        d["cycles"] = sc.cycles;
        d["seed"] = sc.seed;
        py::list streams;
        for (const auto& s : sc.streams) {
          py::dict e;
          e["id"] = s.id;
          e["direction"] = to_string(s.direction);
          e["period_ns"] = s.period.count();
          e["deadline_ns"] = s.deadline.count();
          streams.append(e);
        }
        d["streams"] = streams;
        d["warnings"] = sc.warnings;
        return d;
      },
      py::arg("scenario"));

  m.def(
      "schedule",
      [](const std::string& path, std::optional<std::string> residence, std::optional<std::string> pdc) {
        const Scenario sc = load(path, residence, pdc);
        SynthesisResult r;
        {
          py::gil_scoped_release unlock;
          r = synthesize(sc.streams, sc.topology, residence_model(sc));
        }
        if (!r) throw ScheduleInfeasible(r);
        return from_json(schedule_to_json(*r.schedule));
      },
      py::arg("scenario"), py::arg("residence") = py::none(), py::arg("pdc") = py::none(),
      "Synthesize a schedule; returns the schedule document as a dict.");

  m.def(
      "verify",
      [](py::object schedule, const std::string& path, std::optional<std::string> residence,
         std::optional<std::string> pdc) {
        const Scenario sc = load(path, residence, pdc);
        const std::string text = py::isinstance<py::str>(schedule)
                                     ? schedule.cast<std::string>()
                                     : py::module_::import("json").attr("dumps")(schedule).cast<std::string>();
        return verify_schedule(schedule_from_json(text), sc.streams, sc.topology, residence_model(sc));
      },
      py::arg("schedule"), py::arg("scenario"), py::arg("residence") = py::none(), py::arg("pdc") = py::none(),
      "Constraint violations of a schedule (dict or JSON text); empty when valid.");

  m.def(
      "run",
      [](const std::string& path, std::optional<std::uint64_t> seed, std::optional<std::uint64_t> cycles,
         std::optional<std::string> residence, std::optional<std::string> pdc, std::optional<std::string> trace) {
        const Scenario sc = load(path, residence, pdc);
        RunOptions o;
        o.seed = seed;
        o.cycles = cycles;
        o.trace_path = trace;
        std::string json;
        {
          py::gil_scoped_release unlock;
          json = report_json(run_experiment(sc, o));
        }
        return from_json(json);
      },
      py::arg("scenario"), py::arg("seed") = py::none(), py::arg("cycles") = py::none(),
      py::arg("residence") = py::none(), py::arg("pdc") = py::none(), py::arg("trace") = py::none(),
      "Synthesize and simulate; returns the metrics report as a dict.");

  m.def(
      "sweep",
      [](const std::string& path, std::vector<std::string> slots, std::size_t sets, std::optional<std::uint64_t> seed,
         unsigned threads) {
        const Scenario sc = load_scenario(path);
        SweepOptions o;
        o.slots.clear();
        for (const auto& s : slots) o.slots.push_back(parse_duration(s));
        o.sets = sets;
        o.seed = seed.value_or(sc.seed);
        o.threads = threads;
        std::string json;
        {
          py::gil_scoped_release unlock;
          json = report_json(sweep_slot_sizes(sc, o));
        }
        return from_json(json);
      },
      py::arg("scenario"), py::arg("slots") = std::vector<std::string>{"1us", "10us", "100us", "250us", "500us"},
      py::arg("sets") = 100, py::arg("seed") = py::none(), py::arg("threads") = 0,
      "Admitted wireless streams per virtual slot size.");

  m.def(
      "synth_histogram",
      [](const std::string& median, const std::string& max, const std::string& min, std::size_t bins) {
        const auto h = synth_histogram(parse_duration(median), parse_duration(max), parse_duration(min), bins);
        return save_histogram(h);
      },
      py::arg("median"), py::arg("max"), py::arg("min") = "2ms", py::arg("bins") = 400,
      "Synthetic delay histogram as CSV text.");
}
