// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsnpdc/bridge.hpp"
#include "tsnpdc/delay.hpp"
#include "tsnpdc/network.hpp"
#include "tsnpdc/scheduler.hpp"

namespace tsnpdc {

enum class ResidenceSelector { Med, Max, Pdc };
const char* to_string(ResidenceSelector selector);
ResidenceSelector parse_residence_selector(std::string_view text);

struct Scenario {
  std::string name = "scenario";
  Topology topology;
  std::vector<Stream> streams;
  DelayHistogram uplink;
  DelayHistogram downlink;
  PdcConfig pdc;
  ResidenceSelector residence = ResidenceSelector::Pdc;
  std::uint64_t cycles = 10'000;  // hypercycles to simulate
  std::uint64_t seed = 1;
  /// Targets rounded up to the slot size while loading.
  std::vector<std::string> warnings;
};

/// Reads a scenario document. Relative histogram paths resolve against the
/// file's directory. Throws ParseError (with line and column) on syntax or
/// type errors, ValidationError on semantic problems, IoError if unreadable.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = ".");

/// Replaces the residence selector and/or PDC mode after loading, redoing the
/// target normalization. Throws ValidationError on an inconsistent pair.
void override_selection(Scenario& scenario, std::optional<ResidenceSelector> residence,
                        std::optional<PdcMode> pdc_mode);

/// Residence model the scheduler should assume for this scenario: constant
/// median or maximum wireless delay, or the interval PDC guarantees.
ResidenceModel residence_model(const Scenario& scenario);

/// Residence interval PDC enforces for one target. Virtual slots release at
/// the start of the egress slot, giving (target - slot, target]; slot
/// emulation adds [0, slot) on top of the target. Clock offset widens both
/// ends.
ResidenceInterval pdc_interval(const PdcConfig& config, TimeNs target);

}  // namespace tsnpdc
