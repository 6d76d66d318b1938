#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "itinerary/environment.hpp"
#include "itinerary/error.hpp"
#include "itinerary/lattice.hpp"
#include "itinerary/phase.hpp"
#include "itinerary/planner.hpp"

namespace itinerary {

/// Fully validated scenario. Desire lattices follow the agent order.
struct Scenario {
  std::shared_ptr<const PhaseSpace> phase;
  GoalLatticeSpec spec;
  std::vector<std::string> desire_agents;
  std::vector<DesireLattice> desires;
  GridEnvironment env;
  PlannerConfig config;
};

struct CheckResult {
  std::string name;
  bool ok = true;
  std::optional<ErrorCode> code;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  std::optional<Scenario> scenario;  // set only when every check passed

  bool ok() const noexcept { return scenario.has_value(); }
};

/// Parses JSON text. Throws ParseError for malformed JSON or missing and
/// mistyped fields; semantic problems are reported per check instead.
ValidationReport validate_scenario_text(const std::string& text);

/// Reads the file first; an unreadable file is a ParseError.
ValidationReport validate_scenario_file(const std::string& path);

/// Throws the first failing check's error when the scenario is invalid.
Scenario load_scenario_file(const std::string& path);
Scenario load_scenario_text(const std::string& text);

Eq1Mode parse_eq1_mode(const std::string& s);

}  // namespace itinerary
