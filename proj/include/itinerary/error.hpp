#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace itinerary {

enum class ErrorCode {
  // lattice-core
  reflexivity_violation,
  antisymmetry_violation,
  transitivity_violation,
  not_a_lattice,
  foreign_element,
  not_brouwerian,
  unknown_element,
  duplicate_element,
  generators_incomplete,
  lattice_too_large,
  // phase-logic
  not_closed,
  not_associative,
  unit_law_violation,
  space_mismatch,
  not_a_fact,
  carrier_too_large,
  not_dual_classes,
  not_closed_under_ops,
  wrong_extremes,
  // game-engine
  invalid_game,
  invalid_play,
  payoff_lattice_mismatch,
  game_mismatch,
  empty_strategy,
  odd_length,
  not_alternating,
  wrong_opening,
  not_prefix_closed,
  not_deterministic,
  no_payoff,
  // environment
  out_of_bounds,
  on_obstacle,
  invalid_environment,
  // planner
  unknown_goal_id,
  length_mismatch,
  depth_too_large,
  no_legal_play,
  missing_desire_vertex,
  invalid_desire_lattice,
  // scenario / cli
  parse_error,
  invalid_scenario,
  unknown_target,
  internal,
};

/// Stable CamelCase name used in CLI reports, e.g. "NotAssociative".
std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace itinerary
