#include "itinerary/error.hpp"

namespace itinerary {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::reflexivity_violation: return "ReflexivityViolation";
    case ErrorCode::antisymmetry_violation: return "AntisymmetryViolation";
    case ErrorCode::transitivity_violation: return "TransitivityViolation";
    case ErrorCode::not_a_lattice: return "NotALattice";
    case ErrorCode::foreign_element: return "ForeignElement";
    case ErrorCode::not_brouwerian: return "NotBrouwerian";
    case ErrorCode::unknown_element: return "UnknownElement";
    case ErrorCode::duplicate_element: return "DuplicateElement";
    case ErrorCode::generators_incomplete: return "GeneratorsIncomplete";
    case ErrorCode::lattice_too_large: return "LatticeTooLarge";
    case ErrorCode::not_closed: return "NotClosed";
    case ErrorCode::not_associative: return "NotAssociative";
    case ErrorCode::unit_law_violation: return "UnitLawViolation";
    case ErrorCode::space_mismatch: return "SpaceMismatch";
    case ErrorCode::not_a_fact: return "NotAFact";
    case ErrorCode::carrier_too_large: return "CarrierTooLarge";
    case ErrorCode::not_dual_classes: return "NotDualClasses";
    case ErrorCode::not_closed_under_ops: return "NotClosedUnderOps";
    case ErrorCode::wrong_extremes: return "WrongExtremes";
    case ErrorCode::invalid_game: return "InvalidGame";
    case ErrorCode::invalid_play: return "InvalidPlay";
    case ErrorCode::payoff_lattice_mismatch: return "PayoffLatticeMismatch";
    case ErrorCode::game_mismatch: return "GameMismatch";
    case ErrorCode::empty_strategy: return "EmptyStrategy";
    case ErrorCode::odd_length: return "OddLength";
    case ErrorCode::not_alternating: return "NotAlternating";
    case ErrorCode::wrong_opening: return "WrongOpening";
    case ErrorCode::not_prefix_closed: return "NotPrefixClosed";
    case ErrorCode::not_deterministic: return "NotDeterministic";
    case ErrorCode::no_payoff: return "NoPayoff";
    case ErrorCode::out_of_bounds: return "OutOfBounds";
    case ErrorCode::on_obstacle: return "OnObstacle";
    case ErrorCode::invalid_environment: return "InvalidEnvironment";
    case ErrorCode::unknown_goal_id: return "UnknownGoalId";
    case ErrorCode::length_mismatch: return "LengthMismatch";
    case ErrorCode::depth_too_large: return "DepthTooLarge";
    case ErrorCode::no_legal_play: return "NoLegalPlay";
    case ErrorCode::missing_desire_vertex: return "MissingDesireVertex";
    case ErrorCode::invalid_desire_lattice: return "InvalidDesireLattice";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::invalid_scenario: return "InvalidScenario";
    case ErrorCode::unknown_target: return "UnknownTarget";
    case ErrorCode::internal: return "InternalError";
  }
  return "UnknownError";
}

}  // namespace itinerary
