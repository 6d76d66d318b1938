#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "itinerary/game.hpp"
#include "itinerary/lattice.hpp"

namespace itinerary {

/// Zero-based (col, row); row 0 is the northern edge.
struct Cell {
  int col = 0;
  int row = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

std::string format_cell(Cell c);
int chebyshev_distance(Cell a, Cell b) noexcept;

struct Feature {
  std::string name;
  int range = 0;
};

struct GoalObject {
  std::string id;
  Cell position;
  std::vector<Feature> features;
};

struct AgentState {
  std::string id;
  Cell position;
  int horizon = 0;
  std::string movement_goal_id;
};

/// Member of the reward lattice: a set of atoms, where atoms are first the
/// goal feature names (sorted) and then one "scouted" atom per grid cell.
/// Order is inclusion, join is union, meet is intersection.
class RewardValue {
 public:
  RewardValue() = default;
  explicit RewardValue(std::size_t atoms) : bits_(atoms) {}

  std::size_t atom_count() const noexcept { return bits_.size(); }
  bool test(std::size_t atom) const { return bits_.test(atom); }
  void set(std::size_t atom) { bits_.set(atom); }
  bool none() const noexcept { return bits_.none(); }
  std::size_t count() const noexcept { return bits_.count(); }
  bool leq(const RewardValue& o) const { return bits_.is_subset_of(o.bits_); }
  bool less(const RewardValue& o) const { return bits_.is_proper_subset_of(o.bits_); }

  RewardValue& operator|=(const RewardValue& o) {
    bits_ |= o.bits_;
    return *this;
  }
  RewardValue& operator&=(const RewardValue& o) {
    bits_ &= o.bits_;
    return *this;
  }
  friend RewardValue operator|(RewardValue a, const RewardValue& b) { return a |= b; }
  friend RewardValue operator&(RewardValue a, const RewardValue& b) { return a &= b; }
  friend bool operator==(const RewardValue&, const RewardValue&) = default;

  const boost::dynamic_bitset<>& bits() const noexcept { return bits_; }

 private:
  boost::dynamic_bitset<> bits_;
};

/// Immutable grid with obstacles, agents and goal objects.
class GridEnvironment {
 public:
  /// Throws InvalidEnvironment on empty or oversized grids, duplicate ids,
  /// duplicate feature names, negative horizons or ranges; OutOfBounds or
  /// OnObstacle for misplaced agents and goals.
  GridEnvironment(int width, int height, std::vector<Cell> obstacles, std::vector<AgentState> agents,
                  std::vector<GoalObject> goals);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  const std::vector<Cell>& obstacles() const noexcept { return obstacles_; }
  const std::vector<AgentState>& agents() const noexcept { return agents_; }
  const std::vector<GoalObject>& goals() const noexcept { return goals_; }

  bool in_bounds(Cell c) const noexcept;
  bool blocked(Cell c) const noexcept;
  /// Throws OutOfBounds or OnObstacle.
  void require_free(Cell c) const;

  std::size_t agent_index(std::string_view id) const;
  std::size_t goal_index(std::string_view id) const;

  /// Same grid and goals with the agents moved; positions are validated.
  GridEnvironment with_agent_positions(const std::vector<Cell>& positions) const;

  /// Atom universe of RewardValue.
  std::size_t atom_count() const noexcept { return feature_names_.size() + cell_count(); }
  std::size_t feature_count() const noexcept { return feature_names_.size(); }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  std::size_t feature_atom(std::string_view name) const;
  std::size_t cell_atom(Cell c) const;
  std::string atom_name(std::size_t atom) const;
  RewardValue empty_reward() const { return RewardValue(atom_count()); }
  /// Sorted atom names, e.g. "[color,outline]".
  std::string format(const RewardValue& r) const;

 private:
  std::size_t cell_count() const noexcept { return static_cast<std::size_t>(width_) * height_; }

  int width_;
  int height_;
  std::vector<Cell> obstacles_;
  std::vector<char> blocked_;
  std::vector<AgentState> agents_;
  std::vector<GoalObject> goals_;
  std::vector<std::string> feature_names_;
};

/// True when the Bresenham ray between the two cell centres crosses no
/// obstacle; the endpoints themselves are not tested.
bool line_of_sight(const GridEnvironment& env, Cell from, Cell to);

/// Features of the goal seen from `position` by an observer with the given
/// horizon.
RewardValue reward(const GridEnvironment& env, Cell position, int horizon, std::size_t goal);
RewardValue reward(const GridEnvironment& env, const AgentState& agent, std::size_t goal);

/// Scouted-cell atoms for every in-bounds cell within the horizon and in
/// line of sight.
RewardValue scout(const GridEnvironment& env, Cell position, int horizon);

/// Goals with a nonempty reward for the agent, in goal order.
std::vector<std::pair<std::string, RewardValue>> visible_goals(const GridEnvironment& env, std::size_t agent);

/// Neighbours in the order N, E, S, W, then the cell itself.
std::vector<Cell> agent_moves(const GridEnvironment& env, Cell position);

bool reachable(const GridEnvironment& env, Cell from, Cell to);
/// Shortest 4-connected path length from `from` to every cell, indexed
/// row * width + col; SIZE_MAX where unreachable or blocked.
std::vector<std::size_t> distance_field(const GridEnvironment& env, Cell from);
/// Length of a shortest 4-connected path, if one exists.
std::optional<std::size_t> path_distance(const GridEnvironment& env, Cell from, Cell to);

struct AgentGame {
  ConwayGame game;
  /// Grid cell of every vertex.
  std::vector<Cell> cells;
  /// Powerset of the queried goals' feature names.
  std::shared_ptr<const FiniteLattice> payoff_lattice;
};

/// Game tree of one agent unrolled to `depth` Opponent moves. Each Opponent
/// move to a cell is followed by a single Proponent reveal move; the reveal
/// vertex carries the join of the rewards of `goals` at that cell, the
/// intermediate vertex carries bottom.
AgentGame build_agent_game(const GridEnvironment& env, std::size_t agent, std::size_t depth,
                           const std::vector<std::size_t>& goals);

}  // namespace itinerary
