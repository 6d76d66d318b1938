#include "itinerary/environment.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <set>

#include "itinerary/error.hpp"

namespace itinerary {

namespace {

constexpr int max_side = 256;

}  // namespace

std::string format_cell(Cell c) { return "(" + std::to_string(c.col) + "," + std::to_string(c.row) + ")"; }

int chebyshev_distance(Cell a, Cell b) noexcept { return std::max(std::abs(a.col - b.col), std::abs(a.row - b.row)); }

GridEnvironment::GridEnvironment(int width, int height, std::vector<Cell> obstacles, std::vector<AgentState> agents,
                                 std::vector<GoalObject> goals)
    : width_(width), height_(height), obstacles_(std::move(obstacles)), agents_(std::move(agents)), goals_(std::move(goals)) {
  if (width_ < 1 || height_ < 1 || width_ > max_side || height_ > max_side) {
    throw Error(ErrorCode::invalid_environment,
                "grid " + std::to_string(width_) + "x" + std::to_string(height_) + " outside 1.." + std::to_string(max_side));
  }
  blocked_.assign(cell_count(), 0);
  for (Cell c : obstacles_) {
    if (!in_bounds(c)) throw Error(ErrorCode::out_of_bounds, "obstacle " + format_cell(c));
    blocked_[static_cast<std::size_t>(c.row) * width_ + c.col] = 1;
  }
  std::sort(obstacles_.begin(), obstacles_.end());
  obstacles_.erase(std::unique(obstacles_.begin(), obstacles_.end()), obstacles_.end());

  std::set<std::string> seen;
  for (const auto& a : agents_) {
    if (!seen.insert(a.id).second) throw Error(ErrorCode::invalid_environment, "duplicate agent id '" + a.id + "'");
    if (a.horizon < 0) throw Error(ErrorCode::invalid_environment, "agent '" + a.id + "' has a negative horizon");
    if (!in_bounds(a.position)) throw Error(ErrorCode::out_of_bounds, "agent '" + a.id + "' at " + format_cell(a.position));
    if (blocked(a.position)) throw Error(ErrorCode::on_obstacle, "agent '" + a.id + "' at " + format_cell(a.position));
  }
  seen.clear();
  std::set<std::string> features;
  for (const auto& g : goals_) {
    if (!seen.insert(g.id).second) throw Error(ErrorCode::invalid_environment, "duplicate goal id '" + g.id + "'");
    if (!in_bounds(g.position)) throw Error(ErrorCode::out_of_bounds, "goal '" + g.id + "' at " + format_cell(g.position));
    if (blocked(g.position)) throw Error(ErrorCode::on_obstacle, "goal '" + g.id + "' at " + format_cell(g.position));
    std::set<std::string> own;
    for (const auto& f : g.features) {
      if (!own.insert(f.name).second) {
        throw Error(ErrorCode::invalid_environment, "goal '" + g.id + "' repeats feature '" + f.name + "'");
      }
      if (f.range < 0) throw Error(ErrorCode::invalid_environment, "feature '" + f.name + "' has a negative range");
      features.insert(f.name);
    }
  }
  feature_names_.assign(features.begin(), features.end());
}

bool GridEnvironment::in_bounds(Cell c) const noexcept {
  return c.col >= 0 && c.row >= 0 && c.col < width_ && c.row < height_;
}

bool GridEnvironment::blocked(Cell c) const noexcept {
  return in_bounds(c) && blocked_[static_cast<std::size_t>(c.row) * width_ + c.col];
}

void GridEnvironment::require_free(Cell c) const {
  if (!in_bounds(c)) throw Error(ErrorCode::out_of_bounds, format_cell(c));
  if (blocked(c)) throw Error(ErrorCode::on_obstacle, format_cell(c));
}

std::size_t GridEnvironment::agent_index(std::string_view id) const {
  for (std::size_t i = 0; i < agents_.size(); ++i)
    if (agents_[i].id == id) return i;
  throw Error(ErrorCode::unknown_goal_id, "no agent '" + std::string(id) + "'");
}

std::size_t GridEnvironment::goal_index(std::string_view id) const {
  for (std::size_t i = 0; i < goals_.size(); ++i)
    if (goals_[i].id == id) return i;
  throw Error(ErrorCode::unknown_goal_id, "no goal '" + std::string(id) + "'");
}

GridEnvironment GridEnvironment::with_agent_positions(const std::vector<Cell>& positions) const {
  if (positions.size() != agents_.size()) throw Error(ErrorCode::length_mismatch, "one position per agent required");
  auto agents = agents_;
  for (std::size_t i = 0; i < agents.size(); ++i) agents[i].position = positions[i];
  return GridEnvironment(width_, height_, obstacles_, std::move(agents), goals_);
}

std::size_t GridEnvironment::feature_atom(std::string_view name) const {
  auto it = std::lower_bound(feature_names_.begin(), feature_names_.end(), name);
  if (it == feature_names_.end() || *it != name) {
    throw Error(ErrorCode::unknown_element, "no feature '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - feature_names_.begin());
}

std::size_t GridEnvironment::cell_atom(Cell c) const {
  if (!in_bounds(c)) throw Error(ErrorCode::out_of_bounds, format_cell(c));
  return feature_names_.size() + static_cast<std::size_t>(c.row) * width_ + c.col;
}

std::string GridEnvironment::atom_name(std::size_t atom) const {
  if (atom < feature_names_.size()) return feature_names_[atom];
  const std::size_t c = atom - feature_names_.size();
  return "scouted" + format_cell({static_cast<int>(c % width_), static_cast<int>(c / width_)});
}

std::string GridEnvironment::format(const RewardValue& r) const {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < r.atom_count(); ++i)
    if (r.test(i)) names.push_back(atom_name(i));
  std::sort(names.begin(), names.end());
  std::string out = "[";
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "," : "") + names[i];
  return out + "]";
}

bool line_of_sight(const GridEnvironment& env, Cell from, Cell to) {
  int x = from.col, y = from.row;
  const int dx = std::abs(to.col - x), dy = -std::abs(to.row - y);
  const int sx = x < to.col ? 1 : -1, sy = y < to.row ? 1 : -1;
  int err = dx + dy;
  while (true) {
    if (x == to.col && y == to.row) return true;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y += sy;
    }
    if (!(x == to.col && y == to.row) && env.blocked({x, y})) return false;
  }
}

RewardValue reward(const GridEnvironment& env, Cell position, int horizon, std::size_t goal) {
  env.require_free(position);
  const GoalObject& g = env.goals().at(goal);
  RewardValue out = env.empty_reward();
  const int d = chebyshev_distance(position, g.position);
  if (d > horizon || !line_of_sight(env, position, g.position)) return out;
  for (const auto& f : g.features)
    if (d <= f.range) out.set(env.feature_atom(f.name));
  return out;
}

RewardValue reward(const GridEnvironment& env, const AgentState& agent, std::size_t goal) {
  return reward(env, agent.position, agent.horizon, goal);
}

RewardValue scout(const GridEnvironment& env, Cell position, int horizon) {
  RewardValue out = env.empty_reward();
  for (int r = position.row - horizon; r <= position.row + horizon; ++r) {
    for (int c = position.col - horizon; c <= position.col + horizon; ++c) {
      const Cell cell{c, r};
      if (env.in_bounds(cell) && line_of_sight(env, position, cell)) out.set(env.cell_atom(cell));
    }
  }
  return out;
}

std::vector<std::pair<std::string, RewardValue>> visible_goals(const GridEnvironment& env, std::size_t agent) {
  std::vector<std::pair<std::string, RewardValue>> out;
  const AgentState& a = env.agents().at(agent);
  for (std::size_t g = 0; g < env.goals().size(); ++g) {
    RewardValue r = reward(env, a, g);
    if (!r.none()) out.emplace_back(env.goals()[g].id, std::move(r));
  }
  return out;
}

std::vector<Cell> agent_moves(const GridEnvironment& env, Cell position) {
  std::vector<Cell> out;
  const Cell steps[] = {{position.col, position.row - 1},
                        {position.col + 1, position.row},
                        {position.col, position.row + 1},
                        {position.col - 1, position.row}};
  for (Cell c : steps)
    if (env.in_bounds(c) && !env.blocked(c)) out.push_back(c);
  out.push_back(position);
  return out;
}

std::vector<std::size_t> distance_field(const GridEnvironment& env, Cell from) {
  env.require_free(from);
  const auto index = [&](Cell c) { return static_cast<std::size_t>(c.row) * env.width() + c.col; };
  std::vector<std::size_t> dist(static_cast<std::size_t>(env.width()) * env.height(), SIZE_MAX);
  std::deque<Cell> queue{from};
  dist[index(from)] = 0;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    for (Cell n : agent_moves(env, c)) {
      if (dist[index(n)] == SIZE_MAX) {
        dist[index(n)] = dist[index(c)] + 1;
        queue.push_back(n);
      }
    }
  }
  return dist;
}

std::optional<std::size_t> path_distance(const GridEnvironment& env, Cell from, Cell to) {
  env.require_free(to);
  const std::size_t d = distance_field(env, from)[static_cast<std::size_t>(to.row) * env.width() + to.col];
  if (d == SIZE_MAX) return std::nullopt;
  return d;
}

bool reachable(const GridEnvironment& env, Cell from, Cell to) { return path_distance(env, from, to).has_value(); }

AgentGame build_agent_game(const GridEnvironment& env, std::size_t agent, std::size_t depth,
                           const std::vector<std::size_t>& goals) {
  const AgentState& a = env.agents().at(agent);
  std::set<std::string> names;
  for (std::size_t g : goals)
    for (const auto& f : env.goals().at(g).features) names.insert(f.name);
  std::vector<std::string> atoms(names.begin(), names.end());
  auto lattice = std::make_shared<const FiniteLattice>(FiniteLattice::powerset(atoms));

  // Powerset element index is the bitmask over the sorted atoms.
  const auto payoff_at = [&](Cell c) {
    std::uint32_t mask = 0;
    for (std::size_t g : goals) {
      RewardValue r = reward(env, c, a.horizon, g);
      for (std::size_t i = 0; i < atoms.size(); ++i)
        if (r.test(env.feature_atom(atoms[i]))) mask |= 1U << i;
    }
    return Element{lattice->id(), mask};
  };

  std::vector<std::string> labels{format_cell(a.position)};
  std::vector<Cell> cells{a.position};
  std::vector<Element> values{payoff_at(a.position)};
  std::vector<Move> moves;
  auto grow = [&](auto&& self, std::size_t vertex, std::size_t remaining) -> void {
    if (remaining == 0) return;
    for (Cell next : agent_moves(env, cells[vertex])) {
      const std::size_t pending = labels.size();
      labels.push_back(format_cell(next) + "?");
      cells.push_back(next);
      values.push_back(lattice->bottom());
      moves.push_back({vertex, pending, Polarity::opponent});
      const std::size_t revealed = labels.size();
      labels.push_back(format_cell(next));
      cells.push_back(next);
      values.push_back(payoff_at(next));
      moves.push_back({pending, revealed, Polarity::proponent});
      self(self, revealed, remaining - 1);
    }
  };
  grow(grow, 0, depth);
  ConwayGame game(std::move(labels), 0, std::move(moves), Payoff{lattice, std::move(values)});
  return AgentGame{std::move(game), std::move(cells), std::move(lattice)};
}

}  // namespace itinerary
