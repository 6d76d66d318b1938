#pragma once

#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "itinerary/environment.hpp"
#include "itinerary/planner.hpp"
#include "sample_monoids.hpp"

namespace itinerary::testing {

/// Union monoid on two atoms {e, p, q, pq} with false set {p, q}. Its facts
/// are {}, {e}, {p}, {e,p}, {q}, {e,q}, {p,q} and M.
inline std::shared_ptr<const PhaseSpace> union_space() {
  return std::make_shared<const PhaseSpace>(validate_monoid(
      {"e", "p", "q", "pq"}, std::vector<std::size_t>{0, 1, 2, 3, 1, 1, 3, 3, 2, 3, 2, 3, 3, 3, 3, 3}, 0, 0b0110));
}

inline GoalLatticeSpec union_spec(const std::map<std::string, std::vector<std::string>>& goal_map) {
  auto space = union_space();
  std::vector<MonoidSubset> open{space->zero().subset(), space->unit_fact().subset()};
  std::vector<MonoidSubset> closed{space->one().subset(), space->false_fact().subset()};
  OpClPartition op_cl = validate_op_cl(*space, open, closed);
  std::map<std::string, MonoidSubset> targets;
  for (const auto& [id, members] : goal_map) targets.emplace(id, space->subset(members));
  return make_goal_lattice_spec(space, targets, std::move(op_cl));
}

/// Goal map of the bundled scenario.
inline GoalLatticeSpec bundled_spec() {
  return union_spec({{"a1", {"e"}}, {"a2", {"e"}}, {"a3", {"e"}}, {"b1", {"p"}}, {"b2", {"q"}}, {"b3", {"e", "q"}}});
}

struct PlannerInstance {
  GridEnvironment env;
  std::vector<std::size_t> goals;
  std::size_t depth;
};

/// Grids up to 4x4, up to 2 agents and 2 goals, depth up to 3, a few obstacles.
inline PlannerInstance random_planner_instance(std::mt19937& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  while (true) {
    const int w = pick(2, 4), h = pick(2, 4);
    std::vector<Cell> obstacles;
    for (int i = pick(0, 2); i > 0; --i) obstacles.push_back({pick(0, w - 1), pick(0, h - 1)});
    const auto free = [&](Cell c) { return std::find(obstacles.begin(), obstacles.end(), c) == obstacles.end(); };
    std::vector<AgentState> agents;
    for (int i = pick(1, 2); i > 0; --i) {
      agents.push_back({"agent-" + std::to_string(agents.size() + 1), {pick(0, w - 1), pick(0, h - 1)}, pick(0, 3), "a"});
    }
    std::vector<GoalObject> goals;
    const char* names[] = {"outline", "color", "marking"};
    for (int i = pick(0, 2); i > 0; --i) {
      GoalObject g{"g" + std::to_string(goals.size() + 1), {pick(0, w - 1), pick(0, h - 1)}, {}};
      for (const char* n : names)
        if (pick(0, 2) > 0) g.features.push_back({n, pick(0, 3)});
      goals.push_back(std::move(g));
    }
    bool ok = true;
    for (const auto& a : agents) ok &= free(a.position);
    for (const auto& g : goals) ok &= free(g.position);
    if (!ok) continue;
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < goals.size(); ++i) chosen.push_back(i);
    const std::size_t depth = static_cast<std::size_t>(pick(0, 3));
    return {GridEnvironment(w, h, obstacles, agents, goals), chosen, depth};
  }
}

}  // namespace itinerary::testing
