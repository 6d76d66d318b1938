#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "itinerary/environment.hpp"
#include "itinerary/lattice.hpp"
#include "itinerary/phase.hpp"

namespace itinerary {

/// System goal lattice: the fact lattice of a phase space plus the mapping of
/// movement goals and object goals onto facts.
struct GoalLatticeSpec {
  std::shared_ptr<const PhaseSpace> phase;
  std::map<std::string, Fact> goal_map;
  OpClPartition op_cl;
  FactLattice lattice;

  const Fact& fact(const std::string& id) const;
};

/// Throws NotAFact when a target is not closed.
GoalLatticeSpec make_goal_lattice_spec(std::shared_ptr<const PhaseSpace> phase,
                                       const std::map<std::string, MonoidSubset>& goal_map, OpClPartition op_cl);

/// par(dual(a_1 (x) ... (x) a_l), b_1 (x) ... (x) b_k); empty folds give I.
Fact process_priority(const GoalLatticeSpec& spec, const std::vector<std::string>& movement_ids,
                      const std::vector<std::string>& goal_subset);

struct IntentionCandidate {
  std::vector<std::string> goals;
  Fact priority;
};

/// Non-empty subsets of `discovered` of size <= min(|movement_ids|, subset_cap)
/// whose priority is maximal, in subset order (by size, then by position).
std::vector<IntentionCandidate> select_intentions(const GoalLatticeSpec& spec,
                                                  const std::vector<std::string>& movement_ids,
                                                  const std::vector<std::string>& discovered, std::size_t subset_cap);

/// Score used when several priorities are incomparable: the sum of member
/// weights in the system lattice, with the goal map targets as desires.
boost::rational<long long> intention_score(const GoalLatticeSpec& spec, const std::vector<std::string>& goals);

/// Picks one candidate: the only one, else the highest score, else the first.
/// Sets `fallback` when scoring was needed.
const IntentionCandidate& resolve_intentions(const GoalLatticeSpec& spec,
                                             const std::vector<IntentionCandidate>& candidates, bool& fallback);

struct DesireLattice {
  std::shared_ptr<const FiniteLattice> lattice;
  std::vector<Element> desires;
  Element intention;
};

/// Throws InvalidDesireLattice unless desires are non-empty distinct
/// generators and the intention belongs to the lattice.
DesireLattice make_desire_lattice(std::shared_ptr<const FiniteLattice> lattice, const std::vector<std::string>& desires,
                                  const std::string& intention);

/// Share of the desires lying below `vertex`. Throws ForeignElement.
boost::rational<long long> vertex_weight(const DesireLattice& desires, Element vertex);

enum class MissingVertexPolicy { throw_error, zero_weight };

struct AssignedGoal {
  std::string goal;
  std::size_t agent = 0;
  int stage = 0;  // 1 dominance, 2 desire weight, 3 index tie-break
};

struct Assignment {
  std::vector<AssignedGoal> entries;  // in goal order
  std::vector<std::size_t> free_agents;

  std::optional<std::size_t> agent_for(const std::string& goal) const;
};

/// rewards[agent][goal] follows the order of `goals`. `eligible`, when not
/// empty, has the same shape and excludes agents that cannot reach a goal.
Assignment assign_agents(const std::vector<std::string>& goals, const std::vector<std::vector<RewardValue>>& rewards,
                         const std::vector<DesireLattice>& desires,
                         MissingVertexPolicy policy = MissingVertexPolicy::throw_error,
                         const std::vector<std::vector<char>>& eligible = {});

enum class Eq1Mode { prose, positionwise };

/// moves[t][a] indexes agent_moves() at agent a's position before step t;
/// cells[t][a] is the position after that step.
struct JointPlay {
  std::vector<std::vector<std::size_t>> moves;
  std::vector<std::vector<Cell>> cells;

  std::size_t depth() const noexcept { return cells.size(); }
  friend bool operator==(const JointPlay&, const JointPlay&) = default;
  friend auto operator<=>(const JointPlay& a, const JointPlay& b) { return a.moves <=> b.moves; }
};

/// Reward of a joint play starting from the agents' current positions. The
/// scouted cells of every visited position are joined with, per goal, the
/// best view along the play, met across goals. Positionwise mode meets
/// across goals at each step before joining along the play.
RewardValue play_reward(const GridEnvironment& env, const JointPlay& play, const std::vector<std::size_t>& goals,
                        Eq1Mode mode = Eq1Mode::prose);

struct PlayLimits {
  std::size_t max_depth = 4;
  std::size_t max_agents = 3;
};

/// All joint plays of exactly `depth` synchronous steps whose reward is
/// maximal, sorted by move indices. Throws DepthTooLarge past the limits.
std::vector<JointPlay> choose_play(const GridEnvironment& env, const std::vector<std::size_t>& goals, std::size_t depth,
                                   Eq1Mode mode = Eq1Mode::prose, PlayLimits limits = {});

struct PlannerConfig {
  std::size_t depth = 2;
  std::size_t subset_cap = 3;
  Eq1Mode eq1_mode = Eq1Mode::prose;
  std::size_t patience = 3;
  std::size_t max_steps = 50;
  PlayLimits limits;
  MissingVertexPolicy missing_vertex = MissingVertexPolicy::throw_error;
};

struct ItineraryPlan {
  std::vector<std::string> discovered;
  std::vector<IntentionCandidate> candidates;
  std::vector<std::string> chosen_goals;
  std::optional<Fact> priority_value;
  bool fallback = false;
  Assignment assignment;
  std::vector<JointPlay> plays;  // every maximal play
  JointPlay play;                // the one committed to
  RewardValue total_reward;
};

/// One planning round from the environment's current agent positions.
/// `discovered` lists goal ids, filtered here to goals some agent can reach.
ItineraryPlan plan_step(const GridEnvironment& env, const GoalLatticeSpec& spec,
                        const std::vector<DesireLattice>& desires, const std::vector<std::string>& discovered,
                        const PlannerConfig& config);

struct TraceStep {
  std::size_t index = 0;
  std::vector<Cell> positions;
  std::vector<std::string> discovered;
  ItineraryPlan plan;
  std::vector<Cell> committed;
  std::vector<std::string> achieved;
  RewardValue cumulative;
};

struct Trace {
  std::vector<TraceStep> steps;
  std::vector<std::string> achieved;
  std::string end_reason;  // "goals", "patience" or "max_steps"
};

Trace simulate(const GridEnvironment& env, const GoalLatticeSpec& spec, const std::vector<DesireLattice>& desires,
               const PlannerConfig& config);

/// Line-oriented rendering, one record per step and a closing summary.
std::string format_trace(const GridEnvironment& env, const GoalLatticeSpec& spec, const Trace& trace);
std::string format_rational(const boost::rational<long long>& r);

}  // namespace itinerary
