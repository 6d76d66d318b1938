#include "itinerary/planner.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "itinerary/error.hpp"

namespace itinerary {

namespace {

using Rational = boost::rational<long long>;

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out = "[";
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? "," : "") + ids[i];
  return out + "]";
}

std::size_t cell_index(const GridEnvironment& env, Cell c) { return static_cast<std::size_t>(c.row) * env.width() + c.col; }

// Per-agent, per-cell memo of the scouted cells and of each goal's reward.
class RewardTables {
 public:
  RewardTables(const GridEnvironment& env, const std::vector<std::size_t>& goals)
      : env_(env), goals_(goals), entries_(env.agents().size() * static_cast<std::size_t>(env.width()) * env.height()) {}

  struct Entry {
    bool ready = false;
    RewardValue scouted;
    std::vector<RewardValue> per_goal;
  };

  const Entry& at(std::size_t agent, Cell c) {
    Entry& e = entries_[agent * env_.width() * env_.height() + cell_index(env_, c)];
    if (!e.ready) {
      const int h = env_.agents()[agent].horizon;
      e.scouted = scout(env_, c, h);
      for (std::size_t g : goals_) e.per_goal.push_back(reward(env_, c, h, g));
      e.ready = true;
    }
    return e;
  }

 private:
  const GridEnvironment& env_;
  const std::vector<std::size_t>& goals_;
  std::vector<Entry> entries_;
};

// Running value of a play prefix under either reading of the reward formula.
struct Accumulator {
  RewardValue total;                // scouted atoms, plus met goal views in positionwise mode
  std::vector<RewardValue> per_goal;  // best view of each goal so far (prose mode)
};

void absorb(RewardTables& tables, const GridEnvironment& env, const std::vector<Cell>& positions, Eq1Mode mode,
            std::size_t goal_count, Accumulator& acc) {
  std::vector<RewardValue> step_goal(goal_count, env.empty_reward());
  for (std::size_t a = 0; a < positions.size(); ++a) {
    const auto& e = tables.at(a, positions[a]);
    acc.total |= e.scouted;
    for (std::size_t g = 0; g < goal_count; ++g) step_goal[g] |= e.per_goal[g];
  }
  if (mode == Eq1Mode::prose) {
    for (std::size_t g = 0; g < goal_count; ++g) acc.per_goal[g] |= step_goal[g];
  } else if (goal_count > 0) {
    RewardValue met = step_goal[0];
    for (std::size_t g = 1; g < goal_count; ++g) met &= step_goal[g];
    acc.total |= met;
  }
}

RewardValue finish(const Accumulator& acc, Eq1Mode mode) {
  if (mode == Eq1Mode::positionwise || acc.per_goal.empty()) return acc.total;
  RewardValue met = acc.per_goal[0];
  for (std::size_t g = 1; g < acc.per_goal.size(); ++g) met &= acc.per_goal[g];
  return acc.total | met;
}

Accumulator start(const GridEnvironment& env, std::size_t goal_count) {
  return {env.empty_reward(), std::vector<RewardValue>(goal_count, env.empty_reward())};
}

std::vector<Cell> start_positions(const GridEnvironment& env) {
  std::vector<Cell> out;
  for (const auto& a : env.agents()) out.push_back(a.position);
  return out;
}

std::vector<std::size_t> goal_indices(const GridEnvironment& env, const std::vector<std::string>& ids) {
  std::vector<std::size_t> out;
  for (const auto& id : ids) out.push_back(env.goal_index(id));
  return out;
}

}  // namespace

const Fact& GoalLatticeSpec::fact(const std::string& id) const {
  auto it = goal_map.find(id);
  if (it == goal_map.end()) throw Error(ErrorCode::unknown_goal_id, "'" + id + "' is not in the goal map");
  return it->second;
}

GoalLatticeSpec make_goal_lattice_spec(std::shared_ptr<const PhaseSpace> phase,
                                       const std::map<std::string, MonoidSubset>& goal_map, OpClPartition op_cl) {
  FactLattice lattice = build_fact_lattice(*phase);
  std::map<std::string, Fact> facts;
  for (const auto& [id, subset] : goal_map) {
    if (!phase->is_fact(subset)) {
      throw Error(ErrorCode::not_a_fact, "goal '" + id + "' maps to " + phase->format(subset) + ", which is not a fact");
    }
    facts.emplace(id, phase->as_fact(subset));
  }
  return GoalLatticeSpec{std::move(phase), std::move(facts), std::move(op_cl), std::move(lattice)};
}

Fact process_priority(const GoalLatticeSpec& spec, const std::vector<std::string>& movement_ids,
                      const std::vector<std::string>& goal_subset) {
  const PhaseSpace& m = *spec.phase;
  Fact a = m.unit_fact();
  for (const auto& id : movement_ids) a = m.tensor(a, spec.fact(id));
  Fact b = m.unit_fact();
  for (const auto& id : goal_subset) b = m.tensor(b, spec.fact(id));
  return m.par(m.negate(a), b);
}

std::vector<IntentionCandidate> select_intentions(const GoalLatticeSpec& spec,
                                                  const std::vector<std::string>& movement_ids,
                                                  const std::vector<std::string>& discovered, std::size_t subset_cap) {
  const std::size_t n = discovered.size();
  const std::size_t max_size = std::min({movement_ids.size(), subset_cap, n});
  std::vector<IntentionCandidate> all;
  for (std::size_t k = 1; k <= max_size; ++k) {
    // Lexicographic k-combinations of positions in `discovered`.
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      std::vector<std::string> goals;
      for (std::size_t i : pick) goals.push_back(discovered[i]);
      Fact p = process_priority(spec, movement_ids, goals);
      all.push_back({std::move(goals), p});
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  std::vector<IntentionCandidate> out;
  for (const auto& c : all) {
    const bool dominated = std::any_of(all.begin(), all.end(), [&](const IntentionCandidate& o) {
      return c.priority.subset_of(o.priority) && !(c.priority == o.priority);
    });
    if (!dominated) out.push_back(c);
  }
  return out;
}

Rational intention_score(const GoalLatticeSpec& spec, const std::vector<std::string>& goals) {
  std::vector<Fact> desires;
  for (const auto& [id, f] : spec.goal_map)
    if (std::find(desires.begin(), desires.end(), f) == desires.end()) desires.push_back(f);
  Rational score = 0;
  if (desires.empty()) return score;
  for (const auto& id : goals) {
    const Fact& v = spec.fact(id);
    const auto below = std::count_if(desires.begin(), desires.end(), [&](const Fact& d) { return d.subset_of(v); });
    score += Rational(static_cast<long long>(below), static_cast<long long>(desires.size()));
  }
  return score;
}

const IntentionCandidate& resolve_intentions(const GoalLatticeSpec& spec,
                                             const std::vector<IntentionCandidate>& candidates, bool& fallback) {
  if (candidates.empty()) throw Error(ErrorCode::internal, "no intention candidates to resolve");
  fallback = candidates.size() > 1;
  std::size_t best = 0;
  Rational best_score = intention_score(spec, candidates[0].goals);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const Rational s = intention_score(spec, candidates[i].goals);
    if (s > best_score) {
      best = i;
      best_score = s;
    }
  }
  return candidates[best];
}

DesireLattice make_desire_lattice(std::shared_ptr<const FiniteLattice> lattice, const std::vector<std::string>& desires,
                                  const std::string& intention) {
  if (desires.empty()) throw Error(ErrorCode::invalid_desire_lattice, "an agent needs at least one desire");
  DesireLattice out{lattice, {}, {}};
  const auto gens = lattice->generators();
  for (const auto& name : desires) {
    auto e = lattice->find(name);
    if (!e) throw Error(ErrorCode::invalid_desire_lattice, "desire '" + name + "' is not an element");
    if (std::find(gens.begin(), gens.end(), *e) == gens.end()) {
      throw Error(ErrorCode::invalid_desire_lattice, "desire '" + name + "' is not a generator");
    }
    if (std::find(out.desires.begin(), out.desires.end(), *e) != out.desires.end()) {
      throw Error(ErrorCode::invalid_desire_lattice, "desire '" + name + "' is listed twice");
    }
    out.desires.push_back(*e);
  }
  auto i = lattice->find(intention);
  if (!i) throw Error(ErrorCode::invalid_desire_lattice, "intention '" + intention + "' is not an element");
  out.intention = *i;
  return out;
}

Rational vertex_weight(const DesireLattice& d, Element vertex) {
  if (!d.lattice->contains(vertex)) throw Error(ErrorCode::foreign_element, "vertex outside the desire lattice");
  const auto below =
      std::count_if(d.desires.begin(), d.desires.end(), [&](Element x) { return d.lattice->leq(x, vertex); });
  return Rational(static_cast<long long>(below), static_cast<long long>(d.desires.size()));
}

std::optional<std::size_t> Assignment::agent_for(const std::string& goal) const {
  for (const auto& e : entries)
    if (e.goal == goal) return e.agent;
  return std::nullopt;
}

Assignment assign_agents(const std::vector<std::string>& goals, const std::vector<std::vector<RewardValue>>& rewards,
                         const std::vector<DesireLattice>& desires, MissingVertexPolicy policy,
                         const std::vector<std::vector<char>>& eligible) {
  const std::size_t agents = rewards.size();
  for (const auto& row : rewards)
    if (row.size() != goals.size()) throw Error(ErrorCode::length_mismatch, "one reward per goal and agent required");
  if (!eligible.empty() && eligible.size() != agents) throw Error(ErrorCode::length_mismatch, "eligibility shape");

  std::vector<char> busy(agents, 0);
  std::vector<std::optional<AssignedGoal>> slot(goals.size());
  const auto candidates = [&](std::size_t g) {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < agents; ++a)
      if (!busy[a] && (eligible.empty() || eligible[a].at(g))) out.push_back(a);
    return out;
  };
  const auto take = [&](std::size_t g, std::size_t a, int stage) {
    slot[g] = AssignedGoal{goals[g], a, stage};
    busy[a] = 1;
  };

  // Stage 1: a unique strict dominator takes the goal; repeat until stable.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t g = 0; g < goals.size(); ++g) {
      if (slot[g]) continue;
      const auto cand = candidates(g);
      for (std::size_t a : cand) {
        const bool dominates = std::all_of(cand.begin(), cand.end(),
                                           [&](std::size_t b) { return b == a || rewards[b][g].less(rewards[a][g]); });
        if (dominates) {
          take(g, a, 1);
          changed = true;
          break;
        }
      }
    }
  }

  // Stages 2 and 3: desire weights among the maximal candidates, then index.
  for (std::size_t g = 0; g < goals.size(); ++g) {
    if (slot[g]) continue;
    const auto cand = candidates(g);
    std::vector<std::size_t> maximal;
    for (std::size_t a : cand) {
      const bool below = std::any_of(cand.begin(), cand.end(), [&](std::size_t b) { return rewards[a][g].less(rewards[b][g]); });
      if (!below) maximal.push_back(a);
    }
    if (maximal.empty()) continue;
    if (maximal.size() == 1) {
      take(g, maximal[0], 1);
      continue;
    }
    if (desires.size() != agents) throw Error(ErrorCode::length_mismatch, "one desire lattice per agent required");
    std::vector<Rational> weight;
    for (std::size_t a : maximal) {
      auto vertex = desires[a].lattice->find(goals[g]);
      if (!vertex) {
        if (policy == MissingVertexPolicy::throw_error) {
          throw Error(ErrorCode::missing_desire_vertex,
                      "goal '" + goals[g] + "' has no vertex in the desire lattice of agent " + std::to_string(a));
        }
        weight.emplace_back(0);
      } else {
        weight.push_back(vertex_weight(desires[a], *vertex));
      }
    }
    const Rational top = *std::max_element(weight.begin(), weight.end());
    const auto winners = std::count(weight.begin(), weight.end(), top);
    const std::size_t pick = static_cast<std::size_t>(std::find(weight.begin(), weight.end(), top) - weight.begin());
    take(g, maximal[pick], winners == 1 ? 2 : 3);
  }

  Assignment out;
  for (auto& s : slot)
    if (s) out.entries.push_back(*s);
  for (std::size_t a = 0; a < agents; ++a)
    if (!busy[a]) out.free_agents.push_back(a);
  return out;
}

RewardValue play_reward(const GridEnvironment& env, const JointPlay& play, const std::vector<std::size_t>& goals,
                        Eq1Mode mode) {
  const std::size_t n = env.agents().size();
  if (play.moves.size() != play.cells.size()) throw Error(ErrorCode::length_mismatch, "moves and cells differ in length");
  for (const auto& step : play.cells)
    if (step.size() != n) throw Error(ErrorCode::length_mismatch, "every step needs one cell per agent");
  RewardTables tables(env, goals);
  Accumulator acc = start(env, goals.size());
  absorb(tables, env, start_positions(env), mode, goals.size(), acc);
  for (const auto& step : play.cells) absorb(tables, env, step, mode, goals.size(), acc);
  return finish(acc, mode);
}

std::vector<JointPlay> choose_play(const GridEnvironment& env, const std::vector<std::size_t>& goals, std::size_t depth,
                                   Eq1Mode mode, PlayLimits limits) {
  const std::size_t n = env.agents().size();
  if (depth > limits.max_depth) {
    throw Error(ErrorCode::depth_too_large, "depth " + std::to_string(depth) + " exceeds " + std::to_string(limits.max_depth));
  }
  if (n > limits.max_agents) {
    throw Error(ErrorCode::depth_too_large,
                std::to_string(n) + " agents exceed the exhaustive limit of " + std::to_string(limits.max_agents));
  }
  RewardTables tables(env, goals);

  struct Group {
    RewardValue reward;
    std::vector<JointPlay> plays;
  };
  std::vector<Group> front;  // antichain of maximal rewards
  const auto offer = [&](RewardValue r, const JointPlay& play) {
    for (auto& g : front) {
      if (g.reward == r) {
        g.plays.push_back(play);
        return;
      }
      if (r.less(g.reward)) return;
    }
    std::erase_if(front, [&](const Group& g) { return g.reward.less(r); });
    front.push_back({std::move(r), {play}});
  };

  JointPlay current;
  std::vector<Accumulator> acc(depth + 1);
  acc[0] = start(env, goals.size());
  absorb(tables, env, start_positions(env), mode, goals.size(), acc[0]);

  auto descend = [&](auto&& self, std::size_t t, const std::vector<Cell>& at) -> void {
    if (t == depth) {
      offer(finish(acc[t], mode), current);
      return;
    }
    std::vector<std::vector<Cell>> options(n);
    for (std::size_t a = 0; a < n; ++a) options[a] = agent_moves(env, at[a]);
    std::vector<std::size_t> pick(n, 0);
    current.moves.emplace_back();
    current.cells.emplace_back();
    while (true) {
      std::vector<Cell> next(n);
      for (std::size_t a = 0; a < n; ++a) next[a] = options[a][pick[a]];
      current.moves.back() = pick;
      current.cells.back() = next;
      acc[t + 1] = acc[t];
      absorb(tables, env, next, mode, goals.size(), acc[t + 1]);
      self(self, t + 1, next);
      // Odometer with agent 0 most significant keeps lexicographic order.
      std::size_t a = n;
      while (a > 0 && pick[a - 1] + 1 == options[a - 1].size()) pick[--a] = 0;
      if (a == 0) break;
      ++pick[a - 1];
    }
    current.moves.pop_back();
    current.cells.pop_back();
  };
  descend(descend, 0, start_positions(env));

  std::vector<JointPlay> out;
  for (auto& g : front)
    for (auto& p : g.plays) out.push_back(std::move(p));
  std::sort(out.begin(), out.end());
  if (out.empty()) throw Error(ErrorCode::no_legal_play, "no joint play found");
  return out;
}

ItineraryPlan plan_step(const GridEnvironment& env, const GoalLatticeSpec& spec,
                        const std::vector<DesireLattice>& desires, const std::vector<std::string>& discovered,
                        const PlannerConfig& config) {
  ItineraryPlan plan;
  const std::size_t n = env.agents().size();
  for (const auto& id : discovered) {
    const Cell c = env.goals()[env.goal_index(id)].position;
    const bool some = std::any_of(env.agents().begin(), env.agents().end(),
                                  [&](const AgentState& a) { return reachable(env, a.position, c); });
    if (some) plan.discovered.push_back(id);
  }
  std::vector<std::string> movement_ids;
  for (const auto& a : env.agents()) movement_ids.push_back(a.movement_goal_id);

  plan.candidates = select_intentions(spec, movement_ids, plan.discovered, config.subset_cap);
  if (!plan.candidates.empty()) {
    const auto& chosen = resolve_intentions(spec, plan.candidates, plan.fallback);
    plan.chosen_goals = chosen.goals;
    plan.priority_value = chosen.priority;
  }
  const auto goals = goal_indices(env, plan.chosen_goals);

  std::vector<std::vector<RewardValue>> rewards(n);
  std::vector<std::vector<char>> eligible(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t g : goals) {
      rewards[a].push_back(reward(env, env.agents()[a], g));
      eligible[a].push_back(reachable(env, env.agents()[a].position, env.goals()[g].position));
    }
  }
  plan.assignment = assign_agents(plan.chosen_goals, rewards, desires, config.missing_vertex, eligible);

  plan.plays = choose_play(env, goals, config.depth, config.eq1_mode, config.limits);
  // Among maximal plays prefer the one that keeps assigned agents closest to
  // their goals along the way; plays are already in lexicographic order.
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> fields;
  for (const auto& e : plan.assignment.entries) {
    fields.emplace_back(e.agent, distance_field(env, env.goals()[env.goal_index(e.goal)].position));
  }
  std::size_t best = 0;
  std::size_t best_cost = SIZE_MAX;
  for (std::size_t i = 0; i < plan.plays.size(); ++i) {
    std::size_t cost = 0;
    for (const auto& step : plan.plays[i].cells)
      for (const auto& [agent, field] : fields) cost += field[cell_index(env, step[agent])];
    if (cost < best_cost) {
      best = i;
      best_cost = cost;
    }
  }
  plan.play = plan.plays[best];
  plan.total_reward = play_reward(env, plan.play, goals, config.eq1_mode);
  return plan;
}

Trace simulate(const GridEnvironment& env, const GoalLatticeSpec& spec, const std::vector<DesireLattice>& desires,
               const PlannerConfig& config) {
  Trace trace;
  std::vector<Cell> positions = start_positions(env);
  std::set<std::size_t> discovered;
  std::set<std::size_t> achieved;
  RewardValue cumulative = env.empty_reward();

  // Perception at the given positions; returns true when anything new shows up.
  const auto perceive = [&](const GridEnvironment& here) {
    bool progress = false;
    for (std::size_t a = 0; a < here.agents().size(); ++a) {
      const auto& agent = here.agents()[a];
      RewardValue seen = scout(here, agent.position, agent.horizon);
      for (std::size_t g = 0; g < here.goals().size(); ++g) {
        RewardValue r = reward(here, agent, g);
        if (!r.none() && !achieved.contains(g)) progress |= discovered.insert(g).second;
        seen |= r;
      }
      if (!seen.leq(cumulative)) {
        cumulative |= seen;
        progress = true;
      }
    }
    for (auto it = discovered.begin(); it != discovered.end();) {
      const Cell c = here.goals()[*it].position;
      if (std::find(positions.begin(), positions.end(), c) != positions.end()) {
        achieved.insert(*it);
        it = discovered.erase(it);
        progress = true;
      } else {
        ++it;
      }
    }
    return progress;
  };
  const auto ids = [&](const std::set<std::size_t>& s) {
    std::vector<std::string> out;
    for (std::size_t g : s) out.push_back(env.goals()[g].id);
    return out;
  };
  const auto finished = [&] { return !env.goals().empty() && achieved.size() == env.goals().size(); };

  perceive(env);
  std::size_t idle = 0;
  trace.end_reason = "max_steps";
  for (std::size_t step = 0; step < config.max_steps; ++step) {
    if (finished()) {
      trace.end_reason = "goals";
      break;
    }
    const GridEnvironment here = env.with_agent_positions(positions);
    TraceStep record;
    record.index = step;
    record.positions = positions;
    record.discovered = ids(discovered);
    record.plan = plan_step(here, spec, desires, record.discovered, config);
    positions = record.plan.play.depth() > 0 ? record.plan.play.cells.front() : positions;
    record.committed = positions;

    const auto before = achieved;
    const bool progress = perceive(env.with_agent_positions(positions));
    for (std::size_t g : achieved)
      if (!before.contains(g)) record.achieved.push_back(env.goals()[g].id);
    record.cumulative = cumulative;
    trace.steps.push_back(std::move(record));

    idle = progress ? 0 : idle + 1;
    if (finished()) {
      trace.end_reason = "goals";
      break;
    }
    if (idle >= config.patience) {
      trace.end_reason = "patience";
      break;
    }
  }
  trace.achieved = ids(achieved);
  return trace;
}

std::string format_rational(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string format_trace(const GridEnvironment& env, const GoalLatticeSpec& spec, const Trace& trace) {
  std::ostringstream os;
  const auto cells = [&](const std::vector<Cell>& ps) {
    std::string out = "[";
    for (std::size_t a = 0; a < ps.size(); ++a) out += (a ? "," : "") + env.agents()[a].id + format_cell(ps[a]);
    return out + "]";
  };
  for (const auto& s : trace.steps) {
    const auto& p = s.plan;
    os << "step " << s.index << " pos=" << cells(s.positions) << " discovered=" << join_ids(s.discovered)
       << " intentions=" << join_ids(p.chosen_goals) << " priority="
       << (p.priority_value ? spec.lattice.lattice->name(spec.lattice.element_of(*p.priority_value)) : "-")
       << " fallback=" << (p.fallback ? "yes" : "no") << " assignment=[";
    for (std::size_t i = 0; i < p.assignment.entries.size(); ++i) {
      const auto& e = p.assignment.entries[i];
      os << (i ? "," : "") << e.goal << ":" << env.agents()[e.agent].id << "/" << e.stage;
    }
    os << "] free=[";
    for (std::size_t i = 0; i < p.assignment.free_agents.size(); ++i)
      os << (i ? "," : "") << env.agents()[p.assignment.free_agents[i]].id;
    os << "] move=" << cells(s.committed) << " achieved=" << join_ids(s.achieved)
       << " reward=" << env.format(s.cumulative) << "\n";
  }
  os << "end reason=" << trace.end_reason << " steps=" << trace.steps.size() << " achieved=" << join_ids(trace.achieved)
     << "\n";
  return os.str();
}

}  // namespace itinerary
