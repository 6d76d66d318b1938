#include "itinerary/commands.hpp"

#include <algorithm>

#include "itinerary/scenario.hpp"

namespace itinerary {

namespace {

std::string join(const std::vector<std::string>& ids) {
  std::string out = "[";
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? "," : "") + ids[i];
  return out + "]";
}

Scenario load(const CommandOptions& o) {
  Scenario s = load_scenario_file(o.scenario);
  if (o.depth) s.config.depth = *o.depth;
  if (o.max_steps) s.config.max_steps = *o.max_steps;
  if (o.eq1_mode) s.config.eq1_mode = parse_eq1_mode(*o.eq1_mode);
  return s;
}

// Goals seen by any agent from the start positions, in goal order.
std::vector<std::string> initially_discovered(const GridEnvironment& env) {
  std::vector<std::string> out;
  for (std::size_t g = 0; g < env.goals().size(); ++g) {
    for (const auto& a : env.agents()) {
      if (!reward(env, a, g).none()) {
        out.push_back(env.goals()[g].id);
        break;
      }
    }
  }
  return out;
}

std::string fact_name(const GoalLatticeSpec& spec, const Fact& f) {
  return spec.lattice.lattice->name(spec.lattice.element_of(f));
}

int cmd_validate(const CommandOptions& o, std::ostream& out) {
  const ValidationReport report = validate_scenario_file(o.scenario);
  int status = exit_code::ok;
  for (const auto& c : report.checks) {
    if (c.ok) {
      out << "PASS " << c.name << "\n";
      continue;
    }
    out << (c.code ? "FAIL " : "SKIP ") << c.name << ": " << c.detail << "\n";
    if (c.code) status = std::max(status, exit_code_for(*c.code));
    else status = std::max(status, exit_code::validation_failure);
  }
  out << (report.ok() ? "scenario valid" : "scenario invalid") << "\n";
  return status;
}

int cmd_facts(const CommandOptions& o, std::ostream& out) {
  const Scenario s = load(o);
  const PhaseSpace& m = *s.phase;
  const auto has = [](const std::vector<Fact>& v, const Fact& f) { return std::find(v.begin(), v.end(), f) != v.end(); };
  for (const Fact& f : s.spec.lattice.facts) {
    out << m.format(f);
    if (f == m.zero()) out << " 0";
    if (f == m.one()) out << " 1";
    if (f == m.unit_fact()) out << " I";
    if (f == m.false_fact()) out << " false";
    if (has(s.spec.op_cl.open_facts, f)) out << " Op";
    if (has(s.spec.op_cl.closed_facts, f)) out << " Cl";
    std::vector<std::string> mapped;
    for (const auto& [id, g] : s.spec.goal_map)
      if (g == f) mapped.push_back(id);
    if (!mapped.empty()) out << " goals=" << join(mapped);
    out << "\n";
  }
  return exit_code::ok;
}

int cmd_weights(const CommandOptions& o, std::ostream& out) {
  const Scenario s = load(o);
  for (std::size_t a = 0; a < s.desires.size(); ++a) {
    const DesireLattice& d = s.desires[a];
    out << "agent " << s.desire_agents[a] << "\n";
    for (Element e : d.lattice->elements()) {
      out << d.lattice->name(e) << " " << format_rational(vertex_weight(d, e));
      if (e == d.intention) out << " intention";
      out << "\n";
    }
  }
  return exit_code::ok;
}

int cmd_plan(const CommandOptions& o, std::ostream& out) {
  const Scenario s = load(o);
  const auto& env = s.env;
  const ItineraryPlan plan = plan_step(env, s.spec, s.desires, initially_discovered(env), s.config);
  out << "discovered " << join(plan.discovered) << "\n";
  for (const auto& c : plan.candidates) out << "candidate " << join(c.goals) << " " << fact_name(s.spec, c.priority) << "\n";
  out << "intentions " << join(plan.chosen_goals) << "\n";
  out << "priority " << (plan.priority_value ? fact_name(s.spec, *plan.priority_value) : "-") << "\n";
  out << "fallback " << (plan.fallback ? "yes" : "no") << "\n";
  for (const auto& e : plan.assignment.entries)
    out << "assign " << e.goal << " " << env.agents()[e.agent].id << " stage " << e.stage << "\n";
  for (std::size_t a : plan.assignment.free_agents) out << "free " << env.agents()[a].id << "\n";
  const auto render = [&](const JointPlay& p) {
    std::string line;
    for (std::size_t a = 0; a < env.agents().size(); ++a) {
      line += (a ? " " : "") + env.agents()[a].id + ":";
      for (const auto& step : p.cells) line += format_cell(step[a]);
    }
    return line;
  };
  out << "maximal_plays " << plan.plays.size() << "\n";
  for (const auto& p : plan.plays) out << "play " << render(p) << "\n";
  out << "chosen " << render(plan.play) << "\n";
  out << "reward " << env.format(plan.total_reward) << "\n";
  return exit_code::ok;
}

int cmd_simulate(const CommandOptions& o, std::ostream& out) {
  Scenario s = load(o);
  s.config.missing_vertex = MissingVertexPolicy::zero_weight;
  out << format_trace(s.env, s.spec, simulate(s.env, s.spec, s.desires, s.config));
  return exit_code::ok;
}

int cmd_dot(const CommandOptions& o, std::ostream& out) {
  const Scenario s = load(o);
  const std::string& t = o.target;
  if (t == "system-lattice") {
    out << s.spec.lattice.lattice->to_dot("system");
    return exit_code::ok;
  }
  const std::string desire = "desire-lattice:";
  if (t.starts_with(desire)) {
    const std::string agent = t.substr(desire.size());
    for (std::size_t a = 0; a < s.desire_agents.size(); ++a) {
      if (s.desire_agents[a] == agent) {
        out << s.desires[a].lattice->to_dot(agent);
        return exit_code::ok;
      }
    }
    throw Error(ErrorCode::unknown_target, "no agent '" + agent + "'");
  }
  const std::string game = "agent-game:";
  if (t.starts_with(game)) {
    const std::string rest = t.substr(game.size());
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos) throw Error(ErrorCode::unknown_target, "expected agent-game:<agent>:<depth>");
    const std::string agent = rest.substr(0, colon);
    std::size_t depth = 0;
    try {
      std::size_t used = 0;
      depth = std::stoul(rest.substr(colon + 1), &used);
      if (used != rest.size() - colon - 1) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw Error(ErrorCode::unknown_target, "bad depth in '" + t + "'");
    }
    if (depth > s.config.limits.max_depth) {
      throw Error(ErrorCode::depth_too_large, "depth " + std::to_string(depth) + " exceeds " +
                                                  std::to_string(s.config.limits.max_depth));
    }
    std::size_t index = 0;
    try {
      index = s.env.agent_index(agent);
    } catch (const Error&) {
      throw Error(ErrorCode::unknown_target, "no agent '" + agent + "'");
    }
    std::vector<std::size_t> goals;
    for (const auto& id : initially_discovered(s.env)) goals.push_back(s.env.goal_index(id));
    out << to_dot(build_agent_game(s.env, index, depth, goals).game, agent);
    return exit_code::ok;
  }
  throw Error(ErrorCode::unknown_target, "unknown target '" + t + "'");
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::parse_error:
      return exit_code::parse_error;
    case ErrorCode::depth_too_large:
    case ErrorCode::carrier_too_large:
    case ErrorCode::lattice_too_large:
      return exit_code::limit_exceeded;
    default:
      return exit_code::validation_failure;
  }
}

int run_command(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  try {
    if (o.command == "validate") return cmd_validate(o, out);
    if (o.command == "facts") return cmd_facts(o, out);
    if (o.command == "weights") return cmd_weights(o, out);
    if (o.command == "plan") return cmd_plan(o, out);
    if (o.command == "simulate") return cmd_simulate(o, out);
    if (o.command == "dot") return cmd_dot(o, out);
    err << "unknown command '" << o.command << "'\n";
    return exit_code::parse_error;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace itinerary
