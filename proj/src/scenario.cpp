#include "itinerary/scenario.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace itinerary {

namespace {

using nlohmann::json;

// Parsed but not yet validated sections.
struct RawLattice {
  std::string agent;
  std::vector<std::string> elements;
  std::vector<OrderPair> covers;
  std::optional<std::vector<std::string>> generators;
  std::vector<std::string> desires;
  std::string intention;
};

struct RawScenario {
  std::vector<std::string> carrier;
  std::vector<std::string> table;
  std::string unit;
  std::vector<std::string> false_set;
  std::vector<std::vector<std::string>> open;
  std::vector<std::vector<std::string>> closed;
  std::map<std::string, std::vector<std::string>> goal_map;
  std::vector<RawLattice> lattices;
  int width = 0;
  int height = 0;
  std::vector<Cell> obstacles;
  std::vector<AgentState> agents;
  std::vector<GoalObject> goals;
  PlannerConfig config;
};

[[noreturn]] void parse_fail(const std::string& path, const std::string& why) {
  throw Error(ErrorCode::parse_error, "field '" + path + "': " + why);
}

const json& need(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) parse_fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) parse_fail(path + "." + key, "missing");
  return *it;
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) parse_fail(path, "expected a string");
  return j.get<std::string>();
}

long long as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) parse_fail(path, "expected an integer");
  return j.get<long long>();
}

std::size_t as_count(const json& j, const std::string& path) {
  const long long v = as_int(j, path);
  if (v < 0) parse_fail(path, "expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

const json& as_array(const json& j, const std::string& path) {
  if (!j.is_array()) parse_fail(path, "expected an array");
  return j;
}

std::vector<std::string> strings(const json& j, const std::string& path) {
  std::vector<std::string> out;
  const json& a = as_array(j, path);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_string(a[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Cell cell(const json& j, const std::string& path) {
  const json& a = as_array(j, path);
  if (a.size() != 2) parse_fail(path, "expected [col, row]");
  return {static_cast<int>(as_int(a[0], path + "[0]")), static_cast<int>(as_int(a[1], path + "[1]"))};
}

RawScenario parse(const json& root) {
  RawScenario raw;
  const json& phase = need(root, "", "phase");
  raw.carrier = strings(need(phase, "phase", "carrier"), "phase.carrier");
  const json& table = as_array(need(phase, "phase", "table"), "phase.table");
  for (std::size_t r = 0; r < table.size(); ++r) {
    for (auto& s : strings(table[r], "phase.table[" + std::to_string(r) + "]")) raw.table.push_back(std::move(s));
  }
  raw.unit = as_string(need(phase, "phase", "unit"), "phase.unit");
  raw.false_set = strings(need(phase, "phase", "false"), "phase.false");
  const json& open = as_array(need(phase, "phase", "open"), "phase.open");
  for (std::size_t i = 0; i < open.size(); ++i) raw.open.push_back(strings(open[i], "phase.open[" + std::to_string(i) + "]"));
  const json& closed = as_array(need(phase, "phase", "closed"), "phase.closed");
  for (std::size_t i = 0; i < closed.size(); ++i)
    raw.closed.push_back(strings(closed[i], "phase.closed[" + std::to_string(i) + "]"));
  const json& gm = need(phase, "phase", "goal_map");
  if (!gm.is_object()) parse_fail("phase.goal_map", "expected an object");
  for (const auto& [id, members] : gm.items()) raw.goal_map[id] = strings(members, "phase.goal_map." + id);

  const json& lattices = need(root, "", "desire_lattices");
  if (!lattices.is_object()) parse_fail("desire_lattices", "expected an object");
  for (const auto& [agent, body] : lattices.items()) {
    const std::string p = "desire_lattices." + agent;
    RawLattice lat;
    lat.agent = agent;
    lat.elements = strings(need(body, p, "elements"), p + ".elements");
    const json& covers = as_array(need(body, p, "covers"), p + ".covers");
    for (std::size_t i = 0; i < covers.size(); ++i) {
      auto pair = strings(covers[i], p + ".covers[" + std::to_string(i) + "]");
      if (pair.size() != 2) parse_fail(p + ".covers[" + std::to_string(i) + "]", "expected [lower, upper]");
      lat.covers.emplace_back(pair[0], pair[1]);
    }
    if (body.contains("generators")) lat.generators = strings(body["generators"], p + ".generators");
    lat.desires = strings(need(body, p, "desires"), p + ".desires");
    lat.intention = as_string(need(body, p, "intention"), p + ".intention");
    raw.lattices.push_back(std::move(lat));
  }

  const json& env = need(root, "", "environment");
  raw.width = static_cast<int>(as_int(need(env, "environment", "width"), "environment.width"));
  raw.height = static_cast<int>(as_int(need(env, "environment", "height"), "environment.height"));
  if (env.contains("obstacles")) {
    const json& obs = as_array(env["obstacles"], "environment.obstacles");
    for (std::size_t i = 0; i < obs.size(); ++i)
      raw.obstacles.push_back(cell(obs[i], "environment.obstacles[" + std::to_string(i) + "]"));
  }
  const json& agents = as_array(need(env, "environment", "agents"), "environment.agents");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string p = "environment.agents[" + std::to_string(i) + "]";
    raw.agents.push_back({as_string(need(agents[i], p, "id"), p + ".id"), cell(need(agents[i], p, "start"), p + ".start"),
                          static_cast<int>(as_int(need(agents[i], p, "horizon"), p + ".horizon")),
                          as_string(need(agents[i], p, "movement_goal"), p + ".movement_goal")});
  }
  const json& goals = as_array(need(env, "environment", "goals"), "environment.goals");
  for (std::size_t i = 0; i < goals.size(); ++i) {
    const std::string p = "environment.goals[" + std::to_string(i) + "]";
    GoalObject g{as_string(need(goals[i], p, "id"), p + ".id"), cell(need(goals[i], p, "cell"), p + ".cell"), {}};
    const json& features = as_array(need(goals[i], p, "features"), p + ".features");
    for (std::size_t f = 0; f < features.size(); ++f) {
      const std::string q = p + ".features[" + std::to_string(f) + "]";
      g.features.push_back({as_string(need(features[f], q, "name"), q + ".name"),
                            static_cast<int>(as_int(need(features[f], q, "range"), q + ".range"))});
    }
    raw.goals.push_back(std::move(g));
  }

  if (root.contains("planner")) {
    const json& pl = root["planner"];
    if (!pl.is_object()) parse_fail("planner", "expected an object");
    if (pl.contains("depth")) raw.config.depth = as_count(pl["depth"], "planner.depth");
    if (pl.contains("subset_cap")) raw.config.subset_cap = as_count(pl["subset_cap"], "planner.subset_cap");
    if (pl.contains("patience")) raw.config.patience = as_count(pl["patience"], "planner.patience");
    if (pl.contains("max_steps")) raw.config.max_steps = as_count(pl["max_steps"], "planner.max_steps");
    if (pl.contains("eq1_mode")) {
      try {
        raw.config.eq1_mode = parse_eq1_mode(as_string(pl["eq1_mode"], "planner.eq1_mode"));
      } catch (const Error& e) {
        parse_fail("planner.eq1_mode", e.what());
      }
    }
  }
  return raw;
}

CheckResult run_check(const std::string& name, auto&& body) {
  try {
    body();
    return {name, true, std::nullopt, ""};
  } catch (const Error& e) {
    return {name, false, e.code(), e.what()};
  }
}

CheckResult skipped(const std::string& name, const std::string& because) {
  return {name, false, std::nullopt, "skipped, " + because + " failed"};
}

}  // namespace

Eq1Mode parse_eq1_mode(const std::string& s) {
  if (s == "prose") return Eq1Mode::prose;
  if (s == "positionwise") return Eq1Mode::positionwise;
  throw Error(ErrorCode::parse_error, "eq1 mode must be 'prose' or 'positionwise', got '" + s + "'");
}

ValidationReport validate_scenario_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
  const RawScenario raw = parse(root);
  ValidationReport report;

  std::shared_ptr<const PhaseSpace> phase;
  report.checks.push_back(run_check("monoid", [&] {
    phase = std::make_shared<const PhaseSpace>(validate_monoid(raw.carrier, raw.table, raw.unit, raw.false_set));
  }));

  std::optional<OpClPartition> op_cl;
  std::optional<GoalLatticeSpec> spec;
  if (phase) {
    report.checks.push_back(run_check("op-cl", [&] {
      std::vector<MonoidSubset> open, closed;
      for (const auto& s : raw.open) open.push_back(phase->subset(s));
      for (const auto& s : raw.closed) closed.push_back(phase->subset(s));
      op_cl = validate_op_cl(*phase, open, closed);
    }));
    report.checks.push_back(run_check("goal-map", [&] {
      std::map<std::string, MonoidSubset> targets;
      for (const auto& [id, members] : raw.goal_map) targets.emplace(id, phase->subset(members));
      for (const auto& a : raw.agents) {
        if (!targets.contains(a.movement_goal_id)) {
          throw Error(ErrorCode::unknown_goal_id, "movement goal '" + a.movement_goal_id + "' of agent '" + a.id + "' is unmapped");
        }
      }
      for (const auto& g : raw.goals) {
        if (!targets.contains(g.id)) throw Error(ErrorCode::unknown_goal_id, "goal '" + g.id + "' is unmapped");
      }
      spec = make_goal_lattice_spec(phase, targets, op_cl.value_or(OpClPartition{}));
    }));
  } else {
    report.checks.push_back(skipped("op-cl", "monoid"));
    report.checks.push_back(skipped("goal-map", "monoid"));
  }

  std::map<std::string, DesireLattice> desires;
  for (const auto& lat : raw.lattices) {
    report.checks.push_back(run_check("desire-lattice:" + lat.agent, [&] {
      auto l = std::make_shared<const FiniteLattice>(verify_poset(lat.elements, lat.covers, OrderInput::covers, lat.generators));
      desires.emplace(lat.agent, make_desire_lattice(l, lat.desires, lat.intention));
    }));
  }

  std::optional<GridEnvironment> env;
  report.checks.push_back(run_check("environment", [&] {
    env.emplace(raw.width, raw.height, raw.obstacles, raw.agents, raw.goals);
    for (const auto& a : raw.agents) {
      if (!std::any_of(raw.lattices.begin(), raw.lattices.end(), [&](const RawLattice& l) { return l.agent == a.id; })) {
        throw Error(ErrorCode::invalid_scenario, "agent '" + a.id + "' has no desire lattice");
      }
    }
    for (const auto& l : raw.lattices) {
      if (!std::any_of(raw.agents.begin(), raw.agents.end(), [&](const AgentState& a) { return a.id == l.agent; })) {
        throw Error(ErrorCode::invalid_scenario, "desire lattice for unknown agent '" + l.agent + "'");
      }
    }
  }));

  report.checks.push_back(run_check("planner", [&] {
    if (raw.config.subset_cap == 0) throw Error(ErrorCode::invalid_scenario, "subset_cap must be at least 1");
    if (raw.config.patience == 0) throw Error(ErrorCode::invalid_scenario, "patience must be at least 1");
  }));

  const bool all_ok = std::all_of(report.checks.begin(), report.checks.end(), [](const CheckResult& c) { return c.ok; });
  if (all_ok) {
    Scenario s{phase, std::move(*spec), {}, {}, std::move(*env), raw.config};
    for (const auto& a : s.env.agents()) {
      s.desire_agents.push_back(a.id);
      s.desires.push_back(desires.at(a.id));
    }
    report.scenario.emplace(std::move(s));
  }
  return report;
}

ValidationReport validate_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::parse_error, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return validate_scenario_text(buf.str());
}

namespace {

Scenario unwrap(ValidationReport report) {
  if (report.scenario) return std::move(*report.scenario);
  for (const auto& c : report.checks) {
    if (!c.ok && c.code) {
      const auto cut = c.detail.find(": ");
      throw Error(*c.code, c.name + ", " + (cut == std::string::npos ? c.detail : c.detail.substr(cut + 2)));
    }
  }
  throw Error(ErrorCode::invalid_scenario, "validation failed");
}

}  // namespace

Scenario load_scenario_file(const std::string& path) { return unwrap(validate_scenario_file(path)); }
Scenario load_scenario_text(const std::string& text) { return unwrap(validate_scenario_text(text)); }

}  // namespace itinerary
