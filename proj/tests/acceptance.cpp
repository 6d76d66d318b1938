// One PASS/FAIL line per acceptance criterion, with wall time. Exits non-zero
// if any criterion fails or runs over its time budget.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "game_fixtures.hpp"
#include "itinerary/environment.hpp"
#include "itinerary/game.hpp"
#include "itinerary/phase.hpp"
#include "itinerary/planner.hpp"
#include "itinerary/scenario.hpp"
#include "planner_fixtures.hpp"
#include "play_oracle.hpp"
#include "sample_lattices.hpp"
#include "sample_monoids.hpp"

using namespace itinerary;
namespace t = itinerary::testing;
using Rational = boost::rational<long long>;

namespace {

const std::string bundled = std::string(ITINERARY_SOURCE_DIR) + "/scenarios/three_agents.json";

// Collects failed expectations of one criterion; the first few are reported.
struct Checker {
  std::size_t checks = 0;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
};

bool run_criterion(int number, const std::string& title, double budget_s, const std::function<void(Checker&)>& body) {
  Checker c;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= budget_s) c.failures.push_back("over time budget");
  const bool ok = c.failures.empty();
  std::printf("%s %d %s (%zu checks, %.3f s, limit %.0f s)\n", ok ? "PASS" : "FAIL", number, title.c_str(), c.checks,
              secs, budget_s);
  for (std::size_t i = 0; i < c.failures.size() && i < 5; ++i) std::printf("    %s\n", c.failures[i].c_str());
  return ok;
}

void bundled_weights_and_assignment(Checker& c) {
  const Scenario s = load_scenario_file(bundled);
  const auto weight = [&](const std::string& agent, const std::string& elem) {
    const auto& d = s.desires[s.env.agent_index(agent)];
    return vertex_weight(d, d.lattice->element(elem));
  };
  c.expect(weight("agent-3", "U12") == Rational(2, 3), "U12 in agent-3 lattice is 2/3");
  c.expect(weight("agent-2", "b2") == Rational(1, 2), "b2 in agent-2 lattice is 1/2");
  c.expect(weight("agent-3", "b2") == Rational(1, 3), "b2 in agent-3 lattice is 1/3");

  std::vector<std::string> discovered;
  for (const auto& g : s.env.goals()) {
    for (std::size_t a = 0; a < s.env.agents().size(); ++a) {
      if (!reward(s.env, s.env.agents()[a], s.env.goal_index(g.id)).none()) {
        discovered.push_back(g.id);
        break;
      }
    }
  }
  c.expect(discovered == std::vector<std::string>{"b1", "b2"}, "b1 and b2 are visible at the start");
  const ItineraryPlan plan = plan_step(s.env, s.spec, s.desires, discovered, s.config);
  c.expect(plan.assignment.agent_for("b1") == s.env.agent_index("agent-1"), "b1 goes to agent-1");
  c.expect(plan.assignment.agent_for("b2") == s.env.agent_index("agent-2"), "b2 goes to agent-2");
  c.expect(plan.assignment.free_agents == std::vector<std::size_t>{s.env.agent_index("agent-3")}, "agent-3 is free");
}

void phase_laws(Checker& c) {
  const auto corpus = t::monoid_corpus();
  c.expect(std::count_if(corpus.begin(), corpus.end(), [](const auto& m) { return m.carrier.size() >= 2; }) >= 5,
           "at least five monoids with three or more false sets");
  for (const auto& mono : corpus) {
    const std::size_t n = mono.carrier.size();
    const Mask subsets = Mask{1} << n;
    c.expect(n <= 4 && subsets >= 2, mono.name + " has carrier size at most 4");
    std::size_t bottoms = 0;
    for (Mask bottom = 0; bottom < subsets; ++bottom, ++bottoms) {
      const PhaseSpace s = t::build_space(mono, bottom);
      const std::string where = mono.name + " bottom=" + std::to_string(bottom);
      const auto sub = [&](Mask m) { return MonoidSubset(s.id(), m); };
      for (Mask x = 0; x < subsets; ++x) {
        const MonoidSubset X = sub(x);
        const MonoidSubset dX = s.dual(X);
        c.expect(X.subset_of(s.dual(dX)), where + ": X in X^bb");
        c.expect(s.dual(s.dual(dX)) == dX, where + ": X^bbb = X^b");
        for (Mask y = 0; y < subsets; ++y) {
          const MonoidSubset Y = sub(y);
          c.expect(s.dual(sub(x | y)) == sub(dX.members() & s.dual(Y).members()), where + ": dual of union");
          c.expect(s.dual(s.pointwise_product(X, Y)) == s.linear_implication(X, s.dual(Y)), where + ": dual of product");
        }
      }
      const Fact unit = s.unit_fact(), bot = s.false_fact(), one = s.one(), zero = s.zero();
      for (const Fact& f : s.enumerate_facts()) {
        c.expect(s.tensor(f, unit) == f && s.tensor(unit, f) == f, where + ": I is the tensor unit");
        c.expect(s.par(f, bot) == f && s.par(bot, f) == f, where + ": false is the par unit");
        c.expect(s.with_additive(f, one) == f, where + ": 1 is the with unit");
        c.expect(s.plus_additive(f, zero) == f, where + ": 0 is the plus unit");
      }
    }
    // The one-point monoid only has two false sets; it runs as an extra case.
    if (n >= 2) c.expect(bottoms >= 3, mono.name + " has at least three false sets");
  }
}

void game_algebra(Checker& c) {
  std::mt19937 rng(2024);
  const std::vector<std::shared_ptr<const FiniteLattice>> lattices{
      std::make_shared<const FiniteLattice>(t::chain(3)), std::make_shared<const FiniteLattice>(t::diamond())};
  const auto with_payoff = [&](const ConwayGame& g, const std::shared_ptr<const FiniteLattice>& lat) {
    std::vector<Element> values;
    const auto elems = lat->elements();
    for (std::size_t v = 0; v < g.vertex_count(); ++v) values.push_back(elems[rng() % elems.size()]);
    return ConwayGame(g.labels(), g.root(), g.moves(), Payoff{lat, values});
  };
  for (int round = 0; round < 40; ++round) {
    const ConwayGame g0 = t::random_game(rng, 6), h0 = t::random_game(rng, 6);
    const auto& lat = lattices[round % lattices.size()];
    const ConwayGame g = with_payoff(g0, lat), h = with_payoff(h0, lat);
    c.expect(dual_game(dual_game(g)).moves() == g.moves(), "dual is an involution");
    const ConwayGame gh = tensor_games(g, h);
    const std::size_t vg = g.vertex_count(), vh = h.vertex_count();
    c.expect(gh.vertex_count() == vg * vh, "vertex count of tensor");
    c.expect(gh.moves().size() == vh * g.moves().size() + vg * h.moves().size(), "edge count of tensor");
    for (std::size_t x = 0; x < vg; ++x)
      for (std::size_t y = 0; y < vh; ++y)
        c.expect(gh.payoff_at(x * vh + y) == lat->meet(g.payoff_at(x), h.payoff_at(y)), "tensor payoff is the meet");
  }
  const auto boolean = std::make_shared<const FiniteLattice>(t::chain(2));
  for (bool a : {false, true}) {
    for (bool b : {false, true}) {
      const auto value = [&](bool v) { return v ? boolean->top() : boolean->bottom(); };
      const ConwayGame g({"g"}, 0, {}, Payoff{boolean, {value(a)}});
      const ConwayGame h({"h"}, 0, {}, Payoff{boolean, {value(b)}});
      c.expect(tensor_games(g, h).payoff_at(0) == value(a && b), "Boolean tensor payoff is AND");
    }
  }
}

void oracle_equivalence(Checker& c) {
  std::mt19937 rng(77);
  for (int i = 0; i < 60; ++i) {
    const t::PlannerInstance inst = t::random_planner_instance(rng);
    for (bool positionwise : {false, true}) {
      const auto plays =
          choose_play(inst.env, inst.goals, inst.depth, positionwise ? Eq1Mode::positionwise : Eq1Mode::prose);
      std::set<t::PerAgentPlay> got;
      const std::size_t agents = inst.env.agents().size();
      for (const auto& p : plays) {
        t::PerAgentPlay q(agents);
        for (const auto& step : p.cells)
          for (std::size_t a = 0; a < agents; ++a) q[a].push_back(step[a]);
        got.insert(q);
      }
      c.expect(got == t::oracle_argmax(inst.env, inst.goals, inst.depth, positionwise),
               "instance " + std::to_string(i) + (positionwise ? " positionwise" : " prose"));
    }
  }
}

void strategy_validator(Checker& c) {
  const ConwayGame g({"r", "a", "b", "c"}, 0,
                     {{0, 1, Polarity::opponent},
                      {1, 2, Polarity::proponent},
                      {1, 3, Polarity::proponent},
                      {0, 3, Polarity::proponent},
                      {2, 0, Polarity::opponent}});
  const auto plays = enumerate_plays(g, 4, false);
  const auto agree = [&](const std::vector<Play>& subset) {
    bool accepted = true;
    try {
      validate_strategy(g, subset);
    } catch (const Error&) {
      accepted = false;
    }
    std::vector<std::vector<std::size_t>> lists;
    for (const auto& p : subset) lists.push_back(p.moves);
    c.expect(accepted == t::strategy_predicate(g, lists), "subset of size " + std::to_string(subset.size()));
  };
  agree({});
  const std::size_t n = plays.size();
  for (std::size_t i = 0; i < n; ++i) {
    agree({plays[i]});
    for (std::size_t j = i + 1; j < n; ++j) {
      agree({plays[i], plays[j]});
      for (std::size_t k = j + 1; k < n; ++k) agree({plays[i], plays[j], plays[k]});
    }
  }
}

void property_suite(Checker& c) {
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> coord(0, 7), range(0, 5);
  for (int i = 0; i < 200; ++i) {
    const GoalObject g{"g", {coord(rng), coord(rng)}, {{"a", range(rng)}, {"b", range(rng)}, {"c", range(rng)}}};
    const GridEnvironment env(8, 8, {}, {}, {g});
    const Cell p{coord(rng), coord(rng)}, q{coord(rng), coord(rng)};
    const int horizon = range(rng);
    if (chebyshev_distance(p, g.position) <= chebyshev_distance(q, g.position))
      c.expect(reward(env, q, horizon, 0).leq(reward(env, p, horizon, 0)), "fog monotonicity");
  }

  const Scenario s = load_scenario_file(bundled);
  std::vector<DesireLattice> desires = s.desires;
  for (auto& l : t::bundled_lattices()) {
    auto lat = std::make_shared<const FiniteLattice>(std::move(l));
    std::vector<std::string> names;
    for (Element e : lat->generators()) names.push_back(lat->name(e));
    desires.push_back(make_desire_lattice(lat, names, lat->name(lat->top())));
  }
  for (const auto& d : desires) {
    const auto& lat = *d.lattice;
    c.expect(vertex_weight(d, lat.top()) == Rational(1), "top weight is one");
    for (Element v : lat.elements())
      for (Element w : lat.elements())
        if (lat.leq(v, w)) c.expect(vertex_weight(d, v) <= vertex_weight(d, w), "weight is monotone");
  }

  const auto corpus = t::monoid_corpus();
  for (int round = 0; round < 100; ++round) {
    const auto& mono = corpus[rng() % corpus.size()];
    const Mask full = (Mask{1} << mono.carrier.size()) - 1;
    auto space = std::make_shared<const PhaseSpace>(t::build_space(mono, rng() & full));
    const auto facts = space->enumerate_facts();
    std::map<std::string, MonoidSubset> targets;
    std::vector<std::string> as, bs;
    for (int i = 0; i < 3; ++i) {
      as.push_back("a" + std::to_string(i));
      targets.emplace(as.back(), facts[rng() % facts.size()].subset());
      bs.push_back("b" + std::to_string(i));
      targets.emplace(bs.back(), facts[rng() % facts.size()].subset());
    }
    const auto spec = make_goal_lattice_spec(space, targets, {});
    const Fact reference = process_priority(spec, as, bs);
    std::shuffle(as.begin(), as.end(), rng);
    std::shuffle(bs.begin(), bs.end(), rng);
    c.expect(process_priority(spec, as, bs) == reference, "priority is permutation invariant");
  }

  PlannerConfig config = s.config;
  config.missing_vertex = MissingVertexPolicy::zero_weight;
  const std::string first = format_trace(s.env, s.spec, simulate(s.env, s.spec, s.desires, config));
  const std::string second = format_trace(s.env, s.spec, simulate(s.env, s.spec, s.desires, config));
  c.expect(!first.empty() && first == second, "simulate traces are byte-identical");
}

}  // namespace

int main() {
  bool ok = true;
  ok &= run_criterion(1, "bundled scenario weights and assignment", 1, bundled_weights_and_assignment);
  ok &= run_criterion(2, "phase semantics laws", 10, phase_laws);
  ok &= run_criterion(3, "game algebra", 5, game_algebra);
  ok &= run_criterion(4, "planner oracle equivalence", 60, oracle_equivalence);
  ok &= run_criterion(5, "strategy validator", 5, strategy_validator);
  ok &= run_criterion(6, "property suite", 60, property_suite);
  return ok ? 0 : 1;
}
