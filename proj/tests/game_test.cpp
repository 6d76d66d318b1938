#include <map>
#include <random>

#include "doctest.h"
#include "game_fixtures.hpp"
#include "itinerary/error.hpp"
#include "itinerary/game.hpp"
#include "sample_lattices.hpp"

using namespace itinerary;
using itinerary::testing::edge_multiset;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an itinerary::Error");
  return ErrorCode::internal;
}

// r -(-)-> a -(+)-> b, r -(-)-> b
ConwayGame three_vertex() {
  return ConwayGame({"r", "a", "b"}, 0,
                    {{0, 1, Polarity::opponent}, {1, 2, Polarity::proponent}, {0, 2, Polarity::opponent}});
}

// r -(+)-> s -(-)-> t
ConwayGame three_vertex_chain() {
  return ConwayGame({"r", "s", "t"}, 0, {{0, 1, Polarity::proponent}, {1, 2, Polarity::opponent}});
}

ConwayGame single_vertex() { return ConwayGame({"*"}, 0, {}); }

std::vector<std::vector<std::size_t>> move_lists(const std::vector<Play>& plays) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& p : plays) out.push_back(p.moves);
  return out;
}

}  // namespace

TEST_CASE("game construction is validated") {
  CHECK(code_of([] { ConwayGame({"a"}, 1, {}); }) == ErrorCode::invalid_game);
  CHECK(code_of([] { ConwayGame({"a", "b"}, 0, {}); }) == ErrorCode::invalid_game);
  CHECK(code_of([] { ConwayGame({"a"}, 0, {{0, 3, Polarity::opponent}}); }) == ErrorCode::invalid_game);
  auto m3 = std::make_shared<const FiniteLattice>(itinerary::testing::m3());
  CHECK(code_of([&] { ConwayGame({"a"}, 0, {}, Payoff{m3, {m3->top()}}); }) == ErrorCode::invalid_game);
  auto ch = std::make_shared<const FiniteLattice>(itinerary::testing::chain(2));
  CHECK(code_of([&] { ConwayGame({"a", "b"}, 0, {{0, 1, Polarity::opponent}}, Payoff{ch, {ch->top()}}); }) ==
        ErrorCode::invalid_game);
}

TEST_CASE("dual_game") {
  ConwayGame one({"r", "x"}, 0, {{0, 1, Polarity::opponent}});
  auto d = dual_game(one);
  CHECK(d.moves()[0].polarity == Polarity::proponent);
  CHECK(dual_game(d).moves() == one.moves());

  auto g = three_vertex();
  auto gd = dual_game(g);
  auto plays = enumerate_plays(g, 3, true);
  auto dual_plays = enumerate_plays(gd, 3, true);
  CHECK(plays.size() == 4);  // [], [0], [0,1], [2]
  CHECK(move_lists(plays) == move_lists(dual_plays));
  for (std::size_t i = 0; i < g.moves().size(); ++i) CHECK(gd.moves()[i].polarity == flip(g.moves()[i].polarity));
}

TEST_CASE("tensor_games") {
  auto g = three_vertex();
  auto unit = tensor_games(g, single_vertex());
  CHECK(unit.vertex_count() == g.vertex_count());
  CHECK(edge_multiset(unit) == edge_multiset(g));

  auto h = three_vertex_chain();
  auto gh = tensor_games(g, h);
  CHECK(gh.vertex_count() == 9);
  CHECK(gh.moves().size() == 3 * 3 + 3 * 2);
  CHECK(gh.root() == 0);
  CHECK(gh.label(1) == "(r,s)");

  std::map<Polarity, std::size_t> counts;
  for (const auto& m : gh.moves()) ++counts[m.polarity];
  CHECK(counts[Polarity::opponent] == 3 * 2 + 3 * 1);
  CHECK(counts[Polarity::proponent] == 3 * 1 + 3 * 1);
}

TEST_CASE("par_games is the same graph construction") {
  auto g = three_vertex();
  auto h = three_vertex_chain();
  auto t = tensor_games(g, h);
  auto p = par_games(g, h);
  CHECK(p.labels() == t.labels());
  CHECK(p.moves() == t.moves());
  CHECK(p.root() == t.root());
  CHECK(edge_multiset(par_games(g, single_vertex())) == edge_multiset(g));
}

TEST_CASE("tensor is commutative and associative up to relabelling") {
  std::mt19937 rng(7);
  for (int round = 0; round < 3; ++round) {
    auto a = itinerary::testing::random_game(rng, 4);
    auto b = itinerary::testing::random_game(rng, 4);
    auto c = itinerary::testing::random_game(rng, 4);
    const std::size_t na = a.vertex_count();
    const std::size_t nb = b.vertex_count();

    auto ab = tensor_games(a, b);
    auto ba = tensor_games(b, a);
    std::multiset<itinerary::testing::EdgeKey> swapped;
    auto swap_index = [&](std::size_t v) { return (v % nb) * na + v / nb; };
    for (const auto& m : ab.moves()) swapped.insert({swap_index(m.from), swap_index(m.to), static_cast<int>(m.polarity)});
    CHECK(swapped == edge_multiset(ba));
    CHECK(swap_index(ab.root()) == ba.root());

    auto left = tensor_games(tensor_games(a, b), c);
    auto right = tensor_games(a, tensor_games(b, c));
    CHECK(edge_multiset(left) == edge_multiset(right));
    CHECK(left.root() == right.root());
  }
}

TEST_CASE("plays of a tensor product project onto plays of the factors") {
  std::mt19937 rng(11);
  for (int round = 0; round < 5; ++round) {
    auto g = itinerary::testing::random_game(rng, 3);
    auto h = itinerary::testing::random_game(rng, 3);
    auto gh = tensor_games(g, h);
    const std::size_t nh = h.vertex_count();
    for (const auto& play : enumerate_plays(gh, 4, false)) {
      std::size_t gx = g.root();
      std::size_t hy = h.root();
      for (std::size_t mi : play.moves) {
        const auto& m = gh.moves()[mi];
        const std::size_t x0 = m.from / nh, y0 = m.from % nh, x1 = m.to / nh, y1 = m.to % nh;
        REQUIRE(x0 == gx);
        REQUIRE(y0 == hy);
        const bool in_g = std::any_of(g.moves().begin(), g.moves().end(),
                                      [&](const Move& e) { return y0 == y1 && e == Move{x0, x1, m.polarity}; });
        const bool in_h = std::any_of(h.moves().begin(), h.moves().end(),
                                      [&](const Move& e) { return x0 == x1 && e == Move{y0, y1, m.polarity}; });
        CHECK((in_g || in_h));
        gx = x1;
        hy = y1;
      }
    }
  }
}

TEST_CASE("tensor payoff is the meet of the factor payoffs") {
  auto bool_lat = std::make_shared<const FiniteLattice>(itinerary::testing::chain(2));
  auto f = bool_lat->bottom();
  auto t = bool_lat->top();
  for (auto x : {f, t}) {
    for (auto y : {f, t}) {
      ConwayGame g({"g"}, 0, {}, Payoff{bool_lat, {x}});
      ConwayGame h({"h"}, 0, {}, Payoff{bool_lat, {y}});
      const bool expected = x == t && y == t;
      CHECK((tensor_games(g, h).payoff_at(0) == t) == expected);
    }
  }

  auto other = std::make_shared<const FiniteLattice>(itinerary::testing::chain(2));
  ConwayGame g({"g"}, 0, {}, Payoff{bool_lat, {t}});
  ConwayGame h({"h"}, 0, {}, Payoff{other, {other->top()}});
  CHECK(code_of([&] { tensor_games(g, h); }) == ErrorCode::payoff_lattice_mismatch);
}

TEST_CASE("enumerate_plays") {
  auto lone = single_vertex();
  auto plays = enumerate_plays(lone, 5, false);
  REQUIRE(plays.size() == 1);
  CHECK(plays[0].empty());

  ConwayGame one({"r", "x"}, 0, {{0, 1, Polarity::opponent}});
  CHECK(enumerate_plays(one, 1, true).size() == 2);
  CHECK(enumerate_plays(one, 0, true).size() == 1);

  // Four positions with a cycle back to the root.
  ConwayGame g({"0", "1", "2", "3"}, 0,
               {{0, 1, Polarity::opponent},
                {0, 2, Polarity::opponent},
                {1, 3, Polarity::proponent},
                {2, 3, Polarity::proponent},
                {3, 0, Polarity::opponent},
                {1, 2, Polarity::proponent}});
  // Independent count by dynamic programming over (vertex, last polarity).
  for (bool alternating : {false, true}) {
    for (std::size_t max_len = 0; max_len <= 6; ++max_len) {
      std::map<std::pair<std::size_t, int>, std::size_t> frontier{{{0, 0}, 1}};
      std::size_t total = 1;
      for (std::size_t len = 1; len <= max_len; ++len) {
        std::map<std::pair<std::size_t, int>, std::size_t> next;
        for (const auto& [key, ways] : frontier) {
          for (const auto& m : g.moves()) {
            if (m.from != key.first) continue;
            const int p = static_cast<int>(m.polarity);
            if (alternating && key.second == p) continue;
            next[{m.to, p}] += ways;
          }
        }
        for (const auto& [key, ways] : next) total += ways;
        frontier = std::move(next);
      }
      auto enumerated = enumerate_plays(g, max_len, alternating);
      CHECK(enumerated.size() == total);
      // prefix closure
      std::set<std::vector<std::size_t>> set;
      for (const auto& p : enumerated) set.insert(p.moves);
      for (const auto& p : enumerated)
        if (!p.empty()) CHECK(set.contains(std::vector<std::size_t>(p.moves.begin(), p.moves.end() - 1)));
    }
  }
}

TEST_CASE("validate_strategy") {
  auto g = three_vertex();
  auto s = validate_strategy(g, {make_play(g, {})});
  CHECK(s.paths().size() == 1);

  CHECK(code_of([&] { validate_strategy(g, {}); }) == ErrorCode::empty_strategy);
  CHECK(code_of([&] { validate_strategy(g, {make_play(g, {}), make_play(g, {0})}); }) == ErrorCode::odd_length);
  CHECK(code_of([&] { validate_strategy(g, {make_play(g, {0, 1})}); }) == ErrorCode::not_prefix_closed);
  CHECK(code_of([&] { make_play(g, {1}); }) == ErrorCode::invalid_play);

  auto d = dual_game(g);
  CHECK(code_of([&] { validate_strategy(d, {make_play(d, {}), make_play(d, {0, 1})}); }) == ErrorCode::wrong_opening);

  // Same history, same Opponent move, two different Proponent answers.
  ConwayGame fork({"r", "a", "b", "c"}, 0,
                  {{0, 1, Polarity::opponent}, {1, 2, Polarity::proponent}, {1, 3, Polarity::proponent}});
  CHECK(code_of([&] {
          validate_strategy(fork, {make_play(fork, {}), make_play(fork, {0, 1}), make_play(fork, {0, 2})});
        }) == ErrorCode::not_deterministic);

  // Different Opponent moves may be answered differently.
  ConwayGame branches({"r", "a", "b", "c", "d"}, 0,
                      {{0, 1, Polarity::opponent},
                       {0, 2, Polarity::opponent},
                       {1, 3, Polarity::proponent},
                       {2, 4, Polarity::proponent}});
  CHECK_NOTHROW(validate_strategy(
      branches, {make_play(branches, {}), make_play(branches, {0, 2}), make_play(branches, {1, 3})}));

  ConwayGame same_pol({"r", "a", "b"}, 0, {{0, 1, Polarity::opponent}, {1, 2, Polarity::opponent}});
  CHECK(code_of([&] { validate_strategy(same_pol, {make_play(same_pol, {}), make_play(same_pol, {0, 1})}); }) ==
        ErrorCode::not_alternating);
  CHECK(code_of([&] { validate_strategy(same_pol, {make_play(g, {})}); }) == ErrorCode::game_mismatch);
}

TEST_CASE("validate_strategy agrees with the clause-by-clause predicate") {
  ConwayGame g({"r", "a", "b", "c"}, 0,
               {{0, 1, Polarity::opponent},
                {1, 2, Polarity::proponent},
                {1, 3, Polarity::proponent},
                {0, 3, Polarity::proponent},
                {2, 0, Polarity::opponent}});
  auto plays = enumerate_plays(g, 4, false);
  for (std::size_t i = 0; i < plays.size(); ++i) {
    for (std::size_t j = i; j < plays.size(); ++j) {
      std::vector<Play> subset{plays[i], plays[j]};
      bool accepted = true;
      try {
        validate_strategy(g, subset);
      } catch (const Error&) {
        accepted = false;
      }
      CHECK(accepted == itinerary::testing::strategy_predicate(g, move_lists(subset)));
    }
  }
}

TEST_CASE("is_winning") {
  auto lat = std::make_shared<const FiniteLattice>(itinerary::testing::chain(3));  // bottom < half < top
  const auto bottom = lat->element("c0");
  const auto half = lat->element("c1");
  const auto top = lat->element("c2");
  std::vector<Move> moves{{0, 1, Polarity::opponent},
                          {1, 2, Polarity::proponent},
                          {0, 3, Polarity::opponent},
                          {3, 4, Polarity::proponent}};
  std::vector<std::string> labels{"r", "a", "a'", "b", "b'"};
  ConwayGame g(labels, 0, moves, Payoff{lat, {top, top, half, top, bottom}});

  struct Row {
    std::vector<std::vector<std::size_t>> paths;
    bool winning;
  };
  const std::vector<Row> table{
      {{{}}, true},
      {{{}, {0, 1}}, true},
      {{{}, {2, 3}}, false},
      {{{}, {0, 1}, {2, 3}}, false},
  };
  for (const auto& row : table) {
    std::vector<Play> paths;
    for (const auto& p : row.paths) paths.push_back(make_play(g, p));
    CHECK(is_winning(validate_strategy(g, paths), g) == row.winning);
  }

  ConwayGame all_top(labels, 0, moves, Payoff{lat, std::vector<Element>(5, top)});
  for (const auto& row : table) {
    std::vector<Play> paths;
    for (const auto& p : row.paths) paths.push_back(make_play(all_top, p));
    CHECK(is_winning(validate_strategy(all_top, paths), all_top));
  }

  ConwayGame bare(labels, 0, moves);
  CHECK(code_of([&] { is_winning(validate_strategy(bare, {make_play(bare, {})}), bare); }) == ErrorCode::no_payoff);
}

TEST_CASE("payoff implication is the relative pseudocomplement") {
  auto lat = itinerary::testing::chain(2);
  auto f = lat.bottom();
  auto t = lat.top();
  // Boolean implication table.
  CHECK(payoff_implies(lat, f, f) == t);
  CHECK(payoff_implies(lat, f, t) == t);
  CHECK(payoff_implies(lat, t, f) == f);
  CHECK(payoff_implies(lat, t, t) == t);
}

TEST_CASE("DOT export colours edges by polarity") {
  auto dot = to_dot(three_vertex(), "g");
  CHECK(dot.find("v0 -> v1 [color=red") != std::string::npos);
  CHECK(dot.find("v1 -> v2 [color=blue") != std::string::npos);
}
