#include "itinerary/game.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

#include "itinerary/error.hpp"

namespace itinerary {

namespace {

std::uint64_t next_game_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

std::string describe(const Play& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.moves.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(p.moves[i]);
  }
  return out + "]";
}

std::string quoted(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

bool is_prefix(const Play& p, const Play& q) {
  return p.size() <= q.size() && std::equal(p.moves.begin(), p.moves.end(), q.moves.begin());
}

ConwayGame product(const ConwayGame& g, const ConwayGame& h) {
  const std::size_t nh = h.vertex_count();
  std::vector<std::string> labels;
  labels.reserve(g.vertex_count() * nh);
  for (const auto& lx : g.labels())
    for (const auto& ly : h.labels()) labels.push_back("(" + lx + "," + ly + ")");

  std::vector<Move> moves;
  moves.reserve(g.moves().size() * nh + h.moves().size() * g.vertex_count());
  for (std::size_t x = 0; x < g.vertex_count(); ++x) {
    for (std::size_t y = 0; y < nh; ++y) {
      for (std::size_t mi : g.outgoing(x)) {
        const Move& m = g.moves()[mi];
        moves.push_back({x * nh + y, m.to * nh + y, m.polarity});
      }
      for (std::size_t mi : h.outgoing(y)) {
        const Move& m = h.moves()[mi];
        moves.push_back({x * nh + y, x * nh + m.to, m.polarity});
      }
    }
  }

  std::optional<Payoff> payoff;
  if (g.has_payoff() && h.has_payoff()) {
    const auto& pg = *g.payoff();
    const auto& ph = *h.payoff();
    if (pg.lattice->id() != ph.lattice->id()) {
      throw Error(ErrorCode::payoff_lattice_mismatch, "tensor factors carry payoffs over different lattices");
    }
    Payoff combined{pg.lattice, {}};
    combined.values.reserve(labels.size());
    for (std::size_t x = 0; x < g.vertex_count(); ++x)
      for (std::size_t y = 0; y < nh; ++y) combined.values.push_back(pg.lattice->meet(pg.values[x], ph.values[y]));
    payoff = std::move(combined);
  }
  return ConwayGame(std::move(labels), g.root() * nh + h.root(), std::move(moves), std::move(payoff));
}

}  // namespace

ConwayGame::ConwayGame(std::vector<std::string> labels, std::size_t root, std::vector<Move> moves,
                       std::optional<Payoff> payoff)
    : id_(next_game_id()),
      labels_(std::move(labels)),
      root_(root),
      moves_(std::move(moves)),
      payoff_(std::move(payoff)) {
  const std::size_t n = labels_.size();
  if (root_ >= n) throw Error(ErrorCode::invalid_game, "root is not a vertex");
  out_.assign(n, {});
  for (std::size_t i = 0; i < moves_.size(); ++i) {
    const Move& m = moves_[i];
    if (m.from >= n || m.to >= n) throw Error(ErrorCode::invalid_game, "move " + std::to_string(i) + " leaves the graph");
    if (m.polarity != Polarity::opponent && m.polarity != Polarity::proponent) {
      throw Error(ErrorCode::invalid_game, "move " + std::to_string(i) + " has polarity other than +-1");
    }
    out_[m.from].push_back(i);
  }
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{root_};
  seen[root_] = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t mi : out_[v]) {
      const std::size_t w = moves_[mi].to;
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!seen[v]) throw Error(ErrorCode::invalid_game, "vertex '" + labels_[v] + "' is unreachable from the root");
  }
  if (payoff_) {
    if (!payoff_->lattice) throw Error(ErrorCode::invalid_game, "payoff without a lattice");
    if (payoff_->values.size() != n) throw Error(ErrorCode::invalid_game, "payoff is not total over the vertices");
    for (Element e : payoff_->values) {
      if (!payoff_->lattice->contains(e)) throw Error(ErrorCode::foreign_element, "payoff value outside its lattice");
    }
    if (!payoff_->lattice->is_brouwer()) throw Error(ErrorCode::invalid_game, "payoff lattice is not Brouwerian");
  }
}

Element ConwayGame::payoff_at(std::size_t v) const {
  if (!payoff_) throw Error(ErrorCode::no_payoff, "game carries no payoff");
  return payoff_->values.at(v);
}

bool is_play(const ConwayGame& game, const Play& play) {
  if (play.game_id != game.id()) return false;
  std::size_t at = game.root();
  for (std::size_t mi : play.moves) {
    if (mi >= game.moves().size() || game.moves()[mi].from != at) return false;
    at = game.moves()[mi].to;
  }
  return true;
}

Play make_play(const ConwayGame& game, std::vector<std::size_t> moves) {
  Play p{game.id(), std::move(moves)};
  if (!is_play(game, p)) throw Error(ErrorCode::invalid_play, describe(p) + " is not a path from the root");
  return p;
}

bool is_alternating(const ConwayGame& game, const Play& play) {
  for (std::size_t i = 1; i < play.moves.size(); ++i) {
    if (game.moves()[play.moves[i]].polarity == game.moves()[play.moves[i - 1]].polarity) return false;
  }
  return true;
}

std::size_t end_vertex(const ConwayGame& game, const Play& play) {
  return play.empty() ? game.root() : game.moves()[play.moves.back()].to;
}

ConwayGame dual_game(const ConwayGame& game) {
  std::vector<Move> moves = game.moves();
  for (auto& m : moves) m.polarity = flip(m.polarity);
  return ConwayGame(game.labels(), game.root(), std::move(moves), game.payoff());
}

ConwayGame tensor_games(const ConwayGame& g, const ConwayGame& h) { return product(g, h); }

ConwayGame par_games(const ConwayGame& g, const ConwayGame& h) { return product(g, h); }

std::vector<Play> enumerate_plays(const ConwayGame& game, std::size_t max_len, bool alternating_only) {
  std::vector<Play> out;
  Play current{game.id(), {}};
  auto visit = [&](auto&& self, std::size_t at) -> void {
    out.push_back(current);
    if (current.size() == max_len) return;
    for (std::size_t mi : game.outgoing(at)) {
      if (alternating_only && !current.empty() &&
          game.moves()[current.moves.back()].polarity == game.moves()[mi].polarity) {
        continue;
      }
      current.moves.push_back(mi);
      self(self, game.moves()[mi].to);
      current.moves.pop_back();
    }
  };
  visit(visit, game.root());
  return out;
}

std::vector<Play> Strategy::maximal_paths() const {
  std::vector<Play> out;
  for (const auto& p : paths_) {
    bool extended = std::any_of(paths_.begin(), paths_.end(),
                                [&](const Play& q) { return q.size() > p.size() && is_prefix(p, q); });
    if (!extended) out.push_back(p);
  }
  return out;
}

Strategy validate_strategy(const ConwayGame& game, std::vector<Play> paths) {
  if (paths.empty()) throw Error(ErrorCode::empty_strategy, "no paths");
  std::sort(paths.begin(), paths.end());
  paths.erase(std::unique(paths.begin(), paths.end()), paths.end());

  for (const auto& p : paths) {
    if (p.game_id != game.id()) throw Error(ErrorCode::game_mismatch, describe(p) + " belongs to another game");
    if (!is_play(game, p)) throw Error(ErrorCode::invalid_play, describe(p) + " is not a path from the root");
    if (!is_alternating(game, p)) throw Error(ErrorCode::not_alternating, describe(p));
    if (p.size() % 2 != 0) throw Error(ErrorCode::odd_length, describe(p));
    if (!p.empty() && game.moves()[p.moves.front()].polarity != Polarity::opponent) {
      throw Error(ErrorCode::wrong_opening, describe(p) + " opens with a Proponent move");
    }
  }
  for (const auto& p : paths) {
    for (std::size_t len = 0; len < p.size(); len += 2) {
      Play prefix{p.game_id, {p.moves.begin(), p.moves.begin() + static_cast<std::ptrdiff_t>(len)}};
      if (!std::binary_search(paths.begin(), paths.end(), prefix)) {
        throw Error(ErrorCode::not_prefix_closed, describe(prefix) + " is missing, needed by " + describe(p));
      }
    }
  }
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (std::size_t j = i + 1; j < paths.size(); ++j) {
      const auto& p = paths[i].moves;
      const auto& q = paths[j].moves;
      const std::size_t shared = std::min(p.size(), q.size());
      std::size_t k = 0;
      while (k < shared && p[k] == q[k]) ++k;
      // Diverging right after a common Opponent move means two Proponent answers.
      if (k < shared && k % 2 == 1) {
        throw Error(ErrorCode::not_deterministic, describe(paths[i]) + " and " + describe(paths[j]));
      }
    }
  }
  Strategy s;
  s.game_id_ = game.id();
  s.paths_ = std::move(paths);
  return s;
}

bool is_winning(const Strategy& strategy, const ConwayGame& game) {
  if (!game.has_payoff()) throw Error(ErrorCode::no_payoff, "winning needs a payoff");
  if (strategy.game_id() != game.id()) throw Error(ErrorCode::game_mismatch, "strategy belongs to another game");
  const auto& lat = *game.payoff()->lattice;
  for (const auto& p : strategy.maximal_paths()) {
    if (game.payoff_at(end_vertex(game, p)) == lat.bottom()) return false;
  }
  return true;
}

Element payoff_implies(const FiniteLattice& lattice, Element a, Element b) {
  return lattice.relative_pseudocomplement(a, b);
}

std::string to_dot(const ConwayGame& game, std::string_view graph_name) {
  std::ostringstream os;
  os << "digraph " << quoted(graph_name) << " {\n";
  for (std::size_t v = 0; v < game.vertex_count(); ++v) {
    std::string label = game.label(v);
    if (game.has_payoff()) label += " : " + game.payoff()->lattice->name(game.payoff()->values[v]);
    os << "  v" << v << " [label=" << quoted(label) << (v == game.root() ? ", shape=doublecircle" : "") << "];\n";
  }
  for (const auto& m : game.moves()) {
    const bool opp = m.polarity == Polarity::opponent;
    os << "  v" << m.from << " -> v" << m.to << " [color=" << (opp ? "red" : "blue") << ", label=\""
       << (opp ? "-" : "+") << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace itinerary
