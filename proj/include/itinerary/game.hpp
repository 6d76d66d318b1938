#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "itinerary/lattice.hpp"

namespace itinerary {

/// Opponent moves (-1) belong to the agent system, Proponent moves (+1) to
/// the environment.
enum class Polarity : int { opponent = -1, proponent = 1 };

constexpr Polarity flip(Polarity p) noexcept {
  return p == Polarity::opponent ? Polarity::proponent : Polarity::opponent;
}

struct Move {
  std::size_t from = 0;
  std::size_t to = 0;
  Polarity polarity = Polarity::opponent;

  friend bool operator==(const Move&, const Move&) = default;
};

/// Lattice-valued weight on every vertex of a game.
struct Payoff {
  std::shared_ptr<const FiniteLattice> lattice;
  std::vector<Element> values;
};

/// Rooted graph of positions with polarised moves and optional payoffs.
class ConwayGame {
 public:
  /// Throws InvalidGame if the root is out of range, a move names a missing
  /// vertex, some vertex is unreachable from the root, or the payoff is not
  /// total over a Brouwerian lattice.
  ConwayGame(std::vector<std::string> labels, std::size_t root, std::vector<Move> moves,
             std::optional<Payoff> payoff = std::nullopt);

  std::uint64_t id() const noexcept { return id_; }
  std::size_t vertex_count() const noexcept { return labels_.size(); }
  std::size_t root() const noexcept { return root_; }
  const std::string& label(std::size_t v) const { return labels_.at(v); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<Move>& moves() const noexcept { return moves_; }
  /// Indices into moves() leaving `v`, in move order.
  std::span<const std::size_t> outgoing(std::size_t v) const { return out_.at(v); }

  bool has_payoff() const noexcept { return payoff_.has_value(); }
  const std::optional<Payoff>& payoff() const noexcept { return payoff_; }
  /// Throws NoPayoff for games without weights.
  Element payoff_at(std::size_t v) const;

 private:
  std::uint64_t id_;
  std::vector<std::string> labels_;
  std::size_t root_;
  std::vector<Move> moves_;
  std::vector<std::vector<std::size_t>> out_;
  std::optional<Payoff> payoff_;
};

/// A path from the root, as indices into the owning game's moves().
struct Play {
  std::uint64_t game_id = 0;
  std::vector<std::size_t> moves;

  std::size_t size() const noexcept { return moves.size(); }
  bool empty() const noexcept { return moves.empty(); }

  friend bool operator==(const Play&, const Play&) = default;
  friend auto operator<=>(const Play&, const Play&) = default;
};

/// Throws InvalidPlay unless `moves` is a path from the root of `game`.
Play make_play(const ConwayGame& game, std::vector<std::size_t> moves);
bool is_play(const ConwayGame& game, const Play& play);
bool is_alternating(const ConwayGame& game, const Play& play);
/// Vertex reached by the play; the root for the empty play.
std::size_t end_vertex(const ConwayGame& game, const Play& play);

/// Same graph with every polarity negated; payoffs are kept as they are.
ConwayGame dual_game(const ConwayGame& game);

/// Asynchronous product: a move of either component, polarity inherited.
/// Vertex (x, y) has index x * |V_H| + y. Payoffs combine by meet when both
/// games carry them over the same lattice.
ConwayGame tensor_games(const ConwayGame& g, const ConwayGame& h);

/// Graph-identical to tensor_games; on game graphs the two products coincide.
ConwayGame par_games(const ConwayGame& g, const ConwayGame& h);

/// All plays of length <= max_len in depth-first move order, empty play first.
std::vector<Play> enumerate_plays(const ConwayGame& game, std::size_t max_len, bool alternating_only);

class Strategy {
 public:
  std::uint64_t game_id() const noexcept { return game_id_; }
  /// Sorted, duplicate free; always contains the empty play.
  const std::vector<Play>& paths() const noexcept { return paths_; }
  /// Paths that are not a proper prefix of another path in the strategy.
  std::vector<Play> maximal_paths() const;

 private:
  friend Strategy validate_strategy(const ConwayGame&, std::vector<Play>);
  Strategy() = default;
  std::uint64_t game_id_ = 0;
  std::vector<Play> paths_;
};

/// Checks non-emptiness, alternation, even length, Opponent opening, closure
/// under even prefixes and determinism, reporting the first witness found.
Strategy validate_strategy(const ConwayGame& game, std::vector<Play> paths);

/// True iff every maximal path of the strategy ends on a vertex whose payoff
/// is not the payoff lattice's bottom.
bool is_winning(const Strategy& strategy, const ConwayGame& game);

/// Payoff implication, generalised to the relative pseudocomplement.
Element payoff_implies(const FiniteLattice& lattice, Element a, Element b);

std::string to_dot(const ConwayGame& game, std::string_view graph_name);

}  // namespace itinerary
