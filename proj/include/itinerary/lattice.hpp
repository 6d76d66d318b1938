#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace itinerary {

/// Handle to one element of a specific FiniteLattice. Handles from different
/// lattices are never mixed; every lattice operation rejects foreign handles.
struct Element {
  std::uint64_t lattice = 0;
  std::size_t index = 0;

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element&, const Element&) = default;
};

/// How an order relation is supplied to verify_poset.
enum class OrderInput {
  full_relation,  // every pair (x, y) with x <= y, reflexive pairs included
  covers,         // Hasse diagram edges (lower, upper); closed internally
};

using OrderPair = std::pair<std::string, std::string>;

/// A validated finite lattice with precomputed join/meet tables.
///
/// Instances are immutable after construction. Join, meet, order tests and
/// relative pseudocomplements are table lookups. Element identifiers are
/// opaque strings and carry no meaning beyond identity.
class FiniteLattice {
 public:
  /// Largest element count accepted by the generic (cubic) validator.
  static constexpr std::size_t max_validated_size = 256;
  /// Largest atom count accepted by powerset().
  static constexpr std::size_t max_powerset_atoms = 10;

  /// Boolean lattice of all subsets of `atoms`, ordered by inclusion.
  /// Element names are sorted bracketed member lists such as "{a,b}".
  static FiniteLattice powerset(std::vector<std::string> atoms);

  std::uint64_t id() const noexcept { return id_; }
  std::size_t size() const noexcept { return names_.size(); }

  std::vector<Element> elements() const;
  Element element(std::string_view name) const;
  std::optional<Element> find(std::string_view name) const;
  const std::string& name(Element e) const;
  bool contains(Element e) const noexcept { return e.lattice == id_ && e.index < size(); }

  Element top() const noexcept { return {id_, top_}; }
  Element bottom() const noexcept { return {id_, bottom_}; }
  std::span<const Element> generators() const noexcept { return generators_; }

  bool leq(Element a, Element b) const;
  bool less(Element a, Element b) const { return a != b && leq(a, b); }
  bool comparable(Element a, Element b) const { return leq(a, b) || leq(b, a); }

  Element join(Element a, Element b) const;
  Element meet(Element a, Element b) const;
  Element join_set(std::span<const Element> s) const;
  Element meet_set(std::span<const Element> s) const;

  /// True when every pair has a relative pseudocomplement (Heyting/Brouwer).
  bool is_brouwer() const noexcept { return brouwer_; }
  /// Greatest x with meet(a, x) <= b. Throws NotBrouwerian if none exists.
  Element relative_pseudocomplement(Element a, Element b) const;

  /// True iff closing `g` under binary join and meet yields every element.
  bool generators_closure(std::span<const Element> g) const;

  /// Transitive reduction of the order as (lower, upper) pairs.
  std::vector<std::pair<Element, Element>> covers() const;

  /// Full order relation as (lower, upper) name pairs, reflexive pairs included.
  std::vector<OrderPair> relation() const;

  std::string to_dot(std::string_view graph_name) const;

 private:
  friend FiniteLattice verify_poset(std::vector<std::string>, std::span<const OrderPair>, OrderInput,
                                    std::optional<std::vector<std::string>>);

  FiniteLattice() = default;

  std::size_t check(Element e) const;
  void index_names();
  void compute_tables();  // join/meet from leq by bound scans
  void compute_pseudocomplements();

  static constexpr std::uint32_t npos = UINT32_MAX;

  std::uint64_t id_ = 0;
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<char> leq_;  // row-major n x n
  std::vector<std::uint32_t> join_;
  std::vector<std::uint32_t> meet_;
  std::vector<std::uint32_t> rpc_;  // npos where no greatest element exists
  std::vector<Element> generators_;
  std::size_t top_ = 0;
  std::size_t bottom_ = 0;
  bool brouwer_ = false;
};

/// Validates an order over `elements` and builds the lattice.
///
/// With OrderInput::covers the pairs are closed reflexively and transitively
/// first; cycles then surface as AntisymmetryViolation. With a full relation,
/// reflexivity and transitivity are checked as given. When `generators` is
/// supplied it must generate the whole lattice under join and meet; otherwise
/// every element is treated as a generator.
FiniteLattice verify_poset(std::vector<std::string> elements, std::span<const OrderPair> relation,
                           OrderInput input = OrderInput::full_relation,
                           std::optional<std::vector<std::string>> generators = std::nullopt);

}  // namespace itinerary
