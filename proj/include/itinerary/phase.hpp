#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "itinerary/lattice.hpp"

namespace itinerary {

/// Bit i set <=> carrier element i is a member.
using Mask = std::uint64_t;

/// A subset of the carrier of one particular phase space.
class MonoidSubset {
 public:
  MonoidSubset() = default;
  MonoidSubset(std::uint64_t space_id, Mask members) : space_id_(space_id), members_(members) {}

  std::uint64_t space_id() const noexcept { return space_id_; }
  Mask members() const noexcept { return members_; }
  bool contains(std::size_t i) const noexcept { return (members_ >> i) & 1U; }
  bool subset_of(const MonoidSubset& o) const noexcept { return (members_ & ~o.members_) == 0; }
  std::size_t size() const noexcept;

  friend bool operator==(const MonoidSubset&, const MonoidSubset&) = default;

 private:
  std::uint64_t space_id_ = 0;
  Mask members_ = 0;
};

/// A subset equal to its double dual. Only PhaseSpace can mint facts.
class Fact {
 public:
  const MonoidSubset& subset() const noexcept { return subset_; }
  Mask members() const noexcept { return subset_.members(); }
  bool subset_of(const Fact& o) const noexcept { return subset_.subset_of(o.subset_); }

  friend bool operator==(const Fact&, const Fact&) = default;

 private:
  friend class PhaseSpace;
  explicit Fact(MonoidSubset s) : subset_(s) {}
  MonoidSubset subset_;
};

/// Finite monoid with a designated false set, hosting the phase semantics
/// connectives. Immutable once validated.
class PhaseSpace {
 public:
  static constexpr std::size_t max_carrier = 64;
  static constexpr std::size_t default_fact_bound = 12;

  std::uint64_t id() const noexcept { return id_; }
  std::size_t carrier_size() const noexcept { return names_.size(); }
  const std::vector<std::string>& carrier() const noexcept { return names_; }
  std::size_t index_of(std::string_view name) const;
  std::size_t unit() const noexcept { return unit_; }
  std::size_t multiply(std::size_t x, std::size_t y) const { return table_[x * names_.size() + y]; }

  MonoidSubset subset(std::span<const std::string> members) const;
  MonoidSubset subset(std::initializer_list<std::string_view> members) const;
  MonoidSubset from_mask(Mask m) const;
  MonoidSubset full() const noexcept { return {id_, full_mask()}; }
  MonoidSubset empty() const noexcept { return {id_, 0}; }
  MonoidSubset false_set() const noexcept { return {id_, false_}; }

  MonoidSubset pointwise_product(const MonoidSubset& x, const MonoidSubset& y) const;
  /// {z | x.z in Y for all x in X}
  MonoidSubset linear_implication(const MonoidSubset& x, const MonoidSubset& y) const;
  MonoidSubset dual(const MonoidSubset& x) const;
  Fact closure(const MonoidSubset& x) const;
  bool is_fact(const MonoidSubset& x) const;
  /// Throws NotAFact unless `x` is closed.
  Fact as_fact(const MonoidSubset& x) const;

  Fact tensor(const Fact& x, const Fact& y) const;
  Fact par(const Fact& x, const Fact& y) const;
  Fact with_additive(const Fact& x, const Fact& y) const;
  Fact plus_additive(const Fact& x, const Fact& y) const;
  /// Dual of a fact, which is again a fact.
  Fact negate(const Fact& x) const;

  Fact one() const;         // 1 = M
  Fact zero() const;        // 0 = M^⊥
  Fact unit_fact() const;   // I = {e}^⊥⊥
  Fact false_fact() const;  // closure of ⊥

  /// All fixed points of the double dual, sorted by member set.
  std::vector<Fact> enumerate_facts(std::size_t bound = default_fact_bound) const;

  /// Sorted member list in carrier order, e.g. "{e,p}".
  std::string format(const MonoidSubset& x) const;
  std::string format(const Fact& f) const { return format(f.subset()); }

 private:
  friend PhaseSpace validate_monoid(std::vector<std::string>, std::vector<std::size_t>, std::size_t, Mask);

  PhaseSpace() = default;
  Mask full_mask() const noexcept;
  void check(const MonoidSubset& x) const;

  std::uint64_t id_ = 0;
  std::vector<std::string> names_;
  std::vector<std::size_t> table_;
  std::size_t unit_ = 0;
  Mask false_ = 0;
};

/// Validates closure, associativity and unit laws by exhaustive scan.
PhaseSpace validate_monoid(std::vector<std::string> carrier, std::vector<std::size_t> table, std::size_t unit,
                           Mask false_set);

/// Name-based variant: `table` is row-major, entry (x, y) at x * |carrier| + y.
PhaseSpace validate_monoid(std::vector<std::string> carrier, std::span<const std::string> table,
                           std::string_view unit, std::span<const std::string> false_members);

struct OpClPartition {
  std::vector<Fact> open_facts;
  std::vector<Fact> closed_facts;
};

OpClPartition validate_op_cl(const PhaseSpace& space, std::span<const MonoidSubset> open,
                             std::span<const MonoidSubset> closed);

/// The facts of a phase space ordered by inclusion, materialised as a lattice
/// whose element i is facts[i]. Element names are the formatted member sets.
struct FactLattice {
  std::shared_ptr<const FiniteLattice> lattice;
  std::vector<Fact> facts;

  Element element_of(const Fact& f) const;
  const Fact& fact_of(Element e) const;
};

FactLattice build_fact_lattice(const PhaseSpace& space, std::size_t bound = PhaseSpace::default_fact_bound);

}  // namespace itinerary
