#include "itinerary/phase.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <unordered_map>
#include <unordered_set>

#include "itinerary/error.hpp"

namespace itinerary {

namespace {

std::uint64_t next_space_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

// Orders member sets by size, then by their sorted index sequence.
bool member_order(Mask a, Mask b) {
  const int ca = std::popcount(a);
  const int cb = std::popcount(b);
  if (ca != cb) return ca < cb;
  while (a != 0 && b != 0) {
    const int ia = std::countr_zero(a);
    const int ib = std::countr_zero(b);
    if (ia != ib) return ia < ib;
    a &= a - 1;
    b &= b - 1;
  }
  return false;
}

}  // namespace

std::size_t MonoidSubset::size() const noexcept { return static_cast<std::size_t>(std::popcount(members_)); }

PhaseSpace validate_monoid(std::vector<std::string> carrier, std::vector<std::size_t> table, std::size_t unit,
                           Mask false_set) {
  const std::size_t n = carrier.size();
  if (n == 0) throw Error(ErrorCode::not_closed, "empty carrier");
  if (n > PhaseSpace::max_carrier) {
    throw Error(ErrorCode::carrier_too_large, std::to_string(n) + " elements, limit " +
                                                  std::to_string(PhaseSpace::max_carrier));
  }
  {
    std::unordered_set<std::string> seen;
    for (const auto& c : carrier)
      if (!seen.insert(c).second) throw Error(ErrorCode::duplicate_element, "carrier element '" + c + "'");
  }
  if (table.size() != n * n) {
    throw Error(ErrorCode::not_closed,
                "product table has " + std::to_string(table.size()) + " entries, expected " + std::to_string(n * n));
  }
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i] >= n) {
      throw Error(ErrorCode::not_closed,
                  carrier[i / n] + "." + carrier[i % n] + " lies outside the carrier");
    }
  }
  if (unit >= n) throw Error(ErrorCode::unit_law_violation, "unit is not a carrier element");
  const Mask full = n == 64 ? ~Mask{0} : (Mask{1} << n) - 1;
  if ((false_set & ~full) != 0) throw Error(ErrorCode::not_closed, "false set has members outside the carrier");

  auto mul = [&](std::size_t x, std::size_t y) { return table[x * n + y]; };
  for (std::size_t x = 0; x < n; ++x) {
    if (mul(unit, x) != x || mul(x, unit) != x) {
      throw Error(ErrorCode::unit_law_violation,
                  carrier[unit] + "." + carrier[x] + " = " + carrier[mul(unit, x)] + ", " + carrier[x] + "." +
                      carrier[unit] + " = " + carrier[mul(x, unit)]);
    }
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        if (mul(mul(x, y), z) != mul(x, mul(y, z))) {
          throw Error(ErrorCode::not_associative,
                      "(" + carrier[x] + "," + carrier[y] + "," + carrier[z] + ")");
        }

  PhaseSpace space;
  space.id_ = next_space_id();
  space.names_ = std::move(carrier);
  space.table_ = std::move(table);
  space.unit_ = unit;
  space.false_ = false_set;
  return space;
}

PhaseSpace validate_monoid(std::vector<std::string> carrier, std::span<const std::string> table,
                           std::string_view unit, std::span<const std::string> false_members) {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < carrier.size(); ++i) index.emplace(carrier[i], i);
  auto lookup = [&](std::string_view name, ErrorCode code, const char* what) {
    auto it = index.find(name);
    if (it == index.end()) throw Error(code, std::string(what) + " '" + std::string(name) + "' is not in the carrier");
    return it->second;
  };
  std::vector<std::size_t> entries;
  entries.reserve(table.size());
  const std::size_t n = carrier.size();
  for (std::size_t i = 0; i < table.size(); ++i) {
    auto it = index.find(table[i]);
    if (it == index.end()) {
      std::string where = n == 0 ? "?" : (carrier[(i / n) % n] + "." + carrier[i % n]);
      throw Error(ErrorCode::not_closed, where + " = '" + table[i] + "' lies outside the carrier");
    }
    entries.push_back(it->second);
  }
  const std::size_t u = lookup(unit, ErrorCode::unit_law_violation, "unit");
  Mask bottom = 0;
  for (const auto& m : false_members) bottom |= Mask{1} << lookup(m, ErrorCode::not_closed, "false-set member");
  return validate_monoid(std::move(carrier), std::move(entries), u, bottom);
}

Mask PhaseSpace::full_mask() const noexcept {
  const std::size_t n = names_.size();
  return n == 64 ? ~Mask{0} : (Mask{1} << n) - 1;
}

void PhaseSpace::check(const MonoidSubset& x) const {
  if (x.space_id() != id_) {
    throw Error(ErrorCode::space_mismatch, "subset of space " + std::to_string(x.space_id()) +
                                               " used with space " + std::to_string(id_));
  }
}

std::size_t PhaseSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  throw Error(ErrorCode::unknown_element, "'" + std::string(name) + "' is not in the carrier");
}

MonoidSubset PhaseSpace::subset(std::span<const std::string> members) const {
  Mask m = 0;
  for (const auto& s : members) m |= Mask{1} << index_of(s);
  return {id_, m};
}

MonoidSubset PhaseSpace::subset(std::initializer_list<std::string_view> members) const {
  Mask m = 0;
  for (auto s : members) m |= Mask{1} << index_of(s);
  return {id_, m};
}

MonoidSubset PhaseSpace::from_mask(Mask m) const {
  if ((m & ~full_mask()) != 0) throw Error(ErrorCode::unknown_element, "mask has bits outside the carrier");
  return {id_, m};
}

MonoidSubset PhaseSpace::pointwise_product(const MonoidSubset& x, const MonoidSubset& y) const {
  check(x);
  check(y);
  Mask out = 0;
  for (Mask a = x.members(); a != 0; a &= a - 1) {
    const std::size_t i = static_cast<std::size_t>(std::countr_zero(a));
    for (Mask b = y.members(); b != 0; b &= b - 1) {
      out |= Mask{1} << multiply(i, static_cast<std::size_t>(std::countr_zero(b)));
    }
  }
  return {id_, out};
}

MonoidSubset PhaseSpace::linear_implication(const MonoidSubset& x, const MonoidSubset& y) const {
  check(x);
  check(y);
  Mask out = 0;
  for (std::size_t z = 0; z < names_.size(); ++z) {
    bool ok = true;
    for (Mask a = x.members(); a != 0 && ok; a &= a - 1) {
      ok = (y.members() >> multiply(static_cast<std::size_t>(std::countr_zero(a)), z)) & 1U;
    }
    if (ok) out |= Mask{1} << z;
  }
  return {id_, out};
}

MonoidSubset PhaseSpace::dual(const MonoidSubset& x) const { return linear_implication(x, false_set()); }

Fact PhaseSpace::closure(const MonoidSubset& x) const { return Fact(dual(dual(x))); }

bool PhaseSpace::is_fact(const MonoidSubset& x) const { return closure(x).subset() == x; }

Fact PhaseSpace::as_fact(const MonoidSubset& x) const {
  if (!is_fact(x)) throw Error(ErrorCode::not_a_fact, format(x) + " differs from its double dual");
  return Fact(x);
}

Fact PhaseSpace::negate(const Fact& x) const { return Fact(dual(x.subset())); }

Fact PhaseSpace::tensor(const Fact& x, const Fact& y) const {
  return closure(pointwise_product(x.subset(), y.subset()));
}

Fact PhaseSpace::par(const Fact& x, const Fact& y) const {
  return Fact(dual(pointwise_product(dual(x.subset()), dual(y.subset()))));
}

Fact PhaseSpace::with_additive(const Fact& x, const Fact& y) const {
  check(x.subset());
  check(y.subset());
  MonoidSubset meet{id_, x.members() & y.members()};
  if (!is_fact(meet)) {
    throw Error(ErrorCode::internal, "intersection " + format(meet) + " of two facts is not a fact");
  }
  return Fact(meet);
}

Fact PhaseSpace::plus_additive(const Fact& x, const Fact& y) const {
  check(x.subset());
  check(y.subset());
  return closure({id_, x.members() | y.members()});
}

Fact PhaseSpace::one() const { return Fact(dual(empty())); }
Fact PhaseSpace::zero() const { return Fact(dual(full())); }
Fact PhaseSpace::unit_fact() const { return closure({id_, Mask{1} << unit_}); }
Fact PhaseSpace::false_fact() const { return closure(false_set()); }

std::vector<Fact> PhaseSpace::enumerate_facts(std::size_t bound) const {
  const std::size_t n = names_.size();
  if (n > bound || n >= 63) {
    throw Error(ErrorCode::carrier_too_large,
                std::to_string(n) + " carrier elements exceed the enumeration bound " + std::to_string(bound));
  }
  std::vector<Mask> found;
  const Mask limit = Mask{1} << n;
  for (Mask m = 0; m < limit; ++m) found.push_back(closure({id_, m}).members());
  std::sort(found.begin(), found.end(), member_order);
  found.erase(std::unique(found.begin(), found.end()), found.end());
  std::vector<Fact> out;
  out.reserve(found.size());
  for (Mask m : found) out.push_back(Fact({id_, m}));
  return out;
}

std::string PhaseSpace::format(const MonoidSubset& x) const {
  check(x);
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!x.contains(i)) continue;
    if (!first) out += ",";
    out += names_[i];
    first = false;
  }
  return out + "}";
}

OpClPartition validate_op_cl(const PhaseSpace& space, std::span<const MonoidSubset> open,
                             std::span<const MonoidSubset> closed) {
  auto collect = [&](std::span<const MonoidSubset> in) {
    std::vector<Fact> out;
    for (const auto& s : in) {
      Fact f = space.as_fact(s);
      if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
    }
    return out;
  };
  OpClPartition p{collect(open), collect(closed)};
  auto has = [](const std::vector<Fact>& v, const Fact& f) { return std::find(v.begin(), v.end(), f) != v.end(); };
  auto fmt = [&](const Fact& f) { return space.format(f); };

  auto check_extremes = [&](const std::vector<Fact>& cls, const Fact& lo, const Fact& hi, const char* which) {
    if (!has(cls, hi)) throw Error(ErrorCode::wrong_extremes, std::string(which) + " lacks its maximum " + fmt(hi));
    if (!has(cls, lo)) throw Error(ErrorCode::wrong_extremes, std::string(which) + " lacks its minimum " + fmt(lo));
    for (const auto& f : cls) {
      if (!lo.subset_of(f) || !f.subset_of(hi)) {
        throw Error(ErrorCode::wrong_extremes,
                    std::string(which) + " member " + fmt(f) + " is outside [" + fmt(lo) + ", " + fmt(hi) + "]");
      }
    }
  };
  check_extremes(p.open_facts, space.zero(), space.unit_fact(), "Op");

  for (const auto& f : p.open_facts) {
    if (!has(p.closed_facts, space.negate(f))) {
      throw Error(ErrorCode::not_dual_classes, "dual " + fmt(space.negate(f)) + " of open fact " + fmt(f) +
                                                   " is not closed");
    }
  }
  for (const auto& g : p.closed_facts) {
    bool matched = std::any_of(p.open_facts.begin(), p.open_facts.end(),
                               [&](const Fact& f) { return space.negate(f) == g; });
    if (!matched) throw Error(ErrorCode::not_dual_classes, "closed fact " + fmt(g) + " is not the dual of an open fact");
  }

  auto check_closed = [&](const std::vector<Fact>& cls, const char* which, const char* op1, const char* op2,
                          auto f1, auto f2) {
    for (const auto& x : cls) {
      for (const auto& y : cls) {
        if (!has(cls, f1(x, y))) {
          throw Error(ErrorCode::not_closed_under_ops, std::string(which) + ": " + fmt(x) + " " + op1 + " " + fmt(y) +
                                                           " = " + fmt(f1(x, y)) + " escapes the class");
        }
        if (!has(cls, f2(x, y))) {
          throw Error(ErrorCode::not_closed_under_ops, std::string(which) + ": " + fmt(x) + " " + op2 + " " + fmt(y) +
                                                           " = " + fmt(f2(x, y)) + " escapes the class");
        }
      }
    }
  };
  check_closed(
      p.open_facts, "Op", "+", "(x)", [&](const Fact& x, const Fact& y) { return space.plus_additive(x, y); },
      [&](const Fact& x, const Fact& y) { return space.tensor(x, y); });
  check_closed(
      p.closed_facts, "Cl", "&", "par", [&](const Fact& x, const Fact& y) { return space.with_additive(x, y); },
      [&](const Fact& x, const Fact& y) { return space.par(x, y); });
  check_extremes(p.closed_facts, space.false_fact(), space.one(), "Cl");
  return p;
}

Element FactLattice::element_of(const Fact& f) const {
  for (std::size_t i = 0; i < facts.size(); ++i)
    if (facts[i] == f) return {lattice->id(), i};
  throw Error(ErrorCode::not_a_fact, "fact does not belong to this fact lattice");
}

const Fact& FactLattice::fact_of(Element e) const {
  if (!lattice->contains(e)) throw Error(ErrorCode::foreign_element, "element is not in the fact lattice");
  return facts[e.index];
}

FactLattice build_fact_lattice(const PhaseSpace& space, std::size_t bound) {
  FactLattice out;
  out.facts = space.enumerate_facts(bound);
  std::vector<std::string> names;
  names.reserve(out.facts.size());
  for (const auto& f : out.facts) names.push_back(space.format(f));
  std::vector<OrderPair> order;
  for (const auto& a : out.facts)
    for (const auto& b : out.facts)
      if (a.subset_of(b)) order.emplace_back(space.format(a), space.format(b));
  out.lattice = std::make_shared<const FiniteLattice>(verify_poset(std::move(names), order));
  return out;
}

}  // namespace itinerary
