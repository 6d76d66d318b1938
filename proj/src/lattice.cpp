#include "itinerary/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

#include "itinerary/error.hpp"

namespace itinerary {

namespace {

std::uint64_t next_lattice_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
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

}  // namespace

FiniteLattice verify_poset(std::vector<std::string> elements, std::span<const OrderPair> relation,
                           OrderInput input, std::optional<std::vector<std::string>> generators) {
  FiniteLattice lat;
  lat.id_ = next_lattice_id();
  lat.names_ = std::move(elements);
  const std::size_t n = lat.names_.size();
  if (n == 0) throw Error(ErrorCode::not_a_lattice, "empty element list");
  if (n > FiniteLattice::max_validated_size) {
    throw Error(ErrorCode::lattice_too_large, std::to_string(n) + " elements");
  }
  lat.index_names();

  auto resolve = [&](const std::string& name) {
    auto it = lat.index_.find(name);
    if (it == lat.index_.end()) throw Error(ErrorCode::unknown_element, "'" + name + "' in order relation");
    return it->second;
  };

  std::vector<char>& leq = lat.leq_;
  leq.assign(n * n, 0);
  for (const auto& [lo, hi] : relation) leq[resolve(lo) * n + resolve(hi)] = 1;

  if (input == OrderInput::covers) {
    for (std::size_t i = 0; i < n; ++i) leq[i * n + i] = 1;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        if (leq[i * n + k])
          for (std::size_t j = 0; j < n; ++j)
            if (leq[k * n + j]) leq[i * n + j] = 1;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      if (!leq[i * n + i]) {
        throw Error(ErrorCode::reflexivity_violation, "missing (" + lat.names_[i] + "," + lat.names_[i] + ")");
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (leq[i * n + j] && leq[j * n + i]) {
        throw Error(ErrorCode::antisymmetry_violation,
                    lat.names_[i] + " <= " + lat.names_[j] + " and " + lat.names_[j] + " <= " + lat.names_[i]);
      }
    }
  }

  if (input == OrderInput::full_relation) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (leq[i * n + k])
          for (std::size_t j = 0; j < n; ++j)
            if (leq[k * n + j] && !leq[i * n + j]) {
              throw Error(ErrorCode::transitivity_violation, lat.names_[i] + " <= " + lat.names_[k] + " <= " +
                                                                 lat.names_[j] + " but not " + lat.names_[i] +
                                                                 " <= " + lat.names_[j]);
            }
  }

  lat.compute_tables();

  if (generators) {
    std::vector<Element> gens;
    for (const auto& g : *generators) gens.push_back(lat.element(g));
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    if (!lat.generators_closure(gens)) {
      throw Error(ErrorCode::generators_incomplete, "join/meet closure of the generators misses elements");
    }
    lat.generators_ = std::move(gens);
  } else {
    lat.generators_ = lat.elements();
  }

  lat.compute_pseudocomplements();
  return lat;
}

FiniteLattice FiniteLattice::powerset(std::vector<std::string> atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  if (atoms.size() > max_powerset_atoms) {
    throw Error(ErrorCode::lattice_too_large, std::to_string(atoms.size()) + " atoms");
  }
  FiniteLattice lat;
  lat.id_ = next_lattice_id();
  const std::size_t n = std::size_t{1} << atoms.size();
  const std::uint32_t full = static_cast<std::uint32_t>(n - 1);
  lat.names_.reserve(n);
  for (std::size_t m = 0; m < n; ++m) {
    std::string name = "{";
    bool first = true;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      if (m >> a & 1U) {
        if (!first) name += ",";
        name += atoms[a];
        first = false;
      }
    }
    lat.names_.push_back(name + "}");
  }
  lat.index_names();
  lat.leq_.resize(n * n);
  lat.join_.resize(n * n);
  lat.meet_.resize(n * n);
  lat.rpc_.resize(n * n);
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = 0; b < n; ++b) {
      lat.leq_[a * n + b] = (a & b) == a;
      lat.join_[a * n + b] = a | b;
      lat.meet_[a * n + b] = a & b;
      lat.rpc_[a * n + b] = (~a & full) | b;
    }
  }
  lat.top_ = full;
  lat.bottom_ = 0;
  lat.brouwer_ = true;
  lat.generators_ = lat.elements();
  return lat;
}

void FiniteLattice::index_names() {
  index_.clear();
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], i).second) throw Error(ErrorCode::duplicate_element, "'" + names_[i] + "'");
  }
}

void FiniteLattice::compute_tables() {
  const std::size_t n = size();
  join_.assign(n * n, npos);
  meet_.assign(n * n, npos);
  std::vector<std::size_t> bounds;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      for (int dir = 0; dir < 2; ++dir) {
        // dir 0: least upper bound, dir 1: greatest lower bound
        auto below = [&](std::size_t x, std::size_t y) { return dir == 0 ? leq_[x * n + y] : leq_[y * n + x]; };
        bounds.clear();
        for (std::size_t u = 0; u < n; ++u)
          if (below(a, u) && below(b, u)) bounds.push_back(u);
        std::uint32_t best = npos;
        for (std::size_t u : bounds) {
          if (std::all_of(bounds.begin(), bounds.end(), [&](std::size_t v) { return below(u, v); })) {
            best = static_cast<std::uint32_t>(u);
            break;
          }
        }
        if (best == npos) {
          throw Error(ErrorCode::not_a_lattice, std::string(dir == 0 ? "no unique join" : "no unique meet") +
                                                    " for (" + names_[a] + "," + names_[b] + ")");
        }
        auto& table = dir == 0 ? join_ : meet_;
        table[a * n + b] = table[b * n + a] = best;
      }
    }
  }
  std::size_t top = 0;
  std::size_t bottom = 0;
  for (std::size_t i = 1; i < n; ++i) {
    top = join_[top * n + i];
    bottom = meet_[bottom * n + i];
  }
  top_ = top;
  bottom_ = bottom;
}

void FiniteLattice::compute_pseudocomplements() {
  const std::size_t n = size();
  rpc_.assign(n * n, npos);
  brouwer_ = true;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      // The set {x | a ^ x <= b} has a greatest element iff its join belongs to it.
      std::size_t acc = bottom_;
      for (std::size_t x = 0; x < n; ++x)
        if (leq_[meet_[a * n + x] * n + b]) acc = join_[acc * n + x];
      if (leq_[meet_[a * n + acc] * n + b]) {
        rpc_[a * n + b] = static_cast<std::uint32_t>(acc);
      } else {
        brouwer_ = false;
      }
    }
  }
}

std::size_t FiniteLattice::check(Element e) const {
  if (!contains(e)) {
    throw Error(ErrorCode::foreign_element, "element (lattice " + std::to_string(e.lattice) + ", index " +
                                                std::to_string(e.index) + ") is not in lattice " +
                                                std::to_string(id_));
  }
  return e.index;
}

std::vector<Element> FiniteLattice::elements() const {
  std::vector<Element> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back({id_, i});
  return out;
}

std::optional<Element> FiniteLattice::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return Element{id_, it->second};
}

Element FiniteLattice::element(std::string_view name) const {
  if (auto e = find(name)) return *e;
  throw Error(ErrorCode::unknown_element, "'" + std::string(name) + "'");
}

const std::string& FiniteLattice::name(Element e) const { return names_[check(e)]; }

bool FiniteLattice::leq(Element a, Element b) const { return leq_[check(a) * size() + check(b)] != 0; }

Element FiniteLattice::join(Element a, Element b) const { return {id_, join_[check(a) * size() + check(b)]}; }

Element FiniteLattice::meet(Element a, Element b) const { return {id_, meet_[check(a) * size() + check(b)]}; }

Element FiniteLattice::join_set(std::span<const Element> s) const {
  Element acc = bottom();
  for (Element e : s) acc = join(acc, e);
  return acc;
}

Element FiniteLattice::meet_set(std::span<const Element> s) const {
  Element acc = top();
  for (Element e : s) acc = meet(acc, e);
  return acc;
}

Element FiniteLattice::relative_pseudocomplement(Element a, Element b) const {
  const std::uint32_t r = rpc_[check(a) * size() + check(b)];
  if (r == npos) {
    throw Error(ErrorCode::not_brouwerian, "no greatest x with " + names_[a.index] + " ^ x <= " + names_[b.index]);
  }
  return {id_, r};
}

bool FiniteLattice::generators_closure(std::span<const Element> g) const {
  const std::size_t n = size();
  std::vector<char> in(n, 0);
  std::vector<std::size_t> members;
  for (Element e : g) {
    if (!in[check(e)]) {
      in[e.index] = 1;
      members.push_back(e.index);
    }
  }
  // Each newly added element is combined with every member seen so far.
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      for (std::uint32_t r : {join_[members[i] * n + members[j]], meet_[members[i] * n + members[j]]}) {
        if (!in[r]) {
          in[r] = 1;
          members.push_back(r);
        }
      }
    }
  }
  return members.size() == n;
}

std::vector<std::pair<Element, Element>> FiniteLattice::covers() const {
  const std::size_t n = size();
  std::vector<std::pair<Element, Element>> out;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || !leq_[a * n + b]) continue;
      bool direct = true;
      for (std::size_t c = 0; c < n && direct; ++c) {
        if (c != a && c != b && leq_[a * n + c] && leq_[c * n + b]) direct = false;
      }
      if (direct) out.push_back({{id_, a}, {id_, b}});
    }
  }
  return out;
}

std::vector<OrderPair> FiniteLattice::relation() const {
  std::vector<OrderPair> out;
  const std::size_t n = size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (leq_[a * n + b]) out.emplace_back(names_[a], names_[b]);
  return out;
}

std::string FiniteLattice::to_dot(std::string_view graph_name) const {
  std::ostringstream os;
  os << "digraph " << quoted(graph_name) << " {\n";
  os << "  rankdir=BT;\n";
  for (const auto& n : names_) os << "  " << quoted(n) << ";\n";
  for (const auto& [lo, hi] : covers()) os << "  " << quoted(names_[lo.index]) << " -> " << quoted(names_[hi.index]) << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace itinerary
