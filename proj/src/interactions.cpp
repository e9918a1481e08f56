#include "bip/interactions.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "bip/errors.hpp"

namespace bip {

namespace {

using PortSet = std::vector<PortInstance>;  // sorted, unique

PortSet merge(const PortSet& a, const PortSet& b) {
  PortSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<PortSet> node_interactions(const ConnectorNode& node) {
  if (node.is_leaf()) return {PortSet{node.port()}};

  const auto& children = node.children();
  std::vector<std::vector<PortSet>> child_sets;
  child_sets.reserve(children.size());
  for (const auto& c : children) child_sets.push_back(node_interactions(c));

  bool any_trigger = false;
  for (const auto& c : children)
    if (c.typing == PortTyping::Trigger) any_trigger = true;

  std::set<PortSet> result;
  auto combine_selection = [&](const std::vector<size_t>& selected) {
    // One interaction from each selected child, merged.
    std::vector<PortSet> acc{PortSet{}};
    for (size_t idx : selected) {
      std::vector<PortSet> next;
      for (const auto& base : acc)
        for (const auto& one : child_sets[idx]) next.push_back(merge(base, one));
      acc = std::move(next);
    }
    for (auto& a : acc) result.insert(std::move(a));
  };

  if (!any_trigger) {
    std::vector<size_t> all(children.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    combine_selection(all);
  } else {
    const size_t n = children.size();
    for (size_t mask = 1; mask < (size_t{1} << n); ++mask) {
      bool has_trigger = false;
      std::vector<size_t> selected;
      for (size_t i = 0; i < n; ++i) {
        if (mask & (size_t{1} << i)) {
          selected.push_back(i);
          if (children[i].typing == PortTyping::Trigger) has_trigger = true;
        }
      }
      if (has_trigger) combine_selection(selected);
    }
  }

  return {result.begin(), result.end()};
}

}  // namespace

InteractionSet interactions_of_connector(const ConnectorNode& node) {
  std::vector<Interaction> items;
  for (auto& ports : node_interactions(node))
    if (!ports.empty()) items.push_back(Interaction{std::move(ports)});
  return InteractionSet::of(std::move(items));
}

InteractionSet interactions_of_configuration(const Configuration& config) {
  InteractionSet out;
  for (const auto& conn : config.connectors)
    for (auto& i : interactions_of_connector(conn.root).items) out.insert(std::move(i));
  return out;
}

PilPtr PilFormula::constant_true() {
  auto f = std::make_shared<PilFormula>();
  f->kind_ = Kind::True;
  return f;
}

PilPtr PilFormula::atom(PortInstance p) {
  auto f = std::make_shared<PilFormula>();
  f->kind_ = Kind::Atom;
  f->port_ = std::move(p);
  return f;
}

PilPtr PilFormula::negate(PilPtr inner) {
  auto f = std::make_shared<PilFormula>();
  f->kind_ = Kind::Not;
  f->lhs_ = std::move(inner);
  return f;
}

PilPtr PilFormula::disjoin(PilPtr a, PilPtr b) {
  auto f = std::make_shared<PilFormula>();
  f->kind_ = Kind::Or;
  f->lhs_ = std::move(a);
  f->rhs_ = std::move(b);
  return f;
}

PilPtr PilFormula::conjoin(PilPtr a, PilPtr b) {
  return negate(disjoin(negate(std::move(a)), negate(std::move(b))));
}

bool eval_pil(const PilPtr& f, const Interaction& a) {
  switch (f->kind()) {
    case PilFormula::Kind::True: return true;
    case PilFormula::Kind::Atom: return a.contains(f->port());
    case PilFormula::Kind::Not: return !eval_pil(f->lhs(), a);
    case PilFormula::Kind::Or: return eval_pil(f->lhs(), a) || eval_pil(f->rhs(), a);
  }
  return false;
}

bool satisfies(const InteractionSet& gamma, const PilPtr& f, bool* vacuous) {
  if (vacuous) *vacuous = gamma.items.empty();
  for (const auto& a : gamma.items)
    if (!eval_pil(f, a)) return false;
  return true;
}

PilPtr formula_of_interactions(const InteractionSet& set,
                               const std::vector<PortInstance>& universe) {
  if (set.items.empty())
    throw std::invalid_argument("cannot build a formula for an empty interaction set");
  PilPtr result;
  for (const auto& a : set.items) {
    PilPtr monomial;
    for (const auto& p : universe) {
      PilPtr literal = PilFormula::atom(p);
      if (!a.contains(p)) literal = PilFormula::negate(literal);
      monomial = monomial ? PilFormula::conjoin(monomial, literal) : literal;
    }
    if (!monomial) monomial = PilFormula::constant_true();  // empty universe
    result = result ? PilFormula::disjoin(result, monomial) : monomial;
  }
  return result;
}

InteractionSet models_of_formula(const PilPtr& f,
                                 const std::vector<PortInstance>& universe,
                                 size_t bound) {
  if (universe.size() > bound)
    throw UniverseTooLargeError("universe of " + std::to_string(universe.size()) +
                                " ports exceeds the enumeration bound of " +
                                std::to_string(bound));
  std::vector<PortInstance> sorted = universe;
  std::sort(sorted.begin(), sorted.end());
  InteractionSet out;
  const size_t n = sorted.size();
  for (size_t mask = 1; mask < (size_t{1} << n); ++mask) {
    std::vector<PortInstance> ports;
    for (size_t i = 0; i < n; ++i)
      if (mask & (size_t{1} << i)) ports.push_back(sorted[i]);
    Interaction a{std::move(ports)};
    if (eval_pil(f, a)) out.insert(std::move(a));
  }
  return out;
}

namespace {

// conjoin() produces Not(Or(Not(a), Not(b))); recover the conjuncts so the
// printer can render monomials without noise.
bool as_conjunction(const PilPtr& f, PilPtr& a, PilPtr& b) {
  if (f->kind() != PilFormula::Kind::Not) return false;
  const PilPtr& inner = f->lhs();
  if (inner->kind() != PilFormula::Kind::Or) return false;
  if (inner->lhs()->kind() != PilFormula::Kind::Not ||
      inner->rhs()->kind() != PilFormula::Kind::Not)
    return false;
  a = inner->lhs()->lhs();
  b = inner->rhs()->lhs();
  return true;
}

void flatten_conjuncts(const PilPtr& f, std::vector<PilPtr>& out) {
  PilPtr a, b;
  if (as_conjunction(f, a, b)) {
    flatten_conjuncts(a, out);
    flatten_conjuncts(b, out);
  } else {
    out.push_back(f);
  }
}

void flatten_disjuncts(const PilPtr& f, std::vector<PilPtr>& out) {
  if (f->kind() == PilFormula::Kind::Or) {
    flatten_disjuncts(f->lhs(), out);
    flatten_disjuncts(f->rhs(), out);
  } else {
    out.push_back(f);
  }
}

std::string render(const PilPtr& f, bool parenthesize_or) {
  switch (f->kind()) {
    case PilFormula::Kind::True:
      return "true";
    case PilFormula::Kind::Atom:
      return f->port().str();
    case PilFormula::Kind::Not: {
      PilPtr a, b;
      if (as_conjunction(f, a, b)) {
        std::vector<PilPtr> parts;
        flatten_conjuncts(f, parts);
        std::string s;
        for (const auto& p : parts) {
          if (!s.empty()) s += ' ';
          s += render(p, true);
        }
        return s;
      }
      const PilPtr& inner = f->lhs();
      if (inner->kind() == PilFormula::Kind::Atom || inner->kind() == PilFormula::Kind::True)
        return "!" + render(inner, true);
      return "!(" + render(inner, false) + ")";
    }
    case PilFormula::Kind::Or: {
      std::vector<PilPtr> parts;
      flatten_disjuncts(f, parts);
      std::string s;
      for (const auto& p : parts) {
        if (!s.empty()) s += " | ";
        s += render(p, true);
      }
      if (parenthesize_or) return "(" + s + ")";
      return s;
    }
  }
  return "?";
}

}  // namespace

std::string pil_to_string(const PilPtr& f) { return render(f, false); }

}  // namespace bip
