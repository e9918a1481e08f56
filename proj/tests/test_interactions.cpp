#include <random>
#include <set>

#include "doctest.h"
#include "helpers.hpp"

#include "bip/errors.hpp"
#include "bip/interactions.hpp"

using namespace bip;
using namespace bip::testing;

namespace {

ConnectorNode flat(std::vector<std::pair<PortInstance, PortTyping>> leaves) {
  std::vector<ConnectorNode> children;
  for (auto& [p, t] : leaves) children.push_back(ConnectorNode::leaf(p, t));
  return ConnectorNode::inner(std::move(children));
}

// Reference enumeration, kept separate from the library path: walk every
// subset of children explicitly and combine one interaction per child.
using PSet = std::set<PortInstance>;

std::set<PSet> reference_interactions(const ConnectorNode& node) {
  if (node.is_leaf()) return {{node.port()}};
  const auto& children = node.children();
  std::vector<std::set<PSet>> child_sets;
  for (const auto& c : children) child_sets.push_back(reference_interactions(c));

  bool any_trigger = false;
  for (const auto& c : children) any_trigger |= c.typing == PortTyping::Trigger;

  std::set<PSet> out;
  std::vector<size_t> chosen;
  auto combine = [&](auto&& self, size_t i, PSet acc) -> void {
    if (i == chosen.size()) {
      out.insert(acc);
      return;
    }
    for (const auto& one : child_sets[chosen[i]]) {
      PSet next = acc;
      next.insert(one.begin(), one.end());
      self(self, i + 1, std::move(next));
    }
  };
  auto walk = [&](auto&& self, size_t i) -> void {
    if (i == children.size()) {
      if (chosen.empty()) return;
      if (any_trigger) {
        bool has_trigger = false;
        for (size_t c : chosen) has_trigger |= children[c].typing == PortTyping::Trigger;
        if (!has_trigger) return;
      } else if (chosen.size() != children.size()) {
        return;  // all synchrons: only the full selection
      }
      combine(combine, 0, {});
      return;
    }
    self(self, i + 1);
    chosen.push_back(i);
    self(self, i + 1);
    chosen.pop_back();
  };
  walk(walk, 0);
  return out;
}

std::set<PSet> as_sets(const InteractionSet& s) {
  std::set<PSet> out;
  for (const auto& a : s.items) out.insert(PSet(a.ports.begin(), a.ports.end()));
  return out;
}

}  // namespace

TEST_CASE("all-synchron connector yields only the maximal interaction") {
  auto conn = flat({{pi("A", 1, "s"), PortTyping::Synchron},
                    {pi("B", 1, "r"), PortTyping::Synchron},
                    {pi("B", 2, "r"), PortTyping::Synchron}});
  InteractionSet set = interactions_of_connector(conn);
  REQUIRE(set.size() == 1);
  CHECK(set.items[0] == ia({pi("A", 1, "s"), pi("B", 1, "r"), pi("B", 2, "r")}));
}

TEST_CASE("two triggers and one synchron yield the six-element set") {
  auto p = pi("T1", 1, "p");
  auto q1 = pi("T2", 1, "q");
  auto q2 = pi("T2", 2, "q");
  auto conn = flat({{p, PortTyping::Synchron},
                    {q1, PortTyping::Trigger},
                    {q2, PortTyping::Trigger}});
  InteractionSet set = interactions_of_connector(conn);
  InteractionSet expected = InteractionSet::of({
      ia({q1}), ia({q2}), ia({q1, q2}), ia({p, q1}), ia({p, q2}), ia({p, q1, q2}),
  });
  CHECK(set == expected);
}

TEST_CASE("hierarchical connector: trigger next to a synchron subconnector") {
  auto s = pi("A", 1, "s");
  auto r1 = pi("B", 1, "r");
  auto r2 = pi("B", 2, "r");
  ConnectorNode sub = ConnectorNode::inner(
      {ConnectorNode::leaf(r1, PortTyping::Synchron),
       ConnectorNode::leaf(r2, PortTyping::Synchron)},
      PortTyping::Synchron);
  ConnectorNode conn = ConnectorNode::inner(
      {ConnectorNode::leaf(s, PortTyping::Trigger), sub});
  InteractionSet set = interactions_of_connector(conn);
  InteractionSet expected = InteractionSet::of({ia({s}), ia({s, r1, r2})});
  CHECK(set == expected);
  CHECK(as_sets(set) == reference_interactions(conn));
}

TEST_CASE("single-leaf connector") {
  ConnectorNode conn = ConnectorNode::inner({ConnectorNode::leaf(pi("A", 1, "p"),
                                                                 PortTyping::Synchron)});
  InteractionSet set = interactions_of_connector(conn);
  REQUIRE(set.size() == 1);
  CHECK(set.items[0] == ia({pi("A", 1, "p")}));
}

TEST_CASE("trigger counting law on random flat connectors") {
  std::mt19937 rng(7);
  for (int round = 0; round < 200; ++round) {
    int leaves = 1 + static_cast<int>(rng() % 10);
    int triggers = static_cast<int>(rng() % (leaves + 1));
    std::vector<std::pair<PortInstance, PortTyping>> parts;
    for (int i = 0; i < leaves; ++i)
      parts.emplace_back(pi("A", i + 1, "p"),
                         i < triggers ? PortTyping::Trigger : PortTyping::Synchron);
    auto conn = flat(parts);
    InteractionSet set = interactions_of_connector(conn);
    size_t expected =
        triggers == 0 ? 1
                      : ((size_t{1} << triggers) - 1) * (size_t{1} << (leaves - triggers));
    CHECK(set.size() == expected);
    if (triggers > 0) {
      for (const auto& a : set.items) {
        bool has_trigger = false;
        for (const auto& port : a.ports) has_trigger |= port.index <= triggers;
        CHECK(has_trigger);
      }
    }
    CHECK(as_sets(set) == reference_interactions(conn));
  }
}

TEST_CASE("configuration semantics is the union over connectors") {
  // four all-synchron binary connectors
  Configuration config;
  for (long long i = 1; i <= 2; ++i)
    for (long long j = 1; j <= 2; ++j)
      config.connectors.push_back(Connector{
          "g", flat({{pi("T1", i, "p"), PortTyping::Synchron},
                     {pi("T2", j, "q"), PortTyping::Synchron}})});
  InteractionSet set = interactions_of_configuration(config);
  InteractionSet expected = InteractionSet::of({
      ia({pi("T1", 1, "p"), pi("T2", 1, "q")}),
      ia({pi("T1", 1, "p"), pi("T2", 2, "q")}),
      ia({pi("T1", 2, "p"), pi("T2", 1, "q")}),
      ia({pi("T1", 2, "p"), pi("T2", 2, "q")}),
  });
  CHECK(set == expected);

  Configuration unary;
  unary.connectors.push_back(
      Connector{"u", ConnectorNode::inner({ConnectorNode::leaf(pi("T1", 1, "p"),
                                                               PortTyping::Synchron)})});
  CHECK(interactions_of_configuration(unary).size() == 1);
}

namespace {

PilPtr star_formula() {
  auto p = PilFormula::atom(pi("C", 1, "p"));
  auto q1 = PilFormula::atom(pi("S", 1, "q"));
  auto q2 = PilFormula::atom(pi("S", 2, "q"));
  auto q3 = PilFormula::atom(pi("S", 3, "q"));
  auto monomial = [&](PilPtr a, PilPtr b, PilPtr c, PilPtr d) {
    return PilFormula::conjoin(PilFormula::conjoin(PilFormula::conjoin(a, b), c), d);
  };
  auto m1 = monomial(p, q1, PilFormula::negate(q2), PilFormula::negate(q3));
  auto m2 = monomial(p, PilFormula::negate(q1), q2, PilFormula::negate(q3));
  auto m3 = monomial(p, PilFormula::negate(q1), PilFormula::negate(q2), q3);
  return PilFormula::disjoin(PilFormula::disjoin(m1, m2), m3);
}

std::vector<PortInstance> star_universe() {
  return {pi("C", 1, "p"), pi("S", 1, "q"), pi("S", 2, "q"), pi("S", 3, "q")};
}

}  // namespace

TEST_CASE("eval_pil on the star formula") {
  auto f = star_formula();
  CHECK(eval_pil(f, ia({pi("C", 1, "p"), pi("S", 1, "q")})));
  CHECK_FALSE(eval_pil(f, ia({pi("C", 1, "p"), pi("S", 1, "q"), pi("S", 2, "q")})));
  CHECK(eval_pil(PilFormula::constant_true(), ia({pi("X", 1, "x")})));
}

TEST_CASE("satisfies quantifies over every interaction") {
  auto f = star_formula();
  InteractionSet gamma = InteractionSet::of({
      ia({pi("C", 1, "p"), pi("S", 1, "q")}),
      ia({pi("C", 1, "p"), pi("S", 2, "q")}),
      ia({pi("C", 1, "p"), pi("S", 3, "q")}),
  });
  CHECK(satisfies(gamma, f));

  InteractionSet bigger = gamma;
  bigger.insert(ia({pi("C", 1, "p"), pi("S", 1, "q"), pi("S", 2, "q")}));
  CHECK_FALSE(satisfies(bigger, f));

  bool vacuous = false;
  CHECK(satisfies(InteractionSet{}, f, &vacuous));
  CHECK(vacuous);
}

TEST_CASE("formula_of_interactions reproduces the star formula") {
  InteractionSet gamma = InteractionSet::of({
      ia({pi("C", 1, "p"), pi("S", 1, "q")}),
      ia({pi("C", 1, "p"), pi("S", 2, "q")}),
      ia({pi("C", 1, "p"), pi("S", 3, "q")}),
  });
  auto f = formula_of_interactions(gamma, star_universe());
  CHECK(pil_to_string(f) ==
        "C[1].p S[1].q !S[2].q !S[3].q | "
        "C[1].p !S[1].q S[2].q !S[3].q | "
        "C[1].p !S[1].q !S[2].q S[3].q");
  CHECK(models_of_formula(f, star_universe()) == gamma);

  CHECK_THROWS_AS(formula_of_interactions(InteractionSet{}, star_universe()),
                  std::invalid_argument);

  InteractionSet single = InteractionSet::of({ia({pi("C", 1, "p")})});
  auto g = formula_of_interactions(single, {pi("C", 1, "p")});
  CHECK(pil_to_string(g) == "C[1].p");
}

TEST_CASE("models_of_formula enumerates non-empty subsets only") {
  auto p = pi("A", 1, "p");
  auto q = pi("A", 1, "q");
  CHECK(models_of_formula(PilFormula::constant_true(), {p}) ==
        InteractionSet::of({ia({p})}));
  CHECK(models_of_formula(PilFormula::atom(p), {p, q}) ==
        InteractionSet::of({ia({p}), ia({p, q})}));
  std::vector<PortInstance> big;
  for (long long i = 1; i <= 21; ++i) big.push_back(pi("A", i, "p"));
  CHECK_THROWS_AS(models_of_formula(PilFormula::constant_true(), big),
                  UniverseTooLargeError);
}

TEST_CASE("formula/interaction-set round trip on random sets") {
  std::mt19937 rng(11);
  for (int round = 0; round < 100; ++round) {
    int n = 1 + static_cast<int>(rng() % 6);
    std::vector<PortInstance> universe;
    for (int i = 1; i <= n; ++i) universe.push_back(pi("U", i, "p"));
    size_t subsets = (size_t{1} << n) - 1;
    InteractionSet set;
    for (size_t mask = 1; mask <= subsets; ++mask) {
      if (rng() % 3 != 0) continue;
      std::vector<PortInstance> ports;
      for (int i = 0; i < n; ++i)
        if (mask & (size_t{1} << i)) ports.push_back(universe[i]);
      set.insert(ia(ports));
    }
    if (set.items.empty()) set.insert(ia({universe[0]}));
    auto f = formula_of_interactions(set, universe);
    CHECK(models_of_formula(f, universe) == set);
  }
}

TEST_CASE("derived conjunction agrees with boolean conjunction") {
  std::vector<PortInstance> universe = {pi("A", 1, "p"), pi("A", 2, "p"), pi("B", 1, "q")};
  std::vector<PilPtr> formulas = {
      PilFormula::constant_true(),
      PilFormula::atom(universe[0]),
      PilFormula::negate(PilFormula::atom(universe[1])),
      PilFormula::disjoin(PilFormula::atom(universe[1]), PilFormula::atom(universe[2])),
  };
  for (const auto& f1 : formulas)
    for (const auto& f2 : formulas) {
      auto conj = PilFormula::conjoin(f1, f2);
      for (size_t mask = 1; mask < 8; ++mask) {
        std::vector<PortInstance> ports;
        for (size_t i = 0; i < 3; ++i)
          if (mask & (size_t{1} << i)) ports.push_back(universe[i]);
        Interaction a = ia(ports);
        CHECK(eval_pil(conj, a) == (eval_pil(f1, a) && eval_pil(f2, a)));
      }
    }
}
