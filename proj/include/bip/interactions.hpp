#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bip/model.hpp"

namespace bip {

// ---------------------------------------------------------------------------
// Connector interaction semantics
// ---------------------------------------------------------------------------

// Interactions induced by a (possibly hierarchical) connector. A leaf yields
// its own singleton. An inner node whose children are all synchrons selects
// every child and merges one interaction from each; with at least one trigger
// child, every non-empty child selection containing a trigger contributes.
InteractionSet interactions_of_connector(const ConnectorNode& node);

// Union of the per-connector interaction sets.
InteractionSet interactions_of_configuration(const Configuration& config);

// ---------------------------------------------------------------------------
// Propositional interaction logic
// ---------------------------------------------------------------------------

// Formula grammar: true | atom | negation | disjunction. Conjunction is the
// derived double-negation form produced by conjoin().
class PilFormula;
using PilPtr = std::shared_ptr<const PilFormula>;

class PilFormula {
 public:
  enum class Kind { True, Atom, Not, Or };

  static PilPtr constant_true();
  static PilPtr atom(PortInstance p);
  static PilPtr negate(PilPtr f);
  static PilPtr disjoin(PilPtr a, PilPtr b);
  static PilPtr conjoin(PilPtr a, PilPtr b);

  Kind kind() const { return kind_; }
  const PortInstance& port() const { return port_; }
  const PilPtr& lhs() const { return lhs_; }
  const PilPtr& rhs() const { return rhs_; }

 private:
  Kind kind_ = Kind::True;
  PortInstance port_;
  PilPtr lhs_, rhs_;
};

// Truth of `f` under the valuation induced by `a`: an atom is true iff its
// port instance belongs to the interaction.
bool eval_pil(const PilPtr& f, const Interaction& a);

// gamma |= f: every interaction of the set satisfies f. The empty set holds
// vacuously; `vacuous` is set when provided so callers can warn.
bool satisfies(const InteractionSet& gamma, const PilPtr& f, bool* vacuous = nullptr);

// Full-monomial DNF over `universe`: one disjunct per interaction, positive
// atoms for members and negated atoms for non-members, in canonical order.
// Throws std::invalid_argument on an empty set.
PilPtr formula_of_interactions(const InteractionSet& set,
                               const std::vector<PortInstance>& universe);

// All non-empty subsets of `universe` satisfying `f`, by exhaustive
// enumeration. Throws UniverseTooLargeError beyond `bound` ports.
InteractionSet models_of_formula(const PilPtr& f,
                                 const std::vector<PortInstance>& universe,
                                 size_t bound = 20);

// Renders with "!" for negation, juxtaposition for derived conjunctions and
// " | " for disjunctions.
std::string pil_to_string(const PilPtr& f);

}  // namespace bip
