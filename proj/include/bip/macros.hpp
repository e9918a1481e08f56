#pragma once

#include <string>

#include "bip/model.hpp"

namespace bip {

struct EquivalenceReport {
  bool equal = false;
  InteractionSet only_in_diagram;
  InteractionSet only_in_macros;
};

// Type-level Require/Accept macros of a diagram. The encoding is
// cardinality-independent. Each non-dash require option carries its source
// motif and a mode: Exact for options built from all-synchron motifs, AtLeast
// for options built from trigger motifs.
Macros encode_macros(const Model& model);

// Extensional meaning of the macros over the instances of all motif-attached
// port types. An interaction is admitted when some motif covers it: every
// member's port type is an end of the motif, every pair is mutually accepted,
// every member satisfies a require option sourced from the motif (a dash is
// always satisfied), and no port type exceeds the motif's multiplicity. With
// `flat_mode` the motif scoping and multiplicity bounds are dropped; that
// variant carries no equivalence guarantee against the diagram semantics.
InteractionSet interactions_from_macros(const Macros& macros, const Model& model,
                                        const CardinalityAssignment& cards,
                                        size_t universe_bound = 20,
                                        bool flat_mode = false);

// Compares the diagram route (expand_unique + connector semantics) with the
// macro route (encode_macros + interactions_from_macros), both computed
// extensionally. Throws NotEncodableError when the diagram has no unique
// configuration.
EquivalenceReport check_equivalence(const Model& model,
                                    const CardinalityAssignment& cards,
                                    size_t universe_bound = 20);

// Deterministic glue document; parse_glue(emit_glue(m)) == m.
std::string emit_glue(const Macros& macros);
Macros parse_glue(const std::string& xml);

// Human-readable macro lines, e.g. "S.q Require C.p" / "S.q Accept C.p".
std::string macros_to_text(const Macros& macros);

}  // namespace bip
