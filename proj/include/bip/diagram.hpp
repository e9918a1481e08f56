#pragma once

#include <optional>
#include <vector>

#include "bip/model.hpp"

namespace bip {

// n_p * d_p / m_p as an exact rational; the number of connectors an end
// implies once cardinalities are fixed.
Rational matching_factor(const Model& model, const MotifEnd& end,
                         const CardinalityAssignment& cards);

// Product of per-end binomial coefficients C(n_q, m_q): the number of
// distinct connectors the motif can generate. Zero when some m exceeds n.
long long max_connectors(const Model& model, const ConnectorMotif& motif,
                         const CardinalityAssignment& cards);

// Unique-configuration conditions, per end: multiplicity within cardinality,
// integral matching factor, matching factor equal to the max connector count.
EncodabilityReport check_encodable(const Model& model,
                                   const CardinalityAssignment& cards);

// The unique conforming configuration of an encodable diagram: per motif,
// every choice of an m_q-subset of instances per end, leaves typed per end.
// Throws NotEncodableError when check_encodable fails.
Configuration expand_unique(const Model& model, const CardinalityAssignment& cards);

// Brute-force oracle: all configurations conforming to the diagram, found by
// backtracking over per-motif connector subsets with exact multiplicity and
// degree. `node_limit` bounds visited search nodes (LimitExceededError);
// `max_configs`, when set, stops after that many configurations.
std::vector<Configuration> enumerate_configurations(
    const Model& model, const CardinalityAssignment& cards,
    long long node_limit = 1'000'000,
    std::optional<size_t> max_configs = std::nullopt);

// Conformance of a concrete architecture: instance counts match the
// cardinalities and the connectors partition into per-motif sets meeting the
// exact multiplicity/degree constraints.
bool conforms(const Architecture& arch, const Model& model,
              const CardinalityAssignment& cards);

}  // namespace bip
