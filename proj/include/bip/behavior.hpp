#pragma once

#include <vector>

#include "bip/model.hpp"

namespace bip {

// Checks each component type's LTS: exactly one initial state, connected
// transitions, declared labels. Errors use fixed message templates; state
// reachability and port determinism are reported as warnings. The result
// order is stable: component declaration order, then transition order.
std::vector<Diagnostic> check_behavior(const Model& model);

}  // namespace bip
