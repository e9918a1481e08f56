#pragma once

#include <string>
#include <vector>

#include "bip/model.hpp"

namespace bip::testing {

// Component type with one state and a self-loop per port.
inline ComponentType simple_type(const std::string& name,
                                 const std::vector<std::string>& ports, long long n) {
  ComponentType c;
  c.name = name;
  c.ports = ports;
  c.cardinality.value = n;
  c.lts.states = {"s0"};
  c.lts.initials = {"s0"};
  for (const auto& p : ports)
    c.lts.transitions.push_back(Transition("s0", "s0", TransitionKind::Enforceable, p));
  return c;
}

struct EndSpec {
  long long m = 1;
  long long d = 1;
  PortTyping t = PortTyping::Synchron;
};

// T1.p only, one motif "g".
inline Model unary_diagram(long long n, const EndSpec& e) {
  Model model;
  model.components.push_back(simple_type("T1", {"p"}, n));
  ConnectorMotif motif;
  motif.id = "g";
  motif.ends.push_back(MotifEnd{PortTypeRef{"T1", "p"}, e.m, e.d, e.t});
  model.motifs.push_back(std::move(motif));
  return model;
}

// T1.p and T2.q joined by one motif "g".
inline Model binary_diagram(long long n1, const EndSpec& e1, long long n2,
                            const EndSpec& e2) {
  Model model;
  model.components.push_back(simple_type("T1", {"p"}, n1));
  model.components.push_back(simple_type("T2", {"q"}, n2));
  ConnectorMotif motif;
  motif.id = "g";
  motif.ends.push_back(MotifEnd{PortTypeRef{"T1", "p"}, e1.m, e1.d, e1.t});
  motif.ends.push_back(MotifEnd{PortTypeRef{"T2", "q"}, e2.m, e2.d, e2.t});
  model.motifs.push_back(std::move(motif));
  return model;
}

inline PortInstance pi(const std::string& type, long long idx, const std::string& port) {
  return PortInstance{type, idx, port};
}

inline Interaction ia(std::vector<PortInstance> ports) {
  return Interaction::of(std::move(ports));
}

}  // namespace bip::testing
