#include "bip/behavior.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace bip {

namespace {

std::string label_of(const Transition& t) {
  return t.label.empty() ? "internal" : t.label;
}

}  // namespace

std::vector<Diagnostic> check_behavior(const Model& model) {
  std::vector<Diagnostic> out;
  auto add = [&](Severity sev, std::string code, std::string msg,
                 const std::string& node) {
    out.push_back(Diagnostic{sev, std::move(code), std::move(msg), model.span_of(node),
                             node});
  };

  for (const auto& c : model.components) {
    const std::string cnode = node_component(c.name);

    bool initial_ok = false;
    if (c.lts.initials.empty()) {
      add(Severity::Error, "NO_INITIAL",
          "Component type [" + c.name +
              "] does not have an initial state. Please define an initial state.",
          cnode);
    } else if (c.lts.initials.size() > 1) {
      add(Severity::Error, "MULTIPLE_INITIAL",
          "Component type [" + c.name +
              "] has more than one initial state. Please define exactly one initial state.",
          node_initial(c.name, 1));
    } else if (!c.has_state(c.lts.initials.front())) {
      add(Severity::Error, "NO_INITIAL",
          "Component type [" + c.name +
              "] does not have an initial state. Please define an initial state.",
          node_initial(c.name, 0));
    } else {
      initial_ok = true;
    }

    bool all_connected = true;
    for (size_t i = 0; i < c.lts.transitions.size(); ++i) {
      const Transition& t = c.lts.transitions[i];
      const std::string tnode = node_transition(c.name, i);
      switch (t.kind) {
        case TransitionKind::Enforceable:
          if (!c.has_port(t.label))
            add(Severity::Error, "UNDECLARED_LABEL",
                "Transition [" + t.label +
                    "] is labeled with an undeclared port. Please declare it.",
                tnode);
          break;
        case TransitionKind::Spontaneous:
          if (!c.has_event(t.label))
            add(Severity::Error, "UNDECLARED_LABEL",
                "Transition [" + t.label +
                    "] is labeled with an undeclared event. Please declare it.",
                tnode);
          break;
        case TransitionKind::Internal:
          break;
      }
      if (!c.has_state(t.source)) {
        add(Severity::Error, "DANGLING_SRC",
            "Transition [" + label_of(t) +
                "] with no source encountered. Please connect or remove it.",
            tnode);
        all_connected = false;
      }
      if (!c.has_state(t.target)) {
        add(Severity::Error, "DANGLING_DEST",
            "Transition [" + label_of(t) +
                "] with no destination encountered. Please connect or remove it.",
            tnode);
        all_connected = false;
      }
    }

    if (initial_ok && all_connected) {
      std::set<std::string> reached{c.lts.initials.front()};
      std::queue<std::string> frontier;
      frontier.push(c.lts.initials.front());
      while (!frontier.empty()) {
        std::string s = frontier.front();
        frontier.pop();
        for (const auto& t : c.lts.transitions)
          if (t.source == s && reached.insert(t.target).second) frontier.push(t.target);
      }
      for (const auto& s : c.lts.states)
        if (!reached.count(s))
          add(Severity::Warning, "UNREACHABLE_STATE",
              "State [" + s + "] of component type [" + c.name +
                  "] is unreachable from the initial state.",
              cnode);
    }

    std::map<std::pair<std::string, std::string>, size_t> seen_port_edges;
    for (size_t i = 0; i < c.lts.transitions.size(); ++i) {
      const Transition& t = c.lts.transitions[i];
      if (t.kind != TransitionKind::Enforceable) continue;
      auto key = std::make_pair(t.source, t.label);
      auto [it, inserted] = seen_port_edges.emplace(key, i);
      if (!inserted && it->second != SIZE_MAX) {
        add(Severity::Warning, "NONDET_PORT",
            "Component type [" + c.name + "] has multiple enforceable transitions from state [" +
                t.source + "] on port [" + t.label + "].",
            node_transition(c.name, i));
        it->second = SIZE_MAX;  // one warning per (state, port) pair
      }
    }
  }

  return out;
}

}  // namespace bip
