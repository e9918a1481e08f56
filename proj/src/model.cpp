#include "bip/model.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bip/errors.hpp"

namespace bip {

std::string to_string(Severity s) {
  return s == Severity::Error ? "error" : "warning";
}

std::string to_string(const Diagnostic& d) {
  std::ostringstream os;
  os << to_string(d.severity) << ' ' << d.code << ' ';
  if (d.span.valid()) {
    os << (d.span.file.empty() ? "<input>" : d.span.file) << ':' << d.span.start_line
       << ':' << d.span.start_col;
  } else {
    os << "-";
  }
  os << ' ' << d.message;
  return os.str();
}

bool has_errors(const std::vector<Diagnostic>& ds) {
  return std::any_of(ds.begin(), ds.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

Rational::Rational(long long n, long long d) {
  if (d == 0) throw std::invalid_argument("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  long long g = std::gcd(n < 0 ? -n : n, d);
  if (g == 0) g = 1;
  num = n / g;
  den = d / g;
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

std::string to_string(TransitionKind k) {
  switch (k) {
    case TransitionKind::Enforceable: return "enforceable";
    case TransitionKind::Spontaneous: return "spontaneous";
    case TransitionKind::Internal: return "internal";
  }
  return "?";
}

Transition::Transition(std::string src, std::string tgt, TransitionKind k, std::string lbl)
    : source(std::move(src)), target(std::move(tgt)), kind(k), label(std::move(lbl)) {
  if (kind == TransitionKind::Internal && !label.empty())
    throw std::invalid_argument("internal transition must not carry a label");
  if (kind != TransitionKind::Internal && label.empty())
    throw std::invalid_argument("labeled transition requires a non-empty label");
}

std::string Cardinality::str() const {
  return value ? std::to_string(*value) : symbol;
}

static bool contains_name(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

bool ComponentType::has_port(const std::string& p) const { return contains_name(ports, p); }
bool ComponentType::has_event(const std::string& e) const { return contains_name(events, e); }
bool ComponentType::has_state(const std::string& s) const {
  return contains_name(lts.states, s);
}

std::string PortTypeRef::str() const { return component + "." + port; }

std::string to_string(PortTyping t) {
  return t == PortTyping::Synchron ? "synchron" : "trigger";
}

const MotifEnd* ConnectorMotif::find_end(const PortTypeRef& ref) const {
  for (const auto& e : ends)
    if (e.port == ref) return &e;
  return nullptr;
}

const ComponentType* Model::find_component(const std::string& name) const {
  for (const auto& c : components)
    if (c.name == name) return &c;
  return nullptr;
}

SourceSpan Model::span_of(const std::string& node) const {
  auto it = spans.find(node);
  return it == spans.end() ? SourceSpan{} : it->second;
}

std::string node_component(const std::string& name) { return "component:" + name; }
std::string node_initial(const std::string& comp, size_t idx) {
  return "component:" + comp + "/initial:" + std::to_string(idx);
}
std::string node_transition(const std::string& comp, size_t idx) {
  return "component:" + comp + "/transition:" + std::to_string(idx);
}
std::string node_motif(const std::string& id) { return "motif:" + id; }
std::string node_end(const std::string& motif, const PortTypeRef& ref) {
  return "motif:" + motif + "/end:" + ref.str();
}

std::string PortInstance::str() const {
  return component + "[" + std::to_string(index) + "]." + port;
}

Interaction Interaction::of(std::vector<PortInstance> ps) {
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return Interaction{std::move(ps)};
}

bool Interaction::contains(const PortInstance& p) const {
  return std::binary_search(ports.begin(), ports.end(), p);
}

std::string Interaction::str() const {
  std::string s;
  for (const auto& p : ports) {
    if (!s.empty()) s += ' ';
    s += p.str();
  }
  return s;
}

InteractionSet InteractionSet::of(std::vector<Interaction> is) {
  std::sort(is.begin(), is.end());
  is.erase(std::unique(is.begin(), is.end()), is.end());
  return InteractionSet{std::move(is)};
}

void InteractionSet::insert(Interaction i) {
  auto it = std::lower_bound(items.begin(), items.end(), i);
  if (it == items.end() || !(*it == i)) items.insert(it, std::move(i));
}

bool InteractionSet::contains(const Interaction& i) const {
  return std::binary_search(items.begin(), items.end(), i);
}

std::string InteractionSet::str() const {
  std::string s;
  for (const auto& i : items) {
    s += i.str();
    s += '\n';
  }
  return s;
}

ConnectorNode ConnectorNode::leaf(PortInstance p, PortTyping t) {
  ConnectorNode n;
  n.typing = t;
  n.payload = std::move(p);
  return n;
}

ConnectorNode ConnectorNode::inner(std::vector<ConnectorNode> children, PortTyping t) {
  ConnectorNode n;
  n.typing = t;
  n.payload = std::move(children);
  return n;
}

bool operator==(const ConnectorNode& a, const ConnectorNode& b) {
  return a.typing == b.typing && a.payload == b.payload;
}

std::string ConnectorNode::str() const {
  const char suffix = typing == PortTyping::Trigger ? '!' : '*';
  if (is_leaf()) return port().str() + suffix;
  std::string s;
  for (const auto& c : children()) {
    if (!s.empty()) s += ' ';
    s += c.str();
  }
  return "[" + s + "]" + suffix;
}

std::string Connector::str() const {
  // Flat connectors render their leaves without the redundant root brackets.
  std::string body;
  if (!root.is_leaf()) {
    bool flat = true;
    for (const auto& c : root.children())
      if (!c.is_leaf()) flat = false;
    if (flat) {
      for (const auto& c : root.children()) {
        if (!body.empty()) body += ' ';
        body += c.str();
      }
    } else {
      body = root.str();
    }
  } else {
    body = root.str();
  }
  return motif.empty() ? body : motif + ": " + body;
}

std::string Configuration::str() const {
  std::string s;
  for (const auto& c : connectors) {
    s += c.str();
    s += '\n';
  }
  return s;
}

std::string to_string(RequireMode m) {
  return m == RequireMode::Exact ? "exact" : "atLeast";
}

long long resolved_cardinality(const Model& model, const std::string& type,
                               const CardinalityAssignment& cards) {
  auto it = cards.find(type);
  if (it != cards.end()) return it->second;
  const ComponentType* c = model.find_component(type);
  if (c && c->cardinality.value) return *c->cardinality.value;
  throw MissingCardinalityError("cardinality of component type '" + type +
                               "' is not assigned");
}

CardinalityAssignment resolve_all_cardinalities(const Model& model,
                                                const CardinalityAssignment& cards) {
  CardinalityAssignment out;
  for (const auto& c : model.components)
    out[c.name] = resolved_cardinality(model, c.name, cards);
  return out;
}

namespace {

void diag(std::vector<Diagnostic>& out, Severity sev, std::string code,
          std::string message, const Model& m, const std::string& node) {
  out.push_back(Diagnostic{sev, std::move(code), std::move(message), m.span_of(node), node});
}

}  // namespace

std::vector<Diagnostic> validate_references(const Model& model) {
  std::vector<Diagnostic> out;

  std::set<std::string> seen_components;
  for (const auto& c : model.components) {
    const std::string node = node_component(c.name);
    if (!seen_components.insert(c.name).second)
      diag(out, Severity::Error, "DUPLICATE_NAME",
           "Component type [" + c.name + "] is declared more than once.", model, node);

    std::set<std::string> port_set;
    for (const auto& p : c.ports)
      if (!port_set.insert(p).second)
        diag(out, Severity::Error, "DUPLICATE_PORT",
             "Port [" + p + "] of component type [" + c.name +
                 "] is declared more than once.",
             model, node);
    std::set<std::string> event_set;
    for (const auto& e : c.events) {
      if (!event_set.insert(e).second)
        diag(out, Severity::Error, "DUPLICATE_EVENT",
             "Event [" + e + "] of component type [" + c.name +
                 "] is declared more than once.",
             model, node);
      if (port_set.count(e))
        diag(out, Severity::Error, "PORT_EVENT_OVERLAP",
             "Name [" + e + "] of component type [" + c.name +
                 "] is declared both as a port and as an event.",
             model, node);
    }
    std::set<std::string> state_set;
    for (const auto& s : c.lts.states)
      if (!state_set.insert(s).second)
        diag(out, Severity::Error, "DUPLICATE_STATE",
             "State [" + s + "] of component type [" + c.name +
                 "] is declared more than once.",
             model, node);

    if (c.cardinality.value && *c.cardinality.value < 1)
      diag(out, Severity::Error, "BAD_CARDINALITY",
           "Component type [" + c.name + "] has cardinality " +
               std::to_string(*c.cardinality.value) + "; it must be at least 1.",
           model, node);

    for (size_t t = 0; t < c.lts.transitions.size(); ++t) {
      const Transition& tr = c.lts.transitions[t];
      const std::string tnode = node_transition(c.name, t);
      const bool labeled = !tr.label.empty();
      if ((tr.kind == TransitionKind::Internal) == labeled)
        diag(out, Severity::Error, "BAD_TRANSITION",
             "Transition of component type [" + c.name +
                 "] has a label inconsistent with its kind.",
             model, tnode);
    }
  }

  std::set<std::string> motif_ids;
  for (const auto& m : model.motifs) {
    const std::string mnode = node_motif(m.id);
    if (!motif_ids.insert(m.id).second)
      diag(out, Severity::Error, "DUPLICATE_MOTIF",
           "Connector motif [" + m.id + "] is declared more than once.", model, mnode);
    if (m.ends.empty())
      diag(out, Severity::Error, "EMPTY_MOTIF",
           "Connector motif [" + m.id + "] has no ends.", model, mnode);

    std::set<PortTypeRef> end_refs;
    for (const auto& e : m.ends) {
      const std::string enode = node_end(m.id, e.port);
      if (!end_refs.insert(e.port).second)
        diag(out, Severity::Error, "DUPLICATE_END",
             "Connector motif [" + m.id + "] references port type [" + e.port.str() +
                 "] more than once.",
             model, enode);
      const ComponentType* c = model.find_component(e.port.component);
      if (!c || !c->has_port(e.port.port)) {
        diag(out, Severity::Error, "UNRESOLVED_REF",
             "Connector motif [" + m.id + "] references undeclared port [" +
                 e.port.str() + "].",
             model, enode);
        continue;
      }
      if (e.multiplicity < 1)
        diag(out, Severity::Error, "BAD_MULTIPLICITY",
             "Connector motif [" + m.id + "] end [" + e.port.str() +
                 "] has multiplicity " + std::to_string(e.multiplicity) +
                 "; it must be at least 1.",
             model, enode);
      if (e.degree < 0)
        diag(out, Severity::Error, "BAD_DEGREE",
             "Connector motif [" + m.id + "] end [" + e.port.str() + "] has degree " +
                 std::to_string(e.degree) + "; it must be non-negative.",
             model, enode);
      else if (e.degree == 0)
        diag(out, Severity::Warning, "ZERO_DEGREE",
             "Connector motif [" + m.id + "] end [" + e.port.str() +
                 "] has degree 0, so its instances join no connector.",
             model, enode);
    }
  }

  return out;
}

}  // namespace bip
