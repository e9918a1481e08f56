#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace bip {

// ---------------------------------------------------------------------------
// Source locations and diagnostics
// ---------------------------------------------------------------------------

struct SourceSpan {
  std::string file;
  int start_line = 0;
  int start_col = 0;
  int end_line = 0;
  int end_col = 0;
  bool valid() const { return start_line > 0; }
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  SourceSpan span;
  std::string node;  // path of the offending model node, e.g. "motif:star/end:T1.p"
};

std::string to_string(Severity s);
// Renders "SEVERITY CODE file:line:col message".
std::string to_string(const Diagnostic& d);
bool has_errors(const std::vector<Diagnostic>& ds);

// ---------------------------------------------------------------------------
// Exact rationals (matching factors are n*d/m without rounding)
// ---------------------------------------------------------------------------

struct Rational {
  long long num = 0;
  long long den = 1;  // normalized: den > 0, gcd(num, den) == 1

  Rational() = default;
  Rational(long long n, long long d);
  bool is_integer() const { return den == 1; }
  std::string str() const;  // "4" or "3/2"
  friend bool operator==(const Rational&, const Rational&) = default;
};

// ---------------------------------------------------------------------------
// Component behavior
// ---------------------------------------------------------------------------

enum class TransitionKind { Enforceable, Spontaneous, Internal };

std::string to_string(TransitionKind k);

struct Transition {
  std::string source;
  std::string target;
  TransitionKind kind = TransitionKind::Internal;
  std::string label;  // port name (enforceable), event name (spontaneous), empty (internal)

  Transition() = default;
  // Throws std::invalid_argument when the label does not match the kind.
  Transition(std::string source, std::string target, TransitionKind kind,
             std::string label = "");

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct Lts {
  std::vector<std::string> states;
  // Parsed `initial` declarations. A well-formed LTS has exactly one; the
  // behavior checker reports zero / several.
  std::vector<std::string> initials;
  std::vector<Transition> transitions;

  friend bool operator==(const Lts&, const Lts&) = default;
};

// Number of instances: either a literal value or a named parameter that is
// bound later through a CardinalityAssignment.
struct Cardinality {
  std::optional<long long> value;
  std::string symbol;  // non-empty iff value is unset

  bool symbolic() const { return !value.has_value(); }
  std::string str() const;
  friend bool operator==(const Cardinality&, const Cardinality&) = default;
};

struct ComponentType {
  std::string name;
  std::vector<std::string> ports;
  std::vector<std::string> events;
  Lts lts;
  Cardinality cardinality;

  bool has_port(const std::string& p) const;
  bool has_event(const std::string& e) const;
  bool has_state(const std::string& s) const;

  friend bool operator==(const ComponentType&, const ComponentType&) = default;
};

// ---------------------------------------------------------------------------
// Diagram structure
// ---------------------------------------------------------------------------

struct PortTypeRef {
  std::string component;
  std::string port;

  std::string str() const;  // "T1.p"
  friend auto operator<=>(const PortTypeRef&, const PortTypeRef&) = default;
};

enum class PortTyping { Synchron, Trigger };

std::string to_string(PortTyping t);

struct MotifEnd {
  PortTypeRef port;
  long long multiplicity = 1;  // instances of this port type per connector
  long long degree = 0;        // connectors attached to each instance
  PortTyping typing = PortTyping::Synchron;

  friend bool operator==(const MotifEnd&, const MotifEnd&) = default;
};

struct ConnectorMotif {
  std::string id;
  std::vector<MotifEnd> ends;

  const MotifEnd* find_end(const PortTypeRef& ref) const;
  friend bool operator==(const ConnectorMotif&, const ConnectorMotif&) = default;
};

// The parsed unit: component types plus the architecture diagram over them.
struct Model {
  std::vector<ComponentType> components;
  std::vector<ConnectorMotif> motifs;

  // Source spans per node path; metadata only, ignored by equality.
  std::map<std::string, SourceSpan> spans;

  const ComponentType* find_component(const std::string& name) const;
  SourceSpan span_of(const std::string& node) const;

  friend bool operator==(const Model& a, const Model& b) {
    return a.components == b.components && a.motifs == b.motifs;
  }
};

using Diagram = Model;

// Node path helpers used by the parser and the checkers.
std::string node_component(const std::string& name);
std::string node_initial(const std::string& comp, size_t idx);
std::string node_transition(const std::string& comp, size_t idx);
std::string node_motif(const std::string& id);
std::string node_end(const std::string& motif, const PortTypeRef& ref);

// ---------------------------------------------------------------------------
// Instances, connectors, interactions
// ---------------------------------------------------------------------------

struct PortInstance {
  std::string component;
  long long index = 1;  // 1-based
  std::string port;

  std::string str() const;  // "C[1].p"
  friend auto operator<=>(const PortInstance&, const PortInstance&) = default;
};

// A non-empty set of port instances; storage is sorted and duplicate-free.
struct Interaction {
  std::vector<PortInstance> ports;

  static Interaction of(std::vector<PortInstance> ps);
  bool contains(const PortInstance& p) const;
  std::string str() const;  // ports joined by single spaces
  friend auto operator<=>(const Interaction&, const Interaction&) = default;
};

struct InteractionSet {
  std::vector<Interaction> items;  // sorted, duplicate-free

  static InteractionSet of(std::vector<Interaction> is);
  void insert(Interaction i);
  bool contains(const Interaction& i) const;
  size_t size() const { return items.size(); }
  std::string str() const;  // one interaction per line
  friend bool operator==(const InteractionSet&, const InteractionSet&) = default;
};

// Hierarchical connector node: a typed leaf or a typed list of children.
struct ConnectorNode {
  PortTyping typing = PortTyping::Synchron;
  std::variant<PortInstance, std::vector<ConnectorNode>> payload;

  static ConnectorNode leaf(PortInstance p, PortTyping t);
  static ConnectorNode inner(std::vector<ConnectorNode> children,
                             PortTyping t = PortTyping::Synchron);
  bool is_leaf() const { return std::holds_alternative<PortInstance>(payload); }
  const PortInstance& port() const { return std::get<PortInstance>(payload); }
  const std::vector<ConnectorNode>& children() const {
    return std::get<std::vector<ConnectorNode>>(payload);
  }
  std::string str() const;  // "C[1].p*" / "S[1].q!" / "[ ... ]*"

  friend bool operator==(const ConnectorNode& a, const ConnectorNode& b);
};

struct Connector {
  std::string motif;  // provenance; empty for hand-built connectors
  ConnectorNode root;

  std::string str() const;  // "star: C[1].p* S[1].q*"
  friend bool operator==(const Connector&, const Connector&) = default;
};

struct Configuration {
  std::vector<Connector> connectors;

  std::string str() const;  // one connector per line
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

// Components are (type name, instance index) pairs; the set B of the
// architecture definition.
struct Architecture {
  std::vector<std::pair<std::string, long long>> components;
  Configuration configuration;
};

// ---------------------------------------------------------------------------
// Require / Accept macros
// ---------------------------------------------------------------------------

enum class RequireMode { Exact, AtLeast };

std::string to_string(RequireMode m);

struct RequireOption {
  std::string motif;                                     // source motif id
  RequireMode mode = RequireMode::Exact;
  std::vector<std::pair<PortTypeRef, long long>> counts;  // sorted by ref, counts >= 1

  friend auto operator<=>(const RequireOption&, const RequireOption&) = default;
};

struct RequireSpec {
  bool dash = false;  // "no requirement" option present
  std::vector<RequireOption> options;  // sorted, duplicate-free

  friend bool operator==(const RequireSpec&, const RequireSpec&) = default;
};

struct AcceptSpec {
  bool dash = false;  // "must not synchronize with any other port" marker
  std::set<PortTypeRef> types;

  friend bool operator==(const AcceptSpec&, const AcceptSpec&) = default;
};

struct Macros {
  std::map<PortTypeRef, RequireSpec> require;
  std::map<PortTypeRef, AcceptSpec> accept;

  friend bool operator==(const Macros&, const Macros&) = default;
};

// ---------------------------------------------------------------------------
// Encodability report
// ---------------------------------------------------------------------------

struct EndCheck {
  std::string motif;
  PortTypeRef port;
  Rational matching_factor;
  long long max_connectors = 0;
  bool cond1 = false;     // multiplicity <= cardinality
  bool integral = false;  // matching factor is an integer
  bool cond2 = false;     // matching factor == max connectors
  bool ok() const { return cond1 && integral && cond2; }
};

struct EncodabilityReport {
  std::vector<EndCheck> ends;  // motif declaration order, then end order
  bool verdict = false;
  std::vector<Diagnostic> diagnostics;
};

using CardinalityAssignment = std::map<std::string, long long>;

// Effective instance count for `type`: explicit assignment wins, otherwise the
// declared literal value. Throws MissingCardinalityError when neither exists.
long long resolved_cardinality(const Model& model, const std::string& type,
                               const CardinalityAssignment& cards);

// Assignment extended with every declared literal value; throws when a
// symbolic cardinality stays unbound.
CardinalityAssignment resolve_all_cardinalities(const Model& model,
                                                const CardinalityAssignment& cards);

// Referential integrity of an assembled model: duplicate names, port/event
// overlap, cardinality legality, motif end resolution. Empty result means the
// model is well-formed at the naming level.
std::vector<Diagnostic> validate_references(const Model& model);

}  // namespace bip
