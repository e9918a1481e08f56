#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bip/model.hpp"

namespace bip {

struct ParseError : std::runtime_error {
  SourceSpan span;
  ParseError(const std::string& msg, SourceSpan s)
      : std::runtime_error(msg), span(std::move(s)) {}
};

// Parses the textual model language. Every named node gets a span recorded in
// Model::spans. State references inside transitions and `initial` clauses are
// not resolved here; the behavior checker reports dangling ones.
Model parse_model(const std::string& text, const std::string& filename = "<input>");

// Canonical pretty-printer; parse_model(serialize_model(m)) == m.
std::string serialize_model(const Model& model);

// ---------------------------------------------------------------------------
// Scenario files: one external event per line, "CYCLE TYPE[index] EVENT".
// ---------------------------------------------------------------------------

struct ScheduledEvent {
  long long cycle = 0;
  std::string component;
  long long index = 1;
  std::string event;

  friend bool operator==(const ScheduledEvent&, const ScheduledEvent&) = default;
};

struct EventSchedule {
  std::vector<ScheduledEvent> events;  // normalized: non-decreasing cycles

  friend bool operator==(const EventSchedule&, const EventSchedule&) = default;
};

EventSchedule load_scenario(const std::string& text,
                            const std::string& filename = "<scenario>");

// ---------------------------------------------------------------------------
// Bundled coordination patterns
// ---------------------------------------------------------------------------

std::vector<std::string> pattern_names();

// Instantiates a bundled pattern ("star", "mutex") with its parameters bound.
// Throws UnknownPatternError / MissingParameterError.
Model load_pattern(const std::string& name,
                   const std::map<std::string, long long>& params);

}  // namespace bip
