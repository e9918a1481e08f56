#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bip/dsl.hpp"
#include "bip/model.hpp"

namespace bip {

enum class Policy { Uniform, First };
enum class GlueSource { Diagram, Macros };
enum class Terminal { Completed, Deadlock, EventExhausted };

std::string to_string(Policy p);
std::string to_string(GlueSource g);
std::string to_string(Terminal t);

struct SpontaneousFiring {
  std::string instance;  // "Route[2]"
  std::string event;
  std::string from;
  std::string to;
};

struct FiredTransition {
  std::string instance;
  std::string port;
  std::string from;
  std::string to;
};

struct InternalStep {
  std::string instance;
  std::string from;
  std::string to;
};

struct CycleRecord {
  long long cycle = 0;
  std::vector<PortInstance> enabled;
  std::vector<SpontaneousFiring> spontaneous;
  std::optional<Interaction> interaction;  // nullopt: no executable interaction
  std::vector<FiredTransition> fired;
  std::vector<InternalStep> internal_steps;
  std::map<std::string, std::string> states;  // instance -> state after the cycle
  std::vector<std::string> warnings;          // e.g. dropped scenario events
};

struct Trace {
  std::string model_hash;
  CardinalityAssignment cards;
  uint64_t seed = 0;
  Policy policy = Policy::Uniform;
  GlueSource glue = GlueSource::Diagram;
  std::vector<CycleRecord> records;
  Terminal terminal = Terminal::Completed;
};

// One system instance: every component at its initial state, cycle 0.
// The engine steps through the three-phase cycle: deliver due scenario
// events, collect enabled ports, pick one executable glue interaction, fire
// the involved transitions, then run internal transitions to quiescence.
class Engine {
 public:
  // Throws EngineError when the model has behavior errors, a cardinality is
  // unbound, or the schedule references unknown instances/events.
  Engine(const Model& model, const CardinalityAssignment& cards,
         InteractionSet glue, Policy policy, uint64_t seed,
         EventSchedule schedule = {});

  CycleRecord step();

  // True when no interaction can execute now and no scheduled event remains.
  bool stuck() const;
  // True when some instance could still take a spontaneous transition; used
  // to tell an event-starved stop from a hard deadlock.
  bool awaiting_events() const;

  long long cycle() const { return cycle_; }
  std::map<std::string, std::string> state_snapshot() const;

 private:
  struct Instance {
    const ComponentType* type;
    long long index;
    size_t state;  // index into type->lts.states
    std::string name() const;
  };

  std::vector<PortInstance> enabled_ports() const;
  const Transition* find_enforceable(const Instance& inst, const std::string& port) const;

  const Model& model_;
  InteractionSet glue_;
  Policy policy_;
  EventSchedule schedule_;
  size_t schedule_pos_ = 0;
  long long cycle_ = 0;
  std::vector<Instance> instances_;
  uint64_t rng_state_[4];
};

// FNV-1a hash of the canonical model text; pins the trace to its model.
std::string model_hash(const Model& model);

// Runs the cyclic protocol until no interaction is executable and the event
// supply is exhausted, or until max_cycles. glue = Diagram derives the
// interaction set from the unique configuration (NotEncodableError when the
// conditions fail); glue = Macros evaluates the encoded macros.
Trace run(const Model& model, const CardinalityAssignment& cards, uint64_t seed,
          long long max_cycles, const EventSchedule& schedule = {},
          Policy policy = Policy::Uniform, GlueSource glue = GlueSource::Diagram,
          size_t universe_bound = 20);

// Single JSON document, stable field names and ordering; ends with a newline.
std::string trace_to_json(const Trace& trace);

}  // namespace bip
