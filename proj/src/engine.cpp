#include "bip/engine.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "json.hpp"

#include "bip/behavior.hpp"
#include "bip/diagram.hpp"
#include "bip/errors.hpp"
#include "bip/interactions.hpp"
#include "bip/macros.hpp"

namespace bip {

std::string to_string(Policy p) { return p == Policy::Uniform ? "uniform" : "first"; }
std::string to_string(GlueSource g) {
  return g == GlueSource::Diagram ? "diagram" : "macros";
}
std::string to_string(Terminal t) {
  switch (t) {
    case Terminal::Completed: return "completed";
    case Terminal::Deadlock: return "deadlock";
    case Terminal::EventExhausted: return "eventExhausted";
  }
  return "?";
}

namespace {

uint64_t splitmix64(uint64_t& x) {
  x += 0x9E3779B97F4A7C15ULL;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

// xoshiro256**; seeded via splitmix64 so any user seed gives a full state.
uint64_t xoshiro_next(uint64_t s[4]) {
  uint64_t result = rotl(s[1] * 5, 7) * 9;
  uint64_t t = s[1] << 17;
  s[2] ^= s[0];
  s[3] ^= s[1];
  s[1] ^= s[2];
  s[0] ^= s[3];
  s[2] ^= t;
  s[3] = rotl(s[3], 45);
  return result;
}

// Unbiased-enough fixed-point pick; stable across platforms.
size_t pick_index(uint64_t s[4], size_t n) {
  return static_cast<size_t>((static_cast<__uint128_t>(xoshiro_next(s)) * n) >> 64);
}

}  // namespace

std::string Engine::Instance::name() const {
  return type->name + "[" + std::to_string(index) + "]";
}

Engine::Engine(const Model& model, const CardinalityAssignment& cards,
               InteractionSet glue, Policy policy, uint64_t seed, EventSchedule schedule)
    : model_(model), glue_(std::move(glue)), policy_(policy),
      schedule_(std::move(schedule)) {
  auto diagnostics = check_behavior(model);
  if (has_errors(diagnostics)) {
    std::string first;
    for (const auto& d : diagnostics)
      if (d.severity == Severity::Error) {
        first = d.message;
        break;
      }
    throw EngineError("model has behavior errors: " + first);
  }

  for (const auto& comp : model.components) {
    long long n = 0;
    try {
      n = resolved_cardinality(model, comp.name, cards);
    } catch (const MissingCardinalityError& e) {
      throw EngineError(e.what());
    }
    size_t initial = 0;
    for (size_t i = 0; i < comp.lts.states.size(); ++i)
      if (comp.lts.states[i] == comp.lts.initials.front()) initial = i;
    for (long long idx = 1; idx <= n; ++idx)
      instances_.push_back(Instance{&comp, idx, initial});
  }

  for (const auto& ev : schedule_.events) {
    const ComponentType* comp = model.find_component(ev.component);
    if (!comp)
      throw EngineError("scenario references unknown component type '" + ev.component + "'");
    long long n = resolved_cardinality(model, ev.component, cards);
    if (ev.index < 1 || ev.index > n)
      throw EngineError("scenario references instance " + ev.component + "[" +
                        std::to_string(ev.index) + "] outside cardinality " +
                        std::to_string(n));
    if (!comp->has_event(ev.event))
      throw EngineError("scenario references unknown event '" + ev.event +
                        "' of component type '" + ev.component + "'");
  }

  uint64_t sm = seed;
  for (auto& word : rng_state_) word = splitmix64(sm);
}

std::vector<PortInstance> Engine::enabled_ports() const {
  std::vector<PortInstance> out;
  for (const auto& inst : instances_) {
    const std::string& state = inst.type->lts.states[inst.state];
    std::set<std::string> ports;
    for (const auto& t : inst.type->lts.transitions)
      if (t.kind == TransitionKind::Enforceable && t.source == state) ports.insert(t.label);
    for (const auto& p : ports)
      out.push_back(PortInstance{inst.type->name, inst.index, p});
  }
  std::sort(out.begin(), out.end());
  return out;
}

const Transition* Engine::find_enforceable(const Instance& inst,
                                           const std::string& port) const {
  const std::string& state = inst.type->lts.states[inst.state];
  for (const auto& t : inst.type->lts.transitions)
    if (t.kind == TransitionKind::Enforceable && t.source == state && t.label == port)
      return &t;
  return nullptr;
}

std::map<std::string, std::string> Engine::state_snapshot() const {
  std::map<std::string, std::string> out;
  for (const auto& inst : instances_)
    out[inst.name()] = inst.type->lts.states[inst.state];
  return out;
}

bool Engine::stuck() const {
  if (schedule_pos_ < schedule_.events.size()) return false;
  auto enabled = enabled_ports();
  for (const auto& a : glue_.items) {
    bool executable = std::includes(enabled.begin(), enabled.end(), a.ports.begin(),
                                    a.ports.end());
    if (executable) return false;
  }
  return true;
}

bool Engine::awaiting_events() const {
  for (const auto& inst : instances_) {
    const std::string& state = inst.type->lts.states[inst.state];
    for (const auto& t : inst.type->lts.transitions)
      if (t.kind == TransitionKind::Spontaneous && t.source == state) return true;
  }
  return false;
}

CycleRecord Engine::step() {
  CycleRecord rec;
  rec.cycle = cycle_;

  // (a) deliver scenario events due this cycle, in schedule order.
  while (schedule_pos_ < schedule_.events.size() &&
         schedule_.events[schedule_pos_].cycle <= cycle_) {
    const ScheduledEvent& ev = schedule_.events[schedule_pos_++];
    Instance* target = nullptr;
    for (auto& inst : instances_)
      if (inst.type->name == ev.component && inst.index == ev.index) target = &inst;
    const std::string& state = target->type->lts.states[target->state];
    const Transition* fired = nullptr;
    for (const auto& t : target->type->lts.transitions)
      if (t.kind == TransitionKind::Spontaneous && t.source == state && t.label == ev.event) {
        fired = &t;
        break;
      }
    if (!fired) {
      rec.warnings.push_back("event '" + ev.event + "' for " + target->name() +
                             " dropped: no enabled spontaneous transition");
      continue;
    }
    for (size_t i = 0; i < target->type->lts.states.size(); ++i)
      if (target->type->lts.states[i] == fired->target) target->state = i;
    rec.spontaneous.push_back(
        SpontaneousFiring{target->name(), ev.event, fired->source, fired->target});
  }

  // (b) enabled ports, (c) executable interactions.
  rec.enabled = enabled_ports();
  std::vector<const Interaction*> executable;
  for (const auto& a : glue_.items)
    if (std::includes(rec.enabled.begin(), rec.enabled.end(), a.ports.begin(),
                      a.ports.end()))
      executable.push_back(&a);

  // (d) pick one, (e) fire one enforceable transition per involved port.
  if (!executable.empty()) {
    size_t choice = policy_ == Policy::Uniform ? pick_index(rng_state_, executable.size())
                                               : 0;
    rec.interaction = *executable[choice];
    for (const auto& p : rec.interaction->ports) {
      Instance* inst = nullptr;
      for (auto& i : instances_)
        if (i.type->name == p.component && i.index == p.index) inst = &i;
      const Transition* t = find_enforceable(*inst, p.port);
      if (!t) {
        // Possible only when one interaction carries several ports of the
        // same instance and an earlier firing moved it away.
        rec.warnings.push_back("port " + p.str() +
                               " skipped: no enabled transition at firing time");
        continue;
      }
      for (size_t i = 0; i < inst->type->lts.states.size(); ++i)
        if (inst->type->lts.states[i] == t->target) inst->state = i;
      rec.fired.push_back(FiredTransition{inst->name(), p.port, t->source, t->target});
    }
  }

  // (f) internal transitions to quiescence, bounded per instance.
  for (auto& inst : instances_) {
    size_t steps = 0;
    const size_t bound = inst.type->lts.states.size();
    while (true) {
      const std::string& state = inst.type->lts.states[inst.state];
      const Transition* t = nullptr;
      for (const auto& tr : inst.type->lts.transitions)
        if (tr.kind == TransitionKind::Internal && tr.source == state) {
          t = &tr;
          break;
        }
      if (!t) break;
      if (steps >= bound)
        throw InternalLivelockError("instance " + inst.name() +
                                    " exceeded the internal-transition bound of " +
                                    std::to_string(bound) + " steps in one cycle");
      for (size_t i = 0; i < inst.type->lts.states.size(); ++i)
        if (inst.type->lts.states[i] == t->target) inst.state = i;
      rec.internal_steps.push_back(InternalStep{inst.name(), t->source, t->target});
      ++steps;
    }
  }

  rec.states = state_snapshot();
  ++cycle_;
  return rec;
}

std::string model_hash(const Model& model) {
  const std::string text = serialize_model(model);
  uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Trace run(const Model& model, const CardinalityAssignment& cards, uint64_t seed,
          long long max_cycles, const EventSchedule& schedule, Policy policy,
          GlueSource glue_source, size_t universe_bound) {
  CardinalityAssignment resolved = resolve_all_cardinalities(model, cards);

  InteractionSet glue;
  if (glue_source == GlueSource::Diagram) {
    glue = interactions_of_configuration(expand_unique(model, resolved));
  } else {
    glue = interactions_from_macros(encode_macros(model), model, resolved, universe_bound);
  }

  Engine engine(model, resolved, glue, policy, seed, schedule);

  Trace trace;
  trace.model_hash = model_hash(model);
  trace.cards = resolved;
  trace.seed = seed;
  trace.policy = policy;
  trace.glue = glue_source;
  trace.terminal = Terminal::Completed;

  for (long long c = 0; c < max_cycles; ++c) {
    CycleRecord rec = engine.step();
    bool idle = !rec.interaction.has_value();
    trace.records.push_back(std::move(rec));
    if (idle && engine.stuck()) {
      trace.terminal =
          engine.awaiting_events() ? Terminal::EventExhausted : Terminal::Deadlock;
      break;
    }
  }
  return trace;
}

std::string trace_to_json(const Trace& trace) {
  using nlohmann::json;
  json doc;
  doc["header"] = {
      {"model", trace.model_hash},
      {"cards", trace.cards},
      {"seed", trace.seed},
      {"policy", to_string(trace.policy)},
      {"glue", to_string(trace.glue)},
  };
  json records = json::array();
  for (const auto& rec : trace.records) {
    json r;
    r["cycle"] = rec.cycle;
    json enabled = json::array();
    for (const auto& p : rec.enabled) enabled.push_back(p.str());
    r["enabled"] = enabled;
    json spontaneous = json::array();
    for (const auto& s : rec.spontaneous)
      spontaneous.push_back({{"instance", s.instance},
                             {"event", s.event},
                             {"from", s.from},
                             {"to", s.to}});
    r["spontaneous"] = spontaneous;
    if (rec.interaction) {
      json ports = json::array();
      for (const auto& p : rec.interaction->ports) ports.push_back(p.str());
      r["interaction"] = ports;
    } else {
      r["interaction"] = nullptr;
    }
    json fired = json::array();
    for (const auto& f : rec.fired)
      fired.push_back({{"instance", f.instance},
                       {"port", f.port},
                       {"from", f.from},
                       {"to", f.to}});
    r["fired"] = fired;
    json internal = json::array();
    for (const auto& s : rec.internal_steps)
      internal.push_back({{"instance", s.instance}, {"from", s.from}, {"to", s.to}});
    r["internal"] = internal;
    r["states"] = rec.states;
    records.push_back(std::move(r));
  }
  doc["records"] = std::move(records);
  doc["terminal"] = to_string(trace.terminal);
  return doc.dump() + "\n";
}

}  // namespace bip
