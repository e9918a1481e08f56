#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bip/behavior.hpp"
#include "bip/diagram.hpp"
#include "bip/dsl.hpp"
#include "bip/engine.hpp"
#include "bip/errors.hpp"
#include "bip/interactions.hpp"
#include "bip/macros.hpp"
#include "bip/model.hpp"

namespace {

using nlohmann::json;

// Exit codes are part of the interface; keep them stable.
enum ExitCode : int {
  kOk = 0,
  kDiagnosticErrors = 1,
  kParseFailure = 2,
  kNotEncodable = 3,
  kDeadlock = 4,
  kLimitExceeded = 5,
};

struct CommonOpts {
  std::string file;
  std::vector<std::string> cards;
  std::vector<std::string> params;
  std::string format = "text";
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::pair<std::string, long long> parse_assignment(const std::string& text,
                                                   const char* what) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::runtime_error(std::string("expected ") + what + " of the form NAME=N, got '" +
                             text + "'");
  try {
    size_t used = 0;
    long long value = std::stoll(text.substr(eq + 1), &used);
    if (eq + 1 + used != text.size()) throw std::invalid_argument("");
    return {text.substr(0, eq), value};
  } catch (const std::exception&) {
    throw std::runtime_error(std::string("expected an integer value in '") + text + "'");
  }
}

// --param NAME=N binds symbolic cardinalities by parameter name; --card T=N
// assigns per component type and wins on conflict.
bip::CardinalityAssignment build_cards(const bip::Model& model, const CommonOpts& opts) {
  bip::CardinalityAssignment cards;
  for (const auto& p : opts.params) {
    auto [name, value] = parse_assignment(p, "parameter");
    bool matched = false;
    for (const auto& comp : model.components)
      if (comp.cardinality.symbolic() && comp.cardinality.symbol == name) {
        cards[comp.name] = value;
        matched = true;
      }
    if (!matched)
      std::cerr << "warning: parameter '" << name
                << "' does not match any symbolic cardinality\n";
  }
  for (const auto& c : opts.cards) {
    auto [type, value] = parse_assignment(c, "cardinality");
    cards[type] = value;
  }
  return cards;
}

bip::Model load_model(const std::string& path) {
  return bip::parse_model(read_file(path), path);
}

json diagnostic_json(const bip::Diagnostic& d) {
  return json{{"severity", bip::to_string(d.severity)},
              {"code", d.code},
              {"message", d.message},
              {"file", d.span.file},
              {"line", d.span.start_line},
              {"col", d.span.start_col},
              {"node", d.node}};
}

json encodability_json(const bip::EncodabilityReport& report) {
  json ends = json::array();
  for (const auto& e : report.ends)
    ends.push_back(json{{"motif", e.motif},
                        {"component", e.port.component},
                        {"port", e.port.port},
                        {"matchingFactor", e.matching_factor.str()},
                        {"maxConnectors", e.max_connectors},
                        {"cond1", e.cond1},
                        {"integral", e.integral},
                        {"cond2", e.cond2}});
  return json{{"verdict", report.verdict}, {"ends", std::move(ends)}};
}

long long default_node_limit() {
  if (const char* env = std::getenv("BIPFORGE_LIMIT")) {
    try {
      return std::stoll(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring unparsable BIPFORGE_LIMIT='" << env << "'\n";
    }
  }
  return 1'000'000;
}

std::vector<bip::PortInstance> attached_universe(const bip::Model& model,
                                                 const bip::CardinalityAssignment& cards) {
  std::set<bip::PortTypeRef> attached;
  for (const auto& motif : model.motifs)
    for (const auto& end : motif.ends) attached.insert(end.port);
  std::vector<bip::PortInstance> universe;
  for (const auto& ref : attached) {
    long long n = bip::resolved_cardinality(model, ref.component, cards);
    for (long long i = 1; i <= n; ++i)
      universe.push_back(bip::PortInstance{ref.component, i, ref.port});
  }
  std::sort(universe.begin(), universe.end());
  return universe;
}

int cmd_check(const CommonOpts& opts) {
  bip::Model model = load_model(opts.file);
  auto diagnostics = bip::validate_references(model);
  auto behavior = bip::check_behavior(model);
  diagnostics.insert(diagnostics.end(), behavior.begin(), behavior.end());

  bool errors = bip::has_errors(diagnostics);
  std::optional<bip::EncodabilityReport> encodability;
  std::string skipped_reason;
  if (!errors) {
    try {
      auto cards = bip::resolve_all_cardinalities(model, build_cards(model, opts));
      encodability = bip::check_encodable(model, cards);
    } catch (const bip::MissingCardinalityError& e) {
      skipped_reason = e.what();
    }
  }

  if (opts.format == "json") {
    json out;
    json ds = json::array();
    for (const auto& d : diagnostics) ds.push_back(diagnostic_json(d));
    out["diagnostics"] = std::move(ds);
    if (encodability) {
      json enc = encodability_json(*encodability);
      json eds = json::array();
      for (const auto& d : encodability->diagnostics) eds.push_back(diagnostic_json(d));
      enc["diagnostics"] = std::move(eds);
      out["encodability"] = std::move(enc);
    } else {
      out["encodability"] = nullptr;
    }
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& d : diagnostics) std::cout << bip::to_string(d) << "\n";
    if (encodability) {
      for (const auto& d : encodability->diagnostics) std::cout << bip::to_string(d) << "\n";
      std::cout << (encodability->verdict ? "encodable: unique configuration exists"
                                          : "not encodable")
                << "\n";
    } else if (!errors) {
      std::cout << "encodability skipped: " << skipped_reason << "\n";
    } else {
      std::cout << "encodability skipped: model has errors\n";
    }
  }

  if (errors) return kDiagnosticErrors;
  if (encodability && !encodability->verdict) return kNotEncodable;
  return kOk;
}

int require_clean(const bip::Model& model) {
  auto diagnostics = bip::validate_references(model);
  auto behavior = bip::check_behavior(model);
  diagnostics.insert(diagnostics.end(), behavior.begin(), behavior.end());
  if (bip::has_errors(diagnostics)) {
    for (const auto& d : diagnostics)
      if (d.severity == bip::Severity::Error) std::cout << bip::to_string(d) << "\n";
    return kDiagnosticErrors;
  }
  return kOk;
}

int cmd_expand(const CommonOpts& opts) {
  bip::Model model = load_model(opts.file);
  if (int rc = require_clean(model)) return rc;
  auto cards = bip::resolve_all_cardinalities(model, build_cards(model, opts));
  bip::Configuration config = bip::expand_unique(model, cards);
  if (opts.format == "json") {
    json out = json::array();
    for (const auto& conn : config.connectors) {
      json leaves = json::array();
      for (const auto& leaf : conn.root.children())
        leaves.push_back(json{{"instance", leaf.port().str()},
                              {"typing", bip::to_string(leaf.typing)}});
      out.push_back(json{{"motif", conn.motif}, {"leaves", std::move(leaves)}});
    }
    std::cout << json{{"connectors", std::move(out)}}.dump(2) << "\n";
  } else {
    std::cout << config.str();
  }
  return kOk;
}

int cmd_enumerate(const CommonOpts& opts, long long limit) {
  bip::Model model = load_model(opts.file);
  if (int rc = require_clean(model)) return rc;
  auto cards = bip::resolve_all_cardinalities(model, build_cards(model, opts));
  auto configs = bip::enumerate_configurations(model, cards, limit);
  if (opts.format == "json") {
    json out = json::array();
    for (const auto& config : configs) {
      json one = json::array();
      for (const auto& conn : config.connectors) one.push_back(conn.str());
      out.push_back(std::move(one));
    }
    std::cout << json{{"configurations", std::move(out)}}.dump(2) << "\n";
  } else {
    for (size_t i = 0; i < configs.size(); ++i) {
      std::cout << "configuration " << (i + 1) << ":\n";
      std::cout << configs[i].str();
    }
    std::cout << "total: " << configs.size() << "\n";
  }
  return kOk;
}

int cmd_interactions(const CommonOpts& opts, const std::string& glue,
                     size_t universe_bound, const std::string& macro_mode) {
  bip::Model model = load_model(opts.file);
  if (int rc = require_clean(model)) return rc;
  auto cards = bip::resolve_all_cardinalities(model, build_cards(model, opts));
  bip::InteractionSet set;
  if (glue == "macros") {
    set = bip::interactions_from_macros(bip::encode_macros(model), model, cards,
                                        universe_bound, macro_mode == "flat");
  } else {
    set = bip::interactions_of_configuration(bip::expand_unique(model, cards));
  }
  if (opts.format == "json") {
    json out = json::array();
    for (const auto& a : set.items) {
      json ports = json::array();
      for (const auto& p : a.ports) ports.push_back(p.str());
      out.push_back(std::move(ports));
    }
    std::cout << json{{"interactions", std::move(out)}}.dump(2) << "\n";
  } else {
    std::cout << set.str();
  }
  return kOk;
}

int cmd_formula(const CommonOpts& opts, size_t universe_bound) {
  bip::Model model = load_model(opts.file);
  if (int rc = require_clean(model)) return rc;
  auto cards = bip::resolve_all_cardinalities(model, build_cards(model, opts));
  auto set = bip::interactions_of_configuration(bip::expand_unique(model, cards));
  auto universe = attached_universe(model, cards);
  if (universe.size() > universe_bound)
    throw bip::UniverseTooLargeError("universe of " + std::to_string(universe.size()) +
                                     " ports exceeds the bound of " +
                                     std::to_string(universe_bound));
  std::string text = bip::pil_to_string(bip::formula_of_interactions(set, universe));
  if (opts.format == "json")
    std::cout << json{{"formula", text}}.dump(2) << "\n";
  else
    std::cout << text << "\n";
  return kOk;
}

int cmd_encode(const CommonOpts& opts, const std::string& out_path,
               const std::string& style) {
  bip::Model model = load_model(opts.file);
  if (int rc = require_clean(model)) return rc;
  bip::Macros macros = bip::encode_macros(model);
  std::string text = style == "text" ? bip::macros_to_text(macros) : bip::emit_glue(macros);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file '" + out_path + "'");
    out << text;
  }
  return kOk;
}

int cmd_equiv(const CommonOpts& opts, size_t universe_bound) {
  bip::Model model = load_model(opts.file);
  if (int rc = require_clean(model)) return rc;
  auto cards = bip::resolve_all_cardinalities(model, build_cards(model, opts));
  bip::EquivalenceReport report = bip::check_equivalence(model, cards, universe_bound);
  if (opts.format == "json") {
    json only_d = json::array(), only_m = json::array();
    for (const auto& a : report.only_in_diagram.items) only_d.push_back(a.str());
    for (const auto& a : report.only_in_macros.items) only_m.push_back(a.str());
    std::cout << json{{"equal", report.equal},
                      {"onlyInDiagram", std::move(only_d)},
                      {"onlyInMacros", std::move(only_m)}}
                     .dump(2)
              << "\n";
  } else if (report.equal) {
    std::cout << "equal\n";
  } else {
    std::cout << "not equal\n";
    if (!report.only_in_diagram.items.empty()) {
      std::cout << "only in diagram:\n";
      for (const auto& a : report.only_in_diagram.items) std::cout << "  " << a.str() << "\n";
    }
    if (!report.only_in_macros.items.empty()) {
      std::cout << "only in macros:\n";
      for (const auto& a : report.only_in_macros.items) std::cout << "  " << a.str() << "\n";
    }
  }
  return report.equal ? kOk : kDiagnosticErrors;
}

int cmd_run(const CommonOpts& opts, uint64_t seed, long long cycles,
            const std::string& scenario_path, const std::string& policy_name,
            const std::string& glue_name, const std::string& trace_path,
            bool fail_on_deadlock, size_t universe_bound) {
  bip::Model model = load_model(opts.file);
  if (int rc = require_clean(model)) return rc;
  auto cards = build_cards(model, opts);
  bip::EventSchedule schedule;
  if (!scenario_path.empty())
    schedule = bip::load_scenario(read_file(scenario_path), scenario_path);
  bip::Policy policy = policy_name == "first" ? bip::Policy::First : bip::Policy::Uniform;
  bip::GlueSource glue =
      glue_name == "macros" ? bip::GlueSource::Macros : bip::GlueSource::Diagram;

  bip::Trace trace =
      bip::run(model, cards, seed, cycles, schedule, policy, glue, universe_bound);
  for (const auto& rec : trace.records)
    for (const auto& w : rec.warnings)
      std::cerr << "warning: cycle " << rec.cycle << ": " << w << "\n";

  std::string text = bip::trace_to_json(trace);
  if (trace_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(trace_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file '" + trace_path + "'");
    out << text;
    std::cout << "cycles: " << trace.records.size()
              << " terminal: " << bip::to_string(trace.terminal) << "\n";
  }
  if (fail_on_deadlock && trace.terminal == bip::Terminal::Deadlock) return kDeadlock;
  return kOk;
}

int cmd_pattern(const std::string& name, const std::vector<std::string>& params,
                const std::string& out_path) {
  std::map<std::string, long long> bound;
  for (const auto& p : params) {
    auto [key, value] = parse_assignment(p, "parameter");
    bound[key] = value;
  }
  bip::Model model = bip::load_pattern(name, bound);
  std::string text = bip::serialize_model(model);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file '" + out_path + "'");
    out << text;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bipforge: architecture-diagram toolchain (check, generate, execute)"};
  app.require_subcommand(1);

  CommonOpts opts;
  long long limit = default_node_limit();
  size_t universe_bound = 20;
  std::string glue = "diagram";
  std::string macro_mode = "scoped";
  std::string out_path;
  std::string encode_style = "xml";
  uint64_t seed = 0;
  long long cycles = 0;
  std::string scenario_path;
  std::string policy = "uniform";
  std::string trace_path;
  bool fail_on_deadlock = false;
  std::string pattern_name;
  std::vector<std::string> pattern_params;

  auto add_common = [&](CLI::App* cmd, bool with_format = true) {
    cmd->add_option("file", opts.file, "model file")->required();
    cmd->add_option("--card", opts.cards, "cardinality assignment TYPE=N (repeatable)");
    cmd->add_option("--param", opts.params,
                    "bind a symbolic cardinality parameter NAME=N (repeatable)");
    if (with_format)
      cmd->add_option("--format", opts.format, "output format")
          ->check(CLI::IsMember({"text", "json"}));
  };

  CLI::App* check = app.add_subcommand("check", "references, behavior and encodability");
  add_common(check);

  CLI::App* expand = app.add_subcommand("expand", "print the unique configuration");
  add_common(expand);

  CLI::App* enumerate =
      app.add_subcommand("enumerate", "enumerate all conforming configurations");
  add_common(enumerate);
  enumerate->add_option("--limit", limit, "search node budget");

  CLI::App* interactions =
      app.add_subcommand("interactions", "print the interaction set of the diagram");
  add_common(interactions);
  interactions->add_option("--glue", glue, "interaction source")
      ->check(CLI::IsMember({"diagram", "macros"}));
  interactions->add_option("--max-universe", universe_bound,
                           "port-instance bound for macro evaluation");
  interactions->add_option("--macro-mode", macro_mode, "macro evaluation scope")
      ->check(CLI::IsMember({"scoped", "flat"}));

  CLI::App* formula = app.add_subcommand("formula", "print the canonical DNF formula");
  add_common(formula);
  formula->add_option("--max-universe", universe_bound, "port-instance bound");

  CLI::App* encode = app.add_subcommand("encode", "emit coordination macros");
  add_common(encode, false);
  encode->add_option("-o,--output", out_path, "output file (default: stdout)");
  encode->add_option("--format", encode_style, "output format")
      ->check(CLI::IsMember({"xml", "text"}));

  CLI::App* equiv =
      app.add_subcommand("equiv", "compare diagram and macro interaction sets");
  add_common(equiv);
  equiv->add_option("--max-universe", universe_bound, "port-instance bound");

  CLI::App* run = app.add_subcommand("run", "execute the composed system");
  add_common(run, false);
  run->add_option("--seed", seed, "engine seed")->required();
  run->add_option("--cycles", cycles, "maximum number of cycles")->required();
  run->add_option("--scenario", scenario_path, "external-event scenario file");
  run->add_option("--policy", policy, "interaction selection policy")
      ->check(CLI::IsMember({"uniform", "first"}));
  run->add_option("--glue", glue, "interaction source")
      ->check(CLI::IsMember({"diagram", "macros"}));
  run->add_option("--trace", trace_path, "trace output file (default: stdout)");
  run->add_option("--max-universe", universe_bound,
                  "port-instance bound for macro evaluation");
  run->add_flag("--fail-on-deadlock", fail_on_deadlock,
                "exit with status 4 when the run deadlocks");

  CLI::App* pattern = app.add_subcommand("pattern", "materialize a bundled pattern");
  pattern->add_option("name", pattern_name, "pattern name (star, mutex)")->required();
  pattern->add_option("--param", pattern_params, "pattern parameter NAME=N (repeatable)");
  pattern->add_option("-o,--output", out_path, "output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(opts);
    if (expand->parsed()) return cmd_expand(opts);
    if (enumerate->parsed()) return cmd_enumerate(opts, limit);
    if (interactions->parsed())
      return cmd_interactions(opts, glue, universe_bound, macro_mode);
    if (formula->parsed()) return cmd_formula(opts, universe_bound);
    if (encode->parsed()) return cmd_encode(opts, out_path, encode_style);
    if (equiv->parsed()) return cmd_equiv(opts, universe_bound);
    if (run->parsed())
      return cmd_run(opts, seed, cycles, scenario_path, policy, glue, trace_path,
                     fail_on_deadlock, universe_bound);
    if (pattern->parsed()) return cmd_pattern(pattern_name, pattern_params, out_path);
  } catch (const bip::ParseError& e) {
    std::cout << "error PARSE " << (e.span.file.empty() ? "<input>" : e.span.file) << ":"
              << e.span.start_line << ":" << e.span.start_col << " " << e.what() << "\n";
    return kParseFailure;
  } catch (const bip::NotEncodableError& e) {
    std::cout << "error NOT_ENCODABLE - " << e.what() << "\n";
    return kNotEncodable;
  } catch (const bip::LimitExceededError& e) {
    std::cout << "error LIMIT_EXCEEDED - " << e.what() << "\n";
    return kLimitExceeded;
  } catch (const bip::UniverseTooLargeError& e) {
    std::cout << "error UNIVERSE_TOO_LARGE - " << e.what() << "\n";
    return kLimitExceeded;
  } catch (const bip::InternalLivelockError& e) {
    std::cout << "error INTERNAL_LIVELOCK - " << e.what() << "\n";
    return kLimitExceeded;
  } catch (const bip::UnknownPatternError& e) {
    std::cout << "error UNKNOWN_PATTERN - " << e.what() << "\n";
    return kDiagnosticErrors;
  } catch (const bip::MissingParameterError& e) {
    std::cout << "error MISSING_PARAMETER - " << e.what() << "\n";
    return kDiagnosticErrors;
  } catch (const bip::MissingCardinalityError& e) {
    std::cout << "error MISSING_CARDINALITY - " << e.what() << "\n";
    return kDiagnosticErrors;
  } catch (const bip::EngineError& e) {
    std::cout << "error ENGINE - " << e.what() << "\n";
    return kDiagnosticErrors;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDiagnosticErrors;
  }
  return kOk;
}
