#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "json.hpp"

#include "bip/behavior.hpp"
#include "bip/diagram.hpp"
#include "bip/dsl.hpp"
#include "bip/engine.hpp"
#include "bip/errors.hpp"
#include "bip/interactions.hpp"
#include "bip/macros.hpp"
#include "bip/model.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

py::object to_py(const json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

bip::CardinalityAssignment to_cards(const py::dict& d) {
  bip::CardinalityAssignment cards;
  for (auto item : d)
    cards[py::cast<std::string>(item.first)] = py::cast<long long>(item.second);
  return cards;
}

json diagnostics_json(const std::vector<bip::Diagnostic>& ds) {
  json out = json::array();
  for (const auto& d : ds)
    out.push_back({{"severity", bip::to_string(d.severity)},
                   {"code", d.code},
                   {"message", d.message},
                   {"file", d.span.file},
                   {"line", d.span.start_line},
                   {"col", d.span.start_col},
                   {"node", d.node}});
  return out;
}

std::vector<std::string> config_lines(const bip::Configuration& config) {
  std::vector<std::string> lines;
  for (const auto& conn : config.connectors) lines.push_back(conn.str());
  return lines;
}

std::vector<std::vector<std::string>> set_lists(const bip::InteractionSet& set) {
  std::vector<std::vector<std::string>> out;
  for (const auto& a : set.items) {
    std::vector<std::string> one;
    for (const auto& p : a.ports) one.push_back(p.str());
    out.push_back(std::move(one));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Architecture-diagram toolchain: parse, check, expand, encode, execute";

  py::class_<bip::Model>(m, "Model")
      .def("__eq__", [](const bip::Model& a, const bip::Model& b) { return a == b; })
      .def("__repr__", [](const bip::Model& model) {
        return "<Model: " + std::to_string(model.components.size()) + " component types, " +
               std::to_string(model.motifs.size()) + " motifs>";
      });

  m.def("parse_model",
        [](const std::string& text, const std::string& filename) {
          return bip::parse_model(text, filename);
        },
        py::arg("text"), py::arg("filename") = "<input>");

  m.def("serialize_model", &bip::serialize_model, py::arg("model"));

  m.def("load_pattern",
        [](const std::string& name, const py::dict& params) {
          std::map<std::string, long long> bound;
          for (auto item : params)
            bound[py::cast<std::string>(item.first)] = py::cast<long long>(item.second);
          return bip::load_pattern(name, bound);
        },
        py::arg("name"), py::arg("params"));

  m.def("pattern_names", &bip::pattern_names);

  m.def("validate_references",
        [](const bip::Model& model) { return to_py(diagnostics_json(bip::validate_references(model))); },
        py::arg("model"));

  m.def("check_behavior",
        [](const bip::Model& model) { return to_py(diagnostics_json(bip::check_behavior(model))); },
        py::arg("model"));

  m.def("check_encodable",
        [](const bip::Model& model, const py::dict& cards) {
          auto resolved = bip::resolve_all_cardinalities(model, to_cards(cards));
          auto report = bip::check_encodable(model, resolved);
          json ends = json::array();
          for (const auto& e : report.ends)
            ends.push_back({{"motif", e.motif},
                            {"component", e.port.component},
                            {"port", e.port.port},
                            {"matchingFactor", e.matching_factor.str()},
                            {"maxConnectors", e.max_connectors},
                            {"cond1", e.cond1},
                            {"integral", e.integral},
                            {"cond2", e.cond2}});
          return to_py(json{{"verdict", report.verdict}, {"ends", std::move(ends)}});
        },
        py::arg("model"), py::arg("cards"));

  m.def("expand",
        [](const bip::Model& model, const py::dict& cards) {
          auto resolved = bip::resolve_all_cardinalities(model, to_cards(cards));
          return config_lines(bip::expand_unique(model, resolved));
        },
        py::arg("model"), py::arg("cards"));

  m.def("enumerate_configurations",
        [](const bip::Model& model, const py::dict& cards, long long limit,
           std::optional<size_t> max_configs) {
          auto resolved = bip::resolve_all_cardinalities(model, to_cards(cards));
          std::vector<std::vector<std::string>> out;
          for (const auto& config :
               bip::enumerate_configurations(model, resolved, limit, max_configs))
            out.push_back(config_lines(config));
          return out;
        },
        py::arg("model"), py::arg("cards"), py::arg("limit") = 1'000'000,
        py::arg("max_configs") = std::nullopt);

  m.def("interactions",
        [](const bip::Model& model, const py::dict& cards, const std::string& glue,
           size_t max_universe) {
          auto resolved = bip::resolve_all_cardinalities(model, to_cards(cards));
          bip::InteractionSet set;
          if (glue == "macros")
            set = bip::interactions_from_macros(bip::encode_macros(model), model, resolved,
                                                max_universe);
          else
            set = bip::interactions_of_configuration(bip::expand_unique(model, resolved));
          return set_lists(set);
        },
        py::arg("model"), py::arg("cards"), py::arg("glue") = "diagram",
        py::arg("max_universe") = 20);

  m.def("encode_glue",
        [](const bip::Model& model) { return bip::emit_glue(bip::encode_macros(model)); },
        py::arg("model"));

  m.def("macros_text",
        [](const bip::Model& model) { return bip::macros_to_text(bip::encode_macros(model)); },
        py::arg("model"));

  m.def("check_equivalence",
        [](const bip::Model& model, const py::dict& cards, size_t max_universe) {
          auto resolved = bip::resolve_all_cardinalities(model, to_cards(cards));
          auto report = bip::check_equivalence(model, resolved, max_universe);
          json out{{"equal", report.equal}};
          json only_d = json::array(), only_m = json::array();
          for (const auto& a : report.only_in_diagram.items) only_d.push_back(a.str());
          for (const auto& a : report.only_in_macros.items) only_m.push_back(a.str());
          out["onlyInDiagram"] = std::move(only_d);
          out["onlyInMacros"] = std::move(only_m);
          return to_py(out);
        },
        py::arg("model"), py::arg("cards"), py::arg("max_universe") = 20);

  m.def("formula",
        [](const bip::Model& model, const py::dict& cards) {
          auto resolved = bip::resolve_all_cardinalities(model, to_cards(cards));
          auto set = bip::interactions_of_configuration(bip::expand_unique(model, resolved));
          std::set<bip::PortTypeRef> attached;
          for (const auto& motif : model.motifs)
            for (const auto& end : motif.ends) attached.insert(end.port);
          std::vector<bip::PortInstance> universe;
          for (const auto& ref : attached) {
            long long n = bip::resolved_cardinality(model, ref.component, resolved);
            for (long long i = 1; i <= n; ++i)
              universe.push_back(bip::PortInstance{ref.component, i, ref.port});
          }
          std::sort(universe.begin(), universe.end());
          return bip::pil_to_string(bip::formula_of_interactions(set, universe));
        },
        py::arg("model"), py::arg("cards"));

  m.def("run",
        [](const bip::Model& model, const py::dict& cards, uint64_t seed, long long cycles,
           const std::string& policy, const std::string& glue,
           const std::string& scenario_text, size_t max_universe) {
          bip::EventSchedule schedule;
          if (!scenario_text.empty()) schedule = bip::load_scenario(scenario_text);
          bip::Trace trace = bip::run(
              model, to_cards(cards), seed, cycles, schedule,
              policy == "first" ? bip::Policy::First : bip::Policy::Uniform,
              glue == "macros" ? bip::GlueSource::Macros : bip::GlueSource::Diagram,
              max_universe);
          return bip::trace_to_json(trace);
        },
        py::arg("model"), py::arg("cards"), py::arg("seed"), py::arg("cycles"),
        py::arg("policy") = "uniform", py::arg("glue") = "diagram",
        py::arg("scenario") = "", py::arg("max_universe") = 20);

  auto translate = [](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const bip::ParseError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const bip::NotEncodableError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const bip::UnknownPatternError& e) {
      PyErr_SetString(PyExc_KeyError, e.what());
    } catch (const bip::MissingParameterError& e) {
      PyErr_SetString(PyExc_KeyError, e.what());
    } catch (const bip::MissingCardinalityError& e) {
      PyErr_SetString(PyExc_KeyError, e.what());
    }
  };
  py::register_exception_translator(translate);
}
