#include "bip/macros.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "bip/diagram.hpp"
#include "bip/errors.hpp"
#include "bip/interactions.hpp"

namespace bip {

Macros encode_macros(const Model& model) {
  Macros macros;
  for (const auto& comp : model.components) {
    for (const auto& port : comp.ports) {
      PortTypeRef self{comp.name, port};
      RequireSpec& require = macros.require[self];
      AcceptSpec& accept = macros.accept[self];

      for (const auto& motif : model.motifs) {
        const MotifEnd* end = motif.find_end(self);
        if (!end) continue;

        // Accept: all end types when this end joins with multiplicity > 1,
        // the other end types otherwise. A lone end of multiplicity 1 leaves
        // the set empty, which is the dash ("no other port") case.
        if (end->multiplicity > 1) {
          for (const auto& e : motif.ends) accept.types.insert(e.port);
        } else {
          for (const auto& e : motif.ends)
            if (!(e.port == self)) accept.types.insert(e.port);
          if (motif.ends.size() == 1) accept.dash = true;
        }

        // Require.
        bool any_trigger = false;
        for (const auto& e : motif.ends)
          if (e.typing == PortTyping::Trigger) any_trigger = true;

        if (end->typing == PortTyping::Trigger) {
          require.dash = true;
        } else if (any_trigger) {
          // One option per trigger end.
          for (const auto& e : motif.ends) {
            if (e.typing != PortTyping::Trigger) continue;
            RequireOption opt;
            opt.motif = motif.id;
            opt.mode = RequireMode::AtLeast;
            opt.counts.emplace_back(e.port, 1);
            require.options.push_back(std::move(opt));
          }
        } else {
          // One option: every other end with its multiplicity, plus this end
          // multiplicity - 1 times. An empty option is the dash.
          RequireOption opt;
          opt.motif = motif.id;
          opt.mode = RequireMode::Exact;
          for (const auto& e : motif.ends)
            if (!(e.port == self)) opt.counts.emplace_back(e.port, e.multiplicity);
          if (end->multiplicity > 1) opt.counts.emplace_back(self, end->multiplicity - 1);
          if (opt.counts.empty()) {
            require.dash = true;
          } else {
            std::sort(opt.counts.begin(), opt.counts.end());
            require.options.push_back(std::move(opt));
          }
        }
      }

      std::sort(require.options.begin(), require.options.end());
      require.options.erase(std::unique(require.options.begin(), require.options.end()),
                            require.options.end());
    }
  }
  return macros;
}

namespace {

std::map<PortTypeRef, long long> type_counts(const Interaction& a,
                                             const PortInstance* except) {
  std::map<PortTypeRef, long long> counts;
  for (const auto& p : a.ports) {
    if (except && p == *except) continue;
    ++counts[PortTypeRef{p.component, p.port}];
  }
  return counts;
}

bool option_satisfied(const RequireOption& opt, const PortInstance& self,
                      const std::map<PortTypeRef, long long>& companions) {
  const PortTypeRef self_type{self.component, self.port};
  if (opt.mode == RequireMode::AtLeast) {
    for (const auto& [ref, c] : opt.counts) {
      auto it = companions.find(ref);
      if ((it == companions.end() ? 0 : it->second) < c) return false;
    }
    return true;
  }
  // Exact: listed types match exactly; unlisted types may not appear, except
  // the member's own type.
  for (const auto& [ref, c] : opt.counts) {
    auto it = companions.find(ref);
    if ((it == companions.end() ? 0 : it->second) != c) return false;
  }
  for (const auto& [ref, c] : companions) {
    if (c == 0) continue;
    bool listed = std::any_of(opt.counts.begin(), opt.counts.end(),
                              [&](const auto& e) { return e.first == ref; });
    if (!listed && !(ref == self_type)) return false;
  }
  return true;
}

bool admitted_by_motif(const Interaction& a, const ConnectorMotif& motif,
                       const Macros& macros) {
  // Every member's type is an end of the motif, within its multiplicity.
  auto counts = type_counts(a, nullptr);
  for (const auto& [ref, c] : counts) {
    const MotifEnd* end = motif.find_end(ref);
    if (!end || c > end->multiplicity) return false;
  }
  for (const auto& p : a.ports) {
    const PortTypeRef type{p.component, p.port};
    // Mutual acceptance.
    auto acc = macros.accept.find(type);
    for (const auto& q : a.ports) {
      if (q == p) continue;
      PortTypeRef qtype{q.component, q.port};
      if (acc == macros.accept.end() || !acc->second.types.count(qtype)) return false;
    }
    // Some require option sourced from this motif (a dash always works).
    auto req = macros.require.find(type);
    if (req == macros.require.end()) return false;
    if (req->second.dash) continue;
    auto companions = type_counts(a, &p);
    bool ok = false;
    for (const auto& opt : req->second.options)
      if (opt.motif == motif.id && option_satisfied(opt, p, companions)) ok = true;
    if (!ok) return false;
  }
  return true;
}

bool admitted_flat(const Interaction& a, const Macros& macros) {
  for (const auto& p : a.ports) {
    const PortTypeRef type{p.component, p.port};
    auto acc = macros.accept.find(type);
    for (const auto& q : a.ports) {
      if (q == p) continue;
      PortTypeRef qtype{q.component, q.port};
      if (acc == macros.accept.end() || !acc->second.types.count(qtype)) return false;
    }
    auto req = macros.require.find(type);
    if (req == macros.require.end()) return false;
    if (req->second.dash) continue;
    auto companions = type_counts(a, &p);
    bool ok = false;
    for (const auto& opt : req->second.options)
      if (option_satisfied(opt, p, companions)) ok = true;
    if (!ok) return false;
  }
  return true;
}

}  // namespace

InteractionSet interactions_from_macros(const Macros& macros, const Model& model,
                                        const CardinalityAssignment& cards,
                                        size_t universe_bound, bool flat_mode) {
  // Universe: instances of port types attached to some motif.
  std::set<PortTypeRef> attached;
  for (const auto& motif : model.motifs)
    for (const auto& end : motif.ends) attached.insert(end.port);
  std::vector<PortInstance> universe;
  for (const auto& ref : attached) {
    long long n = resolved_cardinality(model, ref.component, cards);
    for (long long i = 1; i <= n; ++i)
      universe.push_back(PortInstance{ref.component, i, ref.port});
  }
  std::sort(universe.begin(), universe.end());
  if (universe.size() > universe_bound)
    throw UniverseTooLargeError("universe of " + std::to_string(universe.size()) +
                                " port instances exceeds the enumeration bound of " +
                                std::to_string(universe_bound));

  InteractionSet out;
  const size_t n = universe.size();
  for (size_t mask = 1; mask < (size_t{1} << n); ++mask) {
    std::vector<PortInstance> ports;
    for (size_t i = 0; i < n; ++i)
      if (mask & (size_t{1} << i)) ports.push_back(universe[i]);
    Interaction a{std::move(ports)};
    bool admitted = false;
    if (flat_mode) {
      admitted = admitted_flat(a, macros);
    } else {
      for (const auto& motif : model.motifs)
        if (admitted_by_motif(a, motif, macros)) {
          admitted = true;
          break;
        }
    }
    if (admitted) out.insert(std::move(a));
  }
  return out;
}

EquivalenceReport check_equivalence(const Model& model,
                                    const CardinalityAssignment& cards,
                                    size_t universe_bound) {
  Configuration config = expand_unique(model, cards);  // throws NotEncodableError
  InteractionSet from_diagram = interactions_of_configuration(config);
  InteractionSet from_macros =
      interactions_from_macros(encode_macros(model), model, cards, universe_bound);

  EquivalenceReport report;
  for (const auto& a : from_diagram.items)
    if (!from_macros.contains(a)) report.only_in_diagram.insert(a);
  for (const auto& a : from_macros.items)
    if (!from_diagram.contains(a)) report.only_in_macros.insert(a);
  report.equal =
      report.only_in_diagram.items.empty() && report.only_in_macros.items.empty();
  return report;
}

// ---------------------------------------------------------------------------
// Glue document
// ---------------------------------------------------------------------------

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Minimal reader for the fixed glue schema: tags, attributes, self-closing
// elements. Content between tags is ignored (the schema has none).
class XmlReader {
 public:
  explicit XmlReader(const std::string& text) : text_(text) {}

  struct Tag {
    std::string name;
    std::map<std::string, std::string> attrs;
    bool closing = false;      // </name>
    bool self_closing = false; // <name ... />
  };

  bool next(Tag& tag) {
    while (true) {
      size_t lt = text_.find('<', pos_);
      if (lt == std::string::npos) return false;
      size_t gt = text_.find('>', lt);
      if (gt == std::string::npos) fail("unterminated tag");
      std::string body = text_.substr(lt + 1, gt - lt - 1);
      pos_ = gt + 1;
      if (!body.empty() && (body[0] == '?' || body[0] == '!')) continue;  // prolog/comment
      tag = parse_tag(body);
      return true;
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error("glue document: " + msg);
  }

  Tag parse_tag(std::string body) const {
    Tag tag;
    if (!body.empty() && body.back() == '/') {
      tag.self_closing = true;
      body.pop_back();
    }
    size_t i = 0;
    if (i < body.size() && body[i] == '/') {
      tag.closing = true;
      ++i;
    }
    auto skip_ws = [&] { while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i; };
    skip_ws();
    size_t start = i;
    while (i < body.size() && !std::isspace(static_cast<unsigned char>(body[i]))) ++i;
    tag.name = body.substr(start, i - start);
    if (tag.name.empty()) fail("empty tag name");
    while (true) {
      skip_ws();
      if (i >= body.size()) break;
      size_t eq = body.find('=', i);
      if (eq == std::string::npos) fail("attribute without value in <" + tag.name + ">");
      std::string key = body.substr(i, eq - i);
      while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
      i = eq + 1;
      skip_ws();
      if (i >= body.size() || body[i] != '"') fail("attribute value must be quoted");
      size_t close = body.find('"', i + 1);
      if (close == std::string::npos) fail("unterminated attribute value");
      tag.attrs[key] = unescape(body.substr(i + 1, close - i - 1));
      i = close + 1;
    }
    return tag;
  }

  static std::string unescape(const std::string& s) {
    std::string out;
    for (size_t i = 0; i < s.size();) {
      if (s[i] == '&') {
        size_t semi = s.find(';', i);
        std::string ent = semi == std::string::npos ? "" : s.substr(i + 1, semi - i - 1);
        if (ent == "amp") out += '&';
        else if (ent == "lt") out += '<';
        else if (ent == "gt") out += '>';
        else if (ent == "quot") out += '"';
        else if (ent == "apos") out += '\'';
        else { out += s[i]; ++i; continue; }
        i = semi + 1;
      } else {
        out += s[i++];
      }
    }
    return out;
  }

  const std::string& text_;
  size_t pos_ = 0;
};

}  // namespace

std::string emit_glue(const Macros& macros) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<glue>\n";
  for (const auto& [ref, require] : macros.require) {
    os << "  <port type=\"" << xml_escape(ref.component) << "\" name=\""
       << xml_escape(ref.port) << "\">\n";

    os << "    <require";
    if (require.dash) os << " none=\"true\"";
    if (require.options.empty()) {
      os << "/>\n";
    } else {
      os << ">\n";
      for (const auto& opt : require.options) {
        os << "      <option motif=\"" << xml_escape(opt.motif) << "\" mode=\""
           << to_string(opt.mode) << "\">\n";
        for (const auto& [part, count] : opt.counts)
          os << "        <part type=\"" << xml_escape(part.component) << "\" name=\""
             << xml_escape(part.port) << "\" count=\"" << count << "\"/>\n";
        os << "      </option>\n";
      }
      os << "    </require>\n";
    }

    auto acc_it = macros.accept.find(ref);
    static const AcceptSpec empty_accept;
    const AcceptSpec& accept = acc_it == macros.accept.end() ? empty_accept : acc_it->second;
    os << "    <accept";
    if (accept.dash) os << " none=\"true\"";
    if (accept.types.empty()) {
      os << "/>\n";
    } else {
      os << ">\n";
      for (const auto& part : accept.types)
        os << "      <part type=\"" << xml_escape(part.component) << "\" name=\""
           << xml_escape(part.port) << "\"/>\n";
      os << "    </accept>\n";
    }
    os << "  </port>\n";
  }
  os << "</glue>\n";
  return os.str();
}

Macros parse_glue(const std::string& xml) {
  XmlReader reader(xml);
  XmlReader::Tag tag;
  Macros macros;

  enum class Where { Root, Glue, Port, Require, Option, Accept };
  Where where = Where::Root;
  PortTypeRef port;
  RequireOption option;
  auto fail = [](const std::string& msg) -> void {
    throw std::runtime_error("glue document: " + msg);
  };

  while (reader.next(tag)) {
    if (tag.closing) {
      if (tag.name == "option" && where == Where::Option) {
        std::sort(option.counts.begin(), option.counts.end());
        macros.require[port].options.push_back(option);
        where = Where::Require;
      } else if (tag.name == "require" && where == Where::Require) {
        where = Where::Port;
      } else if (tag.name == "accept" && where == Where::Accept) {
        where = Where::Port;
      } else if (tag.name == "port" && where == Where::Port) {
        where = Where::Glue;
      } else if (tag.name == "glue" && where == Where::Glue) {
        where = Where::Root;
      } else {
        fail("unexpected </" + tag.name + ">");
      }
      continue;
    }
    if (tag.name == "glue" && where == Where::Root) {
      where = Where::Glue;
    } else if (tag.name == "port" && where == Where::Glue) {
      port = PortTypeRef{tag.attrs.at("type"), tag.attrs.at("name")};
      macros.require[port];
      macros.accept[port];
      where = tag.self_closing ? Where::Glue : Where::Port;
    } else if (tag.name == "require" && where == Where::Port) {
      if (tag.attrs.count("none")) macros.require[port].dash = tag.attrs.at("none") == "true";
      if (!tag.self_closing) where = Where::Require;
    } else if (tag.name == "option" && where == Where::Require) {
      option = RequireOption{};
      option.motif = tag.attrs.at("motif");
      option.mode = tag.attrs.at("mode") == "exact" ? RequireMode::Exact : RequireMode::AtLeast;
      if (tag.self_closing)
        macros.require[port].options.push_back(option);
      else
        where = Where::Option;
    } else if (tag.name == "part" && where == Where::Option) {
      option.counts.emplace_back(PortTypeRef{tag.attrs.at("type"), tag.attrs.at("name")},
                                 std::stoll(tag.attrs.at("count")));
      if (!tag.self_closing) fail("<part> must be self-closing");
    } else if (tag.name == "accept" && where == Where::Port) {
      if (tag.attrs.count("none")) macros.accept[port].dash = tag.attrs.at("none") == "true";
      if (!tag.self_closing) where = Where::Accept;
    } else if (tag.name == "part" && where == Where::Accept) {
      macros.accept[port].types.insert(PortTypeRef{tag.attrs.at("type"), tag.attrs.at("name")});
      if (!tag.self_closing) fail("<part> must be self-closing");
    } else {
      fail("unexpected <" + tag.name + ">");
    }
  }
  if (where != Where::Root) fail("unterminated document");

  for (auto& [ref, spec] : macros.require) {
    std::sort(spec.options.begin(), spec.options.end());
    spec.options.erase(std::unique(spec.options.begin(), spec.options.end()),
                       spec.options.end());
  }
  return macros;
}

std::string macros_to_text(const Macros& macros) {
  std::ostringstream os;
  for (const auto& [ref, require] : macros.require) {
    auto acc_it = macros.accept.find(ref);
    const bool no_macros = !require.dash && require.options.empty() &&
                           (acc_it == macros.accept.end() ||
                            (!acc_it->second.dash && acc_it->second.types.empty()));
    if (no_macros) continue;  // port attached to no motif

    os << ref.str() << " Require ";
    std::vector<std::string> opts;
    if (require.dash) opts.push_back("-");
    for (const auto& opt : require.options) {
      std::string body;
      for (const auto& [part, count] : opt.counts)
        for (long long i = 0; i < count; ++i) {
          if (!body.empty()) body += ' ';
          body += part.str();
        }
      opts.push_back(body);
    }
    for (size_t i = 0; i < opts.size(); ++i) {
      if (i) os << " ; ";
      os << opts[i];
    }
    os << '\n';

    os << ref.str() << " Accept ";
    if (acc_it == macros.accept.end() || acc_it->second.types.empty()) {
      os << '-';
    } else {
      bool first = true;
      for (const auto& part : acc_it->second.types) {
        if (!first) os << ' ';
        os << part.str();
        first = false;
      }
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace bip
