#include "bip/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "bip/errors.hpp"

namespace bip {

namespace {

struct Token {
  enum Kind { Word, Int, Punct, Eof } kind = Eof;
  std::string text;
  long long value = 0;
  int line = 1;
  int col = 1;

  int end_col() const { return col + static_cast<int>(text.size()); }
};

std::vector<Token> lex(const std::string& text, const std::string& file) {
  std::vector<Token> toks;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      t.kind = Token::Word;
      t.text = text.substr(i, j - i);
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = Token::Int;
      t.text = text.substr(i, j - i);
      t.value = std::stoll(t.text);
      advance(j - i);
    } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      t.kind = Token::Punct;
      t.text = "->";
      advance(2);
    } else if (std::string("{}()[],.=").find(c) != std::string::npos) {
      t.kind = Token::Punct;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'",
                       SourceSpan{file, line, col, line, col + 1});
    }
    toks.push_back(std::move(t));
  }
  Token eof;
  eof.kind = Token::Eof;
  eof.line = line;
  eof.col = col;
  toks.push_back(eof);
  return toks;
}

class Parser {
 public:
  Parser(const std::string& text, std::string file)
      : file_(std::move(file)), toks_(lex(text, file_)) {}

  Model parse() {
    Model m;
    while (at_word("component")) m.components.push_back(parse_component(m));
    if (!at_word("diagram"))
      fail("expected 'component' or 'diagram'");
    parse_diagram(m);
    if (peek().kind != Token::Eof) fail("expected end of input");
    return m;
  }

 private:
  const Token& peek(size_t k = 0) const {
    size_t idx = pos_ + k;
    return idx < toks_.size() ? toks_[idx] : toks_.back();
  }
  const Token& take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  bool at_word(const char* w, size_t k = 0) const {
    return peek(k).kind == Token::Word && peek(k).text == w;
  }
  bool at_punct(const char* p, size_t k = 0) const {
    return peek(k).kind == Token::Punct && peek(k).text == p;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.kind == Token::Eof ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + ", found " + found, span_at(t));
  }

  SourceSpan span_at(const Token& t) const {
    return SourceSpan{file_, t.line, t.col, t.line, t.end_col()};
  }
  SourceSpan span_between(const Token& a, const Token& b) const {
    return SourceSpan{file_, a.line, a.col, b.line, b.end_col()};
  }
  const Token& prev() const { return toks_[pos_ == 0 ? 0 : pos_ - 1]; }

  std::string expect_name(const char* what) {
    if (peek().kind != Token::Word) fail(std::string("expected ") + what);
    return take().text;
  }
  void expect_word(const char* w) {
    if (!at_word(w)) fail(std::string("expected '") + w + "'");
    take();
  }
  void expect_punct(const char* p) {
    if (!at_punct(p)) fail(std::string("expected '") + p + "'");
    take();
  }
  long long expect_int(const char* what) {
    if (peek().kind != Token::Int) fail(std::string("expected ") + what);
    return take().value;
  }

  std::vector<std::string> parse_name_list(const char* what) {
    std::vector<std::string> names;
    names.push_back(expect_name(what));
    while (at_punct(",")) {
      take();
      names.push_back(expect_name(what));
    }
    return names;
  }

  ComponentType parse_component(Model& m) {
    const Token& start = peek();
    expect_word("component");
    ComponentType c;
    c.name = expect_name("component name");
    expect_punct("(");
    expect_word("n");
    expect_punct("=");
    if (peek().kind == Token::Int) {
      c.cardinality.value = take().value;
    } else if (peek().kind == Token::Word) {
      c.cardinality.symbol = take().text;
    } else {
      fail("expected cardinality value or parameter name");
    }
    expect_punct(")");
    expect_punct("{");
    expect_word("ports");
    c.ports = parse_name_list("port name");
    if (at_word("events")) {
      take();
      c.events = parse_name_list("event name");
    }
    expect_word("states");
    c.lts.states = parse_name_list("state name");
    // `initial` clauses and transitions; more than one (or no) initial clause
    // parses fine and is reported by the behavior checker.
    while (!at_punct("}")) {
      if (at_word("initial") && !at_punct("->", 1)) {
        const Token& kw = peek();
        take();
        c.lts.initials.push_back(expect_name("initial state name"));
        m.spans[node_initial(c.name, c.lts.initials.size() - 1)] =
            span_between(kw, prev());
        continue;
      }
      if (peek().kind != Token::Word) fail("expected transition or '}'");
      const Token& first = peek();
      std::string src = take().text;
      expect_punct("->");
      std::string dst = expect_name("target state name");
      Transition tr;
      if (at_word("on")) {
        take();
        tr = Transition(src, dst, TransitionKind::Enforceable,
                        expect_name("port label"));
      } else if (at_word("when")) {
        take();
        tr = Transition(src, dst, TransitionKind::Spontaneous,
                        expect_name("event label"));
      } else if (at_word("internal")) {
        take();
        tr = Transition(src, dst, TransitionKind::Internal);
      } else {
        fail("expected 'on', 'when' or 'internal'");
      }
      c.lts.transitions.push_back(std::move(tr));
      m.spans[node_transition(c.name, c.lts.transitions.size() - 1)] =
          span_between(first, prev());
    }
    expect_punct("}");
    m.spans[node_component(c.name)] = span_between(start, prev());
    return c;
  }

  void parse_diagram(Model& m) {
    expect_word("diagram");
    expect_punct("{");
    while (at_word("motif")) m.motifs.push_back(parse_motif(m));
    expect_punct("}");
  }

  ConnectorMotif parse_motif(Model& m) {
    const Token& start = peek();
    expect_word("motif");
    ConnectorMotif motif;
    motif.id = expect_name("motif name");
    expect_punct("{");
    motif.ends.push_back(parse_end(m, motif.id));
    while (at_punct(",")) {
      take();
      motif.ends.push_back(parse_end(m, motif.id));
    }
    expect_punct("}");
    m.spans[node_motif(motif.id)] = span_between(start, prev());
    return motif;
  }

  MotifEnd parse_end(Model& m, const std::string& motif_id) {
    const Token& start = peek();
    MotifEnd e;
    e.port.component = expect_name("component type name");
    expect_punct(".");
    e.port.port = expect_name("port name");
    expect_punct("[");
    expect_word("m");
    expect_punct("=");
    const Token& mt = peek();
    e.multiplicity = expect_int("multiplicity");
    if (e.multiplicity < 1)
      throw ParseError("multiplicity must be at least 1", span_at(mt));
    expect_punct(",");
    expect_word("d");
    expect_punct("=");
    e.degree = expect_int("degree");
    expect_punct("]");
    if (at_word("sync")) {
      take();
      e.typing = PortTyping::Synchron;
    } else if (at_word("trigger")) {
      take();
      e.typing = PortTyping::Trigger;
    } else {
      fail("expected 'sync' or 'trigger'");
    }
    m.spans[node_end(motif_id, e.port)] = span_between(start, prev());
    return e;
  }

  std::string file_;
  std::vector<Token> toks_;
  size_t pos_ = 0;
};

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) {
    if (!s.empty()) s += ", ";
    s += x;
  }
  return s;
}

}  // namespace

Model parse_model(const std::string& text, const std::string& filename) {
  return Parser(text, filename).parse();
}

std::string serialize_model(const Model& model) {
  std::ostringstream os;
  for (const auto& c : model.components) {
    os << "component " << c.name << " (n=" << c.cardinality.str() << ") {\n";
    os << "  ports " << join(c.ports) << "\n";
    if (!c.events.empty()) os << "  events " << join(c.events) << "\n";
    os << "  states " << join(c.lts.states) << "\n";
    for (const auto& ini : c.lts.initials) os << "  initial " << ini << "\n";
    for (const auto& t : c.lts.transitions) {
      os << "  " << t.source << " -> " << t.target;
      switch (t.kind) {
        case TransitionKind::Enforceable: os << " on " << t.label; break;
        case TransitionKind::Spontaneous: os << " when " << t.label; break;
        case TransitionKind::Internal: os << " internal"; break;
      }
      os << "\n";
    }
    os << "}\n\n";
  }
  os << "diagram {\n";
  for (const auto& m : model.motifs) {
    os << "  motif " << m.id << " { ";
    for (size_t i = 0; i < m.ends.size(); ++i) {
      const MotifEnd& e = m.ends[i];
      if (i) os << ", ";
      os << e.port.str() << "[m=" << e.multiplicity << ",d=" << e.degree << "] "
         << (e.typing == PortTyping::Synchron ? "sync" : "trigger");
    }
    os << " }\n";
  }
  os << "}\n";
  return os.str();
}

EventSchedule load_scenario(const std::string& text, const std::string& filename) {
  EventSchedule schedule;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string cycle_tok, instance_tok, event_tok;
    if (!(ls >> cycle_tok)) continue;  // blank line
    auto bad = [&](const std::string& msg) -> ParseError {
      return ParseError(msg, SourceSpan{filename, lineno, 1, lineno,
                                        static_cast<int>(line.size()) + 1});
    };
    if (!(ls >> instance_tok >> event_tok)) throw bad("expected 'CYCLE TYPE[index] EVENT'");
    std::string extra;
    if (ls >> extra) throw bad("trailing input after event name");

    ScheduledEvent ev;
    try {
      size_t used = 0;
      ev.cycle = std::stoll(cycle_tok, &used);
      if (used != cycle_tok.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw bad("expected a cycle number, found '" + cycle_tok + "'");
    }
    if (ev.cycle < 0) throw bad("cycle number must be non-negative");
    auto lb = instance_tok.find('[');
    auto rb = instance_tok.find(']');
    if (lb == std::string::npos || rb == std::string::npos || rb != instance_tok.size() - 1 ||
        lb == 0 || rb <= lb + 1)
      throw bad("expected instance reference 'TYPE[index]', found '" + instance_tok + "'");
    ev.component = instance_tok.substr(0, lb);
    try {
      size_t used = 0;
      std::string idx = instance_tok.substr(lb + 1, rb - lb - 1);
      ev.index = std::stoll(idx, &used);
      if (used != idx.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw bad("expected an instance index in '" + instance_tok + "'");
    }
    ev.event = event_tok;
    schedule.events.push_back(std::move(ev));
  }
  std::stable_sort(schedule.events.begin(), schedule.events.end(),
                   [](const ScheduledEvent& a, const ScheduledEvent& b) {
                     return a.cycle < b.cycle;
                   });
  return schedule;
}

namespace {

struct PatternDef {
  const char* name;
  const char* text;
};

// Templates are regular model sources with {param} holes; load_pattern fills
// the holes and runs the normal parser.
constexpr const char* kStarPattern = R"(# star coordination: one center, n satellites
component C (n=1) {
  ports p
  states s0
  initial s0
  s0 -> s0 on p
}

component S (n={n}) {
  ports q
  states s0
  initial s0
  s0 -> s0 on q
}

diagram {
  motif star { C.p[m=1,d={n}] sync, S.q[m=1,d=1] sync }
}
)";

constexpr const char* kMutexPattern = R"(# mutual exclusion: n processes share one manager
component Process (n={n}) {
  ports acquire, release
  states sleeping, working
  initial sleeping
  sleeping -> working on acquire
  working -> sleeping on release
}

component Manager (n=1) {
  ports acquire, release
  states free, taken
  initial free
  free -> taken on acquire
  taken -> free on release
}

diagram {
  motif acq { Process.acquire[m=1,d=1] sync, Manager.acquire[m=1,d={n}] sync }
  motif rel { Process.release[m=1,d=1] sync, Manager.release[m=1,d={n}] sync }
}
)";

constexpr PatternDef kPatterns[] = {
    {"star", kStarPattern},
    {"mutex", kMutexPattern},
};

}  // namespace

std::vector<std::string> pattern_names() {
  std::vector<std::string> names;
  for (const auto& p : kPatterns) names.emplace_back(p.name);
  return names;
}

Model load_pattern(const std::string& name,
                   const std::map<std::string, long long>& params) {
  const PatternDef* def = nullptr;
  for (const auto& p : kPatterns)
    if (name == p.name) def = &p;
  if (!def) throw UnknownPatternError("unknown pattern '" + name + "'");

  // Placeholders are {identifier}; any other brace is model syntax.
  auto is_ident = [](const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
      return false;
    for (char c : s)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
  };
  std::string text = def->text;
  std::string out;
  out.reserve(text.size());
  for (size_t i = 0; i < text.size();) {
    size_t close;
    if (text[i] == '{' && (close = text.find('}', i)) != std::string::npos &&
        is_ident(text.substr(i + 1, close - i - 1))) {
      std::string key = text.substr(i + 1, close - i - 1);
      auto it = params.find(key);
      if (it == params.end())
        throw MissingParameterError("pattern '" + name + "' needs parameter '" + key +
                                    "'");
      out += std::to_string(it->second);
      i = close + 1;
    } else {
      out += text[i++];
    }
  }
  return parse_model(out, "<pattern:" + name + ">");
}

}  // namespace bip
