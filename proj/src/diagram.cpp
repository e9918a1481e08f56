#include "bip/diagram.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "bip/errors.hpp"

namespace bip {

namespace {

constexpr long long kClamp = 1LL << 62;

long long binom(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  __int128 r = 1;
  for (long long i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > kClamp) return kClamp;
  }
  return static_cast<long long>(r);
}

// m-subsets of {1..n} in lexicographic order.
std::vector<std::vector<long long>> combinations(long long n, long long m) {
  std::vector<std::vector<long long>> out;
  if (m < 0 || m > n) return out;
  std::vector<long long> cur(m);
  for (long long i = 0; i < m; ++i) cur[i] = i + 1;
  while (true) {
    out.push_back(cur);
    long long i = m - 1;
    while (i >= 0 && cur[i] == n - (m - 1 - i)) --i;
    if (i < 0) break;
    ++cur[i];
    for (long long j = i + 1; j < m; ++j) cur[j] = cur[j - 1] + 1;
  }
  if (m == 0) out = {{}};
  return out;
}

Connector make_connector(const ConnectorMotif& motif,
                         const std::vector<const std::vector<long long>*>& picks) {
  std::vector<ConnectorNode> leaves;
  for (size_t e = 0; e < motif.ends.size(); ++e) {
    const MotifEnd& end = motif.ends[e];
    for (long long idx : *picks[e])
      leaves.push_back(ConnectorNode::leaf(
          PortInstance{end.port.component, idx, end.port.port}, end.typing));
  }
  std::sort(leaves.begin(), leaves.end(), [](const ConnectorNode& a, const ConnectorNode& b) {
    return a.port() < b.port();
  });
  return Connector{motif.id, ConnectorNode::inner(std::move(leaves))};
}

// All candidate connectors of a motif: the Cartesian product of per-end
// m-subsets, in odometer order (first end varies slowest).
std::vector<Connector> motif_candidates(const Model& model, const ConnectorMotif& motif,
                                        const CardinalityAssignment& cards) {
  std::vector<std::vector<std::vector<long long>>> per_end;
  for (const auto& end : motif.ends) {
    long long n = resolved_cardinality(model, end.port.component, cards);
    per_end.push_back(combinations(n, end.multiplicity));
    if (per_end.back().empty()) return {};
  }
  std::vector<Connector> out;
  std::vector<size_t> odo(motif.ends.size(), 0);
  while (true) {
    std::vector<const std::vector<long long>*> picks;
    for (size_t e = 0; e < odo.size(); ++e) picks.push_back(&per_end[e][odo[e]]);
    out.push_back(make_connector(motif, picks));
    size_t e = odo.size();
    while (e > 0) {
      --e;
      if (++odo[e] < per_end[e].size()) break;
      odo[e] = 0;
      if (e == 0) return out;
    }
  }
}

bool leaves_less(const Connector& a, const Connector& b) {
  const auto& ca = a.root.children();
  const auto& cb = b.root.children();
  return std::lexicographical_compare(
      ca.begin(), ca.end(), cb.begin(), cb.end(),
      [](const ConnectorNode& x, const ConnectorNode& y) { return x.port() < y.port(); });
}

}  // namespace

Rational matching_factor(const Model& model, const MotifEnd& end,
                         const CardinalityAssignment& cards) {
  long long n = resolved_cardinality(model, end.port.component, cards);
  return Rational(n * end.degree, end.multiplicity);
}

long long max_connectors(const Model& model, const ConnectorMotif& motif,
                         const CardinalityAssignment& cards) {
  __int128 product = 1;
  for (const auto& end : motif.ends) {
    long long n = resolved_cardinality(model, end.port.component, cards);
    product *= binom(n, end.multiplicity);
    if (product > kClamp) return kClamp;
  }
  return static_cast<long long>(product);
}

EncodabilityReport check_encodable(const Model& model,
                                   const CardinalityAssignment& cards) {
  EncodabilityReport report;
  report.verdict = true;
  for (const auto& motif : model.motifs) {
    long long max_conn = max_connectors(model, motif, cards);
    for (const auto& end : motif.ends) {
      EndCheck check;
      check.motif = motif.id;
      check.port = end.port;
      long long n = resolved_cardinality(model, end.port.component, cards);
      check.matching_factor = matching_factor(model, end, cards);
      check.max_connectors = max_conn;
      check.cond1 = end.multiplicity <= n;
      check.integral = check.matching_factor.is_integer();
      check.cond2 = check.integral && check.matching_factor.num == max_conn;

      const std::string node = node_end(motif.id, end.port);
      auto add = [&](std::string msg) {
        report.diagnostics.push_back(Diagnostic{Severity::Error, "NOT_ENCODABLE",
                                                std::move(msg), model.span_of(node), node});
      };
      const std::string prefix =
          "Connector motif [" + motif.id + "] end [" + end.port.str() + "]: ";
      if (!check.cond1)
        add(prefix + "multiplicity " + std::to_string(end.multiplicity) +
            " exceeds cardinality " + std::to_string(n) + ".");
      if (!check.integral)
        add(prefix + "matching factor " + check.matching_factor.str() +
            " is not an integer.");
      else if (!check.cond2)
        add(prefix + "matching factor " + check.matching_factor.str() +
            " ≠ max connectors " + std::to_string(max_conn) + ".");

      if (!check.ok()) report.verdict = false;
      report.ends.push_back(std::move(check));
    }
  }
  return report;
}

Configuration expand_unique(const Model& model, const CardinalityAssignment& cards) {
  EncodabilityReport report = check_encodable(model, cards);
  if (!report.verdict) {
    std::string why = report.diagnostics.empty() ? "conditions do not hold"
                                                 : report.diagnostics.front().message;
    throw NotEncodableError("diagram does not define a unique configuration: " + why);
  }
  Configuration config;
  for (const auto& motif : model.motifs) {
    auto candidates = motif_candidates(model, motif, cards);
    std::sort(candidates.begin(), candidates.end(), leaves_less);
    for (auto& c : candidates) config.connectors.push_back(std::move(c));
  }
  return config;
}

namespace {

class MotifSearch {
 public:
  MotifSearch(const Model& model, const ConnectorMotif& motif,
              const CardinalityAssignment& cards, long long& nodes, long long node_limit,
              std::optional<size_t> cap)
      : motif_(motif), nodes_(nodes), node_limit_(node_limit), cap_(cap) {
    for (const auto& end : motif.ends)
      n_.push_back(resolved_cardinality(model, end.port.component, cards));

    // The per-motif connector count is the common matching factor; unequal or
    // fractional factors rule out every configuration.
    bool feasible = true;
    Rational s0(0, 1);
    for (size_t e = 0; e < motif.ends.size(); ++e) {
      Rational s(n_[e] * motif.ends[e].degree, motif.ends[e].multiplicity);
      if (!s.is_integer()) feasible = false;
      if (e == 0)
        s0 = s;
      else if (!(s == s0))
        feasible = false;
    }
    if (!feasible) return;
    target_ = s0.num;
    if (target_ == 0) {
      results_.push_back({});  // degree-0 motif: the empty connector set
      return;
    }

    candidates_ = motif_candidates(model, motif, cards);
    if (static_cast<long long>(candidates_.size()) < target_) return;

    slots_ = 0;
    slot_base_.resize(motif.ends.size());
    for (size_t e = 0; e < motif.ends.size(); ++e) {
      slot_base_[e] = slots_;
      slots_ += static_cast<size_t>(n_[e]);
    }
    degree_.assign(slots_, 0);
    for (size_t e = 0; e < motif.ends.size(); ++e)
      for (long long i = 0; i < n_[e]; ++i)
        degree_[slot_base_[e] + static_cast<size_t>(i)] = motif.ends[e].degree;

    members_.resize(candidates_.size());
    for (size_t c = 0; c < candidates_.size(); ++c)
      for (const auto& leaf : candidates_[c].root.children())
        members_[c].push_back(slot_of(leaf.port()));

    // suffix_[i][slot]: candidates at index >= i containing the instance.
    suffix_.assign(candidates_.size() + 1, std::vector<long long>(slots_, 0));
    for (size_t c = candidates_.size(); c-- > 0;) {
      suffix_[c] = suffix_[c + 1];
      for (size_t slot : members_[c]) ++suffix_[c][slot];
    }

    chosen_.reserve(static_cast<size_t>(target_));
    search(0);
  }

  std::vector<std::vector<Connector>> take() { return std::move(results_); }

 private:
  size_t slot_of(const PortInstance& p) const {
    for (size_t e = 0; e < motif_.ends.size(); ++e)
      if (motif_.ends[e].port.component == p.component && motif_.ends[e].port.port == p.port)
        return slot_base_[e] + static_cast<size_t>(p.index - 1);
    return 0;  // unreachable for generated candidates
  }

  void search(size_t idx) {
    if (stop_) return;
    if (++nodes_ > node_limit_)
      throw LimitExceededError("configuration search exceeded " +
                                   std::to_string(node_limit_) + " nodes",
                               static_cast<long long>(results_.size()));
    if (static_cast<long long>(chosen_.size()) == target_) {
      for (long long d : degree_)
        if (d != 0) return;
      std::vector<Connector> config;
      config.reserve(chosen_.size());
      for (size_t c : chosen_) config.push_back(candidates_[c]);
      results_.push_back(std::move(config));
      if (cap_ && results_.size() >= *cap_) stop_ = true;
      return;
    }
    if (idx == candidates_.size()) return;
    if (static_cast<long long>(candidates_.size() - idx) <
        target_ - static_cast<long long>(chosen_.size()))
      return;
    for (size_t slot = 0; slot < slots_; ++slot)
      if (degree_[slot] > suffix_[idx][slot]) return;

    bool usable = true;
    for (size_t slot : members_[idx])
      if (degree_[slot] == 0) usable = false;
    if (usable) {
      for (size_t slot : members_[idx]) --degree_[slot];
      chosen_.push_back(idx);
      search(idx + 1);
      chosen_.pop_back();
      for (size_t slot : members_[idx]) ++degree_[slot];
      if (stop_) return;
    }
    search(idx + 1);
  }

  const ConnectorMotif& motif_;
  long long& nodes_;
  long long node_limit_;
  std::optional<size_t> cap_;
  std::vector<long long> n_;
  long long target_ = -1;
  std::vector<Connector> candidates_;
  std::vector<std::vector<size_t>> members_;
  std::vector<std::vector<long long>> suffix_;
  std::vector<long long> degree_;
  size_t slots_ = 0;
  std::vector<size_t> slot_base_;
  std::vector<size_t> chosen_;
  std::vector<std::vector<Connector>> results_;
  bool stop_ = false;
};

}  // namespace

std::vector<Configuration> enumerate_configurations(const Model& model,
                                                    const CardinalityAssignment& cards,
                                                    long long node_limit,
                                                    std::optional<size_t> max_configs) {
  long long nodes = 0;
  std::vector<std::vector<std::vector<Connector>>> per_motif;
  for (const auto& motif : model.motifs) {
    MotifSearch search(model, motif, cards, nodes, node_limit, max_configs);
    per_motif.push_back(search.take());
    if (per_motif.back().empty()) return {};
  }

  std::vector<Configuration> out;
  std::vector<size_t> odo(per_motif.size(), 0);
  while (true) {
    Configuration config;
    for (size_t m = 0; m < per_motif.size(); ++m)
      for (const auto& conn : per_motif[m][odo[m]]) config.connectors.push_back(conn);
    if (!config.connectors.empty()) out.push_back(std::move(config));
    if (max_configs && out.size() >= *max_configs) return out;
    if (per_motif.empty()) break;
    size_t m = per_motif.size();
    bool done = false;
    while (m > 0) {
      --m;
      if (++odo[m] < per_motif[m].size()) break;
      odo[m] = 0;
      if (m == 0) done = true;
    }
    if (done || per_motif.empty()) break;
  }
  return out;
}

namespace {

using LeafCounts = std::map<std::pair<PortTypeRef, PortTyping>, long long>;

void flatten_leaves(const ConnectorNode& node,
                    std::vector<std::pair<PortInstance, PortTyping>>& out) {
  if (node.is_leaf()) {
    out.emplace_back(node.port(), node.typing);
    return;
  }
  for (const auto& c : node.children()) flatten_leaves(c, out);
}

bool signature_matches(const std::vector<std::pair<PortInstance, PortTyping>>& leaves,
                       const ConnectorMotif& motif) {
  LeafCounts counts;
  for (const auto& [p, t] : leaves)
    ++counts[{PortTypeRef{p.component, p.port}, t}];
  if (counts.size() != motif.ends.size()) return false;
  for (const auto& end : motif.ends) {
    auto it = counts.find({end.port, end.typing});
    if (it == counts.end() || it->second != end.multiplicity) return false;
  }
  return true;
}

}  // namespace

bool conforms(const Architecture& arch, const Model& model,
              const CardinalityAssignment& cards) {
  // Instance counts per type must equal the cardinalities.
  std::map<std::string, long long> counts;
  std::set<std::pair<std::string, long long>> instances;
  for (const auto& [type, idx] : arch.components) {
    ++counts[type];
    if (!instances.emplace(type, idx).second) return false;  // duplicate instance
  }
  for (const auto& c : model.components) {
    long long n = resolved_cardinality(model, c.name, cards);
    auto it = counts.find(c.name);
    if ((it == counts.end() ? 0 : it->second) != n) return false;
  }
  for (const auto& [type, _] : counts)
    if (!model.find_component(type)) return false;

  // Candidate motifs per connector by leaf signature (provenance, when
  // present, pins the motif).
  struct Entry {
    std::vector<std::pair<PortInstance, PortTyping>> leaves;
    std::vector<size_t> candidates;
  };
  std::vector<Entry> entries;
  for (const auto& conn : arch.configuration.connectors) {
    Entry e;
    flatten_leaves(conn.root, e.leaves);
    for (const auto& [p, t] : e.leaves)
      if (!instances.count({p.component, p.index})) return false;
    for (size_t m = 0; m < model.motifs.size(); ++m) {
      if (!conn.motif.empty() && conn.motif != model.motifs[m].id) continue;
      if (signature_matches(e.leaves, model.motifs[m])) e.candidates.push_back(m);
    }
    if (e.candidates.empty()) return false;
    entries.push_back(std::move(e));
  }

  // usage[motif][(type, port, instance)] counts connectors assigned so far.
  std::vector<std::map<std::tuple<std::string, std::string, long long>, long long>> usage(
      model.motifs.size());

  auto degree_of = [&](size_t m, const PortInstance& p) -> long long {
    for (const auto& end : model.motifs[m].ends)
      if (end.port.component == p.component && end.port.port == p.port) return end.degree;
    return 0;
  };

  std::function<bool(size_t)> assign = [&](size_t i) -> bool {
    if (i == entries.size()) {
      // Every instance of every end must sit at exactly its degree.
      for (size_t m = 0; m < model.motifs.size(); ++m) {
        for (const auto& end : model.motifs[m].ends) {
          long long n = resolved_cardinality(model, end.port.component, cards);
          for (long long idx = 1; idx <= n; ++idx) {
            auto key = std::make_tuple(end.port.component, end.port.port, idx);
            auto it = usage[m].find(key);
            long long used = it == usage[m].end() ? 0 : it->second;
            if (used != end.degree) return false;
          }
        }
      }
      return true;
    }
    for (size_t m : entries[i].candidates) {
      bool ok = true;
      std::vector<std::tuple<std::string, std::string, long long>> touched;
      for (const auto& [p, t] : entries[i].leaves) {
        auto key = std::make_tuple(p.component, p.port, p.index);
        if (++usage[m][key] > degree_of(m, p)) ok = false;
        touched.push_back(key);
      }
      if (ok && assign(i + 1)) return true;
      for (const auto& key : touched) --usage[m][key];
    }
    return false;
  };

  return assign(0);
}

}  // namespace bip
