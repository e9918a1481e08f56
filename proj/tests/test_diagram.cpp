#include <map>

#include "doctest.h"
#include "helpers.hpp"

#include "bip/diagram.hpp"
#include "bip/errors.hpp"

using namespace bip;
using namespace bip::testing;

namespace {

// Canonical small fixtures: two types with one port each, a single motif.
Model two_matchings() { return binary_diagram(2, {1, 1}, 2, {1, 1}); }
Model all_pairs() { return binary_diagram(2, {1, 2}, 2, {1, 2}); }
Model broadcast(long long n1, long long n2) {
  return binary_diagram(n1, {1, 1, PortTyping::Synchron}, n2,
                        {2, 1, PortTyping::Trigger});
}

std::vector<std::string> lines(const Configuration& c) {
  std::vector<std::string> out;
  for (const auto& conn : c.connectors) out.push_back(conn.str());
  return out;
}

}  // namespace

TEST_CASE("matching factors are exact rationals") {
  Model m6 = two_matchings();
  CHECK(matching_factor(m6, m6.motifs[0].ends[0], {}) == Rational(2, 1));
  Model m7 = all_pairs();
  CHECK(matching_factor(m7, m7.motifs[0].ends[0], {}) == Rational(4, 1));
  Model frac = unary_diagram(3, {2, 1});
  CHECK(matching_factor(frac, frac.motifs[0].ends[0], {}) == Rational(3, 2));
}

TEST_CASE("max connectors multiplies per-end binomials") {
  Model m6 = two_matchings();
  CHECK(max_connectors(m6, m6.motifs[0], {}) == 4);
  Model unary = unary_diagram(3, {1, 1});
  CHECK(max_connectors(unary, unary.motifs[0], {}) == 3);
  Model tight = unary_diagram(1, {2, 1});
  CHECK(max_connectors(tight, tight.motifs[0], {}) == 0);
}

TEST_CASE("degree-1 rendezvous between two pairs is not encodable") {
  EncodabilityReport report = check_encodable(two_matchings(), {});
  CHECK_FALSE(report.verdict);
  REQUIRE(report.ends.size() == 2);
  for (const auto& e : report.ends) {
    CHECK(e.cond1);
    CHECK(e.integral);
    CHECK_FALSE(e.cond2);
    CHECK(e.matching_factor == Rational(2, 1));
    CHECK(e.max_connectors == 4);
  }
  REQUIRE(report.diagnostics.size() == 2);
  CHECK(report.diagnostics[0].message.find("matching factor 2 ≠ max connectors 4") !=
        std::string::npos);
}

TEST_CASE("raising the degrees to 2 makes the diagram encodable") {
  EncodabilityReport report = check_encodable(all_pairs(), {});
  CHECK(report.verdict);
  CHECK(report.diagnostics.empty());
  for (const auto& e : report.ends) CHECK(e.matching_factor == Rational(4, 1));
}

TEST_CASE("multiplicity above cardinality fails condition 1") {
  Model m = unary_diagram(1, {2, 2});
  EncodabilityReport report = check_encodable(m, {});
  CHECK_FALSE(report.verdict);
  CHECK_FALSE(report.ends[0].cond1);
}

TEST_CASE("expansion of the degree-2 diagram gives all four binary connectors") {
  Configuration config = expand_unique(all_pairs(), {});
  CHECK(lines(config) == std::vector<std::string>{
                             "g: T1[1].p* T2[1].q*",
                             "g: T1[1].p* T2[2].q*",
                             "g: T1[2].p* T2[1].q*",
                             "g: T1[2].p* T2[2].q*",
                         });
}

TEST_CASE("expansion with multiplicity 2 groups both instances in one connector") {
  Configuration config = expand_unique(broadcast(1, 2), {});
  CHECK(lines(config) ==
        std::vector<std::string>{"g: T1[1].p* T2[1].q! T2[2].q!"});
}

TEST_CASE("unary motif expands to singleton connectors") {
  Model m = unary_diagram(3, {1, 1});
  Configuration config = expand_unique(m, {});
  CHECK(lines(config) == std::vector<std::string>{
                             "g: T1[1].p*", "g: T1[2].p*", "g: T1[3].p*"});
}

TEST_CASE("expansion refuses non-encodable diagrams") {
  CHECK_THROWS_AS(expand_unique(two_matchings(), {}), NotEncodableError);
}

TEST_CASE("enumeration finds exactly the two matchings of the degree-1 diagram") {
  auto configs = enumerate_configurations(two_matchings(), {});
  REQUIRE(configs.size() == 2);
  CHECK(lines(configs[0]) == std::vector<std::string>{
                                 "g: T1[1].p* T2[1].q*", "g: T1[2].p* T2[2].q*"});
  CHECK(lines(configs[1]) == std::vector<std::string>{
                                 "g: T1[1].p* T2[2].q*", "g: T1[2].p* T2[1].q*"});

  // deterministic: a second run yields the identical list
  auto again = enumerate_configurations(two_matchings(), {});
  CHECK(configs == again);
}

TEST_CASE("enumeration of an encodable diagram matches the expansion") {
  auto configs = enumerate_configurations(all_pairs(), {});
  REQUIRE(configs.size() == 1);
  CHECK(configs[0] == expand_unique(all_pairs(), {}));
}

TEST_CASE("fractional matching factor leaves no configuration") {
  Model m = unary_diagram(3, {2, 1});  // total degree 3 not divisible by multiplicity 2
  CHECK(enumerate_configurations(m, {}).empty());
}

TEST_CASE("the node budget is enforced") {
  Model m = binary_diagram(4, {1, 3}, 4, {1, 3});
  CHECK_THROWS_AS(enumerate_configurations(m, {}, 10), LimitExceededError);
}

TEST_CASE("conformance of the expanded architecture") {
  Model m = broadcast(1, 2);
  Architecture arch;
  arch.components = {{"T1", 1}, {"T2", 1}, {"T2", 2}};
  arch.configuration = expand_unique(m, {});
  CHECK(conforms(arch, m, {}));

  // one extra copy of the same connector: degree exceeded
  Architecture doubled = arch;
  doubled.configuration.connectors.push_back(doubled.configuration.connectors[0]);
  CHECK_FALSE(conforms(doubled, m, {}));

  // instance count mismatch
  Architecture wrong_count = arch;
  wrong_count.components.push_back({"T2", 3});
  CHECK_FALSE(conforms(wrong_count, m, {}));
}

TEST_CASE("conformance checks connector shape against some motif") {
  Model m = all_pairs();
  Architecture arch;
  arch.components = {{"T1", 1}, {"T1", 2}, {"T2", 1}, {"T2", 2}};
  arch.configuration = expand_unique(m, {});
  CHECK(conforms(arch, m, {}));

  // mislabeled provenance is still a valid partition witness when cleared
  for (auto& conn : arch.configuration.connectors) conn.motif.clear();
  CHECK(conforms(arch, m, {}));

  // a unary connector matches no motif of this diagram
  arch.configuration.connectors.push_back(Connector{
      "", ConnectorNode::inner({ConnectorNode::leaf(pi("T1", 1, "p"),
                                                    PortTyping::Synchron)})});
  CHECK_FALSE(conforms(arch, m, {}));
}

TEST_CASE("expansion satisfies the multiplicity and degree laws") {
  int checked = 0;
  for (long long n1 = 1; n1 <= 4; ++n1)
  for (long long n2 = 1; n2 <= 4; ++n2)
  for (long long m1 = 1; m1 <= 3; ++m1)
  for (long long m2 = 1; m2 <= 3; ++m2)
  for (long long d1 = 1; d1 <= 3; ++d1)
  for (long long d2 = 1; d2 <= 3; ++d2) {
    EndSpec e1{m1, d1, (n1 + m1) % 2 ? PortTyping::Trigger : PortTyping::Synchron};
    EndSpec e2{m2, d2, (n2 + m2) % 2 ? PortTyping::Trigger : PortTyping::Synchron};
    Model m = binary_diagram(n1, e1, n2, e2);
    if (!check_encodable(m, {}).verdict) continue;
    ++checked;
    Configuration config = expand_unique(m, {});

    std::map<PortInstance, long long> appearances;
    for (const auto& conn : config.connectors) {
      std::map<std::string, long long> per_type;
      for (const auto& leaf : conn.root.children()) {
        ++per_type[leaf.port().component];
        ++appearances[leaf.port()];
      }
      CHECK(per_type["T1"] == e1.m);
      CHECK(per_type["T2"] == e2.m);
    }
    for (long long i = 1; i <= n1; ++i) CHECK(appearances[pi("T1", i, "p")] == e1.d);
    for (long long i = 1; i <= n2; ++i) CHECK(appearances[pi("T2", i, "q")] == e2.d);

    // and the expansion conforms to its own diagram
    Architecture arch;
    for (long long i = 1; i <= n1; ++i) arch.components.push_back({"T1", i});
    for (long long i = 1; i <= n2; ++i) arch.components.push_back({"T2", i});
    arch.configuration = config;
    CHECK(conforms(arch, m, {}));
  }
  CHECK(checked >= 10);
}

TEST_CASE("multi-motif diagrams enumerate the product of per-motif choices") {
  // two independent copies of the two-matchings diagram
  Model m;
  m.components.push_back(simple_type("T1", {"p"}, 2));
  m.components.push_back(simple_type("T2", {"q"}, 2));
  m.components.push_back(simple_type("T3", {"r"}, 2));
  ConnectorMotif g1{"g1",
                    {MotifEnd{PortTypeRef{"T1", "p"}, 1, 1, PortTyping::Synchron},
                     MotifEnd{PortTypeRef{"T2", "q"}, 1, 1, PortTyping::Synchron}}};
  ConnectorMotif g2{"g2",
                    {MotifEnd{PortTypeRef{"T2", "q"}, 1, 1, PortTyping::Synchron},
                     MotifEnd{PortTypeRef{"T3", "r"}, 1, 1, PortTyping::Synchron}}};
  m.motifs = {g1, g2};
  auto configs = enumerate_configurations(m, {});
  CHECK(configs.size() == 4);
  for (const auto& config : configs) CHECK(config.connectors.size() == 4);
}
