#include <random>

#include "doctest.h"
#include "helpers.hpp"

#include "bip/diagram.hpp"
#include "bip/errors.hpp"
#include "bip/interactions.hpp"
#include "bip/macros.hpp"

using namespace bip;
using namespace bip::testing;

namespace {

Model star_model(long long satellites) {
  return binary_diagram(1, {1, satellites, PortTyping::Synchron}, satellites,
                        {1, 1, PortTyping::Synchron});
}

Model broadcast(long long n1, long long n2) {
  return binary_diagram(n1, {1, 1, PortTyping::Synchron}, n2,
                        {2, 1, PortTyping::Trigger});
}

const PortTypeRef kP{"T1", "p"};
const PortTypeRef kQ{"T2", "q"};

}  // namespace

TEST_CASE("star encoding: each side requires and accepts the other") {
  Macros macros = encode_macros(star_model(3));
  REQUIRE(macros.require.count(kP));
  REQUIRE(macros.require.count(kQ));

  const RequireSpec& rp = macros.require.at(kP);
  CHECK_FALSE(rp.dash);
  REQUIRE(rp.options.size() == 1);
  CHECK(rp.options[0].mode == RequireMode::Exact);
  CHECK(rp.options[0].motif == "g");
  CHECK(rp.options[0].counts ==
        std::vector<std::pair<PortTypeRef, long long>>{{kQ, 1}});
  CHECK(macros.accept.at(kP).types == std::set<PortTypeRef>{kQ});

  const RequireSpec& rq = macros.require.at(kQ);
  REQUIRE(rq.options.size() == 1);
  CHECK(rq.options[0].counts ==
        std::vector<std::pair<PortTypeRef, long long>>{{kP, 1}});
  CHECK(macros.accept.at(kQ).types == std::set<PortTypeRef>{kP});

  CHECK(macros_to_text(macros) ==
        "T1.p Require T2.q\n"
        "T1.p Accept T2.q\n"
        "T2.q Require T1.p\n"
        "T2.q Accept T1.p\n");
}

TEST_CASE("trigger motif encoding: trigger gets a dash, synchron one atLeast option") {
  Macros macros = encode_macros(broadcast(1, 2));

  const RequireSpec& rp = macros.require.at(kP);
  CHECK_FALSE(rp.dash);
  REQUIRE(rp.options.size() == 1);
  CHECK(rp.options[0].mode == RequireMode::AtLeast);
  CHECK(rp.options[0].counts ==
        std::vector<std::pair<PortTypeRef, long long>>{{kQ, 1}});
  CHECK(macros.accept.at(kP).types == std::set<PortTypeRef>{kQ});

  const RequireSpec& rq = macros.require.at(kQ);
  CHECK(rq.dash);
  CHECK(rq.options.empty());
  CHECK(macros.accept.at(kQ).types == std::set<PortTypeRef>{kP, kQ});
}

TEST_CASE("singleton motif with multiplicity 1 encodes as dashes") {
  Model m = unary_diagram(3, {1, 1});
  Macros macros = encode_macros(m);
  CHECK(macros.require.at(kP).dash);
  CHECK(macros.require.at(kP).options.empty());
  CHECK(macros.accept.at(kP).dash);
  CHECK(macros.accept.at(kP).types.empty());
}

TEST_CASE("pairwise-rendezvous singleton motif keeps exact own-type counts") {
  // one port type, connectors of two instances each
  Model m = unary_diagram(3, {2, 2});
  Macros macros = encode_macros(m);
  const RequireSpec& rp = macros.require.at(kP);
  CHECK_FALSE(rp.dash);
  REQUIRE(rp.options.size() == 1);
  CHECK(rp.options[0].mode == RequireMode::Exact);
  CHECK(rp.options[0].counts ==
        std::vector<std::pair<PortTypeRef, long long>>{{kP, 1}});
  CHECK(macros.accept.at(kP).types == std::set<PortTypeRef>{kP});

  InteractionSet set = interactions_from_macros(macros, m, {});
  InteractionSet expected = InteractionSet::of({
      ia({pi("T1", 1, "p"), pi("T1", 2, "p")}),
      ia({pi("T1", 1, "p"), pi("T1", 3, "p")}),
      ia({pi("T1", 2, "p"), pi("T1", 3, "p")}),
  });
  CHECK(set == expected);
  CHECK(check_equivalence(m, {}).equal);
}

TEST_CASE("star macros admit exactly the binary interactions") {
  Model m = star_model(3);
  InteractionSet set = interactions_from_macros(encode_macros(m), m, {});
  InteractionSet expected = InteractionSet::of({
      ia({pi("T1", 1, "p"), pi("T2", 1, "q")}),
      ia({pi("T1", 1, "p"), pi("T2", 2, "q")}),
      ia({pi("T1", 1, "p"), pi("T2", 3, "q")}),
  });
  CHECK(set == expected);
}

TEST_CASE("trigger macros admit every subset anchored at the trigger") {
  Model m = broadcast(1, 2);
  InteractionSet set = interactions_from_macros(encode_macros(m), m, {});
  auto p = pi("T1", 1, "p");
  auto q1 = pi("T2", 1, "q");
  auto q2 = pi("T2", 2, "q");
  InteractionSet expected = InteractionSet::of({
      ia({q1}), ia({q2}), ia({q1, q2}), ia({p, q1}), ia({p, q2}), ia({p, q1, q2}),
  });
  CHECK(set == expected);
}

TEST_CASE("dash accept forbids companions") {
  Model m = unary_diagram(3, {1, 1});
  InteractionSet set = interactions_from_macros(encode_macros(m), m, {});
  InteractionSet expected = InteractionSet::of({
      ia({pi("T1", 1, "p")}), ia({pi("T1", 2, "p")}), ia({pi("T1", 3, "p")}),
  });
  CHECK(set == expected);
}

TEST_CASE("macro evaluation respects per-motif multiplicity bounds") {
  // trigger plus a multiplicity-2 synchron end over three instances: the
  // admitted interactions carry at most two q's, like the connectors do
  Model m = binary_diagram(1, {1, 3, PortTyping::Trigger}, 3, {2, 2, PortTyping::Synchron});
  REQUIRE(check_encodable(m, {}).verdict);
  EquivalenceReport report = check_equivalence(m, {});
  CHECK(report.equal);

  InteractionSet set = interactions_from_macros(encode_macros(m), m, {});
  Interaction all_q = ia({pi("T1", 1, "p"), pi("T2", 1, "q"), pi("T2", 2, "q"),
                          pi("T2", 3, "q")});
  CHECK_FALSE(set.contains(all_q));
}

TEST_CASE("equivalence holds on the worked examples") {
  CHECK(check_equivalence(broadcast(1, 2), {}).equal);

  Model dense = binary_diagram(2, {1, 2}, 2, {1, 2});
  EquivalenceReport report = check_equivalence(dense, {});
  CHECK(report.equal);
  CHECK(interactions_from_macros(encode_macros(dense), dense, {}).size() == 4);

  Model sparse = binary_diagram(2, {1, 1}, 2, {1, 1});
  CHECK_THROWS_AS(check_equivalence(sparse, {}), NotEncodableError);
}

TEST_CASE("encoding is independent of cardinalities") {
  Model a = broadcast(1, 2);
  Model b = broadcast(4, 3);
  CHECK(encode_macros(a) == encode_macros(b));
}

TEST_CASE("accept soundness on random diagrams") {
  std::mt19937 rng(31);
  for (int round = 0; round < 50; ++round) {
    long long n1 = 1 + rng() % 3, n2 = 1 + rng() % 3;
    EndSpec e1{1 + static_cast<long long>(rng() % 2), 1 + static_cast<long long>(rng() % 3),
               rng() % 2 ? PortTyping::Trigger : PortTyping::Synchron};
    EndSpec e2{1 + static_cast<long long>(rng() % 2), 1 + static_cast<long long>(rng() % 3),
               rng() % 2 ? PortTyping::Trigger : PortTyping::Synchron};
    Model m = binary_diagram(n1, e1, n2, e2);
    Macros macros = encode_macros(m);
    InteractionSet set = interactions_from_macros(macros, m, {});
    for (const auto& a : set.items)
      for (const auto& p : a.ports)
        for (const auto& q : a.ports) {
          if (p == q) continue;
          PortTypeRef pt{p.component, p.port};
          PortTypeRef qt{q.component, q.port};
          CHECK(macros.accept.at(pt).types.count(qt));
        }
  }
}

TEST_CASE("trigger ends always carry a dash require option") {
  std::mt19937 rng(37);
  for (int round = 0; round < 30; ++round) {
    long long n1 = 1 + rng() % 3, n2 = 1 + rng() % 3;
    EndSpec e1{1 + static_cast<long long>(rng() % 2), 1 + static_cast<long long>(rng() % 3),
               PortTyping::Trigger};
    EndSpec e2{1 + static_cast<long long>(rng() % 2), 1 + static_cast<long long>(rng() % 3),
               rng() % 2 ? PortTyping::Trigger : PortTyping::Synchron};
    Model m = binary_diagram(n1, e1, n2, e2);
    Macros macros = encode_macros(m);
    CHECK(macros.require.at(kP).dash);
    // a single trigger instance alone is macro-valid
    InteractionSet set = interactions_from_macros(macros, m, {});
    CHECK(set.contains(ia({pi("T1", 1, "p")})));
  }
}

TEST_CASE("glue document: star shape") {
  std::string xml = emit_glue(encode_macros(star_model(3)));
  CHECK(xml.find("<glue>") != std::string::npos);
  CHECK(xml.find("<port type=\"T1\" name=\"p\">") != std::string::npos);
  CHECK(xml.find("<port type=\"T2\" name=\"q\">") != std::string::npos);
  CHECK(xml.find("<option motif=\"g\" mode=\"exact\">") != std::string::npos);
  CHECK(xml.find("<part type=\"T2\" name=\"q\" count=\"1\"/>") != std::string::npos);
  // two ports, each with one require and one accept
  size_t ports = 0;
  for (size_t at = xml.find("<port"); at != std::string::npos;
       at = xml.find("<port", at + 1))
    ++ports;
  CHECK(ports == 2);
}

TEST_CASE("glue document: dashes render as none attributes") {
  Model m = unary_diagram(3, {1, 1});
  std::string xml = emit_glue(encode_macros(m));
  CHECK(xml.find("<require none=\"true\"/>") != std::string::npos);
  CHECK(xml.find("<accept none=\"true\"/>") != std::string::npos);
}

TEST_CASE("glue document round trip on random macros") {
  std::mt19937 rng(41);
  auto random_ref = [&] {
    return PortTypeRef{"T" + std::to_string(1 + rng() % 3),
                       std::string(1, static_cast<char>('a' + rng() % 4))};
  };
  for (int round = 0; round < 100; ++round) {
    Macros macros;
    int ports = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < ports; ++i) {
      PortTypeRef ref = random_ref();
      RequireSpec& req = macros.require[ref];
      AcceptSpec& acc = macros.accept[ref];
      req.dash = rng() % 3 == 0;
      int options = static_cast<int>(rng() % 3);
      for (int o = 0; o < options; ++o) {
        RequireOption opt;
        opt.motif = "m" + std::to_string(rng() % 3);
        opt.mode = rng() % 2 ? RequireMode::Exact : RequireMode::AtLeast;
        std::map<PortTypeRef, long long> counts;
        int parts = 1 + static_cast<int>(rng() % 3);
        for (int k = 0; k < parts; ++k) counts[random_ref()] = 1 + rng() % 3;
        opt.counts.assign(counts.begin(), counts.end());
        req.options.push_back(std::move(opt));
      }
      std::sort(req.options.begin(), req.options.end());
      req.options.erase(std::unique(req.options.begin(), req.options.end()),
                        req.options.end());
      acc.dash = rng() % 3 == 0;
      int accepts = static_cast<int>(rng() % 4);
      for (int k = 0; k < accepts; ++k) acc.types.insert(random_ref());
    }
    Macros parsed = parse_glue(emit_glue(macros));
    CHECK(parsed == macros);
  }
}
