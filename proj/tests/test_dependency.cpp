#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oqa/chase.hpp"
#include "oqa/dependency.hpp"
#include "oqa/eval.hpp"
#include "support/generators.hpp"

using namespace oqa;

namespace {
Term V(const char* n) { return Term::variable(n); }
Term C(const char* n) { return Term::constant(n); }
}  // namespace

TEST_CASE("dependency validation", "[logic]") {
  TGD bad{{Atom{"r", {C("a")}}}, {Atom{"s", {C("a")}}}};
  CHECK_THROWS_AS(bad.validate(), usage_error);
  EGD e{{Atom{"r", {V("X"), V("Y")}}}, "X", "Z"};
  CHECK_THROWS_AS(e.validate(), usage_error);
  EGD trivial{{Atom{"r", {V("X"), V("Y")}}}, "X", "X"};
  CHECK_THROWS_AS(trivial.validate(), usage_error);
}

TEST_CASE("frontier and existential variables", "[logic]") {
  TGD t{{Atom{"r", {V("X"), V("Y")}}},
        {Atom{"r", {V("Z"), V("X")}}, Atom{"s", {V("Z")}}}};
  CHECK(t.frontier() == std::set<std::string>{"X"});
  CHECK(t.existentials() == std::vector<std::string>{"Z"});
}

TEST_CASE("head normalization splits through an auxiliary predicate", "[logic]") {
  TGD sigma1{{Atom{"r", {V("X"), V("Y")}}},
             {Atom{"r", {V("Z"), V("X")}}, Atom{"s", {V("Z")}}}};
  auto out = normalize_heads(std::vector<TGD>{sigma1});
  REQUIRE(out.size() == 3);
  Atom aux{"aux1", {V("Z"), V("X")}};
  CHECK(out[0] == TGD{{Atom{"r", {V("X"), V("Y")}}}, {aux}});
  CHECK(out[1] == TGD{{aux}, {Atom{"r", {V("Z"), V("X")}}}});
  CHECK(out[2] == TGD{{aux}, {Atom{"s", {V("Z")}}}});
}

TEST_CASE("single-head sets pass through normalization unchanged", "[logic]") {
  std::vector<TGD> tgds = {
      TGD{{Atom{"p", {V("X")}}}, {Atom{"q", {V("X")}}}},
      TGD{{Atom{"q", {V("X")}}}, {Atom{"r", {V("X"), V("X")}}}}};
  CHECK(normalize_heads(tgds) == tgds);
}

TEST_CASE("normalization covers several existentials", "[logic]") {
  TGD sigma{{Atom{"p", {V("X")}}},
            {Atom{"t", {V("X"), V("Y")}}, Atom{"u", {V("Y"), V("W")}}}};
  auto out = normalize_heads(std::vector<TGD>{sigma});
  REQUIRE(out.size() == 3);
  Atom aux{"aux1", {V("X"), V("Y"), V("W")}};
  CHECK(out[0] == TGD{{Atom{"p", {V("X")}}}, {aux}});
  CHECK(out[1] == TGD{{aux}, {Atom{"t", {V("X"), V("Y")}}}});
  CHECK(out[2] == TGD{{aux}, {Atom{"u", {V("Y"), V("W")}}}});
}

TEST_CASE("dependency satisfaction checks", "[logic]") {
  Instance d;
  d.add(Atom{"r", {C("a"), C("b")}});
  d.add(Atom{"s", {C("b")}});
  TGD t{{Atom{"r", {V("X"), V("Y")}}}, {Atom{"s", {V("Y")}}}};
  CHECK(satisfies(d, t));
  TGD t2{{Atom{"r", {V("X"), V("Y")}}}, {Atom{"s", {V("X")}}}};
  CHECK_FALSE(satisfies(d, t2));
  TGD t3{{Atom{"s", {V("X")}}}, {Atom{"r", {V("X"), V("Z")}}}};
  CHECK_FALSE(satisfies(d, t3));  // needs some r(b,_)
  Instance d2 = d;
  d2.add(Atom{"r", {C("b"), C("c")}});
  CHECK(satisfies(d2, t3));

  EGD key{{Atom{"r", {V("X"), V("Y")}}, Atom{"r", {V("X"), V("Z")}}}, "Y", "Z"};
  CHECK(satisfies(d, key));
  Instance viol = d;
  viol.add(Atom{"r", {C("a"), C("c")}});
  CHECK_FALSE(satisfies(viol, key));

  NegativeConstraint nc{{Atom{"s", {V("X")}}}};
  CHECK_FALSE(satisfies(d, nc));
}

TEST_CASE("normalization preserves Boolean answers over original predicates", "[logic]") {
  std::mt19937_64 rng(2024);
  testgen::OntologyConfig cfg;
  cfg.max_tgds = 4;
  cfg.max_arity = 2;
  cfg.max_head_atoms = 2;
  cfg.existential_percent = 15;
  int tested = 0;
  for (int round = 0; round < 120 && tested < 30; ++round) {
    Ontology o = testgen::random_ontology(rng, cfg);
    o.egds.clear();
    Instance d = testgen::random_instance(rng, o, 4);
    ChaseOutcome before = chase(d, o, 300);
    if (before.kind != ChaseResultKind::completed) continue;
    Ontology n = normalize_heads(o);
    ChaseOutcome after = chase(d, n, 2000);
    if (after.kind != ChaseResultKind::completed) continue;
    ++tested;
    for (const auto& [pred, arity] : o.schema) {
      ConjunctiveQuery q;
      q.head_predicate = "qq";
      Atom a{pred, {}};
      for (std::size_t i = 0; i < arity; ++i) {
        a.args.push_back(V(("A" + std::to_string(i)).c_str()));
        q.answer_terms.push_back(a.args.back());
      }
      q.body.push_back(a);
      INFO("predicate " << pred);
      CHECK(evaluate(q, before.instance) == evaluate(q, after.instance));
      ConjunctiveQuery b{"qq", {}, {a}};
      CHECK(bcq_holds(b, before.instance) == bcq_holds(b, after.instance));
    }
  }
  CHECK(tested >= 20);
}
