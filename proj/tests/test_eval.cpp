#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oqa/eval.hpp"
#include "oqa/parser.hpp"
#include "support/generators.hpp"

using namespace oqa;

namespace {
Term V(const char* n) { return Term::variable(n); }
Term C(const char* n) { return Term::constant(n); }
}  // namespace

TEST_CASE("evaluation over instances", "[eval]") {
  // answer variables bound to nulls contribute nothing
  Instance d;
  d.add(Atom{"r2", {C("a"), Term::null(1)}});
  ConjunctiveQuery q{"q", {V("X")}, {Atom{"r2", {C("a"), V("X")}}}};
  CHECK(evaluate(q, d).empty());

  Instance d2;
  d2.add(Atom{"p", {C("a")}});
  d2.add(Atom{"p", {C("b")}});
  ConjunctiveQuery q2{"q", {V("X")}, {Atom{"p", {V("X")}}}};
  CHECK(evaluate(q2, d2) == AnswerSet{{C("a")}, {C("b")}});
}

TEST_CASE("Boolean evaluation", "[eval]") {
  Instance d;
  d.add(Atom{"r", {C("a"), C("b")}});
  CHECK_FALSE(bcq_holds(ConjunctiveQuery{"q", {}, {Atom{"r", {V("X"), V("X")}}}}, d));
  CHECK(bcq_holds(ConjunctiveQuery{"q", {}, {Atom{"r", {V("X"), V("Y")}}}}, d));
  ConjunctiveQuery nonbool{"q", {V("X")}, {Atom{"r", {V("X"), V("Y")}}}};
  CHECK_THROWS_AS(bcq_holds(nonbool, d), usage_error);
}

TEST_CASE("violation-style queries over neq-extended instances", "[eval]") {
  Instance d;
  d.add(Atom{"r3", {C("a"), C("b")}});
  d.add(Atom{"r3", {C("a"), C("c")}});
  d.add(Atom{"neq", {C("b"), C("c")}});
  d.add(Atom{"neq", {C("c"), C("b")}});
  ConjunctiveQuery q{"q",
                     {},
                     {Atom{"r3", {V("X"), V("Y")}}, Atom{"r3", {V("X"), V("Z")}},
                      Atom{"neq", {V("Y"), V("Z")}}}};
  CHECK(bcq_holds(q, d));
}

TEST_CASE("chase-based certain answers on the running example", "[eval]") {
  ParsedProgram p = parse_ontology(
      "tgd: r1(X) -> exists Y r2(X,Y).\n"
      "tgd: r2(X,Y) -> r3(X,Y).\n"
      "tgd: r3(X,Y) -> r4(X,Y).\n"
      "tgd: r4(X,Y) -> r5(X,Y).\n"
      "tgd: r5(X,Y) -> r2(X,Y).\n"
      "egd: r3(X,Y), r3(X,Z) -> Y = Z.\n"
      "fact: r1(a).\nfact: r3(a,b).\n");
  REQUIRE(p.ok());
  ConjunctiveQuery q{"q", {}, {Atom{"r2", {C("a"), C("b")}}}};

  CertainResult full = certain_answers_chase(q, p.data, p.ontology, 500);
  CHECK(full.status == CertainStatus::exact);
  CHECK(full.answers == AnswerSet{{}});

  Ontology tonly = p.ontology;
  tonly.egds.clear();
  CertainResult t = certain_answers_chase(q, p.data, tonly, 500);
  CHECK(t.status == CertainStatus::exact);
  CHECK(t.answers == AnswerSet{{}});

  Instance dprime;
  dprime.add(Atom{"r3", {C("a"), C("b")}});
  dprime.add(Atom{"r2", {C("a"), C("c")}});
  CertainResult u = certain_answers_chase(q, dprime, p.ontology, 500);
  CHECK(u.status == CertainStatus::unsat_theory);
}

TEST_CASE("evaluation is monotone under instance growth", "[eval]") {
  std::mt19937_64 rng(5);
  testgen::OntologyConfig cfg;
  for (int round = 0; round < 30; ++round) {
    Ontology o = testgen::random_ontology(rng, cfg);
    Instance d1 = testgen::random_instance(rng, o, 4);
    Instance d2 = d1;
    for (const Atom& a : testgen::random_instance(rng, o, 3).atoms()) d2.add(a);
    // a random single-predicate query with all-distinct answer variables
    for (const auto& [pred, arity] : o.schema) {
      ConjunctiveQuery q;
      q.head_predicate = "qq";
      Atom a{pred, {}};
      for (std::size_t i = 0; i < arity; ++i) {
        a.args.push_back(V(("A" + std::to_string(i)).c_str()));
        q.answer_terms.push_back(a.args.back());
      }
      q.body.push_back(a);
      AnswerSet s1 = evaluate(q, d1);
      AnswerSet s2 = evaluate(q, d2);
      for (const AnswerTuple& t : s1) CHECK(s2.count(t) == 1);
    }
  }
}

TEST_CASE("Boolean answers transfer along homomorphisms", "[eval]") {
  std::mt19937_64 rng(6);
  for (int round = 0; round < 40; ++round) {
    // d1 with nulls; d2 = image of d1 under a null-collapsing map, plus noise
    Instance d1;
    std::vector<Term> terms = {C("a"), C("b"), Term::null(1), Term::null(2)};
    auto pick_term = [&]() { return terms[rng() % terms.size()]; };
    for (int i = 0; i < 4; ++i) {
      if (rng() % 2)
        d1.add(Atom{"r", {pick_term(), pick_term()}});
      else
        d1.add(Atom{"s", {pick_term()}});
    }
    std::map<Term, Term> h = {{Term::null(1), pick_term()}, {Term::null(2), pick_term()}};
    // close the map so nulls never remain mapped to themselves via chains
    for (auto& [k, v] : h) {
      auto it = h.find(v);
      if (it != h.end()) v = it->second;
    }
    Instance d2;
    for (Atom a : d1.atoms()) {
      for (Term& t : a.args) {
        auto it = h.find(t);
        if (it != h.end()) t = it->second;
      }
      d2.add(a);
    }
    d2.add(Atom{"s", {C("b")}});
    // random small Boolean queries over r/2 and s/1
    for (int k = 0; k < 5; ++k) {
      auto pick_query_term = [&]() -> Term {
        if (rng() % 2) return V(("X" + std::to_string(rng() % 2)).c_str());
        return C(rng() % 2 ? "a" : "b");
      };
      ConjunctiveQuery q{"q", {}, {}};
      if (rng() % 2)
        q.body.push_back(Atom{"r", {pick_query_term(), pick_query_term()}});
      else
        q.body.push_back(Atom{"s", {pick_query_term()}});
      if (bcq_holds(q, d1)) CHECK(bcq_holds(q, d2));
    }
  }
}

TEST_CASE("prefix answers only grow on TGD-only ontologies", "[eval]") {
  std::mt19937_64 rng(8);
  testgen::OntologyConfig cfg;
  for (int round = 0; round < 15; ++round) {
    Ontology o = testgen::random_ontology(rng, cfg);
    o.egds.clear();
    Instance d = testgen::random_instance(rng, o, 4);
    for (const auto& [pred, arity] : o.schema) {
      ConjunctiveQuery q;
      q.head_predicate = "qq";
      Atom a{pred, {}};
      for (std::size_t i = 0; i < arity; ++i) {
        a.args.push_back(V(("A" + std::to_string(i)).c_str()));
        q.answer_terms.push_back(a.args.back());
      }
      q.body.push_back(a);
      AnswerSet prev;
      for (std::size_t k = 0; k <= 20; k += 5) {
        ChaseOutcome pr = chase_prefix(d, o, k);
        AnswerSet cur = evaluate(q, pr.instance);
        for (const AnswerTuple& t : prev) CHECK(cur.count(t) == 1);
        prev = std::move(cur);
      }
    }
  }
}
