#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "oqa/parser.hpp"

using namespace oqa;

namespace {
Term V(const char* n) { return Term::variable(n); }
Term C(const char* n) { return Term::constant(n); }

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("parsing the statement kinds", "[cli]") {
  ParsedProgram p = parse_ontology(
      "tgd: r1(X) -> exists Y r2(X,Y).\n"
      "egd: r3(X,Y), r3(X,Z) -> Y = Z.\n"
      "constraint: p(X), q(X) -> false.\n"
      "fact: r1(a).\n"
      "query: qq :- r2(a,b).\n");
  REQUIRE(p.ok());
  REQUIRE(p.ontology.tgds.size() == 1);
  CHECK(p.ontology.tgds[0] ==
        TGD{{Atom{"r1", {V("X")}}}, {Atom{"r2", {V("X"), V("Y")}}}});
  REQUIRE(p.ontology.egds.size() == 1);
  CHECK(p.ontology.egds[0] ==
        EGD{{Atom{"r3", {V("X"), V("Y")}}, Atom{"r3", {V("X"), V("Z")}}}, "Y", "Z"});
  REQUIRE(p.ontology.constraints.size() == 1);
  CHECK(p.data.contains(Atom{"r1", {C("a")}}));
  REQUIRE(p.queries.count("qq") == 1);
  CHECK(p.queries.at("qq").body == std::vector<Atom>{Atom{"r2", {C("a"), C("b")}}});
}

TEST_CASE("facts must be ground", "[cli]") {
  ParsedProgram p = parse_ontology("fact: r1(X).\n");
  REQUIRE_FALSE(p.ok());
  CHECK(p.diagnostics[0].message.find("ground") != std::string::npos);
}

TEST_CASE("diagnostics carry positions and keep going", "[cli]") {
  ParsedProgram p = parse_ontology(
      "tgd: r1(X) -> r2(X,Y).\n"      // undeclared existential
      "fact: r1(a).\n"                 // fine
      "egd: r3(X,Y) -> Y = Y.\n"       // trivial equality
      "fact: r1(a,b).\n");             // arity clash
  REQUIRE(p.diagnostics.size() >= 3);
  CHECK(p.diagnostics[0].line == 1);
  bool arity_reported = false;
  for (const Diagnostic& d : p.diagnostics)
    if (d.message.find("arity") != std::string::npos) arity_reported = true;
  CHECK(arity_reported);
}

TEST_CASE("reserved names are rejected", "[cli]") {
  CHECK_FALSE(parse_ontology("fact: neq(a,b).\n").ok());
  CHECK_FALSE(parse_ontology("fact: aux1(a).\n").ok());
  CHECK_FALSE(parse_ontology("fact: p(frz_x).\n").ok());
  CHECK(parse_ontology("fact: auxiliary(a).\n").ok());  // only aux<digits> is reserved
}

TEST_CASE("dependencies must be constant-free", "[cli]") {
  ParsedProgram p = parse_ontology("tgd: r(a,Y) -> s(Y).\n");
  REQUIRE_FALSE(p.ok());
  CHECK(p.diagnostics[0].message.find("constant-free") != std::string::npos);
}

TEST_CASE("query heads stay outside the data schema", "[cli]") {
  ParsedProgram p = parse_ontology(
      "fact: q(a).\n"
      "query: q :- q(a).\n");
  REQUIRE_FALSE(p.ok());
}

TEST_CASE("duplicate query names are flagged", "[cli]") {
  ParsedProgram p = parse_ontology(
      "fact: r(a).\n"
      "query: q :- r(a).\n"
      "query: q(X) :- r(X).\n");
  REQUIRE_FALSE(p.ok());
}

TEST_CASE("several existentials with or without a separating comma", "[cli]") {
  ParsedProgram a = parse_ontology("tgd: p(X) -> exists Y, W t(X,Y), u(Y,W).\n");
  ParsedProgram b = parse_ontology("tgd: p(X) -> exists Y, W, t(X,Y), u(Y,W).\n");
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(a.ontology.tgds == b.ontology.tgds);
  CHECK(a.ontology.tgds[0].existentials() == std::vector<std::string>{"Y", "W"});
}

TEST_CASE("documents round-trip through the printer", "[cli]") {
  for (const char* path : {"data/example1.onto", "data/example2.onto",
                           "data/example3.onto", "data/companion3.onto",
                           "data/nonseparable.onto", "data/conflicting.onto"}) {
    INFO(path);
    ParsedProgram p1 = parse_ontology(slurp(path));
    REQUIRE(p1.ok());
    std::string text = print(p1.doc);
    ParsedProgram p2 = parse_ontology(text);
    REQUIRE(p2.ok());
    CHECK(p1.doc == p2.doc);
    CHECK(print(p2.doc) == text);  // printing is a fixpoint
  }
}

TEST_CASE("comments and whitespace are skipped", "[cli]") {
  ParsedProgram p = parse_ontology(
      "# leading comment\n"
      "fact: r(a).  # trailing comment\n"
      "\n"
      "   fact: r(b).\n");
  REQUIRE(p.ok());
  CHECK(p.data.size() == 2);
}

TEST_CASE("lexer reports stray characters", "[cli]") {
  ParsedProgram p = parse_ontology("fact: r(a)!\n");
  REQUIRE_FALSE(p.ok());
}
