#include <catch2/catch_amalgamated.hpp>

#include "oqa/query.hpp"

using namespace oqa;

namespace {
Term V(const char* n) { return Term::variable(n); }
Term C(const char* n) { return Term::constant(n); }
}  // namespace

TEST_CASE("freezing builds the canonical database", "[logic]") {
  ConjunctiveQuery q{"q",
                     {V("X5"), V("Y5")},
                     {Atom{"r", {V("X5"), V("Y5")}}, Atom{"r", {V("X5"), V("Z5")}}}};
  FrozenQuery fz = freeze(q);
  Instance expected;
  expected.add(Atom{"r", {C("frz_X5"), C("frz_Y5")}});
  expected.add(Atom{"r", {C("frz_X5"), C("frz_Z5")}});
  CHECK(fz.instance == expected);
  CHECK(fz.tuple == std::vector<Term>{C("frz_X5"), C("frz_Y5")});
}

TEST_CASE("freezing a Boolean query with constants", "[logic]") {
  ConjunctiveQuery q{"q", {}, {Atom{"p", {C("a")}}}};
  FrozenQuery fz = freeze(q);
  Instance expected;
  expected.add(Atom{"p", {C("a")}});
  CHECK(fz.instance == expected);
  CHECK(fz.tuple.empty());
}

TEST_CASE("freezing keeps repeated variables repeated", "[logic]") {
  ConjunctiveQuery q{"q", {V("X")}, {Atom{"s", {V("X"), V("X")}}}};
  FrozenQuery fz = freeze(q);
  Instance expected;
  expected.add(Atom{"s", {C("frz_X"), C("frz_X")}});
  CHECK(fz.instance == expected);
  CHECK(fz.tuple == std::vector<Term>{C("frz_X")});
}

TEST_CASE("freezing rejects reserved constants", "[logic]") {
  ConjunctiveQuery q{"q", {}, {Atom{"p", {C("frz_X")}}}};
  CHECK_THROWS_AS(freeze(q), usage_error);
}

TEST_CASE("query validation", "[logic]") {
  ConjunctiveQuery q{"q", {V("X")}, {Atom{"p", {V("Y")}}}};
  CHECK_THROWS_AS(q.validate(), usage_error);
}

TEST_CASE("instances convert to canonical Boolean queries", "[logic]") {
  Instance d;
  d.add(Atom{"r", {C("a"), Term::null(2)}});
  d.add(Atom{"s", {Term::null(2)}});
  ConjunctiveQuery q = instance_to_bcq(d);
  CHECK(q.arity() == 0);
  REQUIRE(q.body.size() == 2);
  CHECK(q.body[0] == Atom{"r", {C("a"), V("N2")}});
  CHECK(q.body[1] == Atom{"s", {V("N2")}});
}
