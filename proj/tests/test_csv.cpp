#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "oqa/csv.hpp"

using namespace oqa;

namespace {
Term C(const char* n) { return Term::constant(n); }
}  // namespace

TEST_CASE("csv facts import", "[cli]") {
  std::istringstream in("r,a,b\ns,c\n\nr,b,a\n");
  CsvImport imp = import_facts_csv(in);
  CHECK(imp.errors.empty());
  REQUIRE(imp.atoms.size() == 3);
  CHECK(imp.atoms[0] == Atom{"r", {C("a"), C("b")}});
  CHECK(imp.atoms[1] == Atom{"s", {C("c")}});
}

TEST_CASE("csv null tokens round-trip", "[cli]") {
  std::istringstream in("r,a,_z3\n");
  CsvImport imp = import_facts_csv(in);
  CHECK(imp.errors.empty());
  REQUIRE(imp.atoms.size() == 1);
  CHECK(imp.atoms[0] == Atom{"r", {C("a"), Term::null(3)}});
}

TEST_CASE("csv errors carry line numbers", "[cli]") {
  std::istringstream in("r,a\nBad,x\nr,1x\n");
  CsvImport imp = import_facts_csv(in);
  REQUIRE(imp.errors.size() == 2);
  CHECK(imp.errors[0].find("line 2") != std::string::npos);
  CHECK(imp.errors[1].find("line 3") != std::string::npos);
}

TEST_CASE("csv export is sorted and stable under reimport", "[cli]") {
  Instance d;
  d.add(Atom{"s", {C("c")}});
  d.add(Atom{"r", {C("b"), C("a")}});
  d.add(Atom{"r", {C("a"), C("b")}});
  std::ostringstream out;
  export_facts_csv(d, out);
  CHECK(out.str() == "r,a,b\nr,b,a\ns,c\n");

  std::istringstream back(out.str());
  CsvImport imp = import_facts_csv(back);
  REQUIRE(imp.errors.empty());
  Instance d2(imp.atoms);
  CHECK(d2 == d);
  std::ostringstream out2;
  export_facts_csv(d2, out2);
  CHECK(out2.str() == out.str());
}
