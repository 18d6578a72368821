#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oqa/cli.hpp"

using namespace oqa;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  REQUIRE(f.good());
  f << text;
}

}  // namespace

TEST_CASE("ask answers the running example positively", "[cli]") {
  RunResult r = run({"ask", "--onto", "data/example1.onto", "--query", "q"});
  CHECK(r.code == exit_positive);
  CHECK(r.out.find("true") != std::string::npos);
}

TEST_CASE("check sat reports the hard violation with its witness", "[cli]") {
  RunResult r = run({"check", "sat", "--onto", "data/example3.onto"});
  CHECK(r.code == exit_negative);
  CHECK(r.out.find("unsat") != std::string::npos);
  CHECK(r.out.find("witness") != std::string::npos);
  CHECK(r.out.find("neq(Y,Z)") != std::string::npos);
}

TEST_CASE("check nonconflicting counts its containment checks", "[cli]") {
  RunResult r = run({"check", "nonconflicting", "--onto", "data/companion3.onto"});
  CHECK(r.code == exit_positive);
  CHECK(r.out.find("non-conflicting") != std::string::npos);
  CHECK(r.out.find("2 containment checks") != std::string::npos);
}

TEST_CASE("check sticky flags the transitivity rule", "[cli]") {
  std::string path = temp_path("oqa_trans.onto");
  write_file(path, "tgd: r(X,Y), r(Y,Z) -> r(X,Z).\n");
  RunResult r = run({"check", "sticky", "--onto", path});
  CHECK(r.code == exit_negative);
  CHECK(r.out.find("non-sticky") != std::string::npos);
  CHECK(r.out.find("Y") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("rewrite prints one query per line in DSL syntax", "[cli]") {
  RunResult r = run({"rewrite", "--onto", "data/companion3.onto", "--query", "q"});
  CHECK(r.code == exit_positive);
  std::istringstream lines(r.out);
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    ++count;
    CHECK(line.find(":-") != std::string::npos);
    CHECK(line.back() == '.');
  }
  // answer variables keep the existential rule out: r, s and t bodies only
  CHECK(count == 3);
}

TEST_CASE("chase writes the trace and the CSV export", "[cli]") {
  std::string trace = temp_path("oqa_example2.trace.jsonl");
  std::string csv = temp_path("oqa_example2.csv");
  RunResult r = run({"chase", "--onto", "data/example2.onto", "--budget", "3",
                     "--trace", trace, "--csv", csv});
  CHECK(r.code == exit_indeterminate);  // budget 3 leaves triggers pending
  CHECK(slurp(trace) == slurp("tests/golden/example2_k3.trace.jsonl"));
  CHECK(slurp(csv) == "r,a,b\nr,b,a\ns,b\n");
  std::remove(trace.c_str());
  std::remove(csv.c_str());
}

TEST_CASE("exit codes agree between output modes and verdict fields", "[cli]") {
  struct Case {
    std::vector<std::string> args;
    std::string verdict_field;
  };
  std::vector<Case> cases = {
      {{"ask", "--onto", "data/example1.onto", "--query", "q"}, "verdict"},
      {{"check", "sat", "--onto", "data/example3.onto"}, "satisfiable"},
      {{"check", "sat", "--onto", "data/example1.onto"}, "satisfiable"},
      {{"check", "sticky", "--onto", "data/companion3.onto"}, "sticky"},
      {{"check", "nonconflicting", "--onto", "data/conflicting.onto"}, "nonconflicting"},
      {{"check", "separable", "--onto", "data/nonseparable.onto", "--samples", "5"}, ""},
  };
  for (const Case& c : cases) {
    RunResult plain = run(c.args);
    std::string path = temp_path("oqa_report.json");
    std::vector<std::string> with_json = c.args;
    with_json.push_back("--json");
    with_json.push_back(path);
    RunResult jr = run(with_json);
    INFO(c.args[0] << " " << (c.args.size() > 1 ? c.args[1] : ""));
    CHECK(plain.code == jr.code);
    json doc = json::parse(slurp(path));
    if (c.verdict_field == "verdict") {
      CHECK((doc["verdict"] == "true") == (jr.code == exit_positive));
    } else if (!c.verdict_field.empty()) {
      CHECK(doc[c.verdict_field].is_boolean());
      CHECK(doc[c.verdict_field].get<bool>() == (jr.code == exit_positive));
    } else {
      CHECK((jr.code == exit_positive) == doc["counterexamples"].empty());
    }
    std::remove(path.c_str());
  }
}

TEST_CASE("input errors exit with code 2", "[cli]") {
  CHECK(run({"frobnicate"}).code == exit_input_error);
  CHECK(run({"ask", "--onto", "does_not_exist.onto", "--query", "q"}).code ==
        exit_input_error);
  CHECK(run({"ask", "--onto", "data/example1.onto", "--query", "nope"}).code ==
        exit_input_error);
  CHECK(run({"chase", "--onto", "data/example1.onto", "--bogus-flag"}).code ==
        exit_input_error);

  std::string path = temp_path("oqa_bad.onto");
  write_file(path, "fact: r1(X).\n");
  RunResult r = run({"chase", "--onto", path});
  CHECK(r.code == exit_input_error);
  CHECK(r.err.find("ground") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("csv data merges into the instance", "[cli]") {
  std::string csv = temp_path("oqa_extra.csv");
  write_file(csv, "r1,b\n");
  RunResult r = run({"chase", "--onto", "data/example1.onto", "--data", csv});
  CHECK(r.code == exit_positive);
  CHECK(r.out.find("r2(b,") != std::string::npos);
  std::remove(csv.c_str());
}
