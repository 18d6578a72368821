#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oqa/bench.hpp"
#include "oqa/csv.hpp"
#include "oqa/json_io.hpp"
#include "oqa/parser.hpp"
#include "oqa/separability.hpp"

namespace oqa {

// exit code contract:
//   0 positive verdict (sat / true / sticky / non-conflicting / no counterexample)
//   1 negative verdict
//   2 input error
//   3 budget or cap exhausted (indeterminate)
inline constexpr int exit_positive = 0;
inline constexpr int exit_negative = 1;
inline constexpr int exit_input_error = 2;
inline constexpr int exit_indeterminate = 3;

namespace cli_detail {

inline bool write_json_file(const std::string& path, const json& j, std::ostream& err) {
  std::ofstream f(path);
  if (!f) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  f << j.dump(2) << "\n";
  return true;
}

inline std::optional<ParsedProgram> load_program(const std::string& onto_path,
                                                 const std::vector<std::string>& data_paths,
                                                 std::ostream& err) {
  std::ifstream f(onto_path);
  if (!f) {
    err << "error: cannot read " << onto_path << "\n";
    return std::nullopt;
  }
  std::stringstream buf;
  buf << f.rdbuf();
  ParsedProgram prog = parse_ontology(buf.str());
  if (!prog.ok()) {
    for (const Diagnostic& d : prog.diagnostics)
      err << onto_path << ":" << to_string(d) << "\n";
    return std::nullopt;
  }
  for (const std::string& path : data_paths) {
    std::ifstream df(path);
    if (!df) {
      err << "error: cannot read " << path << "\n";
      return std::nullopt;
    }
    CsvImport imp = import_facts_csv(df);
    if (!imp.errors.empty()) {
      for (const std::string& e : imp.errors) err << path << ": " << e << "\n";
      return std::nullopt;
    }
    for (const Atom& a : imp.atoms) {
      auto it = prog.ontology.schema.find(a.predicate);
      if (it == prog.ontology.schema.end()) {
        if (detail::reserved_predicate(a.predicate)) {
          err << path << ": predicate name '" << a.predicate << "' is reserved\n";
          return std::nullopt;
        }
        prog.ontology.schema[a.predicate] = a.arity();
      } else if (it->second != a.arity()) {
        err << path << ": " << a.predicate << " used with arity " << a.arity()
            << " but the schema has " << it->second << "\n";
        return std::nullopt;
      }
      prog.data.add(a);
    }
  }
  return prog;
}

inline void print_instance(const Instance& d, std::ostream& out) {
  out << "instance (" << d.size() << " atoms):\n";
  for (const Atom& a : d.atoms()) out << "  " << to_string(a) << "\n";
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ontological query answering with existential rules and equality constraints"};
  app.require_subcommand(1);

  std::string onto_path, json_path, trace_path, csv_path, query_name;
  std::vector<std::string> data_paths;
  std::size_t budget = 1000, cap = 100000;
  std::size_t depth = 10, samples = 50, size = 5;
  std::uint64_t seed = 1;
  std::string method = "auto";
  std::string check_mode;
  std::string family = "permcascade";
  std::size_t max_arity = 4;
  bool show_ontology = false;

  auto add_common = [&](CLI::App* cmd, bool with_data = true) {
    cmd->add_option("--onto", onto_path, "ontology DSL file")->required();
    if (with_data) cmd->add_option("--data", data_paths, "CSV fact file (repeatable)");
    cmd->add_option("--json", json_path, "write a structured report to this path");
  };

  CLI::App* chase_cmd = app.add_subcommand("chase", "run the oblivious chase");
  add_common(chase_cmd);
  chase_cmd->add_option("--budget", budget, "step budget")->capture_default_str();
  chase_cmd->add_option("--trace", trace_path, "write the step trace as JSONL");
  chase_cmd->add_option("--csv", csv_path, "export the resulting instance as CSV");

  CLI::App* ask_cmd = app.add_subcommand("ask", "certain answers for a named query");
  add_common(ask_cmd);
  ask_cmd->add_option("--query", query_name, "query name (head predicate)")->required();
  ask_cmd->add_option("--budget", budget, "chase step budget")->capture_default_str();
  ask_cmd->add_option("--cap", cap, "rewriting cap")->capture_default_str();
  ask_cmd->add_option("--method", method, "auto | rewriting | chase")->capture_default_str();

  CLI::App* rewrite_cmd = app.add_subcommand("rewrite", "UCQ perfect rewriting of a named query");
  add_common(rewrite_cmd, false);
  rewrite_cmd->add_option("--query", query_name, "query name (head predicate)")->required();
  rewrite_cmd->add_option("--cap", cap, "rewriting cap")->capture_default_str();

  CLI::App* check_cmd = app.add_subcommand("check", "sticky | nonconflicting | sat | separable");
  check_cmd->add_option("mode", check_mode, "what to check")->required();
  add_common(check_cmd);
  check_cmd->add_option("--budget", budget, "chase step budget")->capture_default_str();
  check_cmd->add_option("--cap", cap, "rewriting/expansion cap")->capture_default_str();
  check_cmd->add_option("--depth", depth, "probe: max prefix length")->capture_default_str();
  check_cmd->add_option("--samples", samples, "probe: random instances")->capture_default_str();
  check_cmd->add_option("--size", size, "probe: max facts per instance")->capture_default_str();
  check_cmd->add_option("--seed", seed, "probe: RNG seed")->capture_default_str();

  CLI::App* bench_cmd = app.add_subcommand("bench", "separability-check scaling benchmark");
  bench_cmd->add_option("--family", family, "generator family")->capture_default_str();
  bench_cmd->add_option("--max-arity", max_arity, "largest predicate arity")->required();
  bench_cmd->add_option("--seed", seed, "generator seed")->capture_default_str();
  bench_cmd->add_option("--json", json_path, "write a structured report to this path");
  bench_cmd->add_flag("--show-ontology", show_ontology, "print the generated ontology");

  std::vector<const char*> argv;
  argv.push_back("oqa");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return exit_positive;
    }
    err << "error: " << e.what() << "\n";
    return exit_input_error;
  }

  try {
    if (bench_cmd->parsed()) {
      BenchReport rep = run_bench(family, max_arity, seed);
      out << bench_table(rep);
      if (show_ontology) out << "\n" << print(bench_document(family, max_arity));
      if (!json_path.empty()) {
        json j;
        j["command"] = "bench";
        j["family"] = rep.family;
        j["seed"] = rep.seed;
        json rows = json::array();
        for (const BenchRow& r : rep.rows) {
          json row;
          row["Max arity"] = r.max_arity;
          row["Containment checks"] = r.containment_checks;
          row["Time (s)"] = r.time_seconds;
          rows.push_back(row);
        }
        j["rows"] = rows;
        if (!cli_detail::write_json_file(json_path, j, err)) return exit_input_error;
      }
      return exit_positive;
    }

    auto prog = cli_detail::load_program(onto_path, data_paths, err);
    if (!prog) return exit_input_error;

    if (chase_cmd->parsed()) {
      ChaseOutcome o = chase(prog->data, prog->ontology, budget);
      out << "chase " << chase_kind_name(o.kind) << " after " << o.steps << " steps\n";
      if (o.kind == ChaseResultKind::failed)
        out << "hard violation of egd" << o.fail_egd + 1 << ": " << to_string(o.clash->first)
            << " = " << to_string(o.clash->second) << "\n";
      cli_detail::print_instance(o.instance, out);
      if (!trace_path.empty()) {
        std::ofstream tf(trace_path);
        if (!tf) {
          err << "error: cannot write " << trace_path << "\n";
          return exit_input_error;
        }
        tf << trace_to_jsonl(o.trace);
      }
      if (!csv_path.empty()) {
        std::ofstream cf(csv_path);
        if (!cf) {
          err << "error: cannot write " << csv_path << "\n";
          return exit_input_error;
        }
        export_facts_csv(o.instance, cf);
      }
      if (!json_path.empty()) {
        json j;
        j["command"] = "chase";
        j.update(chase_outcome_json(o));
        if (!cli_detail::write_json_file(json_path, j, err)) return exit_input_error;
      }
      switch (o.kind) {
        case ChaseResultKind::completed: return exit_positive;
        case ChaseResultKind::failed: return exit_negative;
        case ChaseResultKind::exhausted: return exit_indeterminate;
      }
    }

    if (ask_cmd->parsed()) {
      auto qit = prog->queries.find(query_name);
      if (qit == prog->queries.end()) {
        err << "error: no query named " << query_name << "\n";
        return exit_input_error;
      }
      const ConjunctiveQuery& q = qit->second;
      Ontology norm = normalize_heads(prog->ontology);
      bool sticky = check_sticky(norm.tgds).sticky;
      bool use_rewriting;
      if (method == "auto") {
        use_rewriting = sticky;
      } else if (method == "rewriting") {
        if (!sticky) {
          err << "error: --method rewriting needs a sticky TGD set\n";
          return exit_input_error;
        }
        use_rewriting = true;
      } else if (method == "chase") {
        use_rewriting = false;
      } else {
        err << "error: unknown method " << method << "\n";
        return exit_input_error;
      }

      bool positive = false, definitive = true, unsat = false;
      AnswerSet answers;
      if (use_rewriting) {
        CertainAnswerOutcome r = answer_certain(q, prog->data, prog->ontology, false, budget, cap);
        if (r.warning) err << "warning: " << *r.warning << "\n";
        unsat = r.unsat_theory;
        answers = r.answers;
        definitive = r.sat.definitive || !r.sat.satisfiable;
        positive = unsat || !answers.empty();
      } else {
        CertainResult r = certain_answers_chase(q, prog->data, prog->ontology, budget);
        unsat = r.status == CertainStatus::unsat_theory;
        answers = r.answers;
        definitive = r.status != CertainStatus::lower_bound;
        positive = unsat || !answers.empty();
      }

      if (unsat) {
        out << "unsat theory: entailment trivially holds\n";
        out << (q.arity() == 0 ? "true\n" : "all tuples\n");
      } else if (q.arity() == 0) {
        out << (positive ? "true" : "false") << (definitive ? "" : " (at budget)") << "\n";
      } else {
        out << answers.size() << " answers" << (definitive ? "" : " (lower bound)") << ":\n";
        for (const AnswerTuple& t : answers) {
          for (std::size_t i = 0; i < t.size(); ++i) out << (i ? "," : "") << to_string(t[i]);
          out << "\n";
        }
      }
      if (!json_path.empty()) {
        json j;
        j["command"] = "ask";
        j["query"] = query_name;
        j["method"] = use_rewriting ? "rewriting" : "chase";
        j["verdict"] = unsat ? "unsat-theory" : positive ? "true" : definitive ? "false" : "unknown";
        j["definitive"] = definitive;
        j["answers"] = answers_json(answers);
        if (!cli_detail::write_json_file(json_path, j, err)) return exit_input_error;
      }
      if (positive) return exit_positive;
      return definitive ? exit_negative : exit_indeterminate;
    }

    if (rewrite_cmd->parsed()) {
      auto qit = prog->queries.find(query_name);
      if (qit == prog->queries.end()) {
        err << "error: no query named " << query_name << "\n";
        return exit_input_error;
      }
      Ontology norm = normalize_heads(prog->ontology);
      StickinessReport sticky = check_sticky(norm.tgds);
      if (!sticky.sticky) {
        err << "error: rewriting needs a sticky TGD set; variable " << sticky.witness->variable
            << " of rule #" << sticky.witness->tgd + 1 << " breaks stickiness\n";
        return exit_input_error;
      }
      RewriteSet rs = perfect_rewrite(qit->second, norm.tgds, cap);
      for (const ConjunctiveQuery& r : rs.queries) out << to_string(r) << ".\n";
      if (!json_path.empty()) {
        json j;
        j["command"] = "rewrite";
        j["query"] = query_name;
        j["size"] = rs.queries.size();
        json arr = json::array();
        for (const ConjunctiveQuery& r : rs.queries) arr.push_back(to_string(r));
        j["rewritings"] = arr;
        if (!cli_detail::write_json_file(json_path, j, err)) return exit_input_error;
      }
      return exit_positive;
    }

    if (check_cmd->parsed()) {
      json j;
      j["command"] = "check";
      j["kind"] = check_mode;
      if (check_mode == "sticky") {
        StickinessReport r = check_sticky(prog->ontology.tgds);
        if (r.sticky) {
          out << "sticky\n";
        } else {
          out << "non-sticky: variable " << r.witness->variable << " of rule #"
              << r.witness->tgd + 1 << " is marked and occurs twice in the body\n";
        }
        j["sticky"] = r.sticky;
        if (r.witness) {
          j["witness"] = json{{"rule", "tgd" + std::to_string(r.witness->tgd + 1)},
                              {"variable", r.witness->variable}};
        }
        if (!json_path.empty() && !cli_detail::write_json_file(json_path, j, err))
          return exit_input_error;
        return r.sticky ? exit_positive : exit_negative;
      }
      if (check_mode == "nonconflicting") {
        NonConflictingReport r = check_nonconflicting(prog->ontology, cap);
        out << (r.nonconflicting ? "non-conflicting" : "conflicting") << "\n";
        out << r.containment_checks << " containment checks, max arity " << r.max_arity
            << ", " << r.elapsed_seconds << " s\n";
        j.update(nonconflicting_json(r));
        if (!json_path.empty() && !cli_detail::write_json_file(json_path, j, err))
          return exit_input_error;
        return r.nonconflicting ? exit_positive : exit_negative;
      }
      if (check_mode == "sat") {
        SatResult r = check_satisfiability(prog->data, prog->ontology, budget, cap);
        if (r.satisfiable) {
          out << "sat" << (r.definitive ? "" : " (at budget; refutation only)") << "\n";
        } else {
          out << "unsat\n";
          out << "witness: " << to_string(r.witness->query) << "\n";
        }
        if (!r.caveat.empty()) err << "note: " << r.caveat << "\n";
        j["satisfiable"] = r.satisfiable;
        j["definitive"] = r.definitive;
        j["method"] = r.method == SatMethod::rewriting ? "rewriting"
                      : r.method == SatMethod::chase_complete ? "chase-complete"
                                                              : "chase-bounded";
        if (r.witness) j["witness"] = to_string(r.witness->query);
        if (!r.caveat.empty()) j["caveat"] = r.caveat;
        if (!json_path.empty() && !cli_detail::write_json_file(json_path, j, err))
          return exit_input_error;
        if (!r.satisfiable) return exit_negative;
        return r.definitive ? exit_positive : exit_indeterminate;
      }
      if (check_mode == "separable") {
        ProbeConfig cfg;
        cfg.depth = depth;
        cfg.samples = samples;
        cfg.max_facts = size;
        cfg.budget = budget;
        cfg.seed = seed;
        if (!prog->data.empty()) cfg.explicit_instances.push_back(prog->data);
        SeparabilityReport r = probe_separability(prog->ontology, cfg);
        for (ProbeDefinition d :
             {ProbeDefinition::separable, ProbeDefinition::deeply_separable,
              ProbeDefinition::egd_stable, ProbeDefinition::old_separable})
          out << to_string(d) << ": "
              << (r.passed(d) ? "no counterexample found" : "counterexample found") << "\n";
        out << "samples: " << r.samples_run << ", skipped: " << r.skipped_tgd_chase << "+"
            << r.skipped_full_chase << ", depth: " << r.depth << "\n";
        for (const ProbeCounterexample& c : r.counterexamples)
          out << "counterexample (" << to_string(c.definition) << ") at "
              << to_string(c.instance) << ": " << c.detail << "\n";
        j.update(separability_report_json(r));
        if (!json_path.empty() && !cli_detail::write_json_file(json_path, j, err))
          return exit_input_error;
        return r.counterexamples.empty() ? exit_positive : exit_negative;
      }
      err << "error: unknown check mode " << check_mode << "\n";
      return exit_input_error;
    }
  } catch (const cap_exceeded& e) {
    err << "error: " << e.what() << "\n";
    return exit_indeterminate;
  } catch (const usage_error& e) {
    err << "error: " << e.what() << "\n";
    return exit_input_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_input_error;
  }
  return exit_input_error;
}

}  // namespace oqa
