#pragma once

#include <string>

#include "json.hpp"
#include "oqa/chase.hpp"
#include "oqa/eval.hpp"
#include "oqa/separability.hpp"

namespace oqa {

using json = nlohmann::ordered_json;

inline json instance_json(const Instance& d) {
  json arr = json::array();
  for (const Atom& a : d.atoms()) arr.push_back(to_string(a));
  return arr;
}

inline json answers_json(const AnswerSet& answers) {
  json arr = json::array();
  for (const AnswerTuple& t : answers) {
    json row = json::array();
    for (const Term& x : t) row.push_back(to_string(x));
    arr.push_back(row);
  }
  return arr;
}

inline json bindings_json(const Substitution& s) {
  json obj = json::object();
  for (const auto& [k, v] : s) obj[to_string(k)] = to_string(v);
  return obj;
}

inline std::string rule_id(ChaseStepKind kind, std::size_t rule) {
  return (kind == ChaseStepKind::tgd_fired ? "tgd" : "egd") + std::to_string(rule + 1);
}

inline json trace_step_json(const ChaseStep& st) {
  json o;
  o["step"] = st.step;
  switch (st.kind) {
    case ChaseStepKind::tgd_fired: {
      o["kind"] = "tgd";
      o["rule"] = rule_id(st.kind, st.rule);
      o["bindings"] = bindings_json(st.bindings);
      json added = json::array();
      for (const Atom& a : st.added) added.push_back(to_string(a));
      o["added"] = added;
      break;
    }
    case ChaseStepKind::egd_applied:
      o["kind"] = "egd";
      o["rule"] = rule_id(st.kind, st.rule);
      o["bindings"] = bindings_json(st.bindings);
      o["replaced"] = to_string(st.merge->first);
      o["replacement"] = to_string(st.merge->second);
      break;
    case ChaseStepKind::egd_failed:
      o["kind"] = "egd_failed";
      o["rule"] = rule_id(st.kind, st.rule);
      o["bindings"] = bindings_json(st.bindings);
      o["clash"] = json::array({to_string(st.clash->first), to_string(st.clash->second)});
      break;
  }
  return o;
}

/// One structured record per chase step, newline-delimited.
inline std::string trace_to_jsonl(const ChaseTrace& trace) {
  std::string out;
  for (const ChaseStep& st : trace.steps) {
    out += trace_step_json(st).dump();
    out += '\n';
  }
  return out;
}

inline std::string chase_kind_name(ChaseResultKind k) {
  switch (k) {
    case ChaseResultKind::completed: return "completed";
    case ChaseResultKind::failed: return "failed";
    case ChaseResultKind::exhausted: return "exhausted";
  }
  return "?";
}

inline json chase_outcome_json(const ChaseOutcome& o) {
  json j;
  j["outcome"] = chase_kind_name(o.kind);
  j["steps"] = o.steps;
  if (o.kind == ChaseResultKind::failed) {
    j["failed_egd"] = "egd" + std::to_string(o.fail_egd + 1);
    j["clash"] = json::array({to_string(o.clash->first), to_string(o.clash->second)});
  }
  j["instance"] = instance_json(o.instance);
  return j;
}

inline json nonconflicting_json(const NonConflictingReport& rep) {
  json j;
  j["nonconflicting"] = rep.nonconflicting;
  j["max_arity"] = rep.max_arity;
  j["containment_checks"] = rep.containment_checks;
  j["time_s"] = rep.elapsed_seconds;
  json per = json::array();
  for (const EgdReport& er : rep.per_egd) {
    json e;
    e["egd"] = "egd" + std::to_string(er.egd + 1);
    e["expansion_pairs"] = er.expansion_pairs;
    json checks = json::array();
    for (const ContainmentCheck& c : er.checks) {
      json cj;
      cj["q1"] = to_string(c.q1);
      cj["q2"] = to_string(c.q2);
      cj["holds"] = c.holds;
      checks.push_back(cj);
    }
    e["checks"] = checks;
    per.push_back(e);
  }
  j["egds"] = per;
  return j;
}

inline json separability_report_json(const SeparabilityReport& rep) {
  json j;
  j["depth"] = rep.depth;
  j["samples"] = rep.samples_run;
  j["skipped_tgd_chase"] = rep.skipped_tgd_chase;
  j["skipped_full_chase"] = rep.skipped_full_chase;
  json verdicts;
  for (ProbeDefinition d :
       {ProbeDefinition::separable, ProbeDefinition::deeply_separable,
        ProbeDefinition::egd_stable, ProbeDefinition::old_separable})
    verdicts[to_string(d)] = rep.passed(d) ? "no counterexample found" : "counterexample found";
  j["verdicts"] = verdicts;
  json cexs = json::array();
  for (const ProbeCounterexample& c : rep.counterexamples) {
    json cj;
    cj["definition"] = to_string(c.definition);
    cj["instance"] = instance_json(c.instance);
    cj["step"] = c.step;
    cj["detail"] = c.detail;
    cexs.push_back(cj);
  }
  j["counterexamples"] = cexs;
  return j;
}

}  // namespace oqa
