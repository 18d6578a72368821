#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oqa/chase.hpp"
#include "oqa/dependency.hpp"
#include "oqa/eval.hpp"
#include "oqa/query.hpp"
#include "oqa/rewriting.hpp"

namespace oqa {

struct StickyWitness {
  std::size_t tgd = 0;
  std::string variable;
};

struct StickinessReport {
  bool sticky = true;
  std::optional<StickyWitness> witness;
};

/// Standard stickiness marking. Base: mark every body variable absent from
/// the head. Propagation: when a body position of some rule hosts a marked
/// variable, mark every body variable that occurs in a head at that position.
/// The set is sticky iff no marked variable occurs twice in one body.
inline StickinessReport check_sticky(const std::vector<TGD>& tgds) {
  std::vector<std::set<std::string>> marked(tgds.size());
  for (std::size_t i = 0; i < tgds.size(); ++i) {
    auto hv = tgds[i].head_variables();
    for (const std::string& v : tgds[i].body_variables())
      if (!hv.count(v)) marked[i].insert(v);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    std::set<Position> marked_positions;
    for (std::size_t i = 0; i < tgds.size(); ++i)
      for (const Atom& b : tgds[i].body)
        for (std::size_t j = 0; j < b.args.size(); ++j)
          if (b.args[j].is_variable() && marked[i].count(b.args[j].name()))
            marked_positions.insert({b.predicate, j + 1});
    for (std::size_t i = 0; i < tgds.size(); ++i) {
      auto bv = tgds[i].body_variables();
      for (const Atom& h : tgds[i].head)
        for (std::size_t j = 0; j < h.args.size(); ++j) {
          const Term& t = h.args[j];
          if (!t.is_variable() || !bv.count(t.name())) continue;
          if (!marked_positions.count({h.predicate, j + 1})) continue;
          if (marked[i].insert(t.name()).second) changed = true;
        }
    }
  }
  for (std::size_t i = 0; i < tgds.size(); ++i) {
    std::map<std::string, std::size_t> occurrences;
    for (const Atom& b : tgds[i].body)
      for (const Term& t : b.args)
        if (t.is_variable()) ++occurrences[t.name()];
    for (const Atom& b : tgds[i].body)
      for (const Term& t : b.args)
        if (t.is_variable() && marked[i].count(t.name()) && occurrences[t.name()] >= 2)
          return {false, StickyWitness{i, t.name()}};
  }
  return {true, std::nullopt};
}

/// A Boolean query whose entailment witnesses a hard violation: the body of
/// an EGD extended with neq over its equated variables, or the body of a
/// negative constraint as is.
struct ViolationQuery {
  bool from_constraint = false;
  std::size_t index = 0;  // into Ontology::egds or Ontology::constraints
  ConjunctiveQuery query;
};

inline std::vector<ViolationQuery> violation_queries(const Ontology& onto) {
  if (onto.schema.count("neq"))
    throw usage_error("violation_queries: the schema reserves the predicate neq");
  std::string head = "q";
  std::size_t n = 0;
  while (onto.schema.count(head)) head = "q" + std::to_string(n++);
  std::vector<ViolationQuery> out;
  for (std::size_t i = 0; i < onto.egds.size(); ++i) {
    const EGD& e = onto.egds[i];
    ConjunctiveQuery q;
    q.head_predicate = head;
    q.body = e.body;
    q.body.push_back(Atom{"neq", {Term::variable(e.lhs), Term::variable(e.rhs)}});
    out.push_back({false, i, std::move(q)});
  }
  for (std::size_t i = 0; i < onto.constraints.size(); ++i) {
    ConjunctiveQuery q;
    q.head_predicate = head;
    q.body = onto.constraints[i].body;
    out.push_back({true, i, std::move(q)});
  }
  return out;
}

/// Adds neq(c1,c2) and neq(c2,c1) for each pair of distinct constants
/// appearing in d as arguments. Nulls never participate.
inline Instance neq_augment(const Instance& d) {
  Instance out = d;
  std::vector<Term> cs(d.constants().begin(), d.constants().end());
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = 0; j < cs.size(); ++j)
      if (i != j) out.add(Atom{"neq", {cs[i], cs[j]}});
  return out;
}

enum class SatMethod { rewriting, chase_complete, chase_bounded };

struct SatResult {
  bool satisfiable = true;
  /// False only for a bounded-chase "no violation found" answer.
  bool definitive = true;
  SatMethod method = SatMethod::rewriting;
  std::optional<ViolationQuery> witness;
  std::string caveat;
};

/// Satisfiability of D together with the dependencies, decided by answering
/// the violation queries under the TGDs alone over the neq-augmented
/// instance. An unsat verdict is sound for arbitrary TGDs and EGDs; the sat
/// verdict is exact under deep separability. With a sticky single-head TGD
/// set the queries are answered by rewriting; otherwise a bounded chase is
/// used and a sat verdict is refutation-only.
inline SatResult check_satisfiability(const Instance& d, const Ontology& onto,
                                      std::size_t budget = 2000, std::size_t cap = 100000) {
  onto.validate();
  const std::vector<ViolationQuery> vqs = violation_queries(onto);
  SatResult r;
  if (vqs.empty()) return r;

  Ontology norm = normalize_heads(onto);
  StickinessReport sticky = check_sticky(norm.tgds);
  const std::string caveat_deep =
      "sat assumes deep separability of the dependency set; unsat is unconditional";
  if (sticky.sticky) {
    Instance aug = neq_augment(d);
    for (const ViolationQuery& vq : vqs) {
      if (!answer_via_rewriting(vq.query, aug, norm.tgds, cap).empty()) {
        r.satisfiable = false;
        r.method = SatMethod::rewriting;
        r.witness = vq;
        return r;
      }
    }
    r.method = SatMethod::rewriting;
    r.caveat = caveat_deep;
    return r;
  }

  // non-sticky fallback: bounded chase under the TGDs alone
  Ontology tonly;
  tonly.schema = norm.schema;
  tonly.tgds = norm.tgds;
  ChaseOutcome ch = chase(d, tonly, budget);
  Instance target = ch.instance;
  for (const Atom& a : neq_augment(d).atoms()) target.add(a);
  for (const ViolationQuery& vq : vqs) {
    if (bcq_holds(vq.query, target)) {
      r.satisfiable = false;
      r.method = ch.kind == ChaseResultKind::completed ? SatMethod::chase_complete
                                                       : SatMethod::chase_bounded;
      r.witness = vq;
      return r;
    }
  }
  if (ch.kind == ChaseResultKind::completed) {
    r.method = SatMethod::chase_complete;
    r.caveat = caveat_deep;
  } else {
    r.method = SatMethod::chase_bounded;
    r.definitive = false;
    r.caveat = "chase budget exhausted; no violation found in the prefix (refutation only)";
  }
  return r;
}

struct ContainmentCheck {
  ConjunctiveQuery q1;
  ConjunctiveQuery q2;
  bool holds = false;
};

struct EgdReport {
  std::size_t egd = 0;
  std::size_t expansion_pairs = 0;
  std::vector<ContainmentCheck> checks;
};

struct NonConflictingReport {
  bool nonconflicting = true;
  std::vector<EgdReport> per_egd;
  std::size_t containment_checks = 0;
  std::size_t max_arity = 0;
  double elapsed_seconds = 0.0;
};

/// The syntactic separability condition for sticky TGDs and EGDs. For an EGD
/// body(X) -> Xi = Xj the body is merged by {Xj -> Xi} and expanded with
/// watched variable Xi; each pair <A, lambda> must satisfy the containment
/// q(Y) :- lambda(body(X))  in  q(Y) :- A, with Y the variables occurring on
/// both sides. Every check is run; nothing short-circuits, so the totals are
/// the full expansion cost.
inline NonConflictingReport check_nonconflicting(const Ontology& onto,
                                                 std::size_t cap = 100000) {
  onto.validate();
  Ontology norm = normalize_heads(onto);
  StickinessReport sticky = check_sticky(norm.tgds);
  if (!sticky.sticky)
    throw usage_error("check_nonconflicting: TGDs are not sticky; variable " +
                      sticky.witness->variable + " of rule #" +
                      std::to_string(sticky.witness->tgd + 1) +
                      " is marked and occurs twice in the body");
  auto t0 = std::chrono::steady_clock::now();
  NonConflictingReport rep;
  rep.max_arity = onto.max_arity();
  for (std::size_t i = 0; i < onto.egds.size(); ++i) {
    const EGD& e = onto.egds[i];
    Substitution mu;
    mu.bind(Term::variable(e.rhs), Term::variable(e.lhs));
    std::vector<Atom> merged = mu.apply_set(e.body);
    ExpansionResult ex = expansion(merged, Term::variable(e.lhs), norm.tgds, cap);
    EgdReport er;
    er.egd = i;
    er.expansion_pairs = ex.pairs.size();
    for (const ExpansionPair& p : ex.pairs) {
      std::vector<Atom> q1_body = p.lambda.apply_set(e.body);
      std::set<std::string> a_vars = variable_set(p.atoms);
      std::vector<Term> shared;
      for (const std::string& v : variables_in_order(q1_body))
        if (a_vars.count(v)) shared.push_back(Term::variable(v));
      ContainmentCheck check;
      check.q1 = ConjunctiveQuery{"q", shared, q1_body};
      check.q2 = ConjunctiveQuery{"q", shared, p.atoms};
      check.holds = cq_containment(check.q1, check.q2, norm.tgds, cap);
      if (!check.holds) rep.nonconflicting = false;
      ++rep.containment_checks;
      er.checks.push_back(std::move(check));
    }
    rep.per_egd.push_back(std::move(er));
  }
  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

struct CertainAnswerOutcome {
  bool unsat_theory = false;
  AnswerSet answers;
  SatResult sat;
  std::optional<std::string> warning;
};

/// Two-step certain answering for separable dependencies: check
/// satisfiability first ("ex falso quodlibet" when it fails), then answer
/// under the TGDs alone via the rewriting.
inline CertainAnswerOutcome answer_certain(const ConjunctiveQuery& q, const Instance& d,
                                           const Ontology& onto,
                                           bool nonconflicting_verified = false,
                                           std::size_t budget = 2000,
                                           std::size_t cap = 100000) {
  onto.validate();
  Ontology norm = normalize_heads(onto);
  StickinessReport sticky = check_sticky(norm.tgds);
  if (!sticky.sticky)
    throw usage_error("answer_certain: TGDs are not sticky; variable " +
                      sticky.witness->variable + " of rule #" +
                      std::to_string(sticky.witness->tgd + 1) +
                      " is marked and occurs twice in the body");
  CertainAnswerOutcome out;
  if (!nonconflicting_verified)
    out.warning = "non-conflicting condition not verified; separability is not guaranteed";
  out.sat = check_satisfiability(d, onto, budget, cap);
  if (!out.sat.satisfiable) {
    out.unsat_theory = true;
    return out;
  }
  out.answers = answer_via_rewriting(q, d, norm.tgds, cap);
  return out;
}

enum class ProbeDefinition { separable, deeply_separable, egd_stable, old_separable };

inline std::string to_string(ProbeDefinition d) {
  switch (d) {
    case ProbeDefinition::separable: return "separable";
    case ProbeDefinition::deeply_separable: return "deeply-separable";
    case ProbeDefinition::egd_stable: return "egd-stable";
    case ProbeDefinition::old_separable: return "old-separable";
  }
  return "?";
}

struct ProbeCounterexample {
  ProbeDefinition definition = ProbeDefinition::separable;
  Instance instance;
  std::int64_t step = -1;  // prefix length for deep separability, else -1
  std::string detail;
};

struct ProbeConfig {
  std::size_t depth = 10;      // max prefix length K for deep separability
  std::size_t samples = 50;    // random instances to draw
  std::size_t max_facts = 5;   // instance size bound
  std::size_t budget = 400;    // chase step budget
  std::uint64_t seed = 1;
  std::vector<Instance> explicit_instances;
};

struct SeparabilityReport {
  std::size_t samples_run = 0;
  std::size_t skipped_tgd_chase = 0;   // TGD-only chase did not complete
  std::size_t skipped_full_chase = 0;  // full chase exhausted the budget
  std::size_t depth = 0;
  std::vector<ProbeCounterexample> counterexamples;

  bool found(ProbeDefinition d) const {
    for (const ProbeCounterexample& c : counterexamples) {
      if (c.definition == d) return true;
      if (d == ProbeDefinition::old_separable &&
          (c.definition == ProbeDefinition::separable ||
           c.definition == ProbeDefinition::egd_stable))
        return true;
    }
    return false;
  }
  bool passed(ProbeDefinition d) const { return !found(d); }
};

namespace detail {

inline Instance random_instance(std::mt19937_64& rng,
                                const std::map<std::string, std::size_t>& schema,
                                std::size_t max_facts,
                                const std::vector<std::string>& pool) {
  std::vector<std::pair<std::string, std::size_t>> preds(schema.begin(), schema.end());
  Instance d;
  if (preds.empty() || pool.empty() || max_facts == 0) return d;
  std::uniform_int_distribution<std::size_t> nf(1, max_facts);
  std::uniform_int_distribution<std::size_t> dp(0, preds.size() - 1);
  std::uniform_int_distribution<std::size_t> dc(0, pool.size() - 1);
  std::size_t n = nf(rng);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [pred, arity] = preds[dp(rng)];
    Atom a{pred, {}};
    for (std::size_t j = 0; j < arity; ++j)
      a.args.push_back(Term::constant(pool[dc(rng)]));
    d.add(a);
  }
  return d;
}

}  // namespace detail

/// Bounded, sampled refutation probes for the semantic definitions. Per
/// sampled instance D with a completing TGD-only chase:
///   egd-stable:       D satisfying the EGDs must not make the chase fail;
///   separable:        a completed full chase and the TGD-only chase must be
///                     homomorphically equivalent (canonical Boolean queries
///                     both ways);
///   deeply separable: every existing chase prefix up to the depth bound must
///                     map into the TGD-only chase.
/// The probes refute; they never certify the unbounded definitions.
inline SeparabilityReport probe_separability(const Ontology& onto, const ProbeConfig& cfg) {
  onto.validate();
  Ontology tonly;
  tonly.schema = onto.schema;
  tonly.tgds = onto.tgds;
  SeparabilityReport rep;
  rep.depth = cfg.depth;

  auto probe_one = [&](const Instance& d) {
    ++rep.samples_run;
    ChaseOutcome tch = chase(d, tonly, cfg.budget);
    if (tch.kind != ChaseResultKind::completed) {
      ++rep.skipped_tgd_chase;
      return;
    }
    ChaseOutcome full = chase(d, onto, cfg.budget);
    if (full.kind == ChaseResultKind::failed && satisfies_egds(d, onto.egds)) {
      rep.counterexamples.push_back(
          {ProbeDefinition::egd_stable, d, static_cast<std::int64_t>(full.steps),
           "chase fails although the instance satisfies the EGDs"});
    }
    if (full.kind == ChaseResultKind::completed) {
      bool fwd = find_homomorphism(instance_to_bcq(full.instance).body, tch.instance).has_value();
      bool bwd = find_homomorphism(instance_to_bcq(tch.instance).body, full.instance).has_value();
      if (!fwd || !bwd) {
        rep.counterexamples.push_back(
            {ProbeDefinition::separable, d, -1,
             fwd ? "TGD-only chase not entailed by the full chase"
                 : "full chase not entailed by the TGD-only chase"});
      }
    } else if (full.kind == ChaseResultKind::exhausted) {
      ++rep.skipped_full_chase;
    }
    // deep separability over the replayable prefix
    Instance prefix = d;
    std::size_t k = 0;
    while (true) {
      if (!find_homomorphism(instance_to_bcq(prefix).body, tch.instance)) {
        rep.counterexamples.push_back(
            {ProbeDefinition::deeply_separable, d, static_cast<std::int64_t>(k),
             "chase prefix not entailed by the TGD-only chase"});
        break;
      }
      if (k >= cfg.depth || k >= full.trace.steps.size()) break;
      const ChaseStep& st = full.trace.steps[k];
      if (st.kind == ChaseStepKind::egd_failed) break;  // no further prefix exists
      if (st.kind == ChaseStepKind::tgd_fired) {
        for (const Atom& a : st.added) prefix.add(a);
      } else {
        prefix = prefix.renamed(st.merge->first, st.merge->second);
      }
      ++k;
    }
  };

  for (const Instance& d : cfg.explicit_instances) probe_one(d);
  std::mt19937_64 rng(cfg.seed);
  const std::vector<std::string> pool = {"a", "b", "c", "d"};
  for (std::size_t s = 0; s < cfg.samples; ++s)
    probe_one(detail::random_instance(rng, onto.schema, cfg.max_facts, pool));
  return rep;
}

}  // namespace oqa
