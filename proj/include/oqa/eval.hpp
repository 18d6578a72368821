#pragma once

#include <set>
#include <vector>

#include "oqa/chase.hpp"
#include "oqa/homomorphism.hpp"
#include "oqa/query.hpp"

namespace oqa {

using AnswerTuple = std::vector<Term>;
using AnswerSet = std::set<AnswerTuple>;

/// All constant tuples t with a homomorphism mapping the body into d and the
/// answer terms onto t. Existential variables may land on nulls; an answer
/// variable bound to a null contributes no tuple.
inline AnswerSet evaluate(const ConjunctiveQuery& q, const Instance& d) {
  q.validate();
  AnswerSet out;
  if (q.arity() == 0) {
    if (find_homomorphism(q.body, d)) out.insert({});
    return out;
  }
  for_each_homomorphism(q.body, d, {}, [&](const Substitution& h) {
    AnswerTuple t;
    t.reserve(q.answer_terms.size());
    for (const Term& a : q.answer_terms) {
      Term img = h(a);
      if (img.is_null()) return true;
      t.push_back(img);
    }
    out.insert(std::move(t));
    return true;
  });
  return out;
}

inline bool bcq_holds(const ConjunctiveQuery& q, const Instance& d) {
  if (q.arity() != 0) throw usage_error("bcq_holds: query has nonzero arity");
  return find_homomorphism(q.body, d).has_value();
}

enum class CertainStatus {
  exact,         // chase completed; answers are the certain answers
  lower_bound,   // chase exhausted its budget; answers are sound but possibly incomplete
  unsat_theory,  // chase failed; entailment holds trivially
};

struct CertainResult {
  CertainStatus status = CertainStatus::exact;
  AnswerSet answers;
  ChaseOutcome chase;
};

/// Chase-based certain answers. A failed chase makes the theory unsatisfiable
/// and entailment trivial; an exhausted chase yields a flagged lower bound.
inline CertainResult certain_answers_chase(const ConjunctiveQuery& q, const Instance& d,
                                           const Ontology& onto, std::size_t budget) {
  CertainResult r;
  r.chase = chase(d, onto, budget);
  switch (r.chase.kind) {
    case ChaseResultKind::failed:
      r.status = CertainStatus::unsat_theory;
      break;
    case ChaseResultKind::completed:
      r.status = CertainStatus::exact;
      r.answers = evaluate(q, r.chase.instance);
      break;
    case ChaseResultKind::exhausted:
      r.status = CertainStatus::lower_bound;
      r.answers = evaluate(q, r.chase.instance);
      break;
  }
  return r;
}

}  // namespace oqa
