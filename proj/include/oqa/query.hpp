#pragma once

#include <map>
#include <string>
#include <vector>

#include "oqa/atom.hpp"
#include "oqa/errors.hpp"
#include "oqa/instance.hpp"

namespace oqa {

/// A conjunctive query head(answer_terms) :- body. Arity 0 is a Boolean CQ.
/// Answer terms are variables occurring in the body, or constants.
struct ConjunctiveQuery {
  std::string head_predicate;
  std::vector<Term> answer_terms;
  std::vector<Atom> body;

  std::size_t arity() const { return answer_terms.size(); }

  void validate() const {
    if (body.empty()) throw usage_error("query: empty body");
    auto vars = variable_set(body);
    for (const Term& t : answer_terms) {
      if (t.is_null()) throw usage_error("query: null in answer terms");
      if (t.is_variable() && !vars.count(t.name()))
        throw usage_error("query: answer variable " + t.name() +
                          " does not occur in the body");
    }
    for (const Atom& a : body)
      for (const Term& t : a.args)
        if (t.is_null()) throw usage_error("query: null in body atom " + to_string(a));
  }

  friend bool operator==(const ConjunctiveQuery& a, const ConjunctiveQuery& b) {
    return a.head_predicate == b.head_predicate &&
           a.answer_terms == b.answer_terms && a.body == b.body;
  }
  friend bool operator!=(const ConjunctiveQuery& a, const ConjunctiveQuery& b) {
    return !(a == b);
  }
};

inline std::string to_string(const ConjunctiveQuery& q) {
  std::string s = q.head_predicate;
  if (!q.answer_terms.empty()) {
    s += '(';
    for (std::size_t i = 0; i < q.answer_terms.size(); ++i) {
      if (i) s += ',';
      s += to_string(q.answer_terms[i]);
    }
    s += ')';
  }
  return s + " :- " + to_string(q.body);
}

struct FrozenQuery {
  Instance instance;
  std::vector<Term> tuple;
};

/// Canonical database of a query: each body variable becomes the reserved
/// constant "frz_<name>". Deterministic; rejects user constants that collide
/// with the reserved prefix.
inline FrozenQuery freeze(const ConjunctiveQuery& q) {
  q.validate();
  for (const Atom& a : q.body)
    for (const Term& t : a.args)
      if (t.is_constant() && t.name().rfind("frz_", 0) == 0)
        throw usage_error("freeze: constant " + t.name() +
                          " collides with the reserved frz_ prefix");
  std::map<Term, Term> fr;
  auto frozen = [&](const Term& t) {
    if (!t.is_variable()) return t;
    auto it = fr.find(t);
    if (it == fr.end())
      it = fr.emplace(t, Term::constant("frz_" + t.name())).first;
    return it->second;
  };
  FrozenQuery out;
  for (const Atom& a : q.body) {
    Atom b = a;
    for (Term& t : b.args) t = frozen(t);
    out.instance.add(b);
  }
  for (const Term& t : q.answer_terms) out.tuple.push_back(frozen(t));
  return out;
}

/// The canonical Boolean query of an instance: nulls are relabeled to fresh
/// variables, constants are kept. Entailment of this query is the strongest
/// BCQ fact the instance witnesses.
inline ConjunctiveQuery instance_to_bcq(const Instance& d, std::string head = "q") {
  ConjunctiveQuery q;
  q.head_predicate = std::move(head);
  for (const Atom& a : d.atoms()) {
    Atom b = a;
    for (Term& t : b.args)
      if (t.is_null()) t = Term::variable("N" + std::to_string(t.index()));
    q.body.push_back(b);
  }
  return q;
}

}  // namespace oqa
