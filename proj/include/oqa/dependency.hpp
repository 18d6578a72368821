#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oqa/atom.hpp"
#include "oqa/errors.hpp"
#include "oqa/homomorphism.hpp"
#include "oqa/instance.hpp"
#include "oqa/substitution.hpp"

namespace oqa {

/// Tuple-generating dependency body(X,Y) -> exists Z head(X,Z).
/// Dependencies are constant-free: every argument is a variable.
struct TGD {
  std::vector<Atom> body;
  std::vector<Atom> head;

  std::set<std::string> body_variables() const { return variable_set(body); }
  std::set<std::string> head_variables() const { return variable_set(head); }

  /// Variables shared by body and head.
  std::set<std::string> frontier() const {
    std::set<std::string> out;
    auto bv = body_variables();
    for (const std::string& v : head_variables())
      if (bv.count(v)) out.insert(v);
    return out;
  }

  /// Head-only variables, in order of first occurrence in the head.
  std::vector<std::string> existentials() const {
    std::vector<std::string> out;
    auto bv = body_variables();
    std::set<std::string> seen;
    for (const std::string& v : variables_in_order(head))
      if (!bv.count(v) && seen.insert(v).second) out.push_back(v);
    return out;
  }

  void validate() const {
    if (body.empty()) throw usage_error("tgd: empty body");
    if (head.empty()) throw usage_error("tgd: empty head");
    for (const std::vector<Atom>* part : {&body, &head})
      for (const Atom& a : *part)
        for (const Term& t : a.args)
          if (!t.is_variable())
            throw usage_error("tgd: non-variable argument in " + to_string(a));
  }

  friend bool operator==(const TGD& a, const TGD& b) {
    return a.body == b.body && a.head == b.head;
  }
  friend bool operator!=(const TGD& a, const TGD& b) { return !(a == b); }
};

/// Equality-generating dependency body(X) -> lhs = rhs.
struct EGD {
  std::vector<Atom> body;
  std::string lhs;
  std::string rhs;

  void validate() const {
    if (body.empty()) throw usage_error("egd: empty body");
    if (lhs == rhs) throw usage_error("egd: trivial equality " + lhs + " = " + rhs);
    auto vars = variable_set(body);
    if (!vars.count(lhs) || !vars.count(rhs))
      throw usage_error("egd: equated variables must occur in the body");
    for (const Atom& a : body)
      for (const Term& t : a.args)
        if (!t.is_variable())
          throw usage_error("egd: non-variable argument in " + to_string(a));
  }

  friend bool operator==(const EGD& a, const EGD& b) {
    return a.body == b.body && a.lhs == b.lhs && a.rhs == b.rhs;
  }
  friend bool operator!=(const EGD& a, const EGD& b) { return !(a == b); }
};

/// Negative constraint body(X) -> false.
struct NegativeConstraint {
  std::vector<Atom> body;

  void validate() const {
    if (body.empty()) throw usage_error("constraint: empty body");
    for (const Atom& a : body)
      for (const Term& t : a.args)
        if (!t.is_variable())
          throw usage_error("constraint: non-variable argument in " + to_string(a));
  }

  friend bool operator==(const NegativeConstraint& a, const NegativeConstraint& b) {
    return a.body == b.body;
  }
  friend bool operator!=(const NegativeConstraint& a, const NegativeConstraint& b) {
    return !(a == b);
  }
};

struct Ontology {
  std::map<std::string, std::size_t> schema;  // predicate -> arity
  std::vector<TGD> tgds;
  std::vector<EGD> egds;
  std::vector<NegativeConstraint> constraints;

  bool single_head() const {
    for (const TGD& t : tgds)
      if (t.head.size() != 1) return false;
    return true;
  }

  std::size_t max_arity() const {
    std::size_t m = 0;
    for (const auto& [p, n] : schema)
      if (n > m) m = n;
    return m;
  }

  void check_atom(const Atom& a) const {
    auto it = schema.find(a.predicate);
    if (it == schema.end())
      throw usage_error("schema: unknown predicate " + a.predicate);
    if (it->second != a.arity())
      throw usage_error("schema: " + a.predicate + " used with arity " +
                        std::to_string(a.arity()) + ", declared " +
                        std::to_string(it->second));
  }

  void validate() const {
    for (const TGD& t : tgds) {
      t.validate();
      for (const Atom& a : t.body) check_atom(a);
      for (const Atom& a : t.head) check_atom(a);
    }
    for (const EGD& e : egds) {
      e.validate();
      for (const Atom& a : e.body) check_atom(a);
    }
    for (const NegativeConstraint& c : constraints) {
      c.validate();
      for (const Atom& a : c.body) check_atom(a);
    }
  }
};

inline std::string to_string(const TGD& t) {
  std::string s = to_string(t.body) + " -> ";
  auto ex = t.existentials();
  if (!ex.empty()) {
    s += "exists ";
    for (std::size_t i = 0; i < ex.size(); ++i) {
      if (i) s += ", ";
      s += ex[i];
    }
    s += ' ';
  }
  return s + to_string(t.head);
}

inline std::string to_string(const EGD& e) {
  return to_string(e.body) + " -> " + e.lhs + " = " + e.rhs;
}

inline std::string to_string(const NegativeConstraint& c) {
  return to_string(c.body) + " -> false";
}

/// Checks whether every homomorphic image of the body extends to the head.
inline bool satisfies(const Instance& d, const TGD& t) {
  bool ok = true;
  for_each_homomorphism(t.body, d, {}, [&](const Substitution& h) {
    if (!find_homomorphism(t.head, d, h)) {
      ok = false;
      return false;
    }
    return true;
  });
  return ok;
}

inline bool satisfies(const Instance& d, const EGD& e) {
  Term l = Term::variable(e.lhs);
  Term r = Term::variable(e.rhs);
  bool ok = true;
  for_each_homomorphism(e.body, d, {}, [&](const Substitution& h) {
    if (h(l) != h(r)) {
      ok = false;
      return false;
    }
    return true;
  });
  return ok;
}

inline bool satisfies(const Instance& d, const NegativeConstraint& c) {
  return !find_homomorphism(c.body, d).has_value();
}

inline bool satisfies_egds(const Instance& d, const std::vector<EGD>& egds) {
  for (const EGD& e : egds)
    if (!satisfies(d, e)) return false;
  return true;
}

inline bool satisfies_all(const Instance& d, const Ontology& o) {
  for (const TGD& t : o.tgds)
    if (!satisfies(d, t)) return false;
  if (!satisfies_egds(d, o.egds)) return false;
  for (const NegativeConstraint& c : o.constraints)
    if (!satisfies(d, c)) return false;
  return true;
}

/// Renames every variable of the rule to "<name>#<suffix>".
inline TGD rename_apart(const TGD& t, std::size_t suffix) {
  Substitution s;
  for (const std::string& v : variables_in_order(t.body))
    s.bind(Term::variable(v), Term::variable(v + "#" + std::to_string(suffix)));
  for (const std::string& v : variables_in_order(t.head)) {
    Term from = Term::variable(v);
    if (!s.contains(from))
      s.bind(from, Term::variable(v + "#" + std::to_string(suffix)));
  }
  return TGD{s(t.body), s(t.head)};
}

/// Splits every multi-atom head through a fresh auxiliary predicate over all
/// head variables: body -> exists Z aux(U) plus one projection aux(U) -> a_i
/// per head atom. Boolean query answers over the original predicates are
/// preserved. Auxiliary predicates are recorded in *schema when given.
inline std::vector<TGD> normalize_heads(const std::vector<TGD>& tgds,
                                        std::map<std::string, std::size_t>* schema = nullptr) {
  std::vector<TGD> out;
  std::size_t counter = 1;
  for (const TGD& t : tgds) {
    if (t.head.size() == 1) {
      out.push_back(t);
      continue;
    }
    std::string aux;
    do {
      aux = "aux" + std::to_string(counter++);
    } while (schema && schema->count(aux));
    std::vector<Term> u;
    for (const std::string& v : variables_in_order(t.head))
      u.push_back(Term::variable(v));
    Atom aux_atom{aux, u};
    if (schema) (*schema)[aux] = u.size();
    out.push_back(TGD{t.body, {aux_atom}});
    for (const Atom& a : t.head) out.push_back(TGD{{aux_atom}, {a}});
  }
  return out;
}

inline Ontology normalize_heads(const Ontology& o) {
  Ontology n = o;
  n.tgds = normalize_heads(o.tgds, &n.schema);
  return n;
}

}  // namespace oqa
