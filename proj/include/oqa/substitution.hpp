#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oqa/atom.hpp"
#include "oqa/errors.hpp"
#include "oqa/term.hpp"

namespace oqa {

/// A finite map from terms to terms. A key never has two images, and the
/// factory paths (mgu, compose, closed) produce idempotent maps: applying a
/// substitution twice equals applying it once.
class Substitution {
 public:
  Substitution() = default;

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }

  bool contains(const Term& t) const { return map_.count(t) != 0; }

  void bind(const Term& from, const Term& to) {
    if (from == to) return;  // identity bindings are never stored
    auto it = map_.find(from);
    if (it != map_.end()) {
      if (it->second != to)
        throw usage_error("substitution: conflicting binding for " + to_string(from));
      return;
    }
    map_.emplace(from, to);
  }

  Term operator()(const Term& t) const {
    auto it = map_.find(t);
    return it == map_.end() ? t : it->second;
  }

  Atom operator()(const Atom& a) const {
    Atom r = a;
    for (Term& t : r.args) t = (*this)(t);
    return r;
  }

  std::vector<Atom> operator()(const std::vector<Atom>& atoms) const {
    std::vector<Atom> r;
    r.reserve(atoms.size());
    for (const Atom& a : atoms) r.push_back((*this)(a));
    return r;
  }

  std::vector<Term> operator()(const std::vector<Term>& ts) const {
    std::vector<Term> r;
    r.reserve(ts.size());
    for (const Term& t : ts) r.push_back((*this)(t));
    return r;
  }

  /// Application with set semantics: duplicates collapsing under the
  /// substitution are merged, first occurrence kept.
  std::vector<Atom> apply_set(const std::vector<Atom>& atoms) const {
    std::vector<Atom> r;
    std::set<Atom> seen;
    for (const Atom& a : atoms) {
      Atom b = (*this)(a);
      if (seen.insert(b).second) r.push_back(std::move(b));
    }
    return r;
  }

  /// Resolves binding chains so that application is idempotent.
  Substitution closed() const {
    Substitution r;
    for (const auto& [k, v] : map_) {
      Term cur = v;
      std::set<Term> seen{k};
      while (true) {
        if (seen.count(cur)) break;
        auto it = map_.find(cur);
        if (it == map_.end()) break;
        seen.insert(cur);
        cur = it->second;
      }
      if (cur != k) r.map_.emplace(k, cur);
    }
    return r;
  }

  /// compose(g, l) maps x to g(l(x)); the result is closed.
  static Substitution compose(const Substitution& outer, const Substitution& inner) {
    Substitution r;
    for (const auto& [k, v] : inner.map_) {
      Term w = outer(v);
      if (w != k) r.map_.emplace(k, w);
    }
    for (const auto& [k, v] : outer.map_) {
      if (inner.map_.count(k) || r.map_.count(k)) continue;
      if (v != k) r.map_.emplace(k, v);
    }
    return r.closed();
  }

  auto begin() const { return map_.begin(); }
  auto end() const { return map_.end(); }

  friend bool operator==(const Substitution& a, const Substitution& b) {
    return a.map_ == b.map_;
  }
  friend bool operator!=(const Substitution& a, const Substitution& b) {
    return !(a == b);
  }

 private:
  std::map<Term, Term> map_;
};

inline std::string to_string(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : s) {
    if (!first) out += ", ";
    first = false;
    out += to_string(k) + " -> " + to_string(v);
  }
  return out + "}";
}

/// Most general unifier of two flat atoms (no nulls allowed, no function
/// symbols, hence no occurs check). Variable-variable bindings are oriented
/// from the lexicographically larger name to the smaller one; a variable
/// unified with a constant is always the one bound.
inline std::optional<Substitution> mgu(const Atom& a, const Atom& b) {
  if (a.predicate != b.predicate || a.args.size() != b.args.size())
    return std::nullopt;
  for (const Atom* at : {&a, &b})
    for (const Term& t : at->args)
      if (t.is_null()) throw usage_error("mgu: nulls are not unifiable terms");

  std::map<Term, Term> parent;
  auto find = [&](Term t) {
    while (true) {
      auto it = parent.find(t);
      if (it == parent.end()) return t;
      t = it->second;
    }
  };

  std::set<Term> vars;
  for (const Atom* at : {&a, &b})
    for (const Term& t : at->args)
      if (t.is_variable()) vars.insert(t);

  for (std::size_t i = 0; i < a.args.size(); ++i) {
    Term x = find(a.args[i]);
    Term y = find(b.args[i]);
    if (x == y) continue;
    if (x.is_constant() && y.is_constant()) return std::nullopt;
    if (x.is_constant()) {
      parent.emplace(y, x);
    } else if (y.is_constant()) {
      parent.emplace(x, y);
    } else {
      // two variables: larger name points at the smaller
      if (x.name() < y.name())
        parent.emplace(y, x);
      else
        parent.emplace(x, y);
    }
  }

  Substitution s;
  for (const Term& v : vars) {
    Term r = find(v);
    if (r != v) s.bind(v, r);
  }
  return s;
}

}  // namespace oqa
