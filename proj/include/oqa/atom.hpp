#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "oqa/term.hpp"

namespace oqa {

/// A position r[i]: predicate name plus 1-based argument index.
using Position = std::pair<std::string, std::size_t>;

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  std::size_t arity() const { return args.size(); }

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.predicate == b.predicate && a.args == b.args;
  }
  friend bool operator!=(const Atom& a, const Atom& b) { return !(a == b); }
  friend bool operator<(const Atom& a, const Atom& b) {
    if (a.predicate != b.predicate) return a.predicate < b.predicate;
    const std::size_t n = a.args.size() < b.args.size() ? a.args.size() : b.args.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (a.args[i] < b.args[i]) return true;
      if (b.args[i] < a.args[i]) return false;
    }
    return a.args.size() < b.args.size();
  }
};

inline std::string to_string(const Atom& a) {
  std::string s = a.predicate;
  if (!a.args.empty()) {
    s += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) s += ',';
      s += to_string(a.args[i]);
    }
    s += ')';
  }
  return s;
}

inline std::string to_string(const std::vector<Atom>& atoms) {
  std::string s;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) s += ", ";
    s += to_string(atoms[i]);
  }
  return s;
}

/// Variable names in order of first occurrence, scanning atoms left to right.
inline std::vector<std::string> variables_in_order(const std::vector<Atom>& atoms) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const Atom& a : atoms)
    for (const Term& t : a.args)
      if (t.is_variable() && seen.insert(t.name()).second) out.push_back(t.name());
  return out;
}

inline std::set<std::string> variable_set(const std::vector<Atom>& atoms) {
  std::set<std::string> out;
  for (const Atom& a : atoms)
    for (const Term& t : a.args)
      if (t.is_variable()) out.insert(t.name());
  return out;
}

inline bool contains_term(const std::vector<Atom>& atoms, const Term& t) {
  for (const Atom& a : atoms)
    for (const Term& u : a.args)
      if (u == t) return true;
  return false;
}

}  // namespace oqa
