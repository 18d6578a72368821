#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "oqa/errors.hpp"

namespace oqa {

enum class TermKind { constant, null, variable };

/// A term: a constant of the data domain, a labeled null standing for an
/// unknown value, or a variable used in queries and dependencies.
///
/// Constants and nulls carry the chase order (all constants precede all
/// nulls); variables are plain data and are never compared by that order.
class Term {
 public:
  static Term constant(std::string name) {
    return Term(TermKind::constant, std::move(name), 0);
  }
  static Term null(std::uint64_t index) {
    return Term(TermKind::null, std::string(), index);
  }
  static Term variable(std::string name) {
    return Term(TermKind::variable, std::move(name), 0);
  }

  TermKind kind() const { return kind_; }
  bool is_constant() const { return kind_ == TermKind::constant; }
  bool is_null() const { return kind_ == TermKind::null; }
  bool is_variable() const { return kind_ == TermKind::variable; }

  /// Name of a constant or variable.
  const std::string& name() const { return name_; }
  /// Creation index of a null.
  std::uint64_t index() const { return index_; }

  friend bool operator==(const Term& a, const Term& b) {
    return a.kind_ == b.kind_ && a.index_ == b.index_ && a.name_ == b.name_;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

  /// Container order over all terms: constants, then nulls, then variables.
  /// Restricted to constants and nulls it coincides with compare_terms.
  friend bool operator<(const Term& a, const Term& b) {
    if (a.kind_ != b.kind_)
      return static_cast<int>(a.kind_) < static_cast<int>(b.kind_);
    if (a.kind_ == TermKind::null) return a.index_ < b.index_;
    return a.name_ < b.name_;
  }

 private:
  Term(TermKind k, std::string n, std::uint64_t i)
      : kind_(k), name_(std::move(n)), index_(i) {}

  TermKind kind_;
  std::string name_;
  std::uint64_t index_ = 0;
};

/// Chase order on constants and nulls: constants by name, nulls by creation
/// index, and every null follows every constant. Rejects variables.
inline int compare_terms(const Term& a, const Term& b) {
  if (a.is_variable() || b.is_variable())
    throw usage_error("compare_terms: variables carry no chase order");
  if (a.kind() != b.kind()) return a.is_constant() ? -1 : 1;
  if (a.is_null()) {
    if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
    return 0;
  }
  int c = a.name().compare(b.name());
  return c < 0 ? -1 : c == 0 ? 0 : 1;
}

inline std::string to_string(const Term& t) {
  if (t.is_null()) return "_z" + std::to_string(t.index());
  return t.name();
}

}  // namespace oqa
