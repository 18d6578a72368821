#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "oqa/atom.hpp"
#include "oqa/errors.hpp"

namespace oqa {

/// A ground set of atoms (constants and nulls only) with a per-predicate
/// index. Set semantics; iteration order is deterministic (predicate, then
/// atom order).
class Instance {
 public:
  Instance() = default;

  explicit Instance(const std::vector<Atom>& atoms) {
    for (const Atom& a : atoms) add(a);
  }

  /// Inserts a ground atom; returns false if it was already present.
  bool add(const Atom& a) {
    for (const Term& t : a.args)
      if (t.is_variable())
        throw usage_error("instance: atom " + to_string(a) + " is not ground");
    bool inserted = index_[a.predicate].insert(a).second;
    if (inserted) ++size_;
    return inserted;
  }

  bool contains(const Atom& a) const {
    auto it = index_.find(a.predicate);
    return it != index_.end() && it->second.count(a) != 0;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  /// Atoms of one predicate, or nullptr when none exist.
  const std::set<Atom>* atoms_of(const std::string& pred) const {
    auto it = index_.find(pred);
    return it == index_.end() || it->second.empty() ? nullptr : &it->second;
  }

  const std::map<std::string, std::set<Atom>>& index() const { return index_; }

  std::vector<Atom> atoms() const {
    std::vector<Atom> out;
    out.reserve(size_);
    for (const auto& [p, set] : index_)
      for (const Atom& a : set) out.push_back(a);
    return out;
  }

  /// Constants appearing as arguments.
  std::set<Term> constants() const {
    std::set<Term> out;
    for (const auto& [p, set] : index_)
      for (const Atom& a : set)
        for (const Term& t : a.args)
          if (t.is_constant()) out.insert(t);
    return out;
  }

  bool has_nulls() const {
    for (const auto& [p, set] : index_)
      for (const Atom& a : set)
        for (const Term& t : a.args)
          if (t.is_null()) return true;
    return false;
  }

  /// Largest null index present, or 0 when the instance is null-free.
  std::uint64_t max_null_index() const {
    std::uint64_t m = 0;
    for (const auto& [p, set] : index_)
      for (const Atom& a : set)
        for (const Term& t : a.args)
          if (t.is_null() && t.index() > m) m = t.index();
    return m;
  }

  /// Copy with every occurrence of `from` replaced by `to`.
  Instance renamed(const Term& from, const Term& to) const {
    Instance out;
    for (const auto& [p, set] : index_)
      for (const Atom& a : set) {
        Atom b = a;
        for (Term& t : b.args)
          if (t == from) t = to;
        out.add(b);
      }
    return out;
  }

  bool subset_of(const Instance& other) const {
    for (const auto& [p, set] : index_)
      for (const Atom& a : set)
        if (!other.contains(a)) return false;
    return true;
  }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.size_ == b.size_ && a.index_ == b.index_;
  }
  friend bool operator!=(const Instance& a, const Instance& b) { return !(a == b); }

 private:
  std::map<std::string, std::set<Atom>> index_;
  std::size_t size_ = 0;
};

inline std::string to_string(const Instance& d) {
  std::string s = "{";
  bool first = true;
  for (const Atom& a : d.atoms()) {
    if (!first) s += ", ";
    first = false;
    s += to_string(a);
  }
  return s + "}";
}

}  // namespace oqa
