#pragma once

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "oqa/instance.hpp"
#include "oqa/substitution.hpp"

namespace oqa {

namespace detail {

class HomSearch {
 public:
  HomSearch(const std::vector<Atom>& src, const Instance& dst,
            const Substitution& fixed,
            const std::function<bool(const Substitution&)>& visit)
      : dst_(dst), visit_(visit) {
    for (const auto& [k, v] : fixed) binding_.emplace(k, v);
    // most-constrained atom first: fewest candidate atoms in the index
    order_.reserve(src.size());
    for (const Atom& a : src) order_.push_back(&a);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](const Atom* a, const Atom* b) {
                       return candidates(*a) < candidates(*b);
                     });
  }

  /// Returns true if the visitor stopped the enumeration.
  bool run() { return step(0); }

 private:
  std::size_t candidates(const Atom& a) const {
    const std::set<Atom>* s = dst_.atoms_of(a.predicate);
    return s ? s->size() : 0;
  }

  bool step(std::size_t i) {
    if (i == order_.size()) {
      Substitution h;
      for (const auto& [k, v] : binding_)
        if (k.is_variable()) h.bind(k, v);
      return !visit_(h);
    }
    const Atom& a = *order_[i];
    const std::set<Atom>* cands = dst_.atoms_of(a.predicate);
    if (!cands) return false;
    for (const Atom& c : *cands) {
      if (c.args.size() != a.args.size()) continue;
      std::vector<Term> bound;
      bool ok = true;
      for (std::size_t j = 0; j < a.args.size() && ok; ++j) {
        const Term& t = a.args[j];
        if (t.is_variable()) {
          auto it = binding_.find(t);
          if (it == binding_.end()) {
            binding_.emplace(t, c.args[j]);
            bound.push_back(t);
          } else if (it->second != c.args[j]) {
            ok = false;
          }
        } else {
          // constants map to themselves; nulls in the source are rigid
          if (t != c.args[j]) ok = false;
        }
      }
      if (ok && step(i + 1)) return true;
      for (const Term& t : bound) binding_.erase(t);
    }
    return false;
  }

  const Instance& dst_;
  const std::function<bool(const Substitution&)>& visit_;
  std::map<Term, Term> binding_;
  std::vector<const Atom*> order_;
};

}  // namespace detail

/// Enumerates every homomorphism h extending `fixed` with h(src) contained in
/// dst. Constants are fixed, nulls in src map only to themselves, and dst is
/// ground. The visitor returns true to continue, false to stop; the function
/// returns true iff the visitor stopped early.
inline bool for_each_homomorphism(
    const std::vector<Atom>& src, const Instance& dst, const Substitution& fixed,
    const std::function<bool(const Substitution&)>& visit) {
  detail::HomSearch s(src, dst, fixed, visit);
  return s.run();
}

inline std::optional<Substitution> find_homomorphism(
    const std::vector<Atom>& src, const Instance& dst,
    const Substitution& fixed = {}) {
  std::optional<Substitution> found;
  for_each_homomorphism(src, dst, fixed, [&](const Substitution& h) {
    found = h;
    return false;
  });
  return found;
}

inline std::vector<Substitution> all_homomorphisms(const std::vector<Atom>& src,
                                                   const Instance& dst,
                                                   const Substitution& fixed = {}) {
  std::vector<Substitution> out;
  for_each_homomorphism(src, dst, fixed, [&](const Substitution& h) {
    out.push_back(h);
    return true;
  });
  return out;
}

}  // namespace oqa
