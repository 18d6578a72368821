#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oqa/dependency.hpp"
#include "oqa/eval.hpp"
#include "oqa/query.hpp"
#include "oqa/substitution.hpp"

namespace oqa {

using AffectedPositions = std::set<Position>;

/// Positions where a labeled null may appear during the TGD chase: head
/// positions of existential variables, plus head positions of a universal
/// variable that occurs in the body at affected positions only. Least
/// fixpoint; requires single-head TGDs.
inline AffectedPositions affected_positions(const std::vector<TGD>& tgds) {
  for (std::size_t i = 0; i < tgds.size(); ++i)
    if (tgds[i].head.size() != 1)
      throw usage_error("affected_positions: TGD #" + std::to_string(i + 1) +
                        " has a multi-atom head; normalize heads first");
  AffectedPositions aff;
  for (const TGD& t : tgds) {
    const Atom& h = t.head.front();
    auto bv = t.body_variables();
    for (std::size_t j = 0; j < h.args.size(); ++j)
      if (!bv.count(h.args[j].name())) aff.insert({h.predicate, j + 1});
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (const TGD& t : tgds) {
      const Atom& h = t.head.front();
      // body positions per variable
      std::map<std::string, std::vector<Position>> occ;
      for (const Atom& b : t.body)
        for (std::size_t j = 0; j < b.args.size(); ++j)
          occ[b.args[j].name()].push_back({b.predicate, j + 1});
      for (std::size_t j = 0; j < h.args.size(); ++j) {
        const std::string& v = h.args[j].name();
        auto it = occ.find(v);
        if (it == occ.end()) continue;  // existential, seeded above
        bool all_affected = true;
        for (const Position& p : it->second)
          if (!aff.count(p)) {
            all_affected = false;
            break;
          }
        if (all_affected && aff.insert({h.predicate, j + 1}).second) changed = true;
      }
    }
  }
  return aff;
}

/// A-applicability of a single-head TGD to an atom of a set. The rule must be
/// renamed apart from the context. Returns the MGU of the atom and the head
/// when all three conditions hold:
///   (i)  the head unifies with the atom,
///   (ii) a position holding a constant, a variable shared with the rest of
///        the context, or a rigid variable must meet a frontier head variable,
///   (iii) a variable local to the atom but repeated in it must meet frontier
///        head variables at all its positions, or one existential variable at
///        all of them.
inline std::optional<Substitution> is_applicable(const TGD& sigma, const Atom& a,
                                                 const std::vector<Atom>& context,
                                                 const std::set<std::string>& rigid_vars = {}) {
  if (sigma.head.size() != 1)
    throw usage_error("is_applicable: TGD must be single-head");
  const Atom& head = sigma.head.front();
  auto gamma = mgu(a, head);
  if (!gamma) return std::nullopt;

  const auto body_vars = sigma.body_variables();
  std::set<std::string> shared = rigid_vars;
  bool skipped_self = false;
  for (const Atom& c : context) {
    if (!skipped_self && c == a) {
      skipped_self = true;
      continue;
    }
    for (const Term& t : c.args)
      if (t.is_variable()) shared.insert(t.name());
  }

  auto head_frontier_at = [&](std::size_t j) {
    const Term& hv = head.args[j];
    return hv.is_variable() && body_vars.count(hv.name()) != 0;
  };

  // (ii)
  for (std::size_t j = 0; j < a.args.size(); ++j) {
    const Term& t = a.args[j];
    bool pinned = t.is_constant() || (t.is_variable() && shared.count(t.name()));
    if (pinned && !head_frontier_at(j)) return std::nullopt;
  }

  // (iii)
  std::map<std::string, std::vector<std::size_t>> local;
  for (std::size_t j = 0; j < a.args.size(); ++j) {
    const Term& t = a.args[j];
    if (t.is_variable() && !shared.count(t.name())) local[t.name()].push_back(j);
  }
  for (const auto& [v, positions] : local) {
    if (positions.size() < 2) continue;
    bool all_frontier = true;
    for (std::size_t j : positions)
      if (!head_frontier_at(j)) all_frontier = false;
    if (all_frontier) continue;
    const Term& first = head.args[positions.front()];
    bool same_existential = first.is_variable() && !body_vars.count(first.name());
    for (std::size_t j : positions)
      if (head.args[j] != first) same_existential = false;
    if (!same_existential) return std::nullopt;
  }
  return gamma;
}

namespace detail {

/// Canonical rendering of an atom multiset under a fixed atom order: the
/// pinned terms keep identity, other variables are renumbered by first
/// occurrence.
inline std::string render_atoms(const std::vector<Atom>& atoms,
                                const std::optional<Term>& watched,
                                const std::vector<Term>* head) {
  std::map<Term, std::string> names;
  std::size_t next = 0;
  auto tok = [&](const Term& t) -> std::string {
    if (t.is_constant()) return "c:" + t.name();
    if (t.is_null()) return "n:" + std::to_string(t.index());
    if (watched && t == *watched) return "!w";
    auto it = names.find(t);
    if (it == names.end()) it = names.emplace(t, "!" + std::to_string(next++)).first;
    return it->second;
  };
  std::string s;
  if (head) {
    s += "@(";
    for (const Term& t : *head) {
      s += tok(t);
      s += ',';
    }
    s += ')';
  }
  for (const Atom& a : atoms) {
    s += a.predicate;
    s += '(';
    for (const Term& t : a.args) {
      s += tok(t);
      s += ',';
    }
    s += ");";
  }
  return s;
}

/// Canonical key for an atom set modulo bijective variable renaming that
/// fixes the watched term (and the head tuple positions when given). Small
/// sets are canonicalized exactly by minimizing over atom orderings.
inline std::string canonical_key(std::vector<Atom> atoms, const std::optional<Term>& watched,
                                 const std::vector<Term>* head) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  if (atoms.size() <= 8) {
    std::string best;
    bool first = true;
    do {
      std::string s = render_atoms(atoms, watched, head);
      if (first || s < best) best = std::move(s);
      first = false;
    } while (std::next_permutation(atoms.begin(), atoms.end()));
    return best;
  }
  // large sets: deterministic approximation (sorted order only); may keep
  // isomorphic duplicates apart, which is sound for every use below
  return render_atoms(atoms, watched, head);
}

inline std::vector<Atom> sorted_unique(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  return atoms;
}

}  // namespace detail

inline std::string canonical_atoms_key(const std::vector<Atom>& atoms, const Term& watched) {
  return detail::canonical_key(atoms, watched, nullptr);
}

inline std::string canonical_query_key(const ConjunctiveQuery& q) {
  return detail::canonical_key(q.body, std::nullopt, &q.answer_terms);
}

/// One element of an expanded set: the rewritten atoms, the accumulated
/// substitution, and the image of the watched variable under it.
struct ExpansionPair {
  std::vector<Atom> atoms;
  Substitution lambda;
  Term watched_image;
};

enum class RejectReason {
  watched_not_variable,        // the watched image was unified with a constant
  watched_vanished,            // the rewritten set no longer contains the image
  watched_unaffected_position  // some occurrence sits at a non-affected position
};

inline std::string to_string(RejectReason r) {
  switch (r) {
    case RejectReason::watched_not_variable: return "watched image is not a variable";
    case RejectReason::watched_vanished: return "watched variable not in rewritten set";
    case RejectReason::watched_unaffected_position: return "watched variable at non-affected position";
  }
  return "?";
}

struct ExpansionRejection {
  std::size_t tgd = 0;
  Atom target;
  std::vector<Atom> candidate;
  RejectReason reason = RejectReason::watched_vanished;
};

struct ExpansionResult {
  std::vector<ExpansionPair> pairs;
  std::vector<ExpansionRejection> rejections;
};

/// The Expansion procedure over a sticky TGD set: alternating minimization
/// (unifying two atoms of a set) and rewriting (replacing an atom by the body
/// of an applicable rule), keeping a candidate only while the watched image
/// survives as a variable whose occurrences all sit at affected positions.
/// Duplicates are discarded modulo a bijective renaming aligning watched
/// images; membership is tested against the growing set in both steps.
inline ExpansionResult expansion(const std::vector<Atom>& atoms, const Term& watched,
                                 const std::vector<TGD>& tgds, std::size_t cap = 100000) {
  if (!watched.is_variable())
    throw usage_error("expansion: watched term must be a variable");
  std::vector<Atom> a0 = detail::sorted_unique(atoms);
  if (!contains_term(a0, watched))
    throw usage_error("expansion: watched variable does not occur in the atom set");
  const AffectedPositions aff = affected_positions(tgds);

  ExpansionResult res;
  std::set<std::string> seen;
  auto push = [&](std::vector<Atom> set, Substitution lambda, const Term& wimg) {
    set = detail::sorted_unique(std::move(set));
    std::string key = detail::canonical_key(set, wimg, nullptr);
    if (!seen.insert(key).second) return;
    if (res.pairs.size() >= cap)
      throw cap_exceeded("expansion: cap of " + std::to_string(cap) + " pairs exceeded");
    res.pairs.push_back({std::move(set), std::move(lambda), wimg});
  };

  push(a0, Substitution{}, watched);
  std::size_t rename_counter = 1;

  for (std::size_t i = 0; i < res.pairs.size(); ++i) {
    const ExpansionPair p = res.pairs[i];  // copy: the vector grows
    // minimization: unify two atoms of the set
    for (std::size_t x = 0; x < p.atoms.size(); ++x)
      for (std::size_t y = x + 1; y < p.atoms.size(); ++y) {
        auto g = mgu(p.atoms[x], p.atoms[y]);
        if (!g) continue;
        push(g->apply_set(p.atoms), Substitution::compose(*g, p.lambda),
             (*g)(p.watched_image));
      }
    // rewriting: replace one atom by the body of an applicable rule
    for (const Atom& a : p.atoms) {
      for (std::size_t t = 0; t < tgds.size(); ++t) {
        TGD sigma = rename_apart(tgds[t], rename_counter++);
        auto g = is_applicable(sigma, a, p.atoms);
        if (!g) continue;
        std::vector<Atom> replaced;
        for (const Atom& c : p.atoms) {
          if (c == a) {
            for (const Atom& b : sigma.body) replaced.push_back(b);
          } else {
            replaced.push_back(c);
          }
        }
        std::vector<Atom> candidate = g->apply_set(replaced);
        Term wimg = (*g)(p.watched_image);
        if (!wimg.is_variable()) {
          res.rejections.push_back({t, a, candidate, RejectReason::watched_not_variable});
          continue;
        }
        if (!contains_term(candidate, wimg)) {
          res.rejections.push_back({t, a, candidate, RejectReason::watched_vanished});
          continue;
        }
        bool all_affected = true;
        for (const Atom& c : candidate)
          for (std::size_t j = 0; j < c.args.size(); ++j)
            if (c.args[j] == wimg && !aff.count({c.predicate, j + 1})) all_affected = false;
        if (!all_affected) {
          res.rejections.push_back({t, a, candidate, RejectReason::watched_unaffected_position});
          continue;
        }
        push(std::move(candidate), Substitution::compose(*g, p.lambda), wimg);
      }
    }
  }
  return res;
}

/// The rewritten union of conjunctive queries, pairwise non-isomorphic modulo
/// variable renaming that respects the answer tuple.
struct RewriteSet {
  std::vector<ConjunctiveQuery> queries;
};

namespace detail {

/// Replaces the internal "#<n>" variables introduced by standardizing rules
/// apart with readable names, keeping the query's own variables untouched.
inline ConjunctiveQuery presentable(const ConjunctiveQuery& q) {
  std::set<std::string> taken;
  bool any = false;
  for (const std::string& v : variables_in_order(q.body)) {
    if (v.find('#') == std::string::npos)
      taken.insert(v);
    else
      any = true;
  }
  if (!any) return q;
  Substitution ren;
  for (const std::string& v : variables_in_order(q.body)) {
    std::size_t hash = v.find('#');
    if (hash == std::string::npos) continue;
    std::string base = v.substr(0, hash);
    std::string name = base;
    for (std::size_t n = 2; taken.count(name); ++n)
      name = base + "_" + std::to_string(n);
    taken.insert(name);
    ren.bind(Term::variable(v), Term::variable(name));
  }
  ConjunctiveQuery out = q;
  out.body = ren(q.body);
  out.answer_terms = ren(q.answer_terms);
  return out;
}

}  // namespace detail

/// UCQ perfect rewriting of q under a sticky single-head TGD set: the
/// Expansion loop without the watched-variable filters. Answer variables are
/// rigid for applicability condition (ii).
inline RewriteSet perfect_rewrite(const ConjunctiveQuery& q, const std::vector<TGD>& tgds,
                                  std::size_t cap = 100000) {
  q.validate();
  RewriteSet res;
  std::set<std::string> seen;
  auto push = [&](std::vector<Term> answer, std::vector<Atom> body) {
    ConjunctiveQuery cq{q.head_predicate, std::move(answer), detail::sorted_unique(std::move(body))};
    std::string key = canonical_query_key(cq);
    if (!seen.insert(key).second) return;
    if (res.queries.size() >= cap)
      throw cap_exceeded("perfect_rewrite: cap of " + std::to_string(cap) + " queries exceeded");
    res.queries.push_back(std::move(cq));
  };

  push(q.answer_terms, q.body);
  std::size_t rename_counter = 1;

  for (std::size_t i = 0; i < res.queries.size(); ++i) {
    const ConjunctiveQuery cur = res.queries[i];
    std::set<std::string> rigid;
    for (const Term& t : cur.answer_terms)
      if (t.is_variable()) rigid.insert(t.name());
    // minimization
    for (std::size_t x = 0; x < cur.body.size(); ++x)
      for (std::size_t y = x + 1; y < cur.body.size(); ++y) {
        auto g = mgu(cur.body[x], cur.body[y]);
        if (!g) continue;
        push((*g)(cur.answer_terms), g->apply_set(cur.body));
      }
    // rewriting
    for (const Atom& a : cur.body) {
      for (std::size_t t = 0; t < tgds.size(); ++t) {
        TGD sigma = rename_apart(tgds[t], rename_counter++);
        auto g = is_applicable(sigma, a, cur.body, rigid);
        if (!g) continue;
        std::vector<Atom> replaced;
        for (const Atom& c : cur.body) {
          if (c == a) {
            for (const Atom& b : sigma.body) replaced.push_back(b);
          } else {
            replaced.push_back(c);
          }
        }
        push((*g)(cur.answer_terms), g->apply_set(replaced));
      }
    }
  }
  for (ConjunctiveQuery& q2 : res.queries) q2 = detail::presentable(q2);
  return res;
}

/// Certain answers w.r.t. D and a sticky single-head TGD set, computed by
/// evaluating the perfect rewriting directly over D.
inline AnswerSet answer_via_rewriting(const ConjunctiveQuery& q, const Instance& d,
                                      const std::vector<TGD>& tgds,
                                      std::size_t cap = 100000) {
  RewriteSet rs = perfect_rewrite(q, tgds, cap);
  AnswerSet out;
  for (const ConjunctiveQuery& r : rs.queries) {
    AnswerSet part = evaluate(r, d);
    out.insert(part.begin(), part.end());
    if (q.arity() == 0 && !out.empty()) break;
  }
  return out;
}

/// Decides Q1 contained in Q2 w.r.t. the TGDs by freezing Q1 into its
/// canonical database and asking whether the frozen tuple is a certain answer
/// of Q2 over it. Containment is routed through the rewriting, never through
/// the possibly infinite chase of the frozen body.
inline bool cq_containment(const ConjunctiveQuery& q1, const ConjunctiveQuery& q2,
                           const std::vector<TGD>& tgds, std::size_t cap = 100000) {
  if (q1.arity() != q2.arity())
    throw usage_error("cq_containment: arity mismatch");
  FrozenQuery fz = freeze(q1);
  AnswerSet ans = answer_via_rewriting(q2, fz.instance, tgds, cap);
  return ans.count(fz.tuple) != 0;
}

}  // namespace oqa
