#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "oqa/dependency.hpp"
#include "oqa/homomorphism.hpp"
#include "oqa/instance.hpp"
#include "oqa/query.hpp"
#include "oqa/substitution.hpp"

namespace oqa {

enum class ChaseStepKind { tgd_fired, egd_applied, egd_failed };

struct ChaseStep {
  std::size_t step = 0;  // 1-based
  ChaseStepKind kind = ChaseStepKind::tgd_fired;
  std::size_t rule = 0;  // index into Ontology::tgds or Ontology::egds
  Substitution bindings;  // body homomorphism
  std::vector<Atom> added;                       // tgd_fired
  std::optional<std::pair<Term, Term>> merge;    // egd_applied: (replaced, replacement)
  std::optional<std::pair<Term, Term>> clash;    // egd_failed: two distinct constants

  friend bool operator==(const ChaseStep& a, const ChaseStep& b) {
    return a.step == b.step && a.kind == b.kind && a.rule == b.rule &&
           a.bindings == b.bindings && a.added == b.added && a.merge == b.merge &&
           a.clash == b.clash;
  }
  friend bool operator!=(const ChaseStep& a, const ChaseStep& b) { return !(a == b); }
};

struct ChaseTrace {
  std::vector<ChaseStep> steps;

  friend bool operator==(const ChaseTrace& a, const ChaseTrace& b) {
    return a.steps == b.steps;
  }
  friend bool operator!=(const ChaseTrace& a, const ChaseTrace& b) { return !(a == b); }
};

enum class ChaseResultKind { completed, failed, exhausted };

struct ChaseOutcome {
  ChaseResultKind kind = ChaseResultKind::completed;
  /// Final instance (completed), the prefix at the budget (exhausted), or the
  /// prefix right before the failing application (failed).
  Instance instance;
  std::size_t steps = 0;  // applied steps; for failed this counts the failing one
  std::size_t fail_egd = 0;
  std::optional<std::pair<Term, Term>> clash;
  ChaseTrace trace;
};

namespace detail {

struct EgdCandidate {
  std::size_t egd;
  std::vector<Term> image;  // body variables in first-occurrence order
  Substitution hom;
};

/// Least applicable EGD instance under (EGD index, lexicographic body image).
inline std::optional<EgdCandidate> least_egd_candidate(const Instance& inst,
                                                       const std::vector<EGD>& egds) {
  std::optional<EgdCandidate> best;
  for (std::size_t e = 0; e < egds.size(); ++e) {
    const EGD& egd = egds[e];
    const auto vars = variables_in_order(egd.body);
    const Term l = Term::variable(egd.lhs);
    const Term r = Term::variable(egd.rhs);
    for_each_homomorphism(egd.body, inst, {}, [&](const Substitution& h) {
      if (h(l) == h(r)) return true;
      std::vector<Term> image;
      image.reserve(vars.size());
      for (const std::string& v : vars) image.push_back(h(Term::variable(v)));
      if (!best || image < best->image) best = EgdCandidate{e, std::move(image), h};
      return true;
    });
    if (best) break;  // lower EGD index always wins
  }
  return best;
}

class ChaseEngine {
 public:
  ChaseEngine(const Instance& d, const Ontology& onto, std::size_t budget)
      : onto_(onto), inst_(d), budget_(budget) {
    next_null_ = d.max_null_index() + 1;
    for (const Atom& a : d.atoms()) level_[a] = 0;
  }

  ChaseOutcome run() {
    while (true) {
      auto trig = least_unfired_trigger();
      bool fired = false;
      if (trig) {
        if (steps_ == budget_) return outcome(ChaseResultKind::exhausted);
        fire(*trig);
        fired = true;
      }
      std::size_t applications = 0;
      EgdPhase ph = egd_phase(applications);
      if (ph == EgdPhase::failed) return outcome(ChaseResultKind::failed);
      if (ph == EgdPhase::exhausted) return outcome(ChaseResultKind::exhausted);
      if (!fired && applications == 0) return outcome(ChaseResultKind::completed);
    }
  }

 private:
  struct Trigger {
    std::size_t level;
    std::size_t tgd;
    std::vector<Term> image;
    Substitution hom;

    bool precedes(const Trigger& o) const {
      if (level != o.level) return level < o.level;
      if (tgd != o.tgd) return tgd < o.tgd;
      return image < o.image;
    }
  };

  enum class EgdPhase { quiescent, failed, exhausted };

  std::optional<Trigger> least_unfired_trigger() const {
    std::optional<Trigger> best;
    for (std::size_t t = 0; t < onto_.tgds.size(); ++t) {
      const TGD& tgd = onto_.tgds[t];
      const auto vars = variables_in_order(tgd.body);
      for_each_homomorphism(tgd.body, inst_, {}, [&](const Substitution& h) {
        std::vector<Term> image;
        image.reserve(vars.size());
        for (const std::string& v : vars) image.push_back(h(Term::variable(v)));
        if (fired_.count({t, image})) return true;
        std::size_t level = 0;
        for (const Atom& b : tgd.body) {
          auto it = level_.find(h(b));
          if (it != level_.end() && it->second > level) level = it->second;
        }
        Trigger cand{level, t, std::move(image), h};
        if (!best || cand.precedes(*best)) best = std::move(cand);
        return true;
      });
    }
    return best;
  }

  void fire(const Trigger& trig) {
    const TGD& tgd = onto_.tgds[trig.tgd];
    Substitution h = trig.hom;
    for (const std::string& z : tgd.existentials())
      h.bind(Term::variable(z), Term::null(next_null_++));
    std::vector<Atom> added;
    std::set<Atom> seen;
    for (const Atom& a : tgd.head) {
      Atom g = h(a);
      if (seen.insert(g).second) added.push_back(g);
      if (inst_.add(g)) level_[g] = trig.level + 1;
    }
    fired_.insert({trig.tgd, trig.image});
    ++steps_;
    ChaseStep st;
    st.step = steps_;
    st.kind = ChaseStepKind::tgd_fired;
    st.rule = trig.tgd;
    st.bindings = trig.hom;
    st.added = std::move(added);
    trace_.steps.push_back(std::move(st));
  }

  EgdPhase egd_phase(std::size_t& applications) {
    while (true) {
      auto cand = least_egd_candidate(inst_, onto_.egds);
      if (!cand) return EgdPhase::quiescent;
      if (steps_ == budget_) return EgdPhase::exhausted;
      const EGD& egd = onto_.egds[cand->egd];
      Term u = cand->hom(Term::variable(egd.lhs));
      Term v = cand->hom(Term::variable(egd.rhs));
      ++steps_;
      if (u.is_constant() && v.is_constant()) {
        // hard violation
        fail_egd_ = cand->egd;
        clash_ = {u, v};
        ChaseStep st;
        st.step = steps_;
        st.kind = ChaseStepKind::egd_failed;
        st.rule = cand->egd;
        st.bindings = cand->hom;
        st.clash = clash_;
        trace_.steps.push_back(std::move(st));
        return EgdPhase::failed;
      }
      Term earlier = u, later = v;
      if (compare_terms(u, v) > 0) std::swap(earlier, later);
      rename(later, earlier);
      ++applications;
      ChaseStep st;
      st.step = steps_;
      st.kind = ChaseStepKind::egd_applied;
      st.rule = cand->egd;
      st.bindings = cand->hom;
      st.merge = std::make_pair(later, earlier);
      trace_.steps.push_back(std::move(st));
    }
  }

  void rename(const Term& from, const Term& to) {
    Instance renamed;
    std::map<Atom, std::size_t> levels;
    for (const auto& [a, lvl] : level_) {
      Atom b = a;
      for (Term& t : b.args)
        if (t == from) t = to;
      auto it = levels.find(b);
      if (it == levels.end())
        levels[b] = lvl;
      else if (lvl < it->second)
        it->second = lvl;
    }
    for (const auto& [a, lvl] : levels) renamed.add(a);
    inst_ = std::move(renamed);
    level_ = std::move(levels);
    // fired trigger keys follow the merge so a trigger is not re-fired
    // under its new name
    std::set<std::pair<std::size_t, std::vector<Term>>> fired;
    for (const auto& [t, image] : fired_) {
      std::vector<Term> img = image;
      for (Term& x : img)
        if (x == from) x = to;
      fired.insert({t, std::move(img)});
    }
    fired_ = std::move(fired);
  }

  ChaseOutcome outcome(ChaseResultKind kind) const {
    ChaseOutcome o;
    o.kind = kind;
    o.instance = inst_;
    o.steps = steps_;
    o.fail_egd = fail_egd_;
    o.clash = clash_;
    o.trace = trace_;
    return o;
  }

  const Ontology& onto_;
  Instance inst_;
  std::map<Atom, std::size_t> level_;
  std::set<std::pair<std::size_t, std::vector<Term>>> fired_;
  std::uint64_t next_null_ = 1;
  std::size_t budget_ = 0;
  std::size_t steps_ = 0;
  std::size_t fail_egd_ = 0;
  std::optional<std::pair<Term, Term>> clash_;
  ChaseTrace trace_;
};

}  // namespace detail

/// Oblivious breadth-first chase. One iteration applies the TGD chase rule
/// once (the least unfired trigger under (level, rule index, body image)) and
/// then the EGD chase rule to fixpoint. Every TGD firing and every single EGD
/// application counts as one step against the budget.
inline ChaseOutcome chase(const Instance& d, const Ontology& onto, std::size_t budget) {
  onto.validate();
  detail::ChaseEngine engine(d, onto, budget);
  return engine.run();
}

/// The first k chase steps: returns chase_k(D, Sigma) when it exists, or the
/// failure record when the chase fails at a step <= k.
inline ChaseOutcome chase_prefix(const Instance& d, const Ontology& onto, std::size_t k) {
  return chase(d, onto, k);
}

/// Applies the EGD chase rule as long as it is applicable on a plain
/// instance. Applications are capped by max_applications.
struct EgdFixpointOutcome {
  bool failed = false;
  std::size_t egd = 0;
  std::optional<std::pair<Term, Term>> clash;
  Instance instance;
  std::size_t applications = 0;
};

inline EgdFixpointOutcome egd_fixpoint(Instance inst, const std::vector<EGD>& egds,
                                       std::size_t max_applications = SIZE_MAX) {
  EgdFixpointOutcome out;
  while (out.applications < max_applications) {
    auto cand = detail::least_egd_candidate(inst, egds);
    if (!cand) break;
    const EGD& egd = egds[cand->egd];
    Term u = cand->hom(Term::variable(egd.lhs));
    Term v = cand->hom(Term::variable(egd.rhs));
    if (u.is_constant() && v.is_constant()) {
      out.failed = true;
      out.egd = cand->egd;
      out.clash = {u, v};
      out.instance = std::move(inst);
      return out;
    }
    Term earlier = u, later = v;
    if (compare_terms(u, v) > 0) std::swap(earlier, later);
    inst = inst.renamed(later, earlier);
    ++out.applications;
  }
  out.instance = std::move(inst);
  return out;
}

/// Replays a trace from the original instance; reproduces the engine's
/// result exactly.
inline Instance replay_trace(const Instance& d, const ChaseTrace& trace) {
  Instance inst = d;
  for (const ChaseStep& st : trace.steps) {
    switch (st.kind) {
      case ChaseStepKind::tgd_fired:
        for (const Atom& a : st.added) inst.add(a);
        break;
      case ChaseStepKind::egd_applied:
        inst = inst.renamed(st.merge->first, st.merge->second);
        break;
      case ChaseStepKind::egd_failed:
        break;
    }
  }
  return inst;
}

}  // namespace oqa
