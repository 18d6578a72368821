#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "oqa/dependency.hpp"
#include "oqa/errors.hpp"
#include "oqa/parser.hpp"
#include "oqa/separability.hpp"

namespace oqa {

struct BenchRow {
  std::size_t max_arity = 0;
  std::size_t containment_checks = 0;
  double time_seconds = 0.0;
};

struct BenchReport {
  std::string family;
  std::uint64_t seed = 0;
  std::vector<BenchRow> rows;
};

/// The permcascade family of width w: two w-ary predicates e and f, each fed
/// a null by a generator rule, adjacent-transposition rules permuting the
/// arguments of e, and one EGD equating the first arguments of e and f over a
/// shared remainder. The expanded set of the EGD body walks the whole
/// permutation orbit of the e-atom, so the number of containment checks grows
/// factorially with the arity. The family is structurally determined; the
/// bench seed does not alter it.
inline Ontology permcascade(std::size_t arity) {
  if (arity < 2) throw usage_error("permcascade: arity must be at least 2");
  Ontology o;
  o.schema["e"] = arity;
  o.schema["f"] = arity;
  o.schema["ge"] = arity - 1;
  o.schema["gf"] = arity - 1;
  auto var = [](const std::string& base, std::size_t i) {
    return Term::variable(base + std::to_string(i));
  };
  // ge(U1..U_{w-1}) -> exists V e(U1..U_{w-1}, V)
  {
    Atom body{"ge", {}};
    Atom head{"e", {}};
    for (std::size_t i = 1; i < arity; ++i) {
      body.args.push_back(var("U", i));
      head.args.push_back(var("U", i));
    }
    head.args.push_back(Term::variable("V"));
    o.tgds.push_back(TGD{{body}, {head}});
  }
  // gf(U1..U_{w-1}) -> exists V f(V, U1..U_{w-1})
  {
    Atom body{"gf", {}};
    Atom head{"f", {Term::variable("V")}};
    for (std::size_t i = 1; i < arity; ++i) {
      body.args.push_back(var("U", i));
      head.args.push_back(var("U", i));
    }
    o.tgds.push_back(TGD{{body}, {head}});
  }
  // e(X1..Xw) -> e(.. Xi+1, Xi ..) for each adjacent pair
  for (std::size_t i = 1; i < arity; ++i) {
    Atom body{"e", {}};
    for (std::size_t j = 1; j <= arity; ++j) body.args.push_back(var("X", j));
    Atom head = body;
    std::swap(head.args[i - 1], head.args[i]);
    o.tgds.push_back(TGD{{body}, {head}});
  }
  // e(Y1, Z2..Zw), f(Y2, Z2..Zw) -> Y1 = Y2
  {
    Atom e_atom{"e", {Term::variable("Y1")}};
    Atom f_atom{"f", {Term::variable("Y2")}};
    for (std::size_t i = 2; i <= arity; ++i) {
      e_atom.args.push_back(var("Z", i));
      f_atom.args.push_back(var("Z", i));
    }
    o.egds.push_back(EGD{{e_atom, f_atom}, "Y1", "Y2"});
  }
  return o;
}

inline OntologyDocument bench_document(const std::string& family, std::size_t arity) {
  if (family != "permcascade")
    throw usage_error("bench: unknown family '" + family + "'");
  Ontology o = permcascade(arity);
  OntologyDocument doc;
  for (const TGD& t : o.tgds) {
    Statement st;
    st.kind = StatementKind::tgd;
    st.tgd = t;
    doc.statements.push_back(st);
  }
  for (const EGD& e : o.egds) {
    Statement st;
    st.kind = StatementKind::egd;
    st.egd = e;
    doc.statements.push_back(st);
  }
  return doc;
}

/// One row per arity from 2 up to max_arity, in the shape of the separability
/// experiment table: max arity, containment checks, seconds.
inline BenchReport run_bench(const std::string& family, std::size_t max_arity,
                             std::uint64_t seed, std::size_t cap = 1000000) {
  if (family != "permcascade")
    throw usage_error("bench: unknown family '" + family + "'");
  if (max_arity < 2) throw usage_error("bench: max arity must be at least 2");
  BenchReport rep;
  rep.family = family;
  rep.seed = seed;
  for (std::size_t w = 2; w <= max_arity; ++w) {
    Ontology o = permcascade(w);
    auto t0 = std::chrono::steady_clock::now();
    NonConflictingReport r = check_nonconflicting(o, cap);
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.rows.push_back({w, r.containment_checks, dt});
  }
  return rep;
}

inline std::string bench_table(const BenchReport& rep) {
  std::string s = "Max arity | Containment checks | Time (s)\n";
  for (const BenchRow& r : rep.rows) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%9zu | %18zu | %.3f\n", r.max_arity,
                  r.containment_checks, r.time_seconds);
    s += buf;
  }
  return s;
}

}  // namespace oqa
