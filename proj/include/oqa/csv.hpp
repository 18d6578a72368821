#pragma once

#include <cctype>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "oqa/atom.hpp"
#include "oqa/instance.hpp"

namespace oqa {

struct CsvImport {
  std::vector<Atom> atoms;
  std::vector<std::string> errors;
};

namespace detail {

inline bool valid_constant_token(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

/// "_z<i>" denotes a labeled null (appears in exported chase results).
inline bool null_token(const std::string& s, std::uint64_t& index) {
  if (s.size() < 3 || s[0] != '_' || s[1] != 'z') return false;
  index = 0;
  for (std::size_t i = 2; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    index = index * 10 + static_cast<std::uint64_t>(s[i] - '0');
  }
  return true;
}

}  // namespace detail

/// One fact per line: predicate,arg1,...,argN. Arguments are constants or
/// exported null tokens; blank lines are skipped.
inline CsvImport import_facts_csv(std::istream& in) {
  CsvImport out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!detail::valid_constant_token(fields[0])) {
      out.errors.push_back("line " + std::to_string(lineno) + ": bad predicate name '" +
                           fields[0] + "'");
      continue;
    }
    Atom a{fields[0], {}};
    bool ok = true;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      std::uint64_t idx = 0;
      if (detail::valid_constant_token(fields[i])) {
        a.args.push_back(Term::constant(fields[i]));
      } else if (detail::null_token(fields[i], idx)) {
        a.args.push_back(Term::null(idx));
      } else {
        out.errors.push_back("line " + std::to_string(lineno) + ": bad argument '" +
                             fields[i] + "'");
        ok = false;
        break;
      }
    }
    if (ok) out.atoms.push_back(std::move(a));
  }
  return out;
}

/// Rows sorted by predicate then arguments; export then import is stable.
inline void export_facts_csv(const Instance& d, std::ostream& out) {
  for (const Atom& a : d.atoms()) {
    out << a.predicate;
    for (const Term& t : a.args) out << ',' << to_string(t);
    out << '\n';
  }
}

}  // namespace oqa
