#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oqa/dependency.hpp"
#include "oqa/instance.hpp"
#include "oqa/query.hpp"

namespace oqa {

struct Diagnostic {
  std::size_t line = 0;
  std::size_t col = 0;
  std::string message;
};

inline std::string to_string(const Diagnostic& d) {
  return std::to_string(d.line) + ":" + std::to_string(d.col) + ": " + d.message;
}

enum class StatementKind { tgd, egd, constraint, fact, query };

struct Statement {
  StatementKind kind = StatementKind::fact;
  TGD tgd;
  EGD egd;
  NegativeConstraint constraint;
  Atom fact;
  ConjunctiveQuery query;
  std::size_t line = 0;
  std::size_t col = 0;

  friend bool operator==(const Statement& a, const Statement& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case StatementKind::tgd: return a.tgd == b.tgd;
      case StatementKind::egd: return a.egd == b.egd;
      case StatementKind::constraint: return a.constraint == b.constraint;
      case StatementKind::fact: return a.fact == b.fact;
      case StatementKind::query: return a.query == b.query;
    }
    return false;
  }
  friend bool operator!=(const Statement& a, const Statement& b) { return !(a == b); }
};

struct OntologyDocument {
  std::vector<Statement> statements;

  friend bool operator==(const OntologyDocument& a, const OntologyDocument& b) {
    return a.statements == b.statements;
  }
  friend bool operator!=(const OntologyDocument& a, const OntologyDocument& b) {
    return !(a == b);
  }
};

/// Parse result plus the assembled ontology, data and named queries.
/// The assembled pieces are meaningful only when diagnostics is empty.
struct ParsedProgram {
  OntologyDocument doc;
  Ontology ontology;
  Instance data;
  std::map<std::string, ConjunctiveQuery> queries;  // keyed by head predicate
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

namespace detail {

enum class TokKind { ident, var, lparen, rparen, comma, period, colon, arrow, colondash, equals, end, bad };

struct Token {
  TokKind kind = TokKind::end;
  std::string text;
  std::size_t line = 1;
  std::size_t col = 1;
};

inline std::vector<Token> lex(std::string_view src, std::vector<Diagnostic>& diags) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto bump = [&](std::size_t n = 1) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (i < src.size() && src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') bump();
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      bump();
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
        bump();
      t.text = std::string(src.substr(start, i - start));
      t.kind = std::isupper(static_cast<unsigned char>(c)) ? TokKind::var : TokKind::ident;
      out.push_back(std::move(t));
      continue;
    }
    switch (c) {
      case '(': t.kind = TokKind::lparen; bump(); break;
      case ')': t.kind = TokKind::rparen; bump(); break;
      case ',': t.kind = TokKind::comma; bump(); break;
      case '.': t.kind = TokKind::period; bump(); break;
      case '=': t.kind = TokKind::equals; bump(); break;
      case ':':
        if (i + 1 < src.size() && src[i + 1] == '-') {
          t.kind = TokKind::colondash;
          bump(2);
        } else {
          t.kind = TokKind::colon;
          bump();
        }
        break;
      case '-':
        if (i + 1 < src.size() && src[i + 1] == '>') {
          t.kind = TokKind::arrow;
          bump(2);
        } else {
          t.kind = TokKind::bad;
          t.text = "-";
          diags.push_back({line, col, "stray '-' (expected '->')"});
          bump();
        }
        break;
      default:
        t.kind = TokKind::bad;
        t.text = std::string(1, c);
        diags.push_back({line, col, std::string("unexpected character '") + c + "'"});
        bump();
        break;
    }
    out.push_back(std::move(t));
  }
  Token eof;
  eof.kind = TokKind::end;
  eof.line = line;
  eof.col = col;
  out.push_back(eof);
  return out;
}

struct parse_fail {
  Diagnostic diag;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::vector<Diagnostic>& diags)
      : toks_(std::move(toks)), diags_(diags) {}

  std::vector<Statement> parse() {
    std::vector<Statement> out;
    while (peek().kind != TokKind::end) {
      try {
        out.push_back(statement());
      } catch (const parse_fail& f) {
        diags_.push_back(f.diag);
        sync();
      }
    }
    return out;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t j = pos_ + ahead;
    return j < toks_.size() ? toks_[j] : toks_.back();
  }
  Token advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  [[noreturn]] void fail(const Token& at, std::string msg) {
    throw parse_fail{{at.line, at.col, std::move(msg)}};
  }
  Token expect(TokKind k, const char* what) {
    if (peek().kind != k) fail(peek(), std::string("expected ") + what);
    return advance();
  }
  void sync() {
    while (peek().kind != TokKind::end) {
      if (advance().kind == TokKind::period) return;
    }
  }

  Term term() {
    const Token& t = peek();
    if (t.kind == TokKind::ident) return Term::constant(advance().text);
    if (t.kind == TokKind::var) return Term::variable(advance().text);
    fail(t, "expected a term");
  }

  Atom atom() {
    Token name = expect(TokKind::ident, "a predicate name");
    Atom a{name.text, {}};
    if (peek().kind == TokKind::lparen) {
      advance();
      if (peek().kind != TokKind::rparen) {
        a.args.push_back(term());
        while (peek().kind == TokKind::comma) {
          advance();
          a.args.push_back(term());
        }
      }
      expect(TokKind::rparen, "')'");
    }
    return a;
  }

  std::vector<Atom> atom_list() {
    std::vector<Atom> out{atom()};
    while (peek().kind == TokKind::comma) {
      advance();
      out.push_back(atom());
    }
    return out;
  }

  Statement statement() {
    Token kw = expect(TokKind::ident, "a statement kind (tgd, egd, constraint, fact, query)");
    Statement st;
    st.line = kw.line;
    st.col = kw.col;
    expect(TokKind::colon, "':'");
    if (kw.text == "tgd") {
      st.kind = StatementKind::tgd;
      st.tgd.body = atom_list();
      expect(TokKind::arrow, "'->'");
      std::vector<Token> declared;
      if (peek().kind == TokKind::ident && peek().text == "exists") {
        advance();
        // existential variables; the list ends where the head atoms begin
        declared.push_back(expect(TokKind::var, "an existential variable"));
        while (peek().kind == TokKind::comma && peek(1).kind == TokKind::var) {
          advance();
          declared.push_back(expect(TokKind::var, "an existential variable"));
        }
        if (peek().kind == TokKind::comma) advance();  // optional comma before the head
      }
      st.tgd.head = atom_list();
      // the declared list must be exactly the head-only variables
      auto body_vars = variable_set(st.tgd.body);
      auto head_vars = variable_set(st.tgd.head);
      std::set<std::string> decl;
      for (const Token& v : declared) {
        if (!decl.insert(v.text).second)
          fail(v, "existential variable " + v.text + " declared twice");
        if (!head_vars.count(v.text))
          fail(v, "existential variable " + v.text + " does not occur in the head");
        if (body_vars.count(v.text))
          fail(v, "existential variable " + v.text + " occurs in the body");
      }
      for (const std::string& v : head_vars)
        if (!body_vars.count(v) && !decl.count(v))
          fail(kw, "head variable " + v + " neither occurs in the body nor is declared existential");
    } else if (kw.text == "egd") {
      st.kind = StatementKind::egd;
      st.egd.body = atom_list();
      expect(TokKind::arrow, "'->'");
      st.egd.lhs = expect(TokKind::var, "a variable").text;
      expect(TokKind::equals, "'='");
      st.egd.rhs = expect(TokKind::var, "a variable").text;
    } else if (kw.text == "constraint") {
      st.kind = StatementKind::constraint;
      st.constraint.body = atom_list();
      expect(TokKind::arrow, "'->'");
      Token f = expect(TokKind::ident, "'false'");
      if (f.text != "false") fail(f, "constraint heads must be 'false'");
    } else if (kw.text == "fact") {
      st.kind = StatementKind::fact;
      st.fact = atom();
    } else if (kw.text == "query") {
      st.kind = StatementKind::query;
      Token name = expect(TokKind::ident, "a query head");
      st.query.head_predicate = name.text;
      if (peek().kind == TokKind::lparen) {
        advance();
        if (peek().kind != TokKind::rparen) {
          st.query.answer_terms.push_back(term());
          while (peek().kind == TokKind::comma) {
            advance();
            st.query.answer_terms.push_back(term());
          }
        }
        expect(TokKind::rparen, "')'");
      }
      expect(TokKind::colondash, "':-'");
      st.query.body = atom_list();
    } else {
      fail(kw, "unknown statement kind '" + kw.text + "'");
    }
    expect(TokKind::period, "'.'");
    return st;
  }

  std::vector<Token> toks_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
};

inline bool reserved_predicate(const std::string& name) {
  if (name == "neq") return true;
  if (name.rfind("aux", 0) == 0) {
    bool digits = true;
    for (std::size_t i = 3; i < name.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
    if (digits) return true;  // aux, aux1, aux2, ...
  }
  return false;
}

inline bool reserved_constant(const std::string& name) {
  return name.rfind("frz_", 0) == 0;
}

}  // namespace detail

/// Parses a DSL program and assembles the ontology, the data instance and the
/// named queries. Diagnostics carry line and column; an error in one
/// statement does not stop the collection of further errors.
inline ParsedProgram parse_ontology(std::string_view text) {
  ParsedProgram prog;
  std::vector<detail::Token> toks = detail::lex(text, prog.diagnostics);
  detail::Parser parser(std::move(toks), prog.diagnostics);
  prog.doc.statements = parser.parse();

  auto diag = [&](const Statement& st, std::string msg) {
    prog.diagnostics.push_back({st.line, st.col, std::move(msg)});
  };

  // schema: first use fixes the arity
  auto see_atom = [&](const Statement& st, const Atom& a) {
    if (detail::reserved_predicate(a.predicate)) {
      diag(st, "predicate name '" + a.predicate + "' is reserved");
      return;
    }
    auto it = prog.ontology.schema.find(a.predicate);
    if (it == prog.ontology.schema.end()) {
      prog.ontology.schema[a.predicate] = a.arity();
    } else if (it->second != a.arity()) {
      diag(st, "predicate " + a.predicate + " used with arity " +
                   std::to_string(a.arity()) + " but earlier with " +
                   std::to_string(it->second));
    }
    for (const Term& t : a.args)
      if (t.is_constant() && detail::reserved_constant(t.name()))
        diag(st, "constant '" + t.name() + "' uses the reserved frz_ prefix");
  };
  auto require_constant_free = [&](const Statement& st, const std::vector<Atom>& atoms,
                                   const char* where) {
    for (const Atom& a : atoms)
      for (const Term& t : a.args)
        if (!t.is_variable())
          diag(st, std::string(where) + " atoms must be constant-free, found " +
                       to_string(t) + " in " + to_string(a));
  };

  for (const Statement& st : prog.doc.statements) {
    switch (st.kind) {
      case StatementKind::tgd: {
        for (const Atom& a : st.tgd.body) see_atom(st, a);
        for (const Atom& a : st.tgd.head) see_atom(st, a);
        require_constant_free(st, st.tgd.body, "dependency");
        require_constant_free(st, st.tgd.head, "dependency");
        prog.ontology.tgds.push_back(st.tgd);
        break;
      }
      case StatementKind::egd: {
        for (const Atom& a : st.egd.body) see_atom(st, a);
        require_constant_free(st, st.egd.body, "dependency");
        auto vars = variable_set(st.egd.body);
        if (st.egd.lhs == st.egd.rhs)
          diag(st, "egd equates a variable with itself");
        if (!vars.count(st.egd.lhs) || !vars.count(st.egd.rhs))
          diag(st, "egd equates variables that do not both occur in the body");
        prog.ontology.egds.push_back(st.egd);
        break;
      }
      case StatementKind::constraint: {
        for (const Atom& a : st.constraint.body) see_atom(st, a);
        require_constant_free(st, st.constraint.body, "constraint");
        prog.ontology.constraints.push_back(st.constraint);
        break;
      }
      case StatementKind::fact: {
        see_atom(st, st.fact);
        bool ground = true;
        for (const Term& t : st.fact.args)
          if (!t.is_constant()) ground = false;
        if (!ground) {
          diag(st, "facts must be ground, found a variable in " + to_string(st.fact));
        } else {
          prog.data.add(st.fact);
        }
        break;
      }
      case StatementKind::query: {
        for (const Atom& a : st.query.body) see_atom(st, a);
        auto vars = variable_set(st.query.body);
        for (const Term& t : st.query.answer_terms) {
          if (t.is_variable() && !vars.count(t.name()))
            diag(st, "answer variable " + t.name() + " does not occur in the query body");
          if (t.is_constant() && detail::reserved_constant(t.name()))
            diag(st, "constant '" + t.name() + "' uses the reserved frz_ prefix");
        }
        if (prog.queries.count(st.query.head_predicate))
          diag(st, "duplicate query name " + st.query.head_predicate);
        else
          prog.queries.emplace(st.query.head_predicate, st.query);
        break;
      }
    }
  }
  // query heads live outside the data schema
  for (const Statement& st : prog.doc.statements)
    if (st.kind == StatementKind::query &&
        prog.ontology.schema.count(st.query.head_predicate))
      diag(st, "query head " + st.query.head_predicate +
                   " collides with a data predicate");
  return prog;
}

/// Canonical text of a document; parse(print(doc)) reproduces doc.
inline std::string print(const OntologyDocument& doc) {
  std::string out;
  for (const Statement& st : doc.statements) {
    switch (st.kind) {
      case StatementKind::tgd:
        out += "tgd: " + to_string(st.tgd) + ".\n";
        break;
      case StatementKind::egd:
        out += "egd: " + to_string(st.egd) + ".\n";
        break;
      case StatementKind::constraint:
        out += "constraint: " + to_string(st.constraint) + ".\n";
        break;
      case StatementKind::fact:
        out += "fact: " + to_string(st.fact) + ".\n";
        break;
      case StatementKind::query:
        out += "query: " + to_string(st.query) + ".\n";
        break;
    }
  }
  return out;
}

}  // namespace oqa
