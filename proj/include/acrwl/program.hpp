#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "acrwl/term.hpp"

namespace acrwl {

struct SrcPos {
  int line = 0;
  int col = 0;
};

class Error : public std::runtime_error {
 public:
  Error(std::string file, SrcPos pos, const std::string& msg)
      : std::runtime_error(format(file, pos, msg)), file_(std::move(file)), pos_(pos) {}
  SrcPos pos() const { return pos_; }

 private:
  static std::string format(const std::string& file, SrcPos pos, const std::string& msg);
  std::string file_;
  SrcPos pos_;
};

// Types reuse Term: type constructors are applications, type variables are
// variables.
using TypeExpr = Term;

struct SymbolType {
  std::vector<TypeExpr> args;
  TypeExpr result;
};

enum class SymKind { None, Cons, Fun };

class Signature {
 public:
  void add_datatype(Sym k, size_t arity, SrcPos pos, const std::string& file);
  void add_symbol(SymKind kind, Sym s, SymbolType type, SrcPos pos, const std::string& file);

  bool is_datatype(Sym k) const { return datatypes_.count(k) > 0; }
  size_t datatype_arity(Sym k) const { return datatypes_.at(k); }
  SymKind kind(Sym s) const;
  bool is_cons(Sym s) const { return kind(s) == SymKind::Cons; }
  bool is_fun(Sym s) const { return kind(s) == SymKind::Fun; }
  const SymbolType& type_of(Sym s) const;
  size_t arity(Sym s) const { return type_of(s).args.size(); }
  // Head of the result type of a constructor.
  Sym datatype_of(Sym cons) const { return type_of(cons).result.head(); }

  const std::map<Sym, size_t>& datatypes() const { return datatypes_; }
  const std::vector<Sym>& constructors() const { return cons_order_; }
  const std::vector<Sym>& functions() const { return fun_order_; }

 private:
  std::map<Sym, size_t> datatypes_;
  std::map<Sym, std::pair<SymKind, SymbolType>> symbols_;
  std::vector<Sym> cons_order_, fun_order_;
};

struct Join {
  Term lhs, rhs;
  friend bool operator==(const Join& a, const Join& b) { return a.lhs == b.lhs && a.rhs == b.rhs; }
};

struct Axiom {
  Term lhs, rhs;
  SrcPos pos;
};

struct AxiomClass {
  bool regular = false;
  bool collapsing = false;
  bool strongly_regular = false;
};

struct Rule {
  Sym fun;
  std::vector<Term> lhs_args;
  Term rhs;
  std::vector<Join> conds;
  SrcPos pos;

  Term lhs() const { return Term::app(fun, lhs_args); }
  std::vector<Var> vars() const;
  bool regular() const;
};

// Left-linear oriented axiom rule c(l1..ln) -> r <= conds.
struct OrientedRule {
  Term lhs, rhs;
  std::vector<Join> conds;
  size_t axiom = 0;  // index into Program::axioms
  bool forward = true;
  std::vector<Var> vars() const;
};

struct Program {
  std::string file = "<input>";
  Signature sig;
  std::vector<Axiom> axioms;
  std::vector<Rule> rules;
  std::vector<std::vector<Join>> goals;  // optional `goal` declarations
  std::unordered_map<const void*, SrcPos> positions;

  // Derived by finalize().
  std::vector<OrientedRule> oriented;
  std::map<Sym, std::vector<size_t>> rules_by_fun;
  std::map<Sym, std::vector<size_t>> oriented_by_cons;

  void finalize();
  bool is_algebraic(Sym c) const { return algebraic_.count(c) > 0; }
  bool is_free(Sym c) const { return sig.is_cons(c) && !is_algebraic(c); }
  SrcPos pos_of(const Term& t) const;

  bool is_data_term(const Term& t) const;  // no function symbols
  bool is_expr(const Term& t) const;       // declared symbols, arities match

 private:
  std::set<Sym> algebraic_;
};

std::string to_string(const Join& j);
std::string to_string(const Rule& r);
std::string to_string(const OrientedRule& r);

}  // namespace acrwl
