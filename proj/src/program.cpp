#include "acrwl/program.hpp"

#include <algorithm>
#include <sstream>

#include "acrwl/axioms.hpp"

namespace acrwl {

std::string Error::format(const std::string& file, SrcPos pos, const std::string& msg) {
  std::ostringstream os;
  os << file;
  if (pos.line > 0) os << ':' << pos.line << ':' << pos.col;
  os << ": " << msg;
  return os.str();
}

void Signature::add_datatype(Sym k, size_t arity, SrcPos pos, const std::string& file) {
  if (datatypes_.count(k)) throw Error(file, pos, "duplicate declaration of datatype '" + sym_name(k) + "'");
  datatypes_[k] = arity;
}

void Signature::add_symbol(SymKind kind, Sym s, SymbolType type, SrcPos pos, const std::string& file) {
  if (symbols_.count(s)) throw Error(file, pos, "duplicate declaration of '" + sym_name(s) + "'");
  symbols_.emplace(s, std::make_pair(kind, std::move(type)));
  (kind == SymKind::Cons ? cons_order_ : fun_order_).push_back(s);
}

SymKind Signature::kind(Sym s) const {
  auto it = symbols_.find(s);
  return it == symbols_.end() ? SymKind::None : it->second.first;
}

const SymbolType& Signature::type_of(Sym s) const {
  auto it = symbols_.find(s);
  if (it == symbols_.end()) throw std::out_of_range("undeclared symbol " + sym_name(s));
  return it->second.second;
}

std::vector<Var> Rule::vars() const {
  std::vector<Var> out;
  for (const auto& a : lhs_args) collect_vars(a, out);
  collect_vars(rhs, out);
  for (const auto& c : conds) {
    collect_vars(c.lhs, out);
    collect_vars(c.rhs, out);
  }
  return out;
}

bool Rule::regular() const {
  std::vector<Var> head;
  for (const auto& a : lhs_args) collect_vars(a, head);
  for (Var v : dvar(rhs))
    if (std::find(head.begin(), head.end(), v) == head.end()) return false;
  return true;
}

std::vector<Var> OrientedRule::vars() const {
  std::vector<Var> out;
  collect_vars(lhs, out);
  collect_vars(rhs, out);
  for (const auto& c : conds) {
    collect_vars(c.lhs, out);
    collect_vars(c.rhs, out);
  }
  return out;
}

void Program::finalize() {
  algebraic_.clear();
  for (const auto& ax : axioms)
    for (const Term* side : {&ax.lhs, &ax.rhs})
      if (side->is_app()) algebraic_.insert(side->head());
  oriented = linearize(axioms);
  rules_by_fun.clear();
  oriented_by_cons.clear();
  for (size_t i = 0; i < rules.size(); ++i) rules_by_fun[rules[i].fun].push_back(i);
  for (size_t i = 0; i < oriented.size(); ++i)
    if (oriented[i].lhs.is_app()) oriented_by_cons[oriented[i].lhs.head()].push_back(i);
}

SrcPos Program::pos_of(const Term& t) const {
  auto it = positions.find(t.identity());
  return it == positions.end() ? SrcPos{} : it->second;
}

bool Program::is_data_term(const Term& t) const {
  if (!t.is_app()) return true;
  if (!sig.is_cons(t.head())) return false;
  for (const auto& a : t.args())
    if (!is_data_term(a)) return false;
  return true;
}

bool Program::is_expr(const Term& t) const {
  if (!t.is_app()) return true;
  if (sig.kind(t.head()) == SymKind::None || sig.arity(t.head()) != t.arity()) return false;
  for (const auto& a : t.args())
    if (!is_expr(a)) return false;
  return true;
}

std::string to_string(const Join& j) { return to_string(j.lhs) + " == " + to_string(j.rhs); }

namespace {
std::string conds_suffix(const std::vector<Join>& conds) {
  if (conds.empty()) return "";
  std::string s = " <= ";
  for (size_t i = 0; i < conds.size(); ++i) s += (i ? ", " : "") + to_string(conds[i]);
  return s;
}
}  // namespace

std::string to_string(const Rule& r) {
  return to_string(r.lhs()) + " -> " + to_string(r.rhs) + conds_suffix(r.conds);
}

std::string to_string(const OrientedRule& r) {
  return to_string(r.lhs) + " -> " + to_string(r.rhs) + conds_suffix(r.conds);
}

}  // namespace acrwl
