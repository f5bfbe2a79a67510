#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace acrwl {

// Interned name. Symbols (constructors, functions, type constructors) and
// variables (data and type) live in two separate tables.
struct Sym {
  uint32_t id = 0;
  friend bool operator==(Sym a, Sym b) { return a.id == b.id; }
  friend bool operator!=(Sym a, Sym b) { return a.id != b.id; }
  friend bool operator<(Sym a, Sym b) { return a.id < b.id; }
};

struct Var {
  uint32_t id = 0;
  friend bool operator==(Var a, Var b) { return a.id == b.id; }
  friend bool operator!=(Var a, Var b) { return a.id != b.id; }
  friend bool operator<(Var a, Var b) { return a.id < b.id; }
};

Sym intern_sym(std::string_view name);
const std::string& sym_name(Sym s);
Var intern_var(std::string_view name);
const std::string& var_name(Var v);

// Never collides with a source identifier: '#' is not lexable.
Var fresh_var(std::string_view hint);

}  // namespace acrwl

template <>
struct std::hash<acrwl::Sym> {
  size_t operator()(acrwl::Sym s) const noexcept { return s.id; }
};
template <>
struct std::hash<acrwl::Var> {
  size_t operator()(acrwl::Var v) const noexcept { return v.id; }
};

namespace acrwl {

enum class Kind : uint8_t { Bottom, Var, App };

class Term {
 public:
  struct Node;

  Term();  // bottom
  static Term bottom();
  static Term var(Var v);
  static Term var(std::string_view name) { return var(intern_var(name)); }
  static Term app(Sym f, std::vector<Term> args = {});
  static Term app(std::string_view f, std::vector<Term> args = {}) {
    return app(intern_sym(f), std::move(args));
  }

  Kind kind() const;
  bool is_bottom() const { return kind() == Kind::Bottom; }
  bool is_var() const { return kind() == Kind::Var; }
  bool is_app() const { return kind() == Kind::App; }

  Var var_id() const;
  Sym head() const;
  const std::vector<Term>& args() const;
  size_t arity() const { return args().size(); }
  const Term& arg(size_t i) const { return args()[i]; }

  size_t hash() const;
  uint32_t size() const;   // node count
  uint32_t depth() const;  // leaves have depth 1
  bool has_bottom() const;
  bool is_ground() const;  // no variables

  const void* identity() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Total order: bottom < variables (by name) < applications (name, arity, args).
int compare(const Term& a, const Term& b);
struct TermLess {
  bool operator()(const Term& a, const Term& b) const { return compare(a, b) < 0; }
};

std::string to_string(const Term& t);
std::ostream& operator<<(std::ostream& os, const Term& t);

// Variables in order of first occurrence.
std::vector<Var> dvar(const Term& t);
void collect_vars(const Term& t, std::vector<Var>& out);
std::set<Var> var_set(const Term& t);
bool occurs(Var v, const Term& t);
size_t count_occurrences(Var v, const Term& t);
bool is_linear(const std::vector<Term>& tuple);

using Position = std::vector<uint32_t>;
const Term& subterm_at(const Term& t, const Position& p);
Term replace_at(const Term& t, const Position& p, size_t from, const Term& repl);
inline Term replace_at(const Term& t, const Position& p, const Term& repl) {
  return replace_at(t, p, 0, repl);
}

// t1 is a bottom-approximation of t2: t1 arises from t2 by replacing some
// subterms with bottom.
bool approximates(const Term& t1, const Term& t2);

}  // namespace acrwl

template <>
struct std::hash<acrwl::Term> {
  size_t operator()(const acrwl::Term& t) const noexcept { return t.hash(); }
};
