#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "acrwl/program.hpp"
#include "acrwl/subst.hpp"

namespace acrwl {

using Environment = std::map<Var, TypeExpr>;

struct TypeError {
  SrcPos pos;
  TypeExpr expected, found;
  std::string message;  // "expected <t>, found <t'>" or a free-form reason
};

// Unification-based inference. One instance accumulates a type substitution
// and an environment across several expressions.
class TypeChecker {
 public:
  explicit TypeChecker(const Program& prog) : prog_(prog) {}

  // Type of e. Unknown variables are added to the environment with a fresh
  // type variable. Each symbol occurrence gets a fresh variant of its
  // declared type; bottom gets a fresh type variable.
  std::optional<TypeExpr> infer(const Term& e);
  bool unify(const TypeExpr& a, const TypeExpr& b);
  // Unifies and records a diagnostic at `where` on failure.
  bool expect(const TypeExpr& expected, const TypeExpr& found, const Term& where);

  TypeExpr resolve(const TypeExpr& t) const;
  Environment environment() const;  // resolved
  void set_env(Var v, TypeExpr t) { env_[v] = std::move(t); }

  // Declared type with type variables replaced by fresh variables, or by
  // rigid constants when `rigid` is set.
  SymbolType instantiate(Sym s, bool rigid = false);

  const std::optional<TypeError>& error() const { return error_; }
  std::string error_string() const;

 private:
  bool occurs_in(Var v, const TypeExpr& t) const;
  void fail(const Term& where, const TypeExpr& expected, const TypeExpr& found);

  const Program& prog_;
  Subst tsub_;
  Environment env_;
  std::optional<TypeError> error_;
};

// Prints a type with its variables renamed a, b, c, ... in order of
// appearance (shared across the given types).
std::vector<std::string> pretty_types(const std::vector<TypeExpr>& ts);

struct Inferred {
  TypeExpr type;
  Environment env;
};

std::optional<Inferred> infer_type(const Program& prog, const Environment& env, const Term& e,
                                   TypeError* err = nullptr);

bool check_axiom_well_typed(const Program& prog, const Axiom& ax, Environment* env = nullptr,
                            TypeError* err = nullptr);
bool check_rule_well_typed(const Program& prog, const Rule& r, TypeError* err = nullptr);
bool check_oriented_well_typed(const Program& prog, const OrientedRule& r);
bool check_goal_well_typed(const Program& prog, const std::vector<Join>& goal, Environment* env = nullptr,
                           TypeError* err = nullptr);

// e and t share variables. True iff t has the principal type of e under the
// principal environment of e, both held rigid. Variables of t absent from e
// and bottoms may take any type.
bool preserves_type(const Program& prog, const Term& e, const Term& t);

// Every binding x = t of `answer` respects the types of `env`, held rigid.
bool answer_well_typed(const Program& prog, const Environment& env, const Subst& answer);

struct Diagnostic {
  SrcPos pos;
  std::string message;
};

struct CheckOptions {
  bool allow_collapsing = false;
  bool typecheck = true;
};

// Classification, regularity and typing of a loaded program. Empty result
// means the program is accepted.
std::vector<Diagnostic> check_program(const Program& prog, const CheckOptions& opts = {});
std::string format_diagnostic(const Program& prog, const Diagnostic& d);

}  // namespace acrwl
