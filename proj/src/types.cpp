#include "acrwl/types.hpp"

#include <algorithm>
#include <sstream>

#include "acrwl/axioms.hpp"

namespace acrwl {

TypeExpr TypeChecker::resolve(const TypeExpr& t) const {
  if (t.is_var()) {
    const Term* b = tsub_.find(t.var_id());
    return b ? resolve(*b) : t;
  }
  if (!t.is_app() || t.is_ground()) return t;
  std::vector<TypeExpr> args;
  for (const auto& a : t.args()) args.push_back(resolve(a));
  return Term::app(t.head(), std::move(args));
}

bool TypeChecker::occurs_in(Var v, const TypeExpr& t) const { return occurs(v, resolve(t)); }

bool TypeChecker::unify(const TypeExpr& a0, const TypeExpr& b0) {
  TypeExpr a = a0, b = b0;
  while (a.is_var())
    if (const Term* x = tsub_.find(a.var_id())) a = *x; else break;
  while (b.is_var())
    if (const Term* x = tsub_.find(b.var_id())) b = *x; else break;
  if (a.is_var() && b.is_var() && a.var_id() == b.var_id()) return true;
  if (a.is_var()) {
    if (occurs_in(a.var_id(), b)) return false;
    tsub_.bind(a.var_id(), b);
    return true;
  }
  if (b.is_var()) return unify(b, a);
  if (!a.is_app() || !b.is_app() || a.head() != b.head() || a.arity() != b.arity()) return false;
  for (size_t i = 0; i < a.arity(); ++i)
    if (!unify(a.arg(i), b.arg(i))) return false;
  return true;
}

void TypeChecker::fail(const Term& where, const TypeExpr& expected, const TypeExpr& found) {
  if (error_) return;
  TypeError e;
  e.pos = prog_.pos_of(where);
  e.expected = resolve(expected);
  e.found = resolve(found);
  auto names = pretty_types({e.expected, e.found});
  e.message = "expected " + names[0] + ", found " + names[1];
  error_ = std::move(e);
}

bool TypeChecker::expect(const TypeExpr& expected, const TypeExpr& found, const Term& where) {
  if (unify(expected, found)) return true;
  fail(where, expected, found);
  return false;
}

SymbolType TypeChecker::instantiate(Sym s, bool rigid) {
  const SymbolType& decl = prog_.sig.type_of(s);
  std::vector<Var> tv;
  for (const auto& a : decl.args) collect_vars(a, tv);
  collect_vars(decl.result, tv);
  Subst ren;
  for (Var v : tv)
    ren.bind(v, rigid ? Term::app(intern_sym(var_name(v))) : Term::var(fresh_var(var_name(v))));
  SymbolType out;
  for (const auto& a : decl.args) out.args.push_back(ren.apply(a));
  out.result = ren.apply(decl.result);
  return out;
}

std::optional<TypeExpr> TypeChecker::infer(const Term& e) {
  switch (e.kind()) {
    case Kind::Bottom:
      return Term::var(fresh_var("t"));
    case Kind::Var: {
      auto it = env_.find(e.var_id());
      if (it != env_.end()) return it->second;
      TypeExpr t = Term::var(fresh_var("t"));
      env_[e.var_id()] = t;
      return t;
    }
    case Kind::App: {
      if (prog_.sig.kind(e.head()) == SymKind::None || prog_.sig.arity(e.head()) != e.arity()) {
        if (!error_) error_ = TypeError{prog_.pos_of(e), {}, {}, "ill-formed expression " + to_string(e)};
        return std::nullopt;
      }
      SymbolType st = instantiate(e.head());
      for (size_t i = 0; i < e.arity(); ++i) {
        auto ti = infer(e.arg(i));
        if (!ti) return std::nullopt;
        if (!expect(st.args[i], *ti, e.arg(i))) return std::nullopt;
      }
      return st.result;
    }
  }
  return std::nullopt;
}

Environment TypeChecker::environment() const {
  Environment out;
  for (const auto& [v, t] : env_) out[v] = resolve(t);
  return out;
}

std::string TypeChecker::error_string() const {
  if (!error_) return {};
  return "type error: " + error_->message;
}

std::vector<std::string> pretty_types(const std::vector<TypeExpr>& ts) {
  std::vector<Var> vars;
  for (const auto& t : ts) collect_vars(t, vars);
  Subst ren;
  for (size_t i = 0; i < vars.size(); ++i) {
    std::string n(1, static_cast<char>('a' + i % 26));
    if (i >= 26) n += std::to_string(i / 26);
    ren.bind(vars[i], Term::var(n));
  }
  std::vector<std::string> out;
  for (const auto& t : ts) out.push_back(to_string(ren.apply(t)));
  return out;
}

std::optional<Inferred> infer_type(const Program& prog, const Environment& env, const Term& e, TypeError* err) {
  TypeChecker tc(prog);
  for (const auto& [v, t] : env) tc.set_env(v, t);
  auto t = tc.infer(e);
  if (!t) {
    if (err && tc.error()) *err = *tc.error();
    return std::nullopt;
  }
  return Inferred{tc.resolve(*t), tc.environment()};
}

bool check_axiom_well_typed(const Program& prog, const Axiom& ax, Environment* env, TypeError* err) {
  TypeChecker tc(prog);
  auto a = tc.infer(ax.lhs);
  std::optional<TypeExpr> b;
  if (a) b = tc.infer(ax.rhs);
  if (a && b && tc.expect(*a, *b, ax.rhs)) {
    if (env) *env = tc.environment();
    return true;
  }
  if (err && tc.error()) *err = *tc.error();
  return false;
}

bool check_rule_well_typed(const Program& prog, const Rule& r, TypeError* err) {
  TypeChecker tc(prog);
  SymbolType st = tc.instantiate(r.fun, /*rigid=*/true);
  bool ok = true;
  for (size_t i = 0; ok && i < r.lhs_args.size(); ++i) {
    auto t = tc.infer(r.lhs_args[i]);
    ok = t && tc.expect(st.args[i], *t, r.lhs_args[i]);
  }
  if (ok) {
    auto t = tc.infer(r.rhs);
    ok = t && tc.expect(st.result, *t, r.rhs);
  }
  for (size_t i = 0; ok && i < r.conds.size(); ++i) {
    auto a = tc.infer(r.conds[i].lhs);
    auto b = a ? tc.infer(r.conds[i].rhs) : std::nullopt;
    ok = a && b && tc.expect(*a, *b, r.conds[i].rhs);
  }
  if (!ok && err && tc.error()) *err = *tc.error();
  return ok;
}

bool check_oriented_well_typed(const Program& prog, const OrientedRule& r) {
  TypeChecker tc(prog);
  auto a = tc.infer(r.lhs);
  auto b = a ? tc.infer(r.rhs) : std::nullopt;
  if (!a || !b || !tc.unify(*a, *b)) return false;
  for (const auto& c : r.conds) {
    auto x = tc.infer(c.lhs);
    auto y = x ? tc.infer(c.rhs) : std::nullopt;
    if (!x || !y || !tc.unify(*x, *y)) return false;
  }
  return true;
}

bool check_goal_well_typed(const Program& prog, const std::vector<Join>& goal, Environment* env,
                           TypeError* err) {
  TypeChecker tc(prog);
  for (const auto& j : goal) {
    auto a = tc.infer(j.lhs);
    auto b = a ? tc.infer(j.rhs) : std::nullopt;
    if (!a || !b || !tc.expect(*a, *b, j.rhs)) {
      if (err && tc.error()) *err = *tc.error();
      return false;
    }
  }
  if (env) {
    std::vector<Var> gv;
    for (const auto& j : goal) {
      collect_vars(j.lhs, gv);
      collect_vars(j.rhs, gv);
    }
    auto full = tc.environment();
    env->clear();
    for (Var v : gv) (*env)[v] = full[v];
  }
  return true;
}

namespace {
// Type variables become constants that unification cannot bind.
Subst rigid_map(const std::vector<TypeExpr>& ts) {
  std::vector<Var> vars;
  for (const auto& t : ts) collect_vars(t, vars);
  Subst s;
  for (Var v : vars) s.bind(v, Term::app(intern_sym("?" + var_name(v))));
  return s;
}
}  // namespace

bool preserves_type(const Program& prog, const Term& e, const Term& t) {
  TypeChecker tc(prog);
  auto te = tc.infer(e);
  if (!te) return false;
  Environment env = tc.environment();
  TypeExpr tau = tc.resolve(*te);
  std::vector<TypeExpr> all{tau};
  for (const auto& [v, ty] : env) all.push_back(ty);
  Subst rigid = rigid_map(all);
  TypeChecker tc2(prog);
  for (const auto& [v, ty] : env) tc2.set_env(v, rigid.apply(ty));
  auto tt = tc2.infer(t);
  return tt && tc2.unify(rigid.apply(tau), *tt);
}

bool answer_well_typed(const Program& prog, const Environment& env, const Subst& answer) {
  TypeChecker tc(prog);
  for (const auto& [v, ty] : env) tc.set_env(v, ty);
  for (const auto& [v, t] : answer) {
    auto it = env.find(v);
    if (it == env.end()) continue;
    auto tt = tc.infer(t);
    if (!tt || !tc.unify(it->second, *tt)) return false;
  }
  return true;
}

std::vector<Diagnostic> check_program(const Program& prog, const CheckOptions& opts) {
  std::vector<Diagnostic> out;
  auto type_diag = [&](const TypeError& e, SrcPos fallback) {
    out.push_back({e.pos.line ? e.pos : fallback, "type error: " + e.message});
  };
  for (const auto& ax : prog.axioms) {
    AxiomClass c = classify(ax);
    std::string shown = to_string(ax.lhs) + " ~ " + to_string(ax.rhs);
    if (ax.lhs == ax.rhs) {
      out.push_back({ax.pos, "axiom is a trivial identity: " + shown});
      continue;
    }
    if (!c.regular) {
      out.push_back({ax.pos, "axiom is not regular (both sides must have the same variables): " + shown});
      continue;
    }
    if (c.collapsing && !opts.allow_collapsing) {
      out.push_back({ax.pos, "collapsing axiom rejected (a side is a bare variable; use --allow-collapsing): " +
                                 shown});
      continue;
    }
    TypeError err;
    if (opts.typecheck && !check_axiom_well_typed(prog, ax, nullptr, &err)) type_diag(err, ax.pos);
  }
  for (const auto& r : prog.rules) {
    if (!r.regular()) {
      std::vector<Var> head;
      for (const auto& a : r.lhs_args) collect_vars(a, head);
      for (Var v : dvar(r.rhs))
        if (std::find(head.begin(), head.end(), v) == head.end()) {
          out.push_back({r.pos, "variable " + var_name(v) +
                                    " of the right-hand side does not occur in the rule head: " + to_string(r)});
          break;
        }
      continue;
    }
    TypeError err;
    if (opts.typecheck && !check_rule_well_typed(prog, r, &err)) type_diag(err, r.pos);
  }
  if (opts.typecheck) {
    for (const auto& g : prog.goals) {
      TypeError err;
      if (!check_goal_well_typed(prog, g, nullptr, &err)) type_diag(err, g.empty() ? SrcPos{} : prog.pos_of(g[0].lhs));
    }
  }
  return out;
}

std::string format_diagnostic(const Program& prog, const Diagnostic& d) {
  std::ostringstream os;
  os << prog.file;
  if (d.pos.line) os << ':' << d.pos.line << ':' << d.pos.col;
  os << ": " << d.message;
  return os.str();
}

}  // namespace acrwl
