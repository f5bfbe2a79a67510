#include "acrwl/solver.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <functional>
#include <map>
#include <sstream>

#include "acrwl/axioms.hpp"

namespace acrwl {

Goal Goal::initial(std::vector<Join> e) {
  Goal g;
  g.joins = std::move(e);
  return g;
}

Goal Goal::failure() {
  Goal g;
  g.fail = true;
  return g;
}

bool Goal::quasi_solved() const {
  if (fail) return false;
  for (const auto& a : approx)
    if (!a.lhs.is_var() || !a.rhs.is_var()) return false;
  for (const auto& j : joins)
    if (!j.lhs.is_var() || !j.rhs.is_var()) return false;
  return true;
}

namespace {

std::string join_list(const std::vector<std::string>& xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += xs[i];
  }
  return out;
}

std::string approx_string(const Approx& a) { return to_string(a.lhs) + " → " + to_string(a.rhs); }

}  // namespace

std::string to_string(const Goal& g) {
  if (g.fail) return "FAIL";
  std::vector<std::string> ev, s, p, e;
  for (Var v : g.evars) ev.push_back(var_name(v));
  std::sort(ev.begin(), ev.end());
  for (const auto& [x, t] : g.solved) s.push_back(var_name(x) + " = " + to_string(t));
  for (const auto& a : g.approx) p.push_back(approx_string(a));
  for (const auto& j : g.joins) e.push_back(to_string(j));
  std::string out;
  if (!ev.empty()) out = "∃" + join_list(ev) + " · ";
  auto part = [](const std::vector<std::string>& xs) { return xs.empty() ? std::string() : join_list(xs) + " "; };
  out += part(s) + "□ " + part(p) + "□";
  if (!e.empty()) out += " " + join_list(e);
  return out;
}

const char* rule_name(StepRule r) {
  switch (r) {
    case StepRule::DecompEq: return "Decomp==";
    case StepRule::MutEq: return "Mut==";
    case StepRule::ImitDecompEq: return "ImitDecomp==";
    case StepRule::ImitMutEq: return "ImitMut==";
    case StepRule::NarrowEq: return "Narrow==";
    case StepRule::DecompTo: return "Decomp→";
    case StepRule::MutTo: return "Mut→";
    case StepRule::ImitDecompTo: return "ImitDecomp→";
    case StepRule::ImitMutTo: return "ImitMut→";
    case StepRule::ImitTo: return "Imit→";
    case StepRule::ElimTo: return "Elim→";
    case StepRule::NarrowTo: return "Narrow→";
    case StepRule::ConflictEq: return "Conflict==";
    case StepRule::Cycle: return "Cycle";
    case StepRule::EquivEq: return "Equiv==";
    case StepRule::NotEquivEq: return "NotEquiv==";
    case StepRule::ConflictTo: return "Conflict→";
    case StepRule::ProdVarElim: return "ProdVarElim";
    case StepRule::Identity: return "Identity";
    case StepRule::NonProdVarElim: return "NonProdVarElim";
  }
  return "?";
}

namespace {

// The focused join read in its oriented direction.
std::pair<Term, Term> oriented(const Goal& g, const Focus& f) {
  const Join& j = g.joins[f.index];
  return f.flipped ? std::make_pair(j.rhs, j.lhs) : std::make_pair(j.lhs, j.rhs);
}

}  // namespace

std::string focus_string(const Goal& g, const Step& s) {
  if (s.rule == StepRule::Cycle) return "E";
  if (s.focus.in_approx) return approx_string(g.approx[s.focus.index]);
  auto [a, b] = oriented(g, s.focus);
  return to_string(a) + " == " + to_string(b);
}

std::set<Var> produced_vars(const Goal& g) {
  std::set<Var> out;
  for (const auto& a : g.approx)
    for (Var v : dvar(a.rhs)) out.insert(v);
  return out;
}

std::set<Var> demanded_vars(const Goal& g) {
  std::set<Var> out;
  for (const auto& j : g.joins) {
    if (j.lhs.is_var()) out.insert(j.lhs.var_id());
    if (j.rhs.is_var()) out.insert(j.rhs.var_id());
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& a : g.approx)
      if (a.lhs.is_var() && a.rhs.is_var() && out.count(a.rhs.var_id()) && !out.count(a.lhs.var_id())) {
        out.insert(a.lhs.var_id());
        changed = true;
      }
  }
  return out;
}

std::set<Var> safe_vars(const Program& prog, const Term& e) {
  std::set<Var> out;
  std::function<void(const Term&)> walk = [&](const Term& t) {
    if (t.is_var()) {
      out.insert(t.var_id());
    } else if (t.is_app() && prog.is_free(t.head())) {
      for (const auto& a : t.args()) walk(a);
    }
  };
  walk(e);
  return out;
}

namespace {

bool has_cycle(const std::map<Var, std::set<Var>>& edges) {
  std::map<Var, int> state;  // 0 new, 1 on stack, 2 done
  std::function<bool(Var)> dfs = [&](Var v) {
    state[v] = 1;
    auto it = edges.find(v);
    if (it != edges.end())
      for (Var w : it->second) {
        if (state[w] == 1) return true;
        if (state[w] == 0 && dfs(w)) return true;
      }
    state[v] = 2;
    return false;
  };
  for (const auto& [v, _] : edges)
    if (state[v] == 0 && dfs(v)) return true;
  return false;
}

}  // namespace

std::optional<std::string> admissibility_violation(const Goal& g) {
  if (g.fail) return std::nullopt;
  std::vector<Term> rhs;
  for (const auto& a : g.approx) rhs.push_back(a.rhs);
  if (!is_linear(rhs)) return "LIN: right-hand sides of approximation statements are not linear";
  auto pv = produced_vars(g);
  for (Var v : pv)
    if (!g.evars.count(v)) return "EX: produced variable " + var_name(v) + " is not existential";
  std::map<Var, std::set<Var>> prod;
  for (const auto& a : g.approx)
    for (Var x : dvar(a.lhs))
      for (Var y : dvar(a.rhs)) prod[x].insert(y);
  if (has_cycle(prod)) return "NCYC: the production relation has a cycle";
  std::map<Var, size_t> count;
  auto tally = [&](const Term& t) {
    std::vector<Var> vs;
    std::function<void(const Term&)> walk = [&](const Term& u) {
      if (u.is_var()) ++count[u.var_id()];
      else if (u.is_app())
        for (const auto& a : u.args()) walk(a);
    };
    walk(t);
  };
  for (const auto& [x, t] : g.solved) {
    ++count[x];
    tally(t);
    if (pv.count(x)) return "SOL: solved variable " + var_name(x) + " is produced";
    for (Var v : dvar(t))
      if (pv.count(v)) return "SOL: solved part mentions produced variable " + var_name(v);
  }
  for (const auto& a : g.approx) {
    tally(a.lhs);
    tally(a.rhs);
  }
  for (const auto& j : g.joins) {
    tally(j.lhs);
    tally(j.rhs);
  }
  for (const auto& [x, t] : g.solved)
    if (count[x] != 1) return "SOL: solved variable " + var_name(x) + " occurs elsewhere in the goal";
  return std::nullopt;
}

namespace {

bool conflicting(const Program& prog, Sym c, Sym d) {
  return c != d && !(prog.is_algebraic(c) && prog.is_algebraic(d));
}

bool is_cons_app(const Program& prog, const Term& t) { return t.is_app() && prog.sig.is_cons(t.head()); }
bool is_fun_app(const Program& prog, const Term& t) { return t.is_app() && prog.sig.is_fun(t.head()); }

constexpr size_t kGroundEquivBudget = 2000;

bool ground_data(const Program& prog, const Join& j) {
  return j.lhs.is_ground() && j.rhs.is_ground() && prog.is_data_term(j.lhs) && prog.is_data_term(j.rhs);
}

std::optional<Step> failure_step(const Program& prog, const Goal& g) {
  for (size_t i = 0; i < g.approx.size(); ++i) {
    const auto& a = g.approx[i];
    if (is_cons_app(prog, a.lhs) && a.rhs.is_app() && conflicting(prog, a.lhs.head(), a.rhs.head()))
      return Step{StepRule::ConflictTo, {true, i, false}};
  }
  std::map<Var, std::set<Var>> edges;
  for (size_t i = 0; i < g.joins.size(); ++i) {
    const auto& j = g.joins[i];
    if (is_cons_app(prog, j.lhs) && is_cons_app(prog, j.rhs) && conflicting(prog, j.lhs.head(), j.rhs.head()))
      return Step{StepRule::ConflictEq, {false, i, false}};
    if (ground_data(prog, j) && equiv_c(prog, j.lhs, j.rhs, kGroundEquivBudget) == Tri::No)
      return Step{StepRule::NotEquivEq, {false, i, false}};
    for (int side = 0; side < 2; ++side) {
      const Term& x = side ? j.rhs : j.lhs;
      const Term& e = side ? j.lhs : j.rhs;
      if (x.is_var() && !e.is_var())
        for (Var y : safe_vars(prog, e)) edges[x.var_id()].insert(y);
    }
  }
  if (has_cycle(edges)) return Step{StepRule::Cycle, {false, 0, false}};
  return std::nullopt;
}

// Oriented axiom rules whose left-hand head is an algebraic constructor of
// the datatype of c.
std::vector<size_t> sibling_rules(const Program& prog, Sym c) {
  std::vector<size_t> out;
  Sym dt = prog.sig.datatype_of(c);
  for (size_t i = 0; i < prog.oriented.size(); ++i) {
    Sym d = prog.oriented[i].lhs.head();
    if (prog.is_algebraic(d) && prog.sig.datatype_of(d) == dt) out.push_back(i);
  }
  return out;
}

const std::vector<size_t>& rules_of(const std::map<Sym, std::vector<size_t>>& index, Sym s) {
  static const std::vector<size_t> none;
  auto it = index.find(s);
  return it == index.end() ? none : it->second;
}

bool occurs_elsewhere(const Goal& g, size_t skip_approx, Var x) {
  for (size_t i = 0; i < g.approx.size(); ++i)
    if (i != skip_approx && (occurs(x, g.approx[i].lhs) || occurs(x, g.approx[i].rhs))) return true;
  for (const auto& j : g.joins)
    if (occurs(x, j.lhs) || occurs(x, j.rhs)) return true;
  return false;
}

void steps_for_join(const Program& prog, const Goal& g, size_t i, std::vector<Step>& out) {
  const Join& j = g.joins[i];
  auto add = [&](StepRule r, bool flipped, int idx = -1) { out.push_back({r, {false, i, flipped}, idx}); };
  if (j.lhs.is_var() && j.rhs.is_var()) {
    if (j.lhs == j.rhs) add(StepRule::Identity, false);
    return;
  }
  if (ground_data(prog, j) && equiv_c(prog, j.lhs, j.rhs, kGroundEquivBudget) == Tri::Yes) {
    add(StepRule::EquivEq, false);
    return;
  }
  if (is_fun_app(prog, j.lhs) || is_fun_app(prog, j.rhs)) {
    bool flipped = !is_fun_app(prog, j.lhs);
    Sym f = (flipped ? j.rhs : j.lhs).head();
    for (size_t r : rules_of(prog.rules_by_fun, f)) add(StepRule::NarrowEq, flipped, static_cast<int>(r));
    return;
  }
  if (j.lhs.is_app() && j.rhs.is_app()) {
    Sym c = j.lhs.head(), d = j.rhs.head();
    if (c == d) add(StepRule::DecompEq, false);
    if (prog.is_algebraic(c))
      for (size_t r : rules_of(prog.oriented_by_cons, c)) add(StepRule::MutEq, false, static_cast<int>(r));
    if (prog.is_algebraic(d))
      for (size_t r : rules_of(prog.oriented_by_cons, d)) add(StepRule::MutEq, true, static_cast<int>(r));
    return;
  }
  // x == c(e...)
  bool flipped = !j.lhs.is_var();
  const Term& t = flipped ? j.lhs : j.rhs;
  if (!t.is_app()) return;
  add(StepRule::ImitDecompEq, flipped);
  Sym c = t.head();
  if (prog.is_algebraic(c)) {
    for (size_t r : sibling_rules(prog, c)) add(StepRule::ImitMutEq, flipped, static_cast<int>(r));
    // Mutation on the constructor side: focus reads c(e...) == x.
    for (size_t r : rules_of(prog.oriented_by_cons, c)) add(StepRule::MutEq, !flipped, static_cast<int>(r));
  }
}

void steps_for_approx(const Program& prog, const Goal& g, size_t i, const std::set<Var>& demanded,
                      std::vector<Step>& out) {
  const Approx& a = g.approx[i];
  auto add = [&](StepRule r, int idx = -1) { out.push_back({r, {true, i, false}, idx}); };
  if (a.rhs.is_var()) {
    Var x = a.rhs.var_id();
    // y is the greatest value of x -> y; substituting early is safe.
    if (a.lhs.is_var()) {
      if (g.evars.count(x)) add(StepRule::ProdVarElim);
      return;
    }
    if (!occurs_elsewhere(g, i, x)) {
      add(StepRule::ElimTo);
      return;
    }
    // A data term is its own greatest value: imitate it whether or not x is
    // demanded, and never mutate it here.
    if (a.lhs.is_app() && prog.is_data_term(a.lhs)) {
      add(StepRule::ImitTo);
      return;
    }
    if (!demanded.count(x)) return;
    if (is_fun_app(prog, a.lhs)) {
      for (size_t r : rules_of(prog.rules_by_fun, a.lhs.head())) add(StepRule::NarrowTo, static_cast<int>(r));
      return;
    }
    add(StepRule::ImitTo);
    if (prog.is_algebraic(a.lhs.head()))
      for (size_t r : rules_of(prog.oriented_by_cons, a.lhs.head())) add(StepRule::MutTo, static_cast<int>(r));
    return;
  }
  if (!a.rhs.is_app()) return;
  Sym c = a.rhs.head();
  if (a.lhs.is_var()) {
    add(StepRule::ImitDecompTo);
    if (prog.is_algebraic(c))
      for (size_t r : sibling_rules(prog, c)) add(StepRule::ImitMutTo, static_cast<int>(r));
    return;
  }
  if (is_fun_app(prog, a.lhs)) {
    for (size_t r : rules_of(prog.rules_by_fun, a.lhs.head())) add(StepRule::NarrowTo, static_cast<int>(r));
    return;
  }
  if (!a.lhs.is_app()) return;
  Sym d = a.lhs.head();
  if (d == c) add(StepRule::DecompTo);
  if (prog.is_algebraic(d))
    for (size_t r : rules_of(prog.oriented_by_cons, d)) add(StepRule::MutTo, static_cast<int>(r));
}

}  // namespace

std::vector<Step> applicable_steps(const Program& prog, const Goal& g) {
  if (g.fail) return {};
  if (auto f = failure_step(prog, g)) return {*f};
  std::vector<Step> out;
  auto dm = demanded_vars(g);
  for (size_t i = 0; i < g.approx.size(); ++i) steps_for_approx(prog, g, i, dm, out);
  for (size_t i = 0; i < g.joins.size(); ++i) steps_for_join(prog, g, i, out);
  return out;
}

std::vector<Step> selected_steps(const Program& prog, const Goal& g) {
  if (g.fail) return {};
  if (auto f = failure_step(prog, g)) return {*f};
  auto dm = demanded_vars(g);
  std::vector<Step> first;
  auto consider = [&](std::vector<Step>&& s) {
    if (s.size() == 1) return true;
    if (first.empty()) first = std::move(s);
    return false;
  };
  for (size_t i = 0; i < g.approx.size(); ++i) {
    std::vector<Step> s;
    steps_for_approx(prog, g, i, dm, s);
    if (s.size() == 1) return s;
    consider(std::move(s));
  }
  for (size_t i = 0; i < g.joins.size(); ++i) {
    std::vector<Step> s;
    steps_for_join(prog, g, i, s);
    if (s.size() == 1) return s;
    consider(std::move(s));
  }
  return first;
}

// ---------------------------------------------------------------------------

FreshNames::FreshNames(const Goal& g) {
  auto add = [&](const Term& t) {
    for (Var v : dvar(t)) used_.insert(v);
  };
  for (Var v : g.evars) used_.insert(v);
  for (const auto& [x, t] : g.solved) {
    used_.insert(x);
    add(t);
  }
  for (const auto& a : g.approx) {
    add(a.lhs);
    add(a.rhs);
  }
  for (const auto& j : g.joins) {
    add(j.lhs);
    add(j.rhs);
  }
}

Var FreshNames::next() {
  while (true) {
    Var v = intern_var("_" + std::to_string(counter_++));
    if (used_.insert(v).second) return v;
  }
}

namespace {

struct Variant {
  std::vector<Term> largs;
  Term rhs;
  std::vector<Join> conds;
};

Variant rename_rule(const std::vector<Term>& largs, const Term& rhs, const std::vector<Join>& conds,
                    const std::vector<Var>& vars, FreshNames& fresh, Goal& out) {
  Subst ren;
  for (Var v : vars) {
    Var n = fresh.next();
    ren.bind(v, Term::var(n));
    out.evars.insert(n);
  }
  Variant r;
  for (const auto& l : largs) r.largs.push_back(ren.apply(l));
  r.rhs = ren.apply(rhs);
  for (const auto& c : conds) r.conds.push_back({ren.apply(c.lhs), ren.apply(c.rhs)});
  return r;
}

Variant program_variant(const Program& prog, int idx, FreshNames& fresh, Goal& out) {
  const Rule& r = prog.rules.at(idx);
  return rename_rule(r.lhs_args, r.rhs, r.conds, r.vars(), fresh, out);
}

Variant axiom_variant(const Program& prog, int idx, FreshNames& fresh, Goal& out) {
  const OrientedRule& r = prog.oriented.at(idx);
  return rename_rule(r.lhs.args(), r.rhs, r.conds, r.vars(), fresh, out);
}

void substitute(Goal& g, const Subst& th) {
  for (auto& [x, t] : g.solved) t = th.apply(t);
  for (auto& a : g.approx) a = {th.apply(a.lhs), th.apply(a.rhs)};
  for (auto& j : g.joins) j = {th.apply(j.lhs), th.apply(j.rhs)};
}

template <class T>
void prepend(std::vector<T>& v, std::vector<T> front) {
  front.insert(front.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  v = std::move(front);
}

std::vector<Term> fresh_vars(size_t n, FreshNames& fresh, Goal& out) {
  std::vector<Term> xs;
  for (size_t i = 0; i < n; ++i) {
    Var v = fresh.next();
    out.evars.insert(v);
    xs.push_back(Term::var(v));
  }
  return xs;
}

// x := term everywhere; [x = term] joins S unless x is produced in `before`.
void bind_var(Goal& g, const Goal& before, Var x, const Term& term) {
  Subst th;
  th.bind(x, term);
  substitute(g, th);
  if (!produced_vars(before).count(x)) g.solved.push_back({x, term});
  g.evars.erase(x);
}

}  // namespace

Goal apply_step(const Program& prog, const Goal& g, const Step& s, FreshNames& fresh) {
  switch (s.rule) {
    case StepRule::ConflictEq:
    case StepRule::ConflictTo:
    case StepRule::Cycle:
    case StepRule::NotEquivEq:
      return Goal::failure();
    default:
      break;
  }
  Goal out = g;
  Term a, b;  // focused statement, oriented
  if (s.focus.in_approx) {
    a = g.approx[s.focus.index].lhs;
    b = g.approx[s.focus.index].rhs;
    out.approx.erase(out.approx.begin() + s.focus.index);
  } else {
    std::tie(a, b) = oriented(g, s.focus);
    out.joins.erase(out.joins.begin() + s.focus.index);
  }
  std::vector<Approx> newp;
  std::vector<Join> newe;
  switch (s.rule) {
    case StepRule::DecompEq:
      for (size_t i = 0; i < a.arity(); ++i) newe.push_back({a.arg(i), b.arg(i)});
      break;
    case StepRule::MutEq: {
      auto v = axiom_variant(prog, s.rule_index, fresh, out);
      for (size_t i = 0; i < a.arity(); ++i) newp.push_back({a.arg(i), v.largs[i]});
      newe = v.conds;
      newe.push_back({v.rhs, b});
      break;
    }
    case StepRule::NarrowEq: {
      auto v = program_variant(prog, s.rule_index, fresh, out);
      for (size_t i = 0; i < a.arity(); ++i) newp.push_back({a.arg(i), v.largs[i]});
      newe = v.conds;
      newe.push_back({v.rhs, b});
      break;
    }
    case StepRule::ImitDecompEq: {
      auto xs = fresh_vars(b.arity(), fresh, out);
      for (size_t i = 0; i < xs.size(); ++i) newe.push_back({xs[i], b.arg(i)});
      prepend(out.joins, std::move(newe));
      bind_var(out, g, a.var_id(), Term::app(b.head(), xs));
      return out;
    }
    case StepRule::ImitMutEq: {
      auto v = axiom_variant(prog, s.rule_index, fresh, out);
      auto xs = fresh_vars(v.largs.size(), fresh, out);
      for (size_t i = 0; i < xs.size(); ++i) newp.push_back({xs[i], v.largs[i]});
      newe = v.conds;
      newe.push_back({v.rhs, b});
      prepend(out.approx, std::move(newp));
      prepend(out.joins, std::move(newe));
      bind_var(out, g, a.var_id(), Term::app(prog.oriented[s.rule_index].lhs.head(), xs));
      return out;
    }
    case StepRule::DecompTo:
      for (size_t i = 0; i < a.arity(); ++i) newp.push_back({a.arg(i), b.arg(i)});
      break;
    case StepRule::MutTo: {
      auto v = axiom_variant(prog, s.rule_index, fresh, out);
      for (size_t i = 0; i < a.arity(); ++i) newp.push_back({a.arg(i), v.largs[i]});
      newp.push_back({v.rhs, b});
      newe = v.conds;
      break;
    }
    case StepRule::NarrowTo: {
      auto v = program_variant(prog, s.rule_index, fresh, out);
      for (size_t i = 0; i < a.arity(); ++i) newp.push_back({a.arg(i), v.largs[i]});
      newp.push_back({v.rhs, b});
      newe = v.conds;
      break;
    }
    case StepRule::ImitDecompTo: {
      auto xs = fresh_vars(b.arity(), fresh, out);
      for (size_t i = 0; i < xs.size(); ++i) newp.push_back({xs[i], b.arg(i)});
      prepend(out.approx, std::move(newp));
      bind_var(out, g, a.var_id(), Term::app(b.head(), xs));
      return out;
    }
    case StepRule::ImitMutTo: {
      auto v = axiom_variant(prog, s.rule_index, fresh, out);
      auto xs = fresh_vars(v.largs.size(), fresh, out);
      for (size_t i = 0; i < xs.size(); ++i) newp.push_back({xs[i], v.largs[i]});
      newp.push_back({v.rhs, b});
      prepend(out.approx, std::move(newp));
      prepend(out.joins, std::move(v.conds));
      bind_var(out, g, a.var_id(), Term::app(prog.oriented[s.rule_index].lhs.head(), xs));
      return out;
    }
    case StepRule::ImitTo: {
      Var x = b.var_id();
      if (prog.is_data_term(a)) {
        // Imit→ repeated down to the variables and constants of a.
        Subst th;
        th.bind(x, a);
        substitute(out, th);
        out.evars.erase(x);
        return out;
      }
      auto xs = fresh_vars(a.arity(), fresh, out);
      for (size_t i = 0; i < xs.size(); ++i) newp.push_back({a.arg(i), xs[i]});
      prepend(out.approx, std::move(newp));
      Subst th;
      th.bind(x, Term::app(a.head(), xs));
      substitute(out, th);
      out.evars.erase(x);
      return out;
    }
    case StepRule::ElimTo:
      out.evars.erase(b.var_id());
      return out;
    case StepRule::ProdVarElim: {
      Subst th;
      th.bind(b.var_id(), a);
      substitute(out, th);
      out.evars.erase(b.var_id());
      return out;
    }
    case StepRule::Identity:
    case StepRule::EquivEq:
      return out;
    default:
      throw std::logic_error(std::string("apply_step: not a transformation rule: ") + rule_name(s.rule));
  }
  prepend(out.approx, std::move(newp));
  prepend(out.joins, std::move(newe));
  return out;
}

Goal variable_elimination(const Goal& g0, std::vector<TraceStep>* trace) {
  Goal g = g0;
  auto record = [&](StepRule r, const std::string& focus) {
    if (trace) trace->push_back({r, focus, to_string(g)});
  };
  while (!g.approx.empty()) {
    Approx a = g.approx.front();
    if (!a.lhs.is_var() || !a.rhs.is_var() || !g.evars.count(a.rhs.var_id()))
      throw std::logic_error("variable elimination on a goal that is not quasi-solved: " + to_string(g0));
    g.approx.erase(g.approx.begin());
    Subst th;
    th.bind(a.rhs.var_id(), a.lhs);
    for (auto& p : g.approx) p = {th.apply(p.lhs), th.apply(p.rhs)};
    for (auto& j : g.joins) j = {th.apply(j.lhs), th.apply(j.rhs)};
    g.evars.erase(a.rhs.var_id());
    record(StepRule::ProdVarElim, approx_string(a));
  }
  while (!g.joins.empty()) {
    Join j = g.joins.front();
    if (!j.lhs.is_var() || !j.rhs.is_var())
      throw std::logic_error("variable elimination on a goal that is not quasi-solved: " + to_string(g0));
    g.joins.erase(g.joins.begin());
    if (j.lhs == j.rhs) {
      record(StepRule::Identity, to_string(j));
      continue;
    }
    // Prefer eliminating an existential variable.
    Var x = j.lhs.var_id();
    Term y = j.rhs;
    if (!g.evars.count(x) && g.evars.count(j.rhs.var_id())) {
      x = j.rhs.var_id();
      y = j.lhs;
    }
    Subst th;
    th.bind(x, y);
    substitute(g, th);
    g.solved.push_back({x, y});
    g.evars.erase(x);
    record(StepRule::NonProdVarElim, to_string(j));
  }
  return g;
}

Goal normalize(const Goal& g, const std::set<Var>& keep) {
  if (g.fail) return g;
  Goal out;
  for (const auto& [x, t] : g.solved)
    if (keep.count(x)) out.solved.push_back({x, t});
  out.approx = g.approx;
  out.joins = g.joins;
  std::vector<Var> order;
  for (const auto& [x, t] : out.solved) collect_vars(t, order);
  for (const auto& a : out.approx) {
    collect_vars(a.lhs, order);
    collect_vars(a.rhs, order);
  }
  for (const auto& j : out.joins) {
    collect_vars(j.lhs, order);
    collect_vars(j.rhs, order);
  }
  Subst ren;
  uint32_t k = 0;
  for (Var v : order) {
    if (!g.evars.count(v) || ren.contains(v)) continue;
    Var n;
    do {
      n = intern_var("_" + std::to_string(k++));
    } while (keep.count(n));
    ren.bind(v, Term::var(n));
    out.evars.insert(n);
  }
  substitute(out, ren);
  return out;
}

std::string canonical_key(const Goal& g, const std::set<Var>& keep) {
  if (g.fail) return "FAIL";
  Subst anon;
  Term hole = Term::var("?");
  for (Var v : g.evars) anon.bind(v, hole);
  struct Item {
    std::string key;
    Term lhs, rhs;
  };
  auto sorted = [&](std::vector<Item> xs) {
    std::sort(xs.begin(), xs.end(), [](const Item& a, const Item& b) { return a.key < b.key; });
    return xs;
  };
  std::vector<Item> s, p, e;
  for (const auto& [x, t] : g.solved)
    if (keep.count(x)) s.push_back({var_name(x), Term::var(x), t});
  for (const auto& a : g.approx)
    p.push_back({to_string(anon.apply(a.lhs)) + ">" + to_string(anon.apply(a.rhs)), a.lhs, a.rhs});
  for (const auto& j : g.joins) {
    std::string k1 = to_string(anon.apply(j.lhs)) + "=" + to_string(anon.apply(j.rhs));
    std::string k2 = to_string(anon.apply(j.rhs)) + "=" + to_string(anon.apply(j.lhs));
    if (k2 < k1)
      e.push_back({k2, j.rhs, j.lhs});
    else
      e.push_back({k1, j.lhs, j.rhs});
  }
  s = sorted(std::move(s));
  p = sorted(std::move(p));
  e = sorted(std::move(e));
  std::vector<Var> order;
  for (auto* group : {&s, &p, &e})
    for (const auto& it : *group) {
      collect_vars(it.lhs, order);
      collect_vars(it.rhs, order);
    }
  Subst ren;
  size_t k = 0;
  for (Var v : order)
    if (g.evars.count(v) && !ren.contains(v)) ren.bind(v, Term::var("?" + std::to_string(k++)));
  std::string out;
  for (const auto& it : s) out += to_string(ren.apply(it.lhs)) + "=" + to_string(ren.apply(it.rhs)) + ";";
  out += "|";
  for (const auto& it : p) out += to_string(ren.apply(it.lhs)) + ">" + to_string(ren.apply(it.rhs)) + ";";
  out += "|";
  for (const auto& it : e) out += to_string(ren.apply(it.lhs)) + "=" + to_string(ren.apply(it.rhs)) + ";";
  return out;
}

uint32_t step_cost(const Program& prog, const Step& s, uint32_t resize_penalty) {
  switch (s.rule) {
    case StepRule::MutEq:
    case StepRule::MutTo:
    case StepRule::ImitMutEq:
    case StepRule::ImitMutTo: {
      const auto& ax = prog.axioms[prog.oriented[s.rule_index].axiom];
      return ax.lhs.size() == ax.rhs.size() ? 1 : 1 + resize_penalty;
    }
    default:
      return 1;
  }
}

// ---------------------------------------------------------------------------

std::string to_string(const Answer& a) { return to_string(a.bindings); }

Solver::Solver(const Program& prog, std::vector<Join> goal, SolveConfig cfg)
    : prog_(prog), goal_(std::move(goal)), cfg_(std::move(cfg)) {
  for (const auto& j : goal_) {
    collect_vars(j.lhs, goal_var_order_);
    collect_vars(j.rhs, goal_var_order_);
  }
  goal_vars_.insert(goal_var_order_.begin(), goal_var_order_.end());
  if (cfg_.typecheck) {
    TypeError err;
    if (!check_goal_well_typed(prog_, goal_, &env_, &err))
      throw SolverError("goal is ill-typed: " + err.message);
  }
  Node n;
  n.goal = normalize(Goal::initial(goal_), goal_vars_);
  n.key = canonical_key(n.goal, goal_vars_);
  best_[n.key] = 0;
  buckets_[0].push_back(std::move(n));
}

std::optional<Answer> Solver::next() {
  while (pending_.empty() && !done_) expand_level();
  if (pending_.empty()) return std::nullopt;
  Answer a = std::move(pending_.front());
  pending_.pop_front();
  return a;
}

Subst Solver::present(const Goal& solved) const {
  Subst raw;
  for (const auto& [x, t] : solved.solved)
    if (goal_vars_.count(x)) raw.bind(x, t);
  std::vector<Var> order;
  for (Var v : goal_var_order_)
    if (const Term* t = raw.find(v)) collect_vars(*t, order);
  Subst ren;
  size_t k = 1;
  for (Var v : order) {
    if (goal_vars_.count(v) || ren.contains(v)) continue;
    Var n;
    do {
      n = intern_var("_" + std::to_string(k++));
    } while (goal_vars_.count(n));
    ren.bind(v, Term::var(n));
  }
  Subst out;
  for (Var v : goal_var_order_)
    if (const Term* t = raw.find(v)) out.bind(v, ren.apply(*t));
  return out;
}

bool Solver::duplicate(const Subst& a) const {
  for (const auto& e : emitted_) {
    bool same = true;
    for (Var v : goal_var_order_) {
      Term x = a.apply(Term::var(v)), y = e.apply(Term::var(v));
      if (x == y) continue;
      if (equiv_c(prog_, x, y, cfg_.equiv_budget) != Tri::Yes) {
        same = false;
        break;
      }
    }
    if (same) return true;
  }
  return false;
}

void Solver::finish(const Node& n) {
  std::vector<TraceStep> elim;
  Goal solved = variable_elimination(n.goal, cfg_.trace ? &elim : nullptr);
  Answer ans;
  ans.bindings = present(solved);
  ans.steps = n.steps + elim.size();
  if (!cfg_.trace) {
    // Count the elimination steps without recording them.
    ans.steps = n.steps + n.goal.approx.size() + n.goal.joins.size();
  }
  if (cfg_.dedup && duplicate(ans.bindings)) return;
  if (cfg_.typecheck && !answer_well_typed(prog_, env_, ans.bindings))
    throw SolverError("answer is ill-typed: " + to_string(ans.bindings));
  if (cfg_.validate) {
    auto check = validate_answer(prog_, goal_, ans.bindings, cfg_.oracle);
    if (!check.ok && !check.unknown)
      throw SolverError("oracle rejected answer " + to_string(ans.bindings) + ": " + check.reason);
    ans.validated = check.ok;
    ans.witness = std::move(check.witness);
  }
  if (cfg_.trace) {
    std::vector<TraceStep> path;
    for (auto l = n.trail; l; l = l->parent) path.push_back(l->step);
    std::reverse(path.begin(), path.end());
    path.insert(path.end(), elim.begin(), elim.end());
    ans.trace = std::move(path);
  }
  if (cfg_.dedup) emitted_.push_back(ans.bindings);
  pending_.push_back(std::move(ans));
  ++answers_;
}

void Solver::expand_level() {
  if (buckets_.empty()) {
    done_ = true;
    complete_ = !cut_;
    return;
  }
  std::vector<Node> level;
  {
    auto it = buckets_.begin();
    for (auto& n : it->second)
      if (best_[n.key] == n.cost && expanded_.insert(n.key).second) level.push_back(std::move(n));
    buckets_.erase(it);
  }
  struct Succ {
    Node node;
    StepRule rule;
  };
  struct Out {
    std::vector<Succ> succ;
    enum { Expand, Fail, Quasi, Stuck, Cut } kind = Expand;
  };
  std::vector<Out> outs(level.size());
  std::exception_ptr error;
  int threads = cfg_.threads > 0 ? cfg_.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
  for (size_t i = 0; i < level.size(); ++i) {
    try {
      const Node& n = level[i];
      Out& o = outs[i];
      if (n.goal.fail) {
        o.kind = Out::Fail;
        continue;
      }
      if (n.goal.quasi_solved()) {
        o.kind = Out::Quasi;
        continue;
      }
      if (n.steps >= cfg_.max_depth) {
        o.kind = Out::Cut;
        continue;
      }
      auto steps = selected_steps(prog_, n.goal);
      if (steps.empty()) {
        o.kind = Out::Stuck;
        continue;
      }
      for (const auto& s : steps) {
        FreshNames fresh(n.goal);
        Goal g = apply_step(prog_, n.goal, s, fresh);
        if (cfg_.check_invariants)
          if (auto v = admissibility_violation(g))
            throw std::logic_error(std::string(rule_name(s.rule)) + " broke admissibility (" + *v + "): " +
                                   to_string(n.goal) + "  ⇒  " + to_string(g));
        Node m;
        m.goal = normalize(g, goal_vars_);
        m.steps = n.steps + 1;
        m.cost = n.cost + step_cost(prog_, s, cfg_.resize_penalty);
        m.key = canonical_key(m.goal, goal_vars_);
        if (cfg_.trace)
          m.trail = std::make_shared<const Link>(
              Link{{s.rule, focus_string(n.goal, s), to_string(m.goal)}, n.trail});
        o.succ.push_back({std::move(m), s.rule});
      }
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  for (size_t i = 0; i < level.size(); ++i) {
    Out& o = outs[i];
    depth_ = std::max<uint32_t>(depth_, static_cast<uint32_t>(level[i].steps));
    if (o.kind == Out::Cut) cut_ = true;
    if (o.kind == Out::Quasi) {
      finish(level[i]);
      if (answers_ >= cfg_.max_answers) {
        done_ = stopped_ = true;
        return;
      }
    }
    for (auto& [m, rule] : o.succ) {
      if (m.goal.fail) {
        // Leaves are counted once per distinct parent step.
        ++fail_leaves_;
        ++failures_[rule];
        continue;
      }
      auto [it, fresh] = best_.try_emplace(m.key, m.cost);
      if (!fresh) {
        if (it->second <= m.cost) continue;
        it->second = m.cost;
      }
      buckets_[m.cost].push_back(std::move(m));
    }
  }
  if (best_.size() > cfg_.max_states) {
    capped_ = true;
    done_ = true;
  }
  if (buckets_.empty()) done_ = true, complete_ = !cut_ && !capped_;
}

SolveResult solve(const Program& prog, const std::vector<Join>& goal, const SolveConfig& cfg) {
  Solver s(prog, goal, cfg);
  SolveResult r;
  while (auto a = s.next()) r.answers.push_back(std::move(*a));
  r.exhausted = s.exhausted();
  r.complete = s.complete();
  r.depth = s.depth();
  r.fail_leaves = s.fail_leaves();
  r.failures = s.failures();
  r.states = s.states();
  return r;
}

}  // namespace acrwl
