#include "acrwl/axioms.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace acrwl {

AxiomClass classify(const Axiom& ax) {
  AxiomClass c;
  c.regular = var_set(ax.lhs) == var_set(ax.rhs);
  c.collapsing = ax.lhs.is_var() || ax.rhs.is_var();
  c.strongly_regular = c.regular && !c.collapsing;
  return c;
}

namespace {

Term linearize_side(const Term& t, std::map<Var, int>& seen, std::vector<Join>& conds) {
  if (t.is_var()) {
    Var v = t.var_id();
    if (seen[v]++ == 0) return t;
    Term copy = Term::var(fresh_var(var_name(v)));
    conds.push_back({t, copy});
    return copy;
  }
  if (!t.is_app()) return t;
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(linearize_side(a, seen, conds));
  return Term::app(t.head(), std::move(args));
}

}  // namespace

std::vector<OrientedRule> linearize(const std::vector<Axiom>& axioms) {
  std::vector<OrientedRule> out;
  for (size_t i = 0; i < axioms.size(); ++i) {
    for (bool fwd : {true, false}) {
      const Term& src = fwd ? axioms[i].lhs : axioms[i].rhs;
      const Term& dst = fwd ? axioms[i].rhs : axioms[i].lhs;
      OrientedRule r;
      std::map<Var, int> seen;
      r.lhs = linearize_side(src, seen, r.conds);
      r.rhs = dst;
      r.axiom = i;
      r.forward = fwd;
      out.push_back(std::move(r));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Derivations

size_t IneqDerivation::size() const {
  size_t n = 1;
  for (const auto& p : premises) n += p.size();
  return n;
}

const char* rule_name(IneqDerivation::Rule r) {
  switch (r) {
    case IneqDerivation::Rule::B: return "B";
    case IneqDerivation::Rule::RF: return "RF";
    case IneqDerivation::Rule::TR: return "TR";
    case IneqDerivation::Rule::MN: return "MN";
    case IneqDerivation::Rule::IN: return "IN";
  }
  return "?";
}

std::string to_string(const IneqDerivation& d, int indent) {
  std::ostringstream os;
  os << std::string(indent * 2, ' ') << '(' << rule_name(d.rule) << ") " << d.lhs << " >= " << d.rhs;
  if (d.rule == IneqDerivation::Rule::IN)
    os << "   [axiom " << d.axiom + 1 << (d.forward ? ", left-to-right" : ", right-to-left") << ", "
       << to_string(d.sigma) << ']';
  os << '\n';
  for (const auto& p : d.premises) os << to_string(p, indent + 1);
  return os.str();
}

bool check_derivation(const Program& prog, const IneqDerivation& d, std::string* why) {
  auto bad = [&](const std::string& msg) {
    if (why) *why = "(" + std::string(rule_name(d.rule)) + ") " + to_string(d.lhs) + " >= " +
                    to_string(d.rhs) + ": " + msg;
    return false;
  };
  using R = IneqDerivation::Rule;
  switch (d.rule) {
    case R::B:
      if (!d.rhs.is_bottom()) return bad("right side is not bottom");
      if (!d.premises.empty()) return bad("unexpected premises");
      return true;
    case R::RF:
      if (d.lhs != d.rhs) return bad("sides differ");
      if (!d.premises.empty()) return bad("unexpected premises");
      return true;
    case R::TR:
      if (d.premises.size() != 2) return bad("needs two premises");
      if (d.premises[0].lhs != d.lhs || d.premises[0].rhs != d.premises[1].lhs ||
          d.premises[1].rhs != d.rhs)
        return bad("premises do not chain");
      break;
    case R::MN:
      if (!d.lhs.is_app() || !d.rhs.is_app() || d.lhs.head() != d.rhs.head() ||
          d.lhs.arity() != d.rhs.arity())
        return bad("heads differ");
      if (d.premises.size() != d.lhs.arity()) return bad("wrong number of premises");
      for (size_t i = 0; i < d.premises.size(); ++i)
        if (d.premises[i].lhs != d.lhs.arg(i) || d.premises[i].rhs != d.rhs.arg(i))
          return bad("premise " + std::to_string(i + 1) + " does not match argument");
      if (!prog.sig.is_cons(d.lhs.head())) return bad("head is not a constructor");
      break;
    case R::IN: {
      if (d.axiom >= prog.axioms.size()) return bad("no such axiom");
      const Axiom& ax = prog.axioms[d.axiom];
      const Term& src = d.forward ? ax.lhs : ax.rhs;
      const Term& dst = d.forward ? ax.rhs : ax.lhs;
      for (const auto& [v, t] : d.sigma)
        if (!prog.is_data_term(t)) return bad("substitution value is not a data term");
      if (d.sigma.apply(src) != d.lhs || d.sigma.apply(dst) != d.rhs)
        return bad("not an instance of the axiom");
      if (!is_safe_for(d.sigma, src)) return bad("substitution is not safe for the instantiated side");
      if (!d.premises.empty()) return bad("unexpected premises");
      return true;
    }
  }
  for (const auto& p : d.premises)
    if (!check_derivation(prog, p, why)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Generic search. Bottom replacements commute to the end of any chain, so
// s >= t iff some u reachable from s through safe axiom instances has t as
// a bottom-approximation.

namespace {

struct Step {
  Term result;
  uint32_t cost;  // nodes of the one-step derivation
  Position path;
  size_t axiom;
  bool forward;
  Subst sigma;
};

class StepGen {
 public:
  explicit StepGen(const Program& prog) : prog_(prog) {}

  const std::vector<Step>& steps(const Term& w) {
    auto it = memo_.find(w);
    if (it != memo_.end()) return it->second;
    std::vector<Step> out;
    if (w.is_app()) {
      for (size_t a = 0; a < prog_.axioms.size(); ++a) {
        for (bool fwd : {true, false}) {
          const Term& src = fwd ? prog_.axioms[a].lhs : prog_.axioms[a].rhs;
          const Term& dst = fwd ? prog_.axioms[a].rhs : prog_.axioms[a].lhs;
          Subst sigma;
          if (!match(src, w, sigma)) continue;
          if (!is_safe_for(sigma, src)) continue;
          // Variables only on the target side (non-regular axioms) get bottom.
          for (Var v : dvar(dst))
            if (!sigma.contains(v)) sigma.bind(v, Term::bottom());
          Term r = sigma.apply(dst);
          if (r == w) continue;
          out.push_back({r, 1, {}, a, fwd, std::move(sigma)});
        }
      }
      for (size_t i = 0; i < w.arity(); ++i) {
        const auto& inner = steps(w.arg(i));
        uint32_t wrap = 1 + static_cast<uint32_t>(w.arity() - 1);  // MN + RF siblings
        for (const auto& s : inner) {
          std::vector<Term> args = w.args();
          args[i] = s.result;
          Position p;
          p.reserve(s.path.size() + 1);
          p.push_back(static_cast<uint32_t>(i));
          p.insert(p.end(), s.path.begin(), s.path.end());
          out.push_back({Term::app(w.head(), std::move(args)), s.cost + wrap, std::move(p), s.axiom,
                         s.forward, s.sigma});
        }
      }
    }
    // Re-lookup: recursive calls may have rehashed the table.
    return memo_.emplace(w, std::move(out)).first->second;
  }

 private:
  const Program& prog_;
  std::unordered_map<Term, std::vector<Step>> memo_;
};

size_t approx_cost(const Term& u, const Term& t) {
  if (t.is_bottom() || t == u) return 1;
  size_t n = 1;
  for (size_t i = 0; i < t.arity(); ++i) n += approx_cost(u.arg(i), t.arg(i));
  return n;
}

IneqDerivation approx_derivation(const Term& u, const Term& t) {
  using R = IneqDerivation::Rule;
  if (t == u) return {R::RF, u, t, {}};
  if (t.is_bottom()) return {R::B, u, t, {}};
  IneqDerivation d{R::MN, u, t, {}};
  for (size_t i = 0; i < t.arity(); ++i) d.premises.push_back(approx_derivation(u.arg(i), t.arg(i)));
  return d;
}

IneqDerivation step_derivation(const Term& from, const Step& s) {
  using R = IneqDerivation::Rule;
  // Build bottom-up along the path.
  std::vector<const Term*> chain{&from};
  for (uint32_t i : s.path) chain.push_back(&chain.back()->arg(i));
  const Term& redex = *chain.back();
  Term cur_to = s.result;
  for (uint32_t i : s.path) cur_to = cur_to.arg(i);
  IneqDerivation d{R::IN, redex, cur_to, {}, s.axiom, s.forward, s.sigma};
  for (size_t depth = s.path.size(); depth-- > 0;) {
    const Term& parent = *chain[depth];
    uint32_t idx = s.path[depth];
    std::vector<Term> args = parent.args();
    args[idx] = d.rhs;
    IneqDerivation mn{R::MN, parent, Term::app(parent.head(), args), {}};
    for (size_t k = 0; k < parent.arity(); ++k) {
      if (k == idx) mn.premises.push_back(std::move(d));
      else mn.premises.push_back({R::RF, parent.arg(k), parent.arg(k), {}});
    }
    d = std::move(mn);
  }
  return d;
}

IneqDerivation chain_derivation(std::vector<IneqDerivation> steps) {
  IneqDerivation acc = std::move(steps[0]);
  for (size_t i = 1; i < steps.size(); ++i) {
    IneqDerivation tr{IneqDerivation::Rule::TR, acc.lhs, steps[i].rhs, {}};
    tr.premises.push_back(std::move(acc));
    tr.premises.push_back(std::move(steps[i]));
    acc = std::move(tr);
  }
  return acc;
}

struct Visit {
  size_t cost;
  Term parent;
  bool root;
  Step step;
};

}  // namespace

GeqResult geq_c_generic(const Program& prog, const Term& s, const Term& t, size_t budget) {
  GeqResult res;
  if (approximates(t, s)) {
    size_t c = approx_cost(s, t);
    if (c <= budget) {
      res.status = GeqStatus::Proved;
      res.proof = approx_derivation(s, t);
      res.explored = 1;
      return res;
    }
  }
  StepGen gen(prog);
  std::unordered_map<Term, Visit> best;
  using QE = std::pair<size_t, Term>;
  auto cmp = [](const QE& a, const QE& b) { return a.first > b.first; };
  std::priority_queue<QE, std::vector<QE>, decltype(cmp)> q(cmp);
  best.emplace(s, Visit{0, s, true, {}});
  q.push({0, s});
  bool pruned = false;
  const size_t state_cap = budget * 20 + 1000;
  std::unordered_set<Term> done;
  while (!q.empty()) {
    auto [g, u] = q.top();
    q.pop();
    if (done.count(u)) continue;
    done.insert(u);
    ++res.explored;
    const Visit& vu = best.at(u);
    if (!vu.root && approximates(t, u)) {
      size_t total = g + (t == u ? 0 : 1 + approx_cost(u, t));
      if (total <= budget) {
        std::vector<IneqDerivation> parts;
        Term cur = u;
        while (!best.at(cur).root) {
          const Visit& v = best.at(cur);
          parts.push_back(step_derivation(v.parent, v.step));
          cur = v.parent;
        }
        std::reverse(parts.begin(), parts.end());
        if (t != u) parts.push_back(approx_derivation(u, t));
        res.status = GeqStatus::Proved;
        res.proof = chain_derivation(std::move(parts));
        return res;
      }
      pruned = true;
    }
    if (res.explored > state_cap) {
      pruned = true;
      break;
    }
    for (const Step& st : gen.steps(u)) {
      size_t ng = g + st.cost + (vu.root ? 0 : 1);
      if (ng > budget) {
        pruned = true;
        continue;
      }
      auto it = best.find(st.result);
      if (it != best.end() && it->second.cost <= ng) continue;
      best.insert_or_assign(st.result, Visit{ng, u, false, st});
      q.push({ng, st.result});
    }
  }
  res.status = pruned ? GeqStatus::Unknown : GeqStatus::Disproved;
  return res;
}

// ---------------------------------------------------------------------------
// Set/multiset theories.

namespace {

bool same_var(const Term& a, const Term& b) { return a.is_var() && b.is_var() && a.var_id() == b.var_id(); }

// c(X, c(Y, Z)) ~ c(Y, c(X, Z))
bool is_comm(const Term& l, const Term& r, Sym& c) {
  auto shape = [](const Term& t) {
    return t.is_app() && t.arity() == 2 && t.arg(1).is_app() && t.arg(1).head() == t.head() &&
           t.arg(1).arity() == 2 && t.arg(0).is_var() && t.arg(1).arg(0).is_var() && t.arg(1).arg(1).is_var();
  };
  if (!shape(l) || !shape(r) || l.head() != r.head()) return false;
  const Term &x = l.arg(0), &y = l.arg(1).arg(0), &z = l.arg(1).arg(1);
  if (same_var(x, y) || same_var(x, z) || same_var(y, z)) return false;
  if (!same_var(r.arg(0), y) || !same_var(r.arg(1).arg(0), x) || !same_var(r.arg(1).arg(1), z)) return false;
  c = l.head();
  return true;
}

// c(X, c(X, Z)) ~ c(X, Z)
bool is_idem(const Term& l, const Term& r, Sym& c) {
  if (!l.is_app() || l.arity() != 2 || !r.is_app() || r.arity() != 2 || l.head() != r.head()) return false;
  const Term& in = l.arg(1);
  if (!in.is_app() || in.head() != l.head() || in.arity() != 2) return false;
  const Term &x = l.arg(0), &x2 = in.arg(0), &z = in.arg(1);
  if (!x.is_var() || !same_var(x, x2) || !z.is_var() || same_var(x, z)) return false;
  if (!same_var(r.arg(0), x) || !same_var(r.arg(1), z)) return false;
  c = l.head();
  return true;
}

void flatten(Sym c, const Term& t, std::vector<Term>& elems, Term& tail) {
  const Term* cur = &t;
  while (cur->is_app() && cur->head() == c && cur->arity() == 2) {
    elems.push_back(cur->arg(0));
    cur = &cur->arg(1);
  }
  tail = *cur;
}

// Kuhn's augmenting paths: left side items, right side slots.
size_t max_matching(const std::vector<std::vector<size_t>>& adj, size_t right) {
  std::vector<int> owner(right, -1);
  size_t size = 0;
  for (size_t l = 0; l < adj.size(); ++l) {
    std::vector<bool> seen(right, false);
    std::function<bool(size_t)> aug = [&](size_t u) {
      for (size_t v : adj[u]) {
        if (seen[v]) continue;
        seen[v] = true;
        if (owner[v] < 0 || aug(static_cast<size_t>(owner[v]))) {
          owner[v] = static_cast<int>(u);
          return true;
        }
      }
      return false;
    };
    if (aug(l)) ++size;
  }
  return size;
}

}  // namespace

std::optional<SpineTheory> recognize_spine_theory(const Program& prog) {
  SpineTheory th;
  for (const auto& ax : prog.axioms) {
    Sym c;
    if (is_comm(ax.lhs, ax.rhs, c) || is_comm(ax.rhs, ax.lhs, c)) th.comm.insert(c);
    else if (is_idem(ax.lhs, ax.rhs, c) || is_idem(ax.rhs, ax.lhs, c)) th.idem.insert(c);
    else return std::nullopt;
  }
  for (Sym c : th.idem)
    if (!th.comm.count(c)) return std::nullopt;
  return th;
}

Term canonical_form(const SpineTheory& th, const Term& t) {
  if (!t.is_app()) return t;
  Sym c = t.head();
  if (!th.comm.count(c) || t.arity() != 2) {
    std::vector<Term> args;
    for (const auto& a : t.args()) args.push_back(canonical_form(th, a));
    return Term::app(c, std::move(args));
  }
  std::vector<Term> elems;
  Term tail;
  flatten(c, t, elems, tail);
  for (auto& e : elems) e = canonical_form(th, e);
  std::sort(elems.begin(), elems.end(), TermLess{});
  if (th.idem.count(c)) elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  Term out = canonical_form(th, tail);
  for (size_t i = elems.size(); i-- > 0;) out = Term::app(c, {elems[i], out});
  return out;
}

bool decide_geq_spine(const SpineTheory& th, const Term& s, const Term& t) {
  if (t.is_bottom()) return true;
  if (s.is_bottom()) return false;
  if (s.is_var() || t.is_var()) return s == t;
  if (s.head() != t.head() || s.arity() != t.arity()) return false;
  Sym c = s.head();
  if (!th.comm.count(c) || s.arity() != 2) {
    for (size_t i = 0; i < s.arity(); ++i)
      if (!decide_geq_spine(th, s.arg(i), t.arg(i))) return false;
    return true;
  }
  std::vector<Term> se, te;
  Term s0, t0;
  flatten(c, s, se, s0);
  flatten(c, t, te, t0);
  bool open = t0.is_bottom();
  if (!open && !decide_geq_spine(th, s0, t0)) return false;
  bool idem = th.idem.count(c) > 0;

  // Items: each element for multisets; for sets, partial elements stay
  // separate while total elements are grouped by equivalence class.
  std::vector<Term> items;
  if (idem) {
    std::vector<Term> seen_canon;
    for (const auto& e : se) {
      if (e.has_bottom()) {
        items.push_back(e);
        continue;
      }
      Term k = canonical_form(th, e);
      if (std::find(seen_canon.begin(), seen_canon.end(), k) != seen_canon.end()) continue;
      seen_canon.push_back(k);
      items.push_back(e);
    }
  } else {
    items = se;
  }
  std::vector<std::vector<size_t>> item_adj(items.size()), t_adj(te.size());
  for (size_t i = 0; i < items.size(); ++i)
    for (size_t j = 0; j < te.size(); ++j)
      if (decide_geq_spine(th, items[i], te[j])) {
        item_adj[i].push_back(j);
        t_adj[j].push_back(i);
      }
  if (!idem) {
    if (!open && items.size() != te.size()) return false;
    return max_matching(t_adj, items.size()) == te.size();
  }
  for (const auto& a : t_adj)
    if (a.empty()) return false;
  if (open) return true;
  return max_matching(item_adj, te.size()) == items.size();
}

GeqResult geq_c(const Program& prog, const Term& s, const Term& t, size_t budget) {
  if (auto th = recognize_spine_theory(prog)) {
    if (!decide_geq_spine(*th, s, t)) {
      GeqResult r;
      r.status = GeqStatus::Disproved;
      return r;
    }
  }
  return geq_c_generic(prog, s, t, budget);
}

const char* to_string(Tri t) {
  switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    case Tri::Unknown: return "unknown";
  }
  return "?";
}

Tri equiv_c(const Program& prog, const Term& s, const Term& t, size_t budget) {
  if (s == t) return Tri::Yes;
  if (auto th = recognize_spine_theory(prog))
    return canonical_form(*th, s) == canonical_form(*th, t) ? Tri::Yes : Tri::No;
  auto a = geq_c_generic(prog, s, t, budget);
  if (a.status == GeqStatus::Disproved) return Tri::No;
  auto b = geq_c_generic(prog, t, s, budget);
  if (b.status == GeqStatus::Disproved) return Tri::No;
  if (a.status == GeqStatus::Proved && b.status == GeqStatus::Proved) return Tri::Yes;
  return Tri::Unknown;
}

}  // namespace acrwl
