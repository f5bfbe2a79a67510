#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "acrwl/gorc.hpp"

namespace acrwl {

namespace {

// Rule variables are renamed into a pool indexed by nesting level (fuel or
// size budget). Levels strictly decrease along nested rule applications, and
// a finished application drops its own bindings, so siblings may reuse names.
class VarPool {
 public:
  Var rule_var(Var v, uint32_t level) {
    auto key = (static_cast<uint64_t>(v.id) << 32) | level;
    auto it = rule_.find(key);
    if (it != rule_.end()) return it->second;
    Var p = intern_var("%" + var_name(v) + "@" + std::to_string(level));
    pattern_.insert(p);
    return rule_[key] = p;
  }
  Var target(uint32_t level) {
    auto it = target_.find(level);
    if (it != target_.end()) return it->second;
    Var p = intern_var("%target@" + std::to_string(level));
    pattern_.insert(p);
    return target_[level] = p;
  }
  Var canon(size_t i) {
    while (canon_.size() <= i) {
      Var p = intern_var("%c" + std::to_string(canon_.size()));
      pattern_.insert(p);
      canon_.push_back(p);
    }
    return canon_[i];
  }
  bool is_pattern(Var v) const { return pattern_.count(v) > 0; }

 private:
  std::unordered_map<uint64_t, Var> rule_;
  std::unordered_map<uint32_t, Var> target_;
  std::vector<Var> canon_;
  std::unordered_set<Var> pattern_;
};

struct RuleView {
  PRule tag;
  int index;
  const std::vector<Term>* largs;  // for OMUT: the lhs arguments
  const Term* rhs;
  const std::vector<Join>* conds;
  std::vector<Var> vars;
};

std::vector<RuleView> views_for(const Program& prog, const Term& e) {
  std::vector<RuleView> out;
  if (!e.is_app()) return out;
  if (prog.sig.is_cons(e.head())) {
    auto it = prog.oriented_by_cons.find(e.head());
    if (it == prog.oriented_by_cons.end()) return out;
    for (size_t i : it->second) {
      const auto& r = prog.oriented[i];
      out.push_back({PRule::OMUT, static_cast<int>(i), &r.lhs.args(), &r.rhs, &r.conds, r.vars()});
    }
  } else {
    auto it = prog.rules_by_fun.find(e.head());
    if (it == prog.rules_by_fun.end()) return out;
    for (size_t i : it->second) {
      const auto& r = prog.rules[i];
      out.push_back({PRule::OR, static_cast<int>(i), &r.lhs_args, &r.rhs, &r.conds, r.vars()});
    }
  }
  return out;
}

// Variables of the rule that matter beyond the argument patterns.
std::unordered_set<Var> needed_vars(const RuleView& r) {
  std::unordered_set<Var> out;
  for (Var v : dvar(*r.rhs)) out.insert(v);
  for (const auto& c : *r.conds) {
    for (Var v : dvar(c.lhs)) out.insert(v);
    for (Var v : dvar(c.rhs)) out.insert(v);
  }
  return out;
}

inline size_t mix(size_t h, size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

struct Key {
  Term e, p;
  uint32_t a, b;
  friend bool operator==(const Key& x, const Key& y) {
    return x.a == y.a && x.b == y.b && x.e == y.e && x.p == y.p;
  }
};
struct KeyHash {
  size_t operator()(const Key& k) const { return mix(mix(mix(k.e.hash(), k.p.hash()), k.a), k.b); }
};

struct Val {
  Term v;
  ProofPtr proof;
};

struct WorkExhausted {};

// Shared machinery for both search modes. `level` is the fuel (validator)
// or the remaining size budget (exhaustive).
class SearchBase {
 protected:
  SearchBase(const Program& prog, uint64_t work_limit) : prog_(prog), work_limit_(work_limit) {}

  void tick() {
    if (++work_ > work_limit_) throw WorkExhausted{};
  }

  Term canonical_pattern(const Term& p) {
    std::vector<Var> vars;
    collect_vars(p, vars);
    Subst s;
    size_t i = 0;
    for (Var v : vars)
      if (pool_.is_pattern(v)) s.bind(v, Term::var(pool_.canon(i++)));
    return s.apply(p);
  }

  bool has_pattern_var(const Term& t) const {
    if (t.is_var()) return pool_.is_pattern(t.var_id());
    if (!t.is_app() || t.is_ground()) return false;
    for (const auto& a : t.args())
      if (has_pattern_var(a)) return true;
    return false;
  }

  Subst rename(const RuleView& r, uint32_t level, Subst& back) {
    auto needed = needed_vars(r);
    Subst ren;
    for (Var v : r.vars) {
      if (!needed.count(v)) {
        ren.bind(v, Term::bottom());
        continue;
      }
      Var p = pool_.rule_var(v, level);
      ren.bind(v, Term::var(p));
      back.bind(p, Term::var(v));
    }
    return ren;
  }

  // Instance over the rule's own variables, read off the final bindings.
  static Subst rule_instance(const RuleView& r, const Subst& ren, const Subst& theta) {
    Subst sigma;
    for (Var v : r.vars) sigma.bind(v, theta.apply(*ren.find(v)));
    return sigma;
  }

  Subst strip(const Subst& theta, const Subst& back) {
    Subst out;
    for (const auto& [v, t] : theta)
      if (!back.contains(v)) out.bind(v, t);
    return out;
  }

  static void prune_values(std::vector<Val>& vals, bool keep_dominated) {
    std::unordered_map<Term, size_t> best;
    std::vector<Val> uniq;
    for (auto& x : vals) {
      auto it = best.find(x.v);
      if (it == best.end()) {
        best.emplace(x.v, uniq.size());
        uniq.push_back(std::move(x));
      } else if (x.proof->size < uniq[it->second].proof->size) {
        uniq[it->second] = std::move(x);
      }
    }
    if (!keep_dominated) {
      std::vector<Val> out;
      for (size_t i = 0; i < uniq.size(); ++i) {
        bool dominated = false;
        for (size_t j = 0; j < uniq.size() && !dominated; ++j)
          dominated = i != j && uniq[i].v.has_bottom() && approximates(uniq[i].v, uniq[j].v);
        if (!dominated) out.push_back(uniq[i]);
      }
      uniq = std::move(out);
    }
    vals = std::move(uniq);
  }

  const Program& prog_;
  uint64_t work_limit_;
  uint64_t work_ = 0;
  VarPool pool_;
};

// ---------------------------------------------------------------------------
// Validator mode.

class Validator : SearchBase {
 public:
  Validator(const Program& prog, uint64_t work_limit) : SearchBase(prog, work_limit) {}

  using Cont = std::function<bool(const Subst&, const ProofPtr&)>;

  ProofPtr prove(const Statement& st, uint32_t depth, uint32_t fuel) {
    ProofPtr found;
    Cont accept = [&](const Subst&, const ProofPtr& p) {
      found = p;
      return true;
    };
    if (st.kind == Statement::Reduce)
      gen(st.lhs, st.rhs, {}, depth, fuel, accept);
    else
      join(st.lhs, st.rhs, {}, depth, fuel, accept);
    return found;
  }

 private:
  const std::vector<Val>& values(const Term& e, uint32_t d, uint32_t fuel) {
    Key key{e, Term::bottom(), d, fuel};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    tick();
    std::vector<Val> out;
    Term bot = Term::bottom();
    if (d == 0 || e.is_bottom()) {
      out.push_back({bot, Proof::make(PRule::B, Statement::reduce(e, bot))});
    } else if (e.is_var()) {
      out.push_back({e, Proof::make(PRule::RR, Statement::reduce(e, e))});
    } else {
      if (prog_.sig.is_cons(e.head())) {
        std::vector<const std::vector<Val>*> lists;
        for (const auto& a : e.args()) lists.push_back(&values(a, d - 1, fuel));
        std::vector<Term> cur(e.arity());
        std::vector<ProofPtr> prem(e.arity());
        std::function<void(size_t)> product = [&](size_t i) {
          if (i == lists.size()) {
            Term v = Term::app(e.head(), cur);
            out.push_back({v, Proof::make(PRule::DC, Statement::reduce(e, v), prem)});
            return;
          }
          for (const auto& x : *lists[i]) {
            cur[i] = x.v;
            prem[i] = x.proof;
            product(i + 1);
          }
        };
        product(0);
      }
      if (fuel > 0) {
        Var z = pool_.target(fuel);
        for (const auto& r : views_for(prog_, e)) {
          apply_rule(e, r, Term::var(z), {}, d, fuel, [&](const Subst& th, const ProofPtr& p) {
            Term v = th.apply(Term::var(z));
            if (!v.is_bottom()) out.push_back({v, p});
            return false;
          });
        }
      }
      out.push_back({bot, Proof::make(PRule::B, Statement::reduce(e, bot))});
      prune_values(out, false);
    }
    return memo_[key] = std::move(out);
  }

  bool gen(const Term& e, const Term& pat, const Subst& theta, uint32_t d, uint32_t fuel, const Cont& k) {
    tick();
    Term p = theta.apply(pat);
    if (p.is_bottom()) return k(theta, Proof::make(PRule::B, Statement::reduce(e, p)));
    if (p.is_var() && pool_.is_pattern(p.var_id())) {
      for (const auto& x : values(e, d, fuel)) {
        Subst th = theta;
        th.bind(p.var_id(), x.v);
        if (k(th, x.proof)) return true;
      }
      return false;
    }
    if (e.is_bottom()) return false;
    if (e.is_var()) return p == e && k(theta, Proof::make(PRule::RR, Statement::reduce(e, e)));

    Key key{e, canonical_pattern(p), d, fuel};
    if (fail_.count(key)) return false;
    bool produced = false;
    Cont k2 = [&](const Subst& th, const ProofPtr& pr) {
      produced = true;
      return k(th, pr);
    };

    if (prog_.sig.is_cons(e.head()) && p.is_app() && p.head() == e.head() && p.arity() == e.arity()) {
      std::vector<ProofPtr> prem;
      uint32_t dd = d > 0 ? d - 1 : 0;
      bool stop = gen_list(e.args(), p.args(), 0, theta, dd, fuel, prem, [&](const Subst& th) {
        return k2(th, Proof::make(PRule::DC, Statement::reduce(e, th.apply(p)), prem));
      });
      if (stop) return true;
    }
    if (fuel > 0)
      for (const auto& r : views_for(prog_, e))
        if (apply_rule(e, r, p, theta, d, fuel, k2)) return true;
    if (!produced) fail_.insert(std::move(key));
    return false;
  }

  bool gen_list(const std::vector<Term>& es, const std::vector<Term>& ps, size_t i, const Subst& theta,
                uint32_t d, uint32_t fuel, std::vector<ProofPtr>& prem,
                const std::function<bool(const Subst&)>& k) {
    if (i == es.size()) return k(theta);
    return gen(es[i], ps[i], theta, d, fuel, [&](const Subst& th, const ProofPtr& pr) {
      prem.push_back(pr);
      bool r = gen_list(es, ps, i + 1, th, d, fuel, prem, k);
      prem.pop_back();
      return r;
    });
  }

  bool conds(const std::vector<Join>& cs, size_t i, const Subst& theta, uint32_t d, uint32_t fuel,
             std::vector<ProofPtr>& prem, const std::function<bool(const Subst&)>& k) {
    if (i == cs.size()) return k(theta);
    return join(cs[i].lhs, cs[i].rhs, theta, d, fuel, [&](const Subst& th, const ProofPtr& pr) {
      prem.push_back(pr);
      bool r = conds(cs, i + 1, th, d, fuel, prem, k);
      prem.pop_back();
      return r;
    });
  }

  bool unbound(const Term& t) const { return t.is_var() && pool_.is_pattern(t.var_id()); }

  bool join(const Term& a0, const Term& b0, const Subst& theta, uint32_t d, uint32_t fuel, const Cont& k) {
    tick();
    Term a = theta.apply(a0), b = theta.apply(b0);
    if (unbound(a) && unbound(b)) return false;
    if (unbound(b) || unbound(a)) {
      bool left = unbound(b);
      const Term& known = left ? a : b;
      Var y = (left ? b : a).var_id();
      if (has_pattern_var(known)) return false;
      for (const auto& x : values(known, d, fuel)) {
        if (x.v.has_bottom()) continue;
        Subst th = theta;
        th.bind(y, x.v);
        auto id = identity_proof(x.v);
        auto pj = left ? Proof::make(PRule::J, Statement::join(a, x.v), {x.proof, id})
                       : Proof::make(PRule::J, Statement::join(x.v, b), {id, x.proof});
        if (k(th, pj)) return true;
      }
      return false;
    }
    if (has_pattern_var(a) || has_pattern_var(b)) return false;
    for (const auto& x : values(a, d, fuel)) {
      if (x.v.has_bottom()) continue;
      bool stop = gen(b, x.v, theta, d, fuel, [&](const Subst& th, const ProofPtr& pb) {
        return k(th, Proof::make(PRule::J, Statement::join(a, b), {x.proof, pb}));
      });
      if (stop) return true;
    }
    return false;
  }

  bool apply_rule(const Term& e, const RuleView& r, const Term& p, const Subst& theta, uint32_t d, uint32_t fuel,
                  const Cont& k) {
    if (p.is_bottom()) return false;
    Subst back;
    Subst ren = rename(r, fuel, back);
    std::vector<Term> pats;
    for (const auto& l : *r.largs) pats.push_back(ren.apply(l));
    std::vector<Join> cs;
    for (const auto& c : *r.conds) cs.push_back({ren.apply(c.lhs), ren.apply(c.rhs)});
    Term rhs = ren.apply(*r.rhs);
    std::vector<ProofPtr> prem;
    return gen_list(e.args(), pats, 0, theta, d, fuel - 1, prem, [&](const Subst& th1) {
      return conds(cs, 0, th1, d, fuel - 1, prem, [&](const Subst& th2) {
        Term body = th2.apply(rhs);
        if (has_pattern_var(body)) return false;
        return gen(body, p, th2, d, fuel - 1, [&](const Subst& th3, const ProofPtr& pr) {
          Term target = th3.apply(p);
          if (target.is_bottom()) return false;
          auto all = prem;
          all.push_back(pr);
          auto proof = Proof::make(r.tag, Statement::reduce(e, target), std::move(all), r.index,
                                   rule_instance(r, ren, th3));
          return k(strip(th3, back), proof);
        });
      });
    });
  }

  std::unordered_map<Key, std::vector<Val>, KeyHash> memo_;
  std::unordered_set<Key, KeyHash> fail_;
};

// Proof with body variables bound late replaced by their values.
ProofPtr instantiate_proof(const ProofPtr& p, const Subst& th) {
  std::vector<ProofPtr> prem;
  for (const auto& q : p->premises) prem.push_back(instantiate_proof(q, th));
  Statement c = p->conclusion;
  c.lhs = th.apply(c.lhs);
  c.rhs = th.apply(c.rhs);
  Subst sigma;
  for (const auto& [v, t] : p->sigma) sigma.bind(v, th.apply(t));
  return Proof::make(p->rule, std::move(c), std::move(prem), p->rule_index, std::move(sigma));
}

// ---------------------------------------------------------------------------
// Exhaustive mode. Every proof node costs one unit of the size budget.

class Bounded : SearchBase {
 public:
  Bounded(const Program& prog, uint64_t work_limit) : SearchBase(prog, work_limit) {}

  using Cont = std::function<bool(const Subst&, const ProofPtr&)>;

  ProofPtr prove(const Statement& st, uint32_t budget) {
    ProofPtr found;
    Cont accept = [&](const Subst&, const ProofPtr& p) {
      found = p;
      return true;
    };
    if (st.kind == Statement::Reduce)
      gen(st.lhs, st.rhs, {}, budget, accept);
    else
      join(st.lhs, st.rhs, {}, budget, accept);
    return found;
  }

 private:
  // All values reachable with a proof of at most b nodes, smallest proof each.
  const std::vector<Val>& values(const Term& e, uint32_t b) {
    Key key{e, Term::bottom(), b, 0};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    tick();
    std::vector<Val> out;
    if (b >= 1) {
      Term bot = Term::bottom();
      out.push_back({bot, Proof::make(PRule::B, Statement::reduce(e, bot))});
      if (e.is_var()) out.push_back({e, Proof::make(PRule::RR, Statement::reduce(e, e))});
      if (e.is_app() && prog_.sig.is_cons(e.head()) && b >= 1 + e.arity()) {
        std::vector<Term> cur(e.arity());
        std::vector<ProofPtr> prem(e.arity());
        std::function<void(size_t, uint32_t)> product = [&](size_t i, uint32_t left) {
          if (i == e.arity()) {
            Term v = Term::app(e.head(), cur);
            out.push_back({v, Proof::make(PRule::DC, Statement::reduce(e, v), prem)});
            return;
          }
          uint32_t reserve = static_cast<uint32_t>(e.arity() - i - 1);
          for (const auto& x : values(e.arg(i), left - reserve)) {
            cur[i] = x.v;
            prem[i] = x.proof;
            product(i + 1, left - static_cast<uint32_t>(x.proof->size));
          }
        };
        product(0, b - 1);
      }
      if (e.is_app() && b >= 2) {
        Var z = pool_.target(b);
        for (const auto& r : views_for(prog_, e))
          apply_rule(e, r, Term::var(z), {}, b, [&](const Subst& th, const ProofPtr& p) {
            Term v = th.apply(Term::var(z));
            if (!v.is_bottom()) out.push_back({v, p});
            return false;
          });
      }
      prune_values(out, true);
    }
    return memo_[key] = std::move(out);
  }

  bool gen(const Term& e, const Term& pat, const Subst& theta, uint32_t b, const Cont& k) {
    if (b == 0) return false;
    tick();
    Term p = theta.apply(pat);
    if (p.is_bottom()) return k(theta, Proof::make(PRule::B, Statement::reduce(e, p)));
    if (p.is_var() && pool_.is_pattern(p.var_id())) {
      for (const auto& x : values(e, b)) {
        Subst th = theta;
        th.bind(p.var_id(), x.v);
        if (k(th, x.proof)) return true;
      }
      return false;
    }
    if (e.is_bottom()) return false;
    if (unbound(e)) {
      // Variable of a rule body that no argument binds (non-regular rules):
      // it takes the target value.
      if (has_pattern_var(p)) return false;
      auto id = identity_proof(p);
      if (id->size > b) return false;
      Subst th = theta;
      th.bind(e.var_id(), p);
      return k(th, id);
    }
    if (e.is_var()) return p == e && k(theta, Proof::make(PRule::RR, Statement::reduce(e, e)));

    Key key{e, canonical_pattern(p), b, 1};
    if (fail_.count(key)) return false;
    bool produced = false;
    Cont k2 = [&](const Subst& th, const ProofPtr& pr) {
      produced = true;
      return k(th, pr);
    };
    if (prog_.sig.is_cons(e.head()) && p.is_app() && p.head() == e.head() && p.arity() == e.arity() &&
        b >= 1 + e.arity()) {
      std::vector<ProofPtr> prem;
      bool stop = gen_list(e.args(), p.args(), 0, theta, b - 1, prem, [&](const Subst& th, uint32_t) {
        return k2(th, Proof::make(PRule::DC, Statement::reduce(e, th.apply(p)), prem));
      });
      if (stop) return true;
    }
    if (b >= 2)
      for (const auto& r : views_for(prog_, e))
        if (apply_rule(e, r, p, theta, b, k2)) return true;
    if (!produced) fail_.insert(std::move(key));
    return false;
  }

  using ListCont = std::function<bool(const Subst&, uint32_t)>;

  // Budget `left` is shared by the remaining items; each needs at least one.
  bool gen_list(const std::vector<Term>& es, const std::vector<Term>& ps, size_t i, const Subst& theta,
                uint32_t left, std::vector<ProofPtr>& prem, const ListCont& k) {
    if (i == es.size()) return k(theta, left);
    uint32_t reserve = static_cast<uint32_t>(es.size() - i - 1);
    if (left < reserve + 1) return false;
    return gen(es[i], ps[i], theta, left - reserve, [&](const Subst& th, const ProofPtr& pr) {
      prem.push_back(pr);
      bool r = gen_list(es, ps, i + 1, th, left - static_cast<uint32_t>(pr->size), prem, k);
      prem.pop_back();
      return r;
    });
  }

  bool conds(const std::vector<Join>& cs, size_t i, const Subst& theta, uint32_t left,
             std::vector<ProofPtr>& prem, const ListCont& k) {
    if (i == cs.size()) return k(theta, left);
    // A join needs at least three nodes; the body needs one more.
    uint32_t reserve = static_cast<uint32_t>(3 * (cs.size() - i - 1) + 1);
    if (left < reserve + 3) return false;
    return join(cs[i].lhs, cs[i].rhs, theta, left - reserve, [&](const Subst& th, const ProofPtr& pr) {
      prem.push_back(pr);
      bool r = conds(cs, i + 1, th, left - static_cast<uint32_t>(pr->size), prem, k);
      prem.pop_back();
      return r;
    });
  }

  bool unbound(const Term& t) const { return t.is_var() && pool_.is_pattern(t.var_id()); }

  bool join(const Term& a0, const Term& b0, const Subst& theta, uint32_t b, const Cont& k) {
    if (b < 3) return false;
    tick();
    Term a = theta.apply(a0), c = theta.apply(b0);
    if (unbound(a) && unbound(c)) return false;
    if (unbound(a) || unbound(c)) {
      bool left = unbound(c);
      const Term& known = left ? a : c;
      Var y = (left ? c : a).var_id();
      if (has_pattern_var(known)) return false;
      for (const auto& x : values(known, b - 2)) {
        if (x.v.has_bottom()) continue;
        auto id = identity_proof(x.v);
        if (1 + x.proof->size + id->size > b) continue;
        Subst th = theta;
        th.bind(y, x.v);
        auto pj = left ? Proof::make(PRule::J, Statement::join(a, x.v), {x.proof, id})
                       : Proof::make(PRule::J, Statement::join(x.v, c), {id, x.proof});
        if (k(th, pj)) return true;
      }
      return false;
    }
    if (has_pattern_var(a) || has_pattern_var(c)) return false;
    for (const auto& x : values(a, b - 2)) {
      if (x.v.has_bottom()) continue;
      uint32_t rest = b - 1 - static_cast<uint32_t>(x.proof->size);
      bool stop = gen(c, x.v, theta, rest, [&](const Subst& th, const ProofPtr& pc) {
        return k(th, Proof::make(PRule::J, Statement::join(a, c), {x.proof, pc}));
      });
      if (stop) return true;
    }
    return false;
  }

  bool apply_rule(const Term& e, const RuleView& r, const Term& p, const Subst& theta, uint32_t b,
                  const Cont& k) {
    if (p.is_bottom()) return false;
    size_t minimum = 1 + r.largs->size() + 3 * r.conds->size() + 1;
    if (b < minimum) return false;
    Subst back;
    Subst ren = rename(r, b, back);
    std::vector<Term> pats;
    for (const auto& l : *r.largs) pats.push_back(ren.apply(l));
    std::vector<Join> cs;
    for (const auto& c : *r.conds) cs.push_back({ren.apply(c.lhs), ren.apply(c.rhs)});
    Term rhs = ren.apply(*r.rhs);
    std::vector<ProofPtr> prem;
    uint32_t cond_reserve = static_cast<uint32_t>(3 * cs.size() + 1);
    auto after_args = [&](const Subst& th1, uint32_t left1) {
      return conds(cs, 0, th1, left1, prem, [&](const Subst& th2, uint32_t left2) {
        Term body = th2.apply(rhs);
        const bool open = has_pattern_var(body);
        return gen(body, p, th2, left2, [&](const Subst& th3, const ProofPtr& pr) {
          Term target = th3.apply(p);
          if (target.is_bottom()) return false;
          auto all = prem;
          all.push_back(open ? instantiate_proof(pr, th3) : pr);
          auto proof = Proof::make(r.tag, Statement::reduce(e, target), std::move(all), r.index,
                                   rule_instance(r, ren, th3));
          return k(strip(th3, back), proof);
        });
      });
    };
    if (pats.empty()) return after_args(theta, b - 1);
    return gen_list(e.args(), pats, 0, theta, b - 1 - cond_reserve, prem,
                    [&](const Subst& th1, uint32_t left) { return after_args(th1, left + cond_reserve); });
  }

  std::unordered_map<Key, std::vector<Val>, KeyHash> memo_;
  std::unordered_set<Key, KeyHash> fail_;
};

void verify(const Program& prog, const ProofPtr& p) {
  auto res = check_proof(prog, *p);
  if (!res.ok) throw std::logic_error("oracle produced an invalid proof: " + res.reason);
}

}  // namespace

OracleResult oracle_prove(const Program& prog, const Statement& st, const OracleConfig& cfg) {
  Validator v(prog, cfg.work_limit);
  OracleResult out;
  try {
    uint32_t d = 4, f = 2;
    while (true) {
      if (auto p = v.prove(st, d, f)) {
        verify(prog, p);
        out.status = OracleStatus::Proved;
        out.proof = p;
        return out;
      }
      if (d >= cfg.max_value_depth && f >= cfg.max_rule_nesting) break;
      d = std::min(cfg.max_value_depth, d + 4);
      f = std::min(cfg.max_rule_nesting, f + 2);
    }
    out.status = OracleStatus::NotFound;
  } catch (const WorkExhausted&) {
    out.status = OracleStatus::WorkExhausted;
  }
  return out;
}

ProofPtr prove_bounded(const Program& prog, const Statement& st, size_t max_size) {
  Bounded b(prog, UINT64_MAX);
  uint32_t limit = static_cast<uint32_t>(max_size);
  for (uint32_t n = std::min<uint32_t>(limit, 8);; n = std::min(limit, n * 2)) {
    if (auto p = b.prove(st, n)) {
      verify(prog, p);
      return p;
    }
    if (n == limit) return nullptr;
  }
}

AnswerCheck validate_answer(const Program& prog, const std::vector<Join>& goal, const Subst& answer,
                            const OracleConfig& cfg) {
  AnswerCheck out;
  out.ok = true;
  for (const auto& j : goal) {
    Statement st = Statement::join(answer.apply(j.lhs), answer.apply(j.rhs));
    auto r = oracle_prove(prog, st, cfg);
    if (r.status == OracleStatus::Proved) {
      out.witness.proofs.push_back(r.proof);
      continue;
    }
    out.ok = false;
    out.unknown = r.status == OracleStatus::WorkExhausted;
    out.reason = (out.unknown ? "oracle ran out of work on " : "no proof found for ") + to_string(st);
    return out;
  }
  return out;
}

}  // namespace acrwl
