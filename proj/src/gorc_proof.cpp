#include <algorithm>
#include <map>
#include <sstream>

#include "acrwl/gorc.hpp"

namespace acrwl {

std::string to_string(const Statement& s) {
  return to_string(s.lhs) + (s.kind == Statement::Reduce ? " -> " : " == ") + to_string(s.rhs);
}

const char* rule_name(PRule r) {
  switch (r) {
    case PRule::B: return "B";
    case PRule::RR: return "RR";
    case PRule::DC: return "DC";
    case PRule::OMUT: return "OMUT";
    case PRule::OR: return "OR";
    case PRule::J: return "J";
    case PRule::RF: return "RF";
    case PRule::TR: return "TR";
    case PRule::MN: return "MN";
    case PRule::R: return "R";
    case PRule::MUT: return "MUT";
  }
  return "?";
}

ProofPtr Proof::make(PRule r, Statement c, std::vector<ProofPtr> prem, int idx, Subst s) {
  auto p = std::make_shared<Proof>();
  p->rule = r;
  p->conclusion = std::move(c);
  p->premises = std::move(prem);
  p->rule_index = idx;
  p->sigma = std::move(s);
  p->size = 1;
  for (const auto& q : p->premises) p->size += q->size;
  return p;
}

std::string to_string(const Proof& p, int indent) {
  std::ostringstream os;
  os << std::string(indent * 2, ' ') << '(' << rule_name(p.rule) << ") " << to_string(p.conclusion);
  if (p.rule_index >= 0) os << "   [rule " << p.rule_index + 1 << ", " << to_string(p.sigma) << ']';
  os << '\n';
  for (const auto& q : p.premises) os << to_string(*q, indent + 1);
  return os.str();
}

ProofPtr identity_proof(const Term& t) {
  if (t.is_bottom()) return Proof::make(PRule::B, Statement::reduce(t, t));
  if (t.is_var()) return Proof::make(PRule::RR, Statement::reduce(t, t));
  std::vector<ProofPtr> prem;
  for (const auto& a : t.args()) prem.push_back(identity_proof(a));
  return Proof::make(PRule::DC, Statement::reduce(t, t), std::move(prem));
}

namespace {

class Checker {
 public:
  Checker(const Program& prog, bool basic) : prog_(prog), basic_(basic) {}

  bool check(const Proof& p) {
    if (!node(p)) return false;
    for (const auto& q : p.premises)
      if (!check(*q)) return false;
    return true;
  }

  std::string reason;

 private:
  bool bad(const Proof& p, const std::string& msg) {
    reason = "(" + std::string(rule_name(p.rule)) + ") " + to_string(p.conclusion) + ": " + msg;
    return false;
  }

  bool subst_ok(const Proof& p) {
    for (const auto& [v, t] : p.sigma)
      if (!prog_.is_data_term(t)) return bad(p, "instance value " + to_string(t) + " is not a data term");
    return true;
  }

  bool is_reduce(const ProofPtr& q, const Term& l, const Term& r) {
    return q->conclusion.kind == Statement::Reduce && q->conclusion.lhs == l && q->conclusion.rhs == r;
  }
  bool is_join(const ProofPtr& q, const Term& l, const Term& r) {
    return q->conclusion.kind == Statement::Joinable && q->conclusion.lhs == l && q->conclusion.rhs == r;
  }

  bool node(const Proof& p) {
    const Statement& c = p.conclusion;
    const bool red = c.kind == Statement::Reduce;
    if (!basic_ && red && !prog_.is_data_term(c.rhs)) return bad(p, "right side is not a data term");
    switch (p.rule) {
      case PRule::B:
        if (!red || !c.rhs.is_bottom()) return bad(p, "must conclude e -> _|_");
        if (!p.premises.empty()) return bad(p, "unexpected premises");
        return true;
      case PRule::RR:
        if (basic_) return bad(p, "not a rule of this calculus");
        if (!red || !c.lhs.is_var() || c.lhs != c.rhs) return bad(p, "must conclude x -> x");
        return p.premises.empty() || bad(p, "unexpected premises");
      case PRule::RF:
        if (!basic_) return bad(p, "not a rule of this calculus");
        if (!red || c.lhs != c.rhs) return bad(p, "must conclude e -> e");
        return p.premises.empty() || bad(p, "unexpected premises");
      case PRule::TR:
        if (!basic_) return bad(p, "not a rule of this calculus");
        if (!red || p.premises.size() != 2) return bad(p, "needs two reduction premises");
        if (p.premises[0]->conclusion.kind != Statement::Reduce ||
            p.premises[1]->conclusion.kind != Statement::Reduce ||
            p.premises[0]->conclusion.lhs != c.lhs || p.premises[0]->conclusion.rhs != p.premises[1]->conclusion.lhs ||
            p.premises[1]->conclusion.rhs != c.rhs)
          return bad(p, "premises do not chain");
        return true;
      case PRule::DC:
      case PRule::MN: {
        if (basic_ != (p.rule == PRule::MN)) return bad(p, "not a rule of this calculus");
        if (!red || !c.lhs.is_app() || !c.rhs.is_app() || c.lhs.head() != c.rhs.head() ||
            c.lhs.arity() != c.rhs.arity())
          return bad(p, "heads differ");
        if (p.rule == PRule::DC && !prog_.sig.is_cons(c.lhs.head())) return bad(p, "head is not a constructor");
        if (p.premises.size() != c.lhs.arity()) return bad(p, "wrong number of premises");
        for (size_t i = 0; i < c.lhs.arity(); ++i)
          if (!is_reduce(p.premises[i], c.lhs.arg(i), c.rhs.arg(i)))
            return bad(p, "premise " + std::to_string(i + 1) + " does not decompose the argument");
        return true;
      }
      case PRule::OMUT:
      case PRule::OR: {
        if (basic_) return bad(p, "not a rule of this calculus");
        if (!red) return bad(p, "must conclude a reduction");
        if (c.rhs.is_bottom()) return bad(p, "target must not be _|_");
        if (!c.lhs.is_app()) return bad(p, "left side must be an application");
        if (!subst_ok(p)) return false;
        std::vector<Term> largs;
        Term rhs;
        std::vector<Join> conds;
        if (p.rule == PRule::OMUT) {
          if (p.rule_index < 0 || static_cast<size_t>(p.rule_index) >= prog_.oriented.size())
            return bad(p, "no such axiom rule");
          const auto& r = prog_.oriented[p.rule_index];
          if (!r.lhs.is_app() || r.lhs.head() != c.lhs.head()) return bad(p, "axiom rule head differs");
          largs = r.lhs.args();
          rhs = r.rhs;
          conds = r.conds;
        } else {
          if (p.rule_index < 0 || static_cast<size_t>(p.rule_index) >= prog_.rules.size())
            return bad(p, "no such program rule");
          const auto& r = prog_.rules[p.rule_index];
          if (r.fun != c.lhs.head()) return bad(p, "program rule head differs");
          largs = r.lhs_args;
          rhs = r.rhs;
          conds = r.conds;
        }
        if (largs.size() != c.lhs.arity()) return bad(p, "arity mismatch");
        if (p.premises.size() != largs.size() + conds.size() + 1) return bad(p, "wrong number of premises");
        size_t k = 0;
        for (size_t i = 0; i < largs.size(); ++i, ++k)
          if (!is_reduce(p.premises[k], c.lhs.arg(i), p.sigma.apply(largs[i])))
            return bad(p, "argument premise " + std::to_string(i + 1) + " does not match the instance");
        for (const auto& j : conds) {
          if (!is_join(p.premises[k], p.sigma.apply(j.lhs), p.sigma.apply(j.rhs)))
            return bad(p, "condition premise does not match " + to_string(j));
          ++k;
        }
        if (!is_reduce(p.premises[k], p.sigma.apply(rhs), c.rhs))
          return bad(p, "last premise must reduce the instantiated right-hand side to the target");
        return true;
      }
      case PRule::R:
      case PRule::MUT: {
        if (!basic_) return bad(p, "not a rule of this calculus");
        if (!red) return bad(p, "must conclude a reduction");
        if (!subst_ok(p)) return false;
        Term lhs, rhs;
        std::vector<Join> conds;
        if (p.rule == PRule::MUT) {
          if (p.rule_index < 0 || static_cast<size_t>(p.rule_index) >= prog_.oriented.size())
            return bad(p, "no such axiom rule");
          const auto& r = prog_.oriented[p.rule_index];
          lhs = r.lhs;
          rhs = r.rhs;
          conds = r.conds;
        } else {
          if (p.rule_index < 0 || static_cast<size_t>(p.rule_index) >= prog_.rules.size())
            return bad(p, "no such program rule");
          const auto& r = prog_.rules[p.rule_index];
          lhs = r.lhs();
          rhs = r.rhs;
          conds = r.conds;
        }
        if (p.sigma.apply(lhs) != c.lhs || p.sigma.apply(rhs) != c.rhs) return bad(p, "not an instance of the rule");
        if (p.premises.size() != conds.size()) return bad(p, "wrong number of condition premises");
        for (size_t i = 0; i < conds.size(); ++i)
          if (!is_join(p.premises[i], p.sigma.apply(conds[i].lhs), p.sigma.apply(conds[i].rhs)))
            return bad(p, "condition premise does not match " + to_string(conds[i]));
        return true;
      }
      case PRule::J: {
        if (red) return bad(p, "must conclude a joinability statement");
        if (p.premises.size() != 2) return bad(p, "needs two premises");
        const auto& a = p.premises[0]->conclusion;
        const auto& b = p.premises[1]->conclusion;
        if (a.kind != Statement::Reduce || b.kind != Statement::Reduce || a.lhs != c.lhs || b.lhs != c.rhs)
          return bad(p, "premises must reduce both sides");
        if (a.rhs != b.rhs) return bad(p, "premises reach different terms");
        if (a.rhs.has_bottom() || !prog_.is_data_term(a.rhs)) return bad(p, "common term is not a total data term");
        return true;
      }
    }
    return bad(p, "unknown rule");
  }

  const Program& prog_;
  bool basic_;
};

}  // namespace

CheckResult check_proof(const Program& prog, const Proof& p) {
  Checker c(prog, false);
  bool ok = c.check(p);
  return {ok, c.reason};
}

CheckResult check_brc_proof(const Program& prog, const Proof& p) {
  Checker c(prog, true);
  bool ok = c.check(p);
  return {ok, c.reason};
}

std::vector<size_t> Witness::sizes() const {
  std::vector<size_t> out;
  for (const auto& p : proofs) out.push_back(p->size);
  return out;
}

int witness_compare(const std::vector<size_t>& a, const std::vector<size_t>& b) {
  std::map<size_t, long> diff;  // multiplicity in a minus multiplicity in b
  for (size_t x : a) ++diff[x];
  for (size_t x : b) --diff[x];
  // The largest element where the multiplicities differ decides.
  for (auto it = diff.rbegin(); it != diff.rend(); ++it) {
    if (it->second > 0) return 1;
    if (it->second < 0) return -1;
  }
  return 0;
}

}  // namespace acrwl
