#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "acrwl/gorc.hpp"

namespace acrwl {

namespace {

inline size_t mix(size_t h, size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

struct PairHash {
  size_t operator()(const std::pair<Term, Term>& p) const { return mix(p.first.hash(), p.second.hash()); }
};

// Forward search in the basic calculus. A chain e -> u1 -> ... -> uk of
// one-step rewrites costs the sum of the step proofs plus one TR node per
// link; a step below the root pays one MN node and one RF per sibling on
// each level.
class Brc {
 public:
  explicit Brc(const Program& prog) : prog_(prog) {}

  ProofPtr reduce(const Term& e, const Term& t, size_t budget) {
    if (e == t) return Proof::make(PRule::RF, Statement::reduce(e, t));
    const Reach& r = reach(e, budget);
    auto it = r.nodes.find(t);
    if (it == r.nodes.end() || it->second.cost > budget) return nullptr;
    return chain(e, t, r);
  }

  ProofPtr join(const Term& a, const Term& b, size_t budget) {
    if (budget < 3) return nullptr;
    auto key = std::make_pair(a, b);
    auto mit = join_memo_.find(key);
    if (mit != join_memo_.end()) {
      const auto& [tried, proof] = mit->second;
      if (proof && proof->size <= budget) return proof;
      if (!proof && tried >= budget) return nullptr;
    }
    const Reach& ra = reach(a, budget - 2);
    const Reach& rb = reach(b, budget - 2);
    size_t best = SIZE_MAX;
    Term common;
    auto consider = [&](const Term& t, size_t ca) {
      if (t.has_bottom() || !prog_.is_data_term(t)) return;
      size_t cb;
      if (t == b) {
        cb = 1;
      } else {
        auto jt = rb.nodes.find(t);
        if (jt == rb.nodes.end()) return;
        cb = jt->second.cost;
      }
      if (1 + ca + cb <= budget && 1 + ca + cb < best) {
        best = 1 + ca + cb;
        common = t;
      }
    };
    consider(a, 1);
    for (const auto& [t, n] : ra.nodes) consider(t, n.cost);
    ProofPtr out;
    if (best != SIZE_MAX) {
      auto pa = a == common ? Proof::make(PRule::RF, Statement::reduce(a, a)) : chain(a, common, ra);
      auto pb = b == common ? Proof::make(PRule::RF, Statement::reduce(b, b)) : chain(b, common, rb);
      out = Proof::make(PRule::J, Statement::join(a, b), {pa, pb});
    }
    join_memo_[key] = {budget, out};
    return out;
  }

 private:
  struct Step {
    Term to;
    ProofPtr proof;
  };

  struct Node {
    size_t cost;  // size of the chain proof e -> this
    Term parent;
    ProofPtr step;
  };

  struct Reach {
    size_t budget = 0;
    std::unordered_map<Term, Node> nodes;  // excludes the start term
  };

  // Minimal-size one-step rewrites of x, each proof at most `budget` nodes.
  std::vector<Step> steps(const Term& x, size_t budget) {
    std::vector<Step> out;
    if (budget == 0 || x.is_bottom()) return out;
    out.push_back({Term::bottom(), Proof::make(PRule::B, Statement::reduce(x, Term::bottom()))});
    if (x.is_var()) return out;
    root_steps(x, budget, out);
    const size_t n = x.arity();
    if (n > 0 && budget > n) {
      for (size_t i = 0; i < n; ++i) {
        for (auto& s : steps(x.arg(i), budget - n)) {
          std::vector<Term> args = x.args();
          args[i] = s.to;
          Term y = Term::app(x.head(), args);
          std::vector<ProofPtr> prem;
          for (size_t j = 0; j < n; ++j)
            prem.push_back(j == i ? s.proof : Proof::make(PRule::RF, Statement::reduce(x.arg(j), x.arg(j))));
          out.push_back({y, Proof::make(PRule::MN, Statement::reduce(x, y), std::move(prem))});
        }
      }
    }
    return out;
  }

  void root_steps(const Term& x, size_t budget, std::vector<Step>& out) {
    auto instantiate = [&](PRule tag, int idx, const Term& lhs, const Term& rhs, const std::vector<Join>& conds) {
      Subst sigma;
      if (!match(lhs, x, sigma)) return;
      for (const auto& c : conds)
        for (const Term* side : {&c.lhs, &c.rhs})
          for (Var v : dvar(*side))
            if (!sigma.contains(v)) return;  // extra variables: not searched
      for (const auto& [v, t] : sigma)
        if (!prog_.is_data_term(t)) return;
      std::vector<ProofPtr> prem;
      size_t used = 1;
      for (size_t i = 0; i < conds.size(); ++i) {
        size_t reserve = 3 * (conds.size() - i - 1);
        if (budget < used + reserve + 3) return;
        auto pj = join(sigma.apply(conds[i].lhs), sigma.apply(conds[i].rhs), budget - used - reserve);
        if (!pj) return;
        used += pj->size;
        prem.push_back(pj);
      }
      Term y = sigma.apply(rhs);
      out.push_back({y, Proof::make(tag, Statement::reduce(x, y), std::move(prem), idx, sigma)});
    };
    if (prog_.sig.is_fun(x.head())) {
      for (const auto& a : x.args())
        if (!prog_.is_data_term(a)) return;
      auto it = prog_.rules_by_fun.find(x.head());
      if (it == prog_.rules_by_fun.end()) return;
      for (size_t i : it->second) {
        const auto& r = prog_.rules[i];
        instantiate(PRule::R, static_cast<int>(i), r.lhs(), r.rhs, r.conds);
      }
    } else if (prog_.is_data_term(x)) {
      auto it = prog_.oriented_by_cons.find(x.head());
      if (it == prog_.oriented_by_cons.end()) return;
      for (size_t i : it->second) {
        const auto& r = prog_.oriented[i];
        instantiate(PRule::MUT, static_cast<int>(i), r.lhs, r.rhs, r.conds);
      }
    }
  }

  const Reach& reach(const Term& e, size_t budget) {
    auto it = reach_memo_.find(e);
    if (it != reach_memo_.end() && it->second.budget >= budget) return it->second;
    Reach r;
    r.budget = budget;
    using Item = std::pair<size_t, Term>;
    auto cmp = [](const Item& a, const Item& b) { return a.first > b.first; };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
    std::unordered_map<Term, size_t> dist;
    dist[e] = 0;
    pq.push({0, e});
    std::unordered_map<Term, bool> done;
    while (!pq.empty()) {
      auto [g, u] = pq.top();
      pq.pop();
      if (done[u]) continue;
      done[u] = true;
      size_t link = u == e ? 0 : 1;
      if (g + link >= budget) continue;
      for (auto& s : steps(u, budget - g - link)) {
        size_t c = g + link + s.proof->size;
        if (c > budget || s.to == e) continue;
        auto dt = dist.find(s.to);
        if (dt != dist.end() && dt->second <= c) continue;
        dist[s.to] = c;
        r.nodes[s.to] = Node{c, u, s.proof};
        pq.push({c, s.to});
      }
    }
    auto& slot = reach_memo_[e];
    slot = std::move(r);
    return slot;
  }

  ProofPtr chain(const Term& e, const Term& t, const Reach& r) {
    const Node& n = r.nodes.at(t);
    if (n.parent == e) return n.step;
    auto prefix = chain(e, n.parent, r);
    return Proof::make(PRule::TR, Statement::reduce(e, t), {prefix, n.step});
  }

  const Program& prog_;
  std::unordered_map<Term, Reach> reach_memo_;
  std::unordered_map<std::pair<Term, Term>, std::pair<size_t, ProofPtr>, PairHash> join_memo_;
};

}  // namespace

ProofPtr brc_prove_bounded(const Program& prog, const Statement& st, size_t max_size) {
  // Deepening: proofs that exist are usually small, and the reachable set
  // grows quickly with the budget.
  ProofPtr p;
  for (size_t n = std::min<size_t>(max_size, 8);; n = std::min(max_size, n * 2)) {
    Brc brc(prog);
    p = st.kind == Statement::Reduce ? brc.reduce(st.lhs, st.rhs, n) : brc.join(st.lhs, st.rhs, n);
    if (p || n == max_size) break;
  }
  if (p) {
    auto res = check_brc_proof(prog, *p);
    if (!res.ok) throw std::logic_error("basic-calculus search produced an invalid proof: " + res.reason);
  }
  return p;
}

}  // namespace acrwl
