#include "acrwl/subst.hpp"

#include <sstream>

namespace acrwl {

Term Subst::apply(const Term& t) const {
  if (map_.empty() || t.is_ground()) return t;
  if (t.is_var()) {
    auto it = map_.find(t.var_id());
    return it == map_.end() ? t : it->second;
  }
  std::vector<Term> args;
  bool changed = false;
  args.reserve(t.arity());
  for (const auto& a : t.args()) {
    args.push_back(apply(a));
    changed = changed || args.back().identity() != a.identity();
  }
  return changed ? Term::app(t.head(), std::move(args)) : t;
}

Subst Subst::then(const Subst& other) const {
  Subst out;
  for (const auto& [v, t] : map_) out.map_[v] = other.apply(t);
  for (const auto& [v, t] : other.map_)
    if (!map_.count(v)) out.map_[v] = t;
  return out;
}

bool Subst::is_total() const {
  for (const auto& [v, t] : map_)
    if (t.has_bottom()) return false;
  return true;
}

Subst Subst::restrict_to(const std::vector<Var>& vars) const {
  Subst out;
  for (Var v : vars)
    if (auto* t = find(v)) out.bind(v, *t);
  return out;
}

std::string to_string(const Subst& s) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [v, t] : s) {
    if (!first) os << ", ";
    first = false;
    os << var_name(v) << " = " << t;
  }
  os << '}';
  return os.str();
}

bool is_safe_for(const Subst& s, const Term& t) {
  for (Var v : dvar(t)) {
    if (count_occurrences(v, t) < 2) continue;
    const Term* img = s.find(v);
    if (img && img->has_bottom()) return false;
  }
  return true;
}

bool match(const Term& pattern, const Term& t, Subst& s) {
  if (pattern.is_var()) {
    if (const Term* b = s.find(pattern.var_id())) return *b == t;
    s.bind(pattern.var_id(), t);
    return true;
  }
  if (pattern.is_bottom()) return t.is_bottom();
  if (!t.is_app() || t.head() != pattern.head() || t.arity() != pattern.arity()) return false;
  for (size_t i = 0; i < t.arity(); ++i)
    if (!match(pattern.arg(i), t.arg(i), s)) return false;
  return true;
}

Subst renaming_for(const std::vector<Var>& vars) {
  Subst r;
  for (Var v : vars) r.bind(v, Term::var(fresh_var(var_name(v))));
  return r;
}

}  // namespace acrwl
