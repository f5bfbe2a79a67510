#pragma once

#include <map>
#include <optional>
#include <string>

#include "acrwl/term.hpp"

namespace acrwl {

// Finite map from variables to terms, identity elsewhere. Used for data
// substitutions (values are data terms, possibly partial) and for type
// substitutions alike.
class Subst {
 public:
  Subst() = default;
  Subst(std::initializer_list<std::pair<const Var, Term>> init) : map_(init) {}

  void bind(Var v, Term t) { map_[v] = std::move(t); }
  void erase(Var v) { map_.erase(v); }
  const Term* find(Var v) const {
    auto it = map_.find(v);
    return it == map_.end() ? nullptr : &it->second;
  }
  bool contains(Var v) const { return map_.count(v) > 0; }
  bool empty() const { return map_.empty(); }
  size_t size() const { return map_.size(); }
  auto begin() const { return map_.begin(); }
  auto end() const { return map_.end(); }

  // Simultaneous replacement. Shares unchanged subterms.
  Term apply(const Term& t) const;

  // (this ; other): x -> other.apply(this(x)), plus other's own bindings
  // outside this domain.
  Subst then(const Subst& other) const;

  // All values are total data terms.
  bool is_total() const;
  Subst restrict_to(const std::vector<Var>& vars) const;

  friend bool operator==(const Subst& a, const Subst& b) { return a.map_ == b.map_; }

 private:
  std::map<Var, Term> map_;
};

std::string to_string(const Subst& s);

// True iff every variable occurring at least twice in t is mapped to a
// total term.
bool is_safe_for(const Subst& s, const Term& t);

// Syntactic matching pattern -> term; extends `s`. Repeated pattern
// variables must match equal subterms.
bool match(const Term& pattern, const Term& t, Subst& s);

// Rename every variable of the given terms apart with fresh names.
Subst renaming_for(const std::vector<Var>& vars);

}  // namespace acrwl
