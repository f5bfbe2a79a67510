#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "acrwl/program.hpp"
#include "acrwl/subst.hpp"

namespace acrwl {

AxiomClass classify(const Axiom& ax);

// Two left-linear oriented rules per axiom. Repeated lhs variables are
// replaced by fresh copies, and `X == X'` conditions record the link.
std::vector<OrientedRule> linearize(const std::vector<Axiom>& axioms);

// Derivation tree for s >= t.
struct IneqDerivation {
  enum class Rule { B, RF, TR, MN, IN };
  Rule rule;
  Term lhs, rhs;
  std::vector<IneqDerivation> premises;
  // IN only: axiom index, orientation, and the instantiating substitution.
  size_t axiom = 0;
  bool forward = true;
  Subst sigma;

  size_t size() const;
};

const char* rule_name(IneqDerivation::Rule r);
std::string to_string(const IneqDerivation& d, int indent = 0);

// Verifies every node against its rule schema; `why` names the first
// violation.
bool check_derivation(const Program& prog, const IneqDerivation& d, std::string* why = nullptr);

enum class GeqStatus { Proved, Disproved, Unknown };

struct GeqResult {
  GeqStatus status = GeqStatus::Unknown;
  std::optional<IneqDerivation> proof;
  size_t explored = 0;
};

inline constexpr size_t kDefaultGeqBudget = 10000;

// Searches for a derivation of s >= t with at most `budget` nodes.
// Disproved means the whole reachable space was exhausted (or an exact
// decision procedure applies); Unknown means the budget cut the search.
GeqResult geq_c(const Program& prog, const Term& s, const Term& t, size_t budget = kDefaultGeqBudget);

// Same search without the canonical-form shortcut; used to cross-check it.
GeqResult geq_c_generic(const Program& prog, const Term& s, const Term& t,
                        size_t budget = kDefaultGeqBudget);

enum class Tri { Yes, No, Unknown };
const char* to_string(Tri t);

// s and t total. Exact for set/multiset-style theories, bounded search
// otherwise.
Tri equiv_c(const Program& prog, const Term& s, const Term& t, size_t budget = kDefaultGeqBudget);

// Theories whose axioms are all of the form
//   c(X, c(Y, Z)) ~ c(Y, c(X, Z))   and optionally   c(X, c(X, Z)) ~ c(X, Z).
struct SpineTheory {
  std::set<Sym> comm;  // every algebraic constructor
  std::set<Sym> idem;  // subset with idempotence
};
std::optional<SpineTheory> recognize_spine_theory(const Program& prog);

// Canonical representative of the class of a total term (spine theories).
Term canonical_form(const SpineTheory& th, const Term& t);

// Exact decision of s >= t for spine theories.
bool decide_geq_spine(const SpineTheory& th, const Term& s, const Term& t);

}  // namespace acrwl
