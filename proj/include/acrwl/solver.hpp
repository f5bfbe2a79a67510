#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "acrwl/axioms.hpp"
#include "acrwl/gorc.hpp"
#include "acrwl/program.hpp"
#include "acrwl/subst.hpp"
#include "acrwl/types.hpp"

namespace acrwl {

// e -> t with t a linear data pattern.
struct Approx {
  Term lhs, rhs;
  friend bool operator==(const Approx& a, const Approx& b) { return a.lhs == b.lhs && a.rhs == b.rhs; }
};

// ∃ evars · S □ P □ E, or FAIL.
struct Goal {
  std::set<Var> evars;
  std::vector<std::pair<Var, Term>> solved;  // S
  std::vector<Approx> approx;                // P
  std::vector<Join> joins;                   // E
  bool fail = false;

  static Goal initial(std::vector<Join> e);
  static Goal failure();
  bool quasi_solved() const;
  bool solved_form() const { return !fail && approx.empty() && joins.empty(); }
};

std::string to_string(const Goal& g);

enum class StepRule {
  DecompEq,
  MutEq,
  ImitDecompEq,
  ImitMutEq,
  NarrowEq,
  DecompTo,
  MutTo,
  ImitDecompTo,
  ImitMutTo,
  ImitTo,
  ElimTo,
  NarrowTo,
  ConflictEq,
  Cycle,
  // Both sides ground data terms: dropped when equivalent modulo the
  // axioms, FAIL when not.
  EquivEq,
  NotEquivEq,
  ConflictTo,
  ProdVarElim,
  Identity,
  NonProdVarElim,
};
const char* rule_name(StepRule r);

// A statement of the goal. For joins, `flipped` reads rhs == lhs.
struct Focus {
  bool in_approx = false;
  size_t index = 0;
  bool flipped = false;
};

struct Step {
  StepRule rule;
  Focus focus;
  // Program rule (Narrow) or oriented axiom rule (Mut, ImitMut); -1 if none.
  int rule_index = -1;
};

std::string focus_string(const Goal& g, const Step& s);

std::set<Var> produced_vars(const Goal& g);
std::set<Var> demanded_vars(const Goal& g);
// Variables reachable from the root through free constructors only.
std::set<Var> safe_vars(const Program& prog, const Term& e);

// First violated admissibility condition (LIN, EX, NCYC, SOL), if any.
std::optional<std::string> admissibility_violation(const Goal& g);

// Failure rules first: if one applies, it is the only step returned.
// Otherwise, every applicable transformation, statement by statement.
std::vector<Step> applicable_steps(const Program& prog, const Goal& g);

// Steps of the statement the search expands next: the leftmost statement
// with a single applicable step, else the leftmost with any. Failure steps
// take precedence.
std::vector<Step> selected_steps(const Program& prog, const Goal& g);

// Allocates fresh variables with names not used in g.
class FreshNames {
 public:
  explicit FreshNames(const Goal& g);
  Var next();

 private:
  std::unordered_set<Var> used_;
  uint32_t counter_ = 0;
};

Goal apply_step(const Program& prog, const Goal& g, const Step& s, FreshNames& fresh);

struct TraceStep {
  StepRule rule;
  std::string focus;
  std::string goal;  // after the step
};

// Applies ProdVarElim, Identity and NonProdVarElim until the goal is solved.
Goal variable_elimination(const Goal& g, std::vector<TraceStep>* trace = nullptr);

// Renames existential variables to `_0, _1, ...` in order of occurrence and
// drops solved-part bindings of existential variables. `keep` are the
// initial goal variables.
Goal normalize(const Goal& g, const std::set<Var>& keep);
// Key identifying goals up to statement order and existential renaming.
std::string canonical_key(const Goal& g, const std::set<Var>& keep);

// Search cost of a step: 1, plus `resize_penalty` for mutations with an
// axiom whose sides differ in size.
uint32_t step_cost(const Program& prog, const Step& s, uint32_t resize_penalty);

// ---------------------------------------------------------------------------

struct SolveConfig {
  uint32_t max_depth = 30;
  size_t max_answers = SIZE_MAX;
  bool validate = true;
  bool dedup = true;
  bool typecheck = true;
  bool trace = false;
  bool check_invariants = false;  // admissibility after every step
  int threads = 0;                // 0: OpenMP default, 1: serial
  size_t max_states = 4'000'000;  // frontier + visited cap
  // Extra search cost of a mutation whose axiom changes term size
  // (idempotence-like). 0 gives plain breadth-first order.
  uint32_t resize_penalty = 3;
  OracleConfig oracle;
  size_t equiv_budget = kDefaultGeqBudget;
};

struct Answer {
  Subst bindings;  // restricted to goal variables; existentials renamed _1, _2, ...
  bool validated = false;
  size_t steps = 0;
  std::vector<TraceStep> trace;
  Witness witness;
};

std::string to_string(const Answer& a);

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Uniform-cost enumeration of answers (see step_cost), one cost level at a
// time, bounded by the number of transformation steps, with a global set of
// visited goals.
class Solver {
 public:
  Solver(const Program& prog, std::vector<Join> goal, SolveConfig cfg = {});

  // Next answer, or nullopt when the search is over (see exhausted()).
  std::optional<Answer> next();

  // No goal left within the depth bound (false when stopped by max_answers).
  bool exhausted() const { return done_ && !stopped_; }
  // The search space was empty before reaching the depth bound.
  bool complete() const { return complete_; }
  // Largest step count of an expanded goal.
  uint32_t depth() const { return depth_; }
  size_t fail_leaves() const { return fail_leaves_; }
  // Failure rule of each FAIL leaf.
  const std::map<StepRule, size_t>& failures() const { return failures_; }
  size_t states() const { return best_.size(); }
  bool hit_state_cap() const { return capped_; }

 private:
  struct Link {
    TraceStep step;
    std::shared_ptr<const Link> parent;
  };
  struct Node {
    Goal goal;
    size_t steps = 0;
    uint32_t cost = 0;
    std::string key;
    std::shared_ptr<const Link> trail;
  };

  void expand_level();
  void finish(const Node& n);
  bool duplicate(const Subst& a) const;
  Subst present(const Goal& solved) const;

  const Program& prog_;
  std::vector<Join> goal_;
  std::set<Var> goal_vars_;
  std::vector<Var> goal_var_order_;
  Environment env_;
  SolveConfig cfg_;

  std::map<uint32_t, std::vector<Node>> buckets_;  // by cost
  std::unordered_map<std::string, uint32_t> best_;  // cheapest cost seen per goal
  std::unordered_set<std::string> expanded_;
  std::deque<Answer> pending_;
  std::vector<Subst> emitted_;
  std::map<StepRule, size_t> failures_;
  uint32_t depth_ = 0;
  bool done_ = false, stopped_ = false, complete_ = false, capped_ = false, cut_ = false;
  size_t fail_leaves_ = 0, answers_ = 0;
};

struct SolveResult {
  std::vector<Answer> answers;
  bool exhausted = false;
  bool complete = false;
  uint32_t depth = 0;
  size_t fail_leaves = 0;
  std::map<StepRule, size_t> failures;
  size_t states = 0;
};

SolveResult solve(const Program& prog, const std::vector<Join>& goal, const SolveConfig& cfg = {});

}  // namespace acrwl
