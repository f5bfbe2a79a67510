#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "acrwl/program.hpp"
#include "acrwl/subst.hpp"

namespace acrwl {

struct Statement {
  enum Kind { Reduce, Joinable } kind = Reduce;
  Term lhs, rhs;  // lhs -> rhs  or  lhs == rhs

  static Statement reduce(Term e, Term t) { return {Reduce, std::move(e), std::move(t)}; }
  static Statement join(Term a, Term b) { return {Joinable, std::move(a), std::move(b)}; }
  friend bool operator==(const Statement& a, const Statement& b) {
    return a.kind == b.kind && a.lhs == b.lhs && a.rhs == b.rhs;
  }
};
std::string to_string(const Statement& s);

// Rule tags of both calculi. The goal-oriented calculus uses B, RR, DC,
// OMUT, OR, J; the basic one uses B, RF, TR, MN, R, MUT, J.
enum class PRule { B, RR, DC, OMUT, OR, J, RF, TR, MN, R, MUT };
const char* rule_name(PRule r);

struct Proof;
using ProofPtr = std::shared_ptr<const Proof>;

struct Proof {
  PRule rule;
  Statement conclusion;
  std::vector<ProofPtr> premises;
  // OMUT/MUT: index into Program::oriented; OR/R: index into Program::rules.
  int rule_index = -1;
  Subst sigma;  // instance over the rule's own variables
  size_t size = 1;

  static ProofPtr make(PRule r, Statement c, std::vector<ProofPtr> prem = {}, int idx = -1, Subst s = {});
};

std::string to_string(const Proof& p, int indent = 0);

struct CheckResult {
  bool ok = true;
  std::string reason;  // first violated node and side condition
};

// Goal-oriented calculus checker.
CheckResult check_proof(const Program& prog, const Proof& p);
// Basic calculus checker.
CheckResult check_brc_proof(const Program& prog, const Proof& p);

// Proof for a data term t -> t (DC/RR, B for bottoms).
ProofPtr identity_proof(const Term& t);

// ---------------------------------------------------------------------------

struct OracleConfig {
  uint32_t max_value_depth = 24;  // bottom cut for computed values
  uint32_t max_rule_nesting = 12; // nested rule applications per branch
  uint64_t work_limit = 4'000'000;
};

enum class OracleStatus { Proved, NotFound, WorkExhausted };

struct OracleResult {
  OracleStatus status = OracleStatus::NotFound;
  ProofPtr proof;
};

// Validator mode: pattern variables bind to maximal computed values
// (monotonicity makes these sufficient), deepening the value cut and the
// rule nesting. A found proof is always checked before it is returned.
OracleResult oracle_prove(const Program& prog, const Statement& st, const OracleConfig& cfg = {});

// Exhaustive mode: some proof with at most max_size nodes, if one exists.
// Instances range over all partial values within the remaining size.
ProofPtr prove_bounded(const Program& prog, const Statement& st, size_t max_size);

// Basic calculus: forward search over one-step rewrites (bottom, program
// rules, axiom rules) with transitivity chains, at most max_size nodes.
ProofPtr brc_prove_bounded(const Program& prog, const Statement& st, size_t max_size);

// ---------------------------------------------------------------------------

struct Witness {
  std::vector<ProofPtr> proofs;
  std::vector<size_t> sizes() const;
};

// Multiset extension of < on sizes: -1 less, 0 equal, 1 greater.
int witness_compare(const std::vector<size_t>& a, const std::vector<size_t>& b);

struct AnswerCheck {
  bool ok = false;
  bool unknown = false;  // oracle ran out of work rather than refuting
  Witness witness;
  std::string reason;
};

// Every goal statement, instantiated by `answer`, is provable.
AnswerCheck validate_answer(const Program& prog, const std::vector<Join>& goal, const Subst& answer,
                            const OracleConfig& cfg = {});

}  // namespace acrwl
