#include <doctest.h>

#include <functional>

#include "../support/universe.hpp"
#include "acrwl/axioms.hpp"
#include "acrwl/gorc.hpp"
#include "acrwl/parser.hpp"
#include "helpers.hpp"

using namespace acrwl;
using testing_support::corpus;
using testing_support::ex;

namespace {

const char* kSelectF = R"(
datatype mset(a). datatype nat.
cons mnil : mset(a). cons mins : (a, mset(a)) -> mset(a).
cons zero : nat.
axiom mins(X, mins(Y, Zs)) ~ mins(Y, mins(X, Zs)).
fun select : mset(a) -> a.
fun f : mset(nat).
rule select(mins(X, Xs)) -> X.
rule f -> mins(zero, f).
)";

const char* kSets = R"(
datatype set(a). datatype elem.
cons empty : set(a). cons ins : (a, set(a)) -> set(a).
cons a : elem. cons b : elem.
axiom ins(X, ins(Y, Zs)) ~ ins(Y, ins(X, Zs)).
%s
)";

Program sets(bool idem) {
  std::string text = kSets;
  text.replace(text.find("%s"), 2, idem ? "axiom ins(X, ins(X, Zs)) ~ ins(X, Zs)." : "");
  return parse_program(text);
}

bool uses(const Proof& p, PRule r) {
  if (p.rule == r) return true;
  for (const auto& q : p.premises)
    if (uses(*q, r)) return true;
  return false;
}

bool concludes(const Proof& p, const Statement& st) {
  if (p.conclusion == st) return true;
  for (const auto& q : p.premises)
    if (concludes(*q, st)) return true;
  return false;
}

ProofPtr dc(const Term& t) { return identity_proof(t); }

}  // namespace

TEST_CASE("check_proof") {
  Program p = parse_program(kSelectF);
  Term zero = ex(p, "zero");
  CHECK(check_proof(p, *Proof::make(PRule::DC, Statement::reduce(zero, zero))).ok);

  SUBCASE("select(f) -> zero through the lazy generator") {
    Term f = ex(p, "f"), part = ex(p, "mins(zero, _|_)");
    auto body = Proof::make(PRule::DC, Statement::reduce(ex(p, "mins(zero, f)"), part),
                            {dc(zero), Proof::make(PRule::B, Statement::reduce(f, Term::bottom()))});
    auto pf = Proof::make(PRule::OR, Statement::reduce(f, part), {body}, 1);
    Subst sigma{{intern_var("X"), zero}, {intern_var("Xs"), Term::bottom()}};
    auto proof = Proof::make(PRule::OR, Statement::reduce(ex(p, "select(f)"), zero), {pf, dc(zero)}, 0, sigma);
    auto res = check_proof(p, *proof);
    CHECK_MESSAGE(res.ok, res.reason);
    CHECK(proof->size == 6);

    // The instance must match the argument premise.
    Subst wrong{{intern_var("X"), zero}, {intern_var("Xs"), ex(p, "mnil")}};
    auto bad = Proof::make(PRule::OR, Statement::reduce(ex(p, "select(f)"), zero), {pf, dc(zero)}, 0, wrong);
    auto r2 = check_proof(p, *bad);
    CHECK_FALSE(r2.ok);
    CHECK(r2.reason.find("(OR)") == 0);
  }

  SUBCASE("joins need a total common term") {
    auto b = Proof::make(PRule::B, Statement::reduce(zero, Term::bottom()));
    auto j = Proof::make(PRule::J, Statement::join(zero, zero), {b, b});
    auto res = check_proof(p, *j);
    CHECK_FALSE(res.ok);
    CHECK(res.reason.find("total") != std::string::npos);
  }

  SUBCASE("bottom target is only reachable by B") {
    auto fake = Proof::make(PRule::OR, Statement::reduce(ex(p, "f"), Term::bottom()), {dc(ex(p, "mins(zero, f)"))}, 1);
    CHECK_FALSE(check_proof(p, *fake).ok);
  }
}

TEST_CASE("prove_bounded") {
  Program p = corpus("coin.acrwl");
  Term coin = ex(p, "coin");
  auto both = prove_bounded(p, Statement::join(coin, coin), 20);
  REQUIRE(both);
  CHECK(check_proof(p, *both).ok);

  // Two witnesses: one per value of coin.
  for (const char* v : {"zero", "suc(zero)"}) {
    Term t = ex(p, v);
    auto red = prove_bounded(p, Statement::reduce(coin, t), 20);
    REQUIRE(red);
    auto j = Proof::make(PRule::J, Statement::join(coin, coin), {red, red});
    CHECK(check_proof(p, *j).ok);
  }

  auto one = prove_bounded(p, Statement::join(coin, ex(p, "suc(zero)")), 20);
  REQUIRE(one);
  CHECK(check_proof(p, *one).ok);

  CHECK_FALSE(prove_bounded(p, Statement::join(ex(p, "zero"), ex(p, "true")), 50));
}

TEST_CASE("brc_prove_bounded") {
  Program c = corpus("coin.acrwl");
  Program s = sets(false);
  Term t = ex(s, "ins(a, ins(b, empty))");
  auto rf = brc_prove_bounded(s, Statement::reduce(t, t), 80);
  REQUIRE(rf);
  CHECK(rf->rule == PRule::RF);
  CHECK(rf->size == 1);

  auto mut = brc_prove_bounded(s, Statement::reduce(t, ex(s, "ins(b, ins(a, empty))")), 80);
  REQUIRE(mut);
  CHECK(uses(*mut, PRule::MUT));
  CHECK(check_brc_proof(s, *mut).ok);

  auto dbl = brc_prove_bounded(c, Statement::reduce(ex(c, "double(coin)"), ex(c, "zero")), 80);
  REQUIRE(dbl);
  CHECK(concludes(*dbl, Statement::reduce(ex(c, "plus(zero, zero)"), ex(c, "zero"))));
  // Call-time choice: both copies of the coin agree, so 1 is out of reach.
  CHECK_FALSE(brc_prove_bounded(c, Statement::reduce(ex(c, "double(coin)"), ex(c, "suc(zero)")), 80));
}

TEST_CASE("witness_compare") {
  CHECK(witness_compare({2, 3}, {2, 3}) == 0);
  CHECK(witness_compare({2, 2}, {5}) == -1);
  CHECK(witness_compare({5}, {2, 2}) == 1);
  CHECK(witness_compare({1, 4}, {4, 2}) == -1);
  CHECK(witness_compare({}, {1}) == -1);
}

TEST_CASE("validate_answer") {
  Program p = corpus("coin.acrwl");
  auto goal = parse_goal(p, "double(coin) == R");
  for (const char* v : {"zero", "suc(suc(zero))"}) {
    auto r = validate_answer(p, goal, Subst{{intern_var("R"), ex(p, v)}});
    CHECK(r.ok);
    CHECK(r.witness.proofs.size() == 1);
  }
  auto no = validate_answer(p, goal, Subst{{intern_var("R"), ex(p, "suc(zero)")}});
  CHECK_FALSE(no.ok);
  CHECK_FALSE(no.unknown);
}

TEST_CASE("property: the bounded prover only returns checked proofs") {
  Program p = corpus("coin.acrwl");
  auto data = testing_support::term_universe(p, {"zero", "suc"}, 3, true);
  std::vector<Term> exprs{ex(p, "coin"), ex(p, "double(coin)"), ex(p, "plus(coin, coin)"), ex(p, "double(suc(zero))"),
                          ex(p, "plus(zero, coin)")};
  size_t found = 0;
  for (const auto& e : exprs)
    for (const auto& t : data) {
      auto pr = prove_bounded(p, Statement::reduce(e, t), 20);
      if (!pr) continue;
      ++found;
      auto res = check_proof(p, *pr);
      CHECK_MESSAGE(res.ok, res.reason);
      CHECK(pr->size <= 20);
    }
  CHECK(found >= 15);
}

TEST_CASE("property: the two calculi agree on a small universe") {
  Program p = corpus("coin.acrwl");
  auto data = testing_support::term_universe(p, {"zero", "suc"}, 2, true);
  std::vector<Term> exprs{ex(p, "coin"), ex(p, "double(coin)"), ex(p, "plus(coin, zero)"), ex(p, "suc(coin)")};
  for (const auto& e : exprs)
    for (const auto& t : data) {
      CAPTURE(to_string(e));
      CAPTURE(to_string(t));
      bool g = prove_bounded(p, Statement::reduce(e, t), 40) != nullptr;
      bool b = brc_prove_bounded(p, Statement::reduce(e, t), 80) != nullptr;
      CHECK(g == b);
    }
}

// Sets of elements only, bottom allowed anywhere.
bool well_sorted_set(const Term& t) {
  if (t.is_bottom() || t == Term::app("empty")) return true;
  if (!t.is_app() || t.head() != intern_sym("ins")) return false;
  const Term& x = t.arg(0);
  return (x.is_bottom() || x == Term::app("a") || x == Term::app("b")) && well_sorted_set(t.arg(1));
}

// Idempotence lets the forward search grow terms without end; its size
// bounds are lower so negative cases finish.
size_t brc_bound(bool idem, bool join) { return idem ? (join ? 32 : 40) : 80; }

TEST_CASE("property: geq_c agrees with basic-calculus reductions") {
  for (bool idem : {false, true}) {
    Program p = sets(idem);
    std::vector<Term> u;
    for (const auto& t : testing_support::term_universe(p, {"empty", "ins", "a"}, 3, true))
      if (well_sorted_set(t)) u.push_back(t);
    REQUIRE(u.size() == 14);
    size_t proved = 0;
    for (const auto& s : u)
      for (const auto& t : u) {
        auto g = geq_c(p, s, t, 10000);
        REQUIRE(g.status != GeqStatus::Unknown);
        bool b = brc_prove_bounded(p, Statement::reduce(s, t), brc_bound(idem, false)) != nullptr;
        CAPTURE(idem);
        CAPTURE(to_string(s));
        CAPTURE(to_string(t));
        CHECK((g.status == GeqStatus::Proved) == b);
        proved += b;
      }
    CHECK(proved > u.size());
  }
}

TEST_CASE("property: joinability of total terms is equivalence modulo the axioms") {
  for (bool idem : {false, true}) {
    Program p = sets(idem);
    std::vector<Term> u;
    for (const auto& t : testing_support::term_universe(p, {"empty", "ins", "a", "b"}, 3, false))
      if (t != Term::app("a") && t != Term::app("b") && well_sorted_set(t)) u.push_back(t);
    REQUIRE(u.size() == 7);
    size_t joinable = 0;
    for (const auto& s : u)
      for (const auto& t : u) {
        bool j = brc_prove_bounded(p, Statement::join(s, t), brc_bound(idem, true)) != nullptr;
        CAPTURE(idem);
        CAPTURE(to_string(s));
        CAPTURE(to_string(t));
        CHECK(j == (equiv_c(p, s, t) == Tri::Yes));
        joinable += j;
      }
    CHECK(joinable > u.size());
  }
}
