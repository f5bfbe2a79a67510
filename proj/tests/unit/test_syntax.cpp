#include <doctest.h>

#include <random>

#include "acrwl/parser.hpp"
#include "acrwl/subst.hpp"
#include "helpers.hpp"

using namespace acrwl;
using testing_support::corpus;

namespace {

const char* kSetSelect = R"(
datatype set(a).
datatype elem.
cons empty : set(a).
cons ins : (a, set(a)) -> set(a).
cons a : elem.
axiom ins(X, ins(Y, Zs)) ~ ins(Y, ins(X, Zs)).
axiom ins(X, ins(X, Zs)) ~ ins(X, Zs).
fun select : set(a) -> a.
rule select(ins(X, Xs)) -> X.
)";

std::string error_of(const std::string& text) {
  try {
    parse_program(text, "t.acrwl");
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("nullary constructor declaration") {
  Program p = parse_program("datatype nat.\ncons zero : nat.\n");
  Sym zero = intern_sym("zero");
  CHECK(p.sig.is_cons(zero));
  CHECK(p.sig.arity(zero) == 0);
  CHECK(to_string(p.sig.type_of(zero).result) == "nat");
}

TEST_CASE("set/select program loads with two axioms and one rule") {
  Program p = parse_program(kSetSelect);
  CHECK(p.axioms.size() == 2);
  CHECK(p.rules.size() == 1);
  CHECK(p.is_algebraic(intern_sym("ins")));
  CHECK(p.is_algebraic(intern_sym("empty")) == false);
  CHECK(p.is_free(intern_sym("a")));
}

TEST_CASE("rejected declarations") {
  SUBCASE("non-linear rule head") {
    auto msg = error_of("datatype bool.\ncons true : bool.\nfun eq : (a, a) -> bool.\nrule eq(X, X) -> true.\n");
    CHECK(msg.find("non-linear") != std::string::npos);
    CHECK(msg.find("t.acrwl:4:") == 0);
  }
  SUBCASE("arity mismatch") {
    auto msg = error_of("datatype nat.\ncons zero : nat.\ncons suc : nat -> nat.\nfun f : nat -> nat.\nrule f(X) -> suc(X, X).\n");
    CHECK(msg.find("arity") != std::string::npos);
  }
  SUBCASE("duplicate declaration") {
    auto msg = error_of("datatype nat.\ncons zero : nat.\ncons zero : nat.\n");
    CHECK(msg.find("zero") != std::string::npos);
    CHECK(msg.find("t.acrwl:3:") == 0);
  }
  SUBCASE("grammar error carries line and column") {
    auto msg = error_of("datatype nat.\ncons zero nat.\n");
    CHECK(msg.find("t.acrwl:2:") == 0);
  }
  SUBCASE("undeclared symbol") {
    auto msg = error_of("datatype nat.\ncons zero : nat.\nfun f : nat -> nat.\nrule f(X) -> g(X).\n");
    CHECK(msg.find("g") != std::string::npos);
  }
  SUBCASE("constructor type variables must occur in the result") {
    auto msg = error_of("datatype box.\ncons wrap : a -> box.\n");
    CHECK_FALSE(msg.empty());
  }
  SUBCASE("function symbol in a rule pattern") {
    auto msg = error_of("datatype nat.\ncons zero : nat.\nfun f : nat -> nat.\nrule f(f(X)) -> zero.\n");
    CHECK_FALSE(msg.empty());
  }
}

TEST_CASE("bottom has no surface syntax") {
  Program p = parse_program(kSetSelect);
  CHECK_THROWS_AS(parse_expr(p, "ins(_|_, empty)"), Error);
  ParseOptions o;
  o.allow_bottom = true;
  CHECK(parse_expr(p, "ins(_|_, empty)", o).has_bottom());
}

TEST_CASE("substitution application") {
  Term x = Term::var("X"), xs = Term::var("Xs");
  CHECK(Subst{}.apply(x) == x);
  Term zero = Term::app("zero");
  Subst s{{intern_var("X"), zero}};
  CHECK(to_string(s.apply(Term::app("plus", {x, x}))) == "plus(zero, zero)");
  Subst s2{{intern_var("X"), zero}, {intern_var("Xs"), Term::app("empty")}};
  CHECK(to_string(s2.apply(Term::app("ins", {x, xs}))) == "ins(zero, empty)");
}

TEST_CASE("safe substitutions") {
  Term x = Term::var("X"), zs = Term::var("Zs");
  Subst bot{{intern_var("X"), Term::bottom()}};
  Subst zero{{intern_var("X"), Term::app("zero")}};
  Term once = Term::app("ins", {x, zs});
  Term twice = Term::app("ins", {x, Term::app("ins", {x, zs})});
  CHECK(is_safe_for(bot, once));
  CHECK_FALSE(is_safe_for(bot, twice));
  CHECK(is_safe_for(zero, twice));
}

TEST_CASE("variable utilities") {
  Term x = Term::var("X"), y = Term::var("Y"), zs = Term::var("Zs");
  auto vs = dvar(Term::app("plus", {x, y}));
  REQUIRE(vs.size() == 2);
  CHECK(var_name(vs[0]) == "X");
  CHECK(var_name(vs[1]) == "Y");
  CHECK(is_linear({x, Term::app("ins", {y, zs})}));
  CHECK_FALSE(is_linear({x, Term::app("ins", {x, zs})}));
  Var a = fresh_var("X"), b = fresh_var("X");
  CHECK(a != b);
  CHECK(var_name(a) != var_name(b));
}

TEST_CASE("approximation order on terms") {
  Term a = Term::app("a"), e = Term::app("empty");
  Term full = Term::app("ins", {a, e});
  CHECK(approximates(Term::bottom(), full));
  CHECK(approximates(Term::app("ins", {Term::bottom(), e}), full));
  CHECK_FALSE(approximates(full, Term::app("ins", {Term::bottom(), e})));
}

TEST_CASE("print/parse round trip over the corpus") {
  for (const char* f : {"coin.acrwl", "sets.acrwl", "conjuntos.acrwl", "multisets.acrwl", "blocks2.acrwl",
                        "blocks3.acrwl", "gamma.acrwl"}) {
    CAPTURE(f);
    Program p = corpus(f);
    std::string once = print_program(p);
    Program q = parse_program(once);
    CHECK(print_program(q) == once);
    CHECK(q.rules.size() == p.rules.size());
    CHECK(q.axioms.size() == p.axioms.size());
    REQUIRE(q.goals.size() == p.goals.size());
    for (size_t i = 0; i < p.rules.size(); ++i) {
      CHECK(q.rules[i].lhs() == p.rules[i].lhs());
      CHECK(q.rules[i].rhs == p.rules[i].rhs);
      CHECK(q.rules[i].conds == p.rules[i].conds);
    }
  }
}

TEST_CASE("property: composition of substitutions") {
  std::mt19937 rng(7);
  std::vector<std::pair<std::string, int>> cons{{"zero", 0}, {"suc", 1}, {"pair", 2}};
  std::vector<std::string> vars{"X", "Y", "Z"};
  for (int round = 0; round < 500; ++round) {
    Term e = testing_support::random_term(rng, cons, vars, 4);
    Subst s, t;
    for (const auto& v : vars) {
      if (rng() % 2) s.bind(intern_var(v), testing_support::random_term(rng, cons, vars, 3));
      if (rng() % 2) t.bind(intern_var(v), testing_support::random_term(rng, cons, vars, 3));
    }
    CHECK(t.apply(s.apply(e)) == s.then(t).apply(e));
  }
}

TEST_CASE("parsed corpus expressions are bottom-free and declared") {
  for (const char* f : {"coin.acrwl", "sets.acrwl", "blocks2.acrwl", "gamma.acrwl"}) {
    Program p = corpus(f);
    for (const auto& r : p.rules) {
      CHECK_FALSE(r.rhs.has_bottom());
      CHECK(p.is_expr(r.rhs));
      for (const auto& a : r.lhs_args) CHECK(p.is_data_term(a));
    }
  }
}
