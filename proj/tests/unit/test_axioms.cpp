#include <doctest.h>

#include <random>
#include <regex>

#include "../support/universe.hpp"
#include "acrwl/axioms.hpp"
#include "acrwl/parser.hpp"
#include "helpers.hpp"

using namespace acrwl;
using testing_support::ex;

namespace {

const char* kSets = R"(
datatype set(a). datatype elem. datatype nat.
cons empty : set(a). cons ins : (a, set(a)) -> set(a).
cons a : elem. cons b : elem. cons c : elem.
cons zero : nat. cons suc : nat -> nat.
axiom ins(X, ins(Y, Zs)) ~ ins(Y, ins(X, Zs)).
axiom ins(X, ins(X, Zs)) ~ ins(X, Zs).
)";

const char* kMsets = R"(
datatype set(a). datatype elem.
cons empty : set(a). cons ins : (a, set(a)) -> set(a).
cons a : elem. cons b : elem. cons c : elem.
axiom ins(X, ins(Y, Zs)) ~ ins(Y, ins(X, Zs)).
)";

// Small untyped-looking signature for the brute-force universe.
const char* kTiny = R"(
datatype s.
cons n : s. cons ins : (s, s) -> s.
axiom ins(X, ins(Y, Zs)) ~ ins(Y, ins(X, Zs)).
%s
)";

Program tiny(bool idem) {
  std::string text = kTiny;
  text.replace(text.find("%s"), 2, idem ? "axiom ins(X, ins(X, Zs)) ~ ins(X, Zs)." : "");
  return parse_program(text);
}

Axiom ax(const Program& p, const std::string& l, const std::string& r) {
  return Axiom{parse_expr(p, l), parse_expr(p, r), {}};
}

// Fresh duplicate names differ per run; number them by appearance.
std::string shown(const OrientedRule& r) {
  std::string s = to_string(r);
  static const std::regex fresh("([A-Za-z]+)#[0-9]+");
  std::map<std::string, int> seen;
  std::string out;
  auto begin = std::sregex_iterator(s.begin(), s.end(), fresh);
  size_t last = 0;
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    out += s.substr(last, it->position() - last);
    std::string full = it->str();
    auto [pos, fresh_name] = seen.try_emplace(full, 0);
    if (fresh_name) {
      int k = 0;
      for (const auto& [name, idx] : seen)
        if (name.rfind((*it)[1].str() + "#", 0) == 0) k = std::max(k, idx);
      pos->second = k + 1;
    }
    out += (*it)[1].str() + std::to_string(pos->second);
    last = it->position() + it->length();
  }
  return out + s.substr(last);
}

}  // namespace

TEST_CASE("classify") {
  Program p = parse_program(kSets);
  AxiomClass comm = classify(p.axioms[0]);
  CHECK(comm.regular);
  CHECK(comm.strongly_regular);
  CHECK_FALSE(comm.collapsing);

  Program u = parse_program(R"(
datatype set(a). datatype k.
cons empty : set(a). cons union : (set(a), set(a)) -> set(a).
cons c : k -> k. cons d : k -> k.
)");
  AxiomClass unit = classify(ax(u, "union(Xs, empty)", "Xs"));
  CHECK(unit.regular);
  CHECK(unit.collapsing);
  CHECK_FALSE(unit.strongly_regular);
  CHECK_FALSE(classify(ax(u, "c(X)", "d(Y)")).regular);
}

TEST_CASE("linearize") {
  Program p = parse_program(R"(
datatype k. cons z : k.
cons c : (k, k, k, k) -> k. cons d : (k, k, k, k) -> k.
axiom c(X, X, X, Y) ~ d(Y, Y, Y, X).
)");
  auto rules = linearize(p.axioms);
  REQUIRE(rules.size() == 2);
  CHECK(shown(rules[0]) == "c(X, X1, X2, Y) -> d(Y, Y, Y, X) <= X == X1, X == X2");
  CHECK(shown(rules[1]) == "d(Y, Y1, Y2, X) -> c(X, X, X, Y) <= Y == Y1, Y == Y2");

  Program s = parse_program(kSets);
  auto sr = linearize(s.axioms);
  REQUIRE(sr.size() == 4);
  CHECK(shown(sr[0]) == "ins(X, ins(Y, Zs)) -> ins(Y, ins(X, Zs))");
  CHECK(sr[1].conds.empty());
  CHECK(shown(sr[2]) == "ins(X, ins(X1, Zs)) -> ins(X, Zs) <= X == X1");
  CHECK(shown(sr[3]) == "ins(X, Zs) -> ins(X, ins(X, Zs))");
  for (const auto& r : sr) CHECK(is_linear(r.lhs.args()));
}

TEST_CASE("geq_c") {
  Program p = parse_program(kSets);
  auto r = geq_c(p, ex(p, "ins(a, ins(b, empty))"), Term::bottom());
  REQUIRE(r.status == GeqStatus::Proved);
  CHECK(r.proof->rule == IneqDerivation::Rule::B);

  auto up = geq_c(p, ex(p, "ins(_|_, empty)"), ex(p, "ins(_|_, ins(_|_, empty))"), 10000);
  REQUIRE(up.status == GeqStatus::Proved);
  std::string why;
  CHECK(check_derivation(p, *up.proof, &why));

  auto down = geq_c(p, ex(p, "ins(_|_, ins(_|_, empty))"), ex(p, "ins(_|_, empty)"), 10000);
  CHECK(down.status == GeqStatus::Disproved);
  // Idempotence grows terms without end, so plain search can only give up.
  CHECK(geq_c_generic(p, ex(p, "ins(_|_, ins(_|_, empty))"), ex(p, "ins(_|_, empty)"), 200).status !=
        GeqStatus::Proved);
}

TEST_CASE("equiv_c") {
  Program s = parse_program(kSets), m = parse_program(kMsets);
  CHECK(equiv_c(s, ex(s, "ins(a, ins(b, empty))"), ex(s, "ins(b, ins(a, empty))")) == Tri::Yes);
  CHECK(equiv_c(s, ex(s, "ins(a, ins(a, empty))"), ex(s, "ins(a, empty)")) == Tri::Yes);
  CHECK(equiv_c(m, ex(m, "ins(a, ins(a, empty))"), ex(m, "ins(a, empty)")) == Tri::No);
  CHECK(equiv_c(s, ex(s, "zero"), ex(s, "suc(zero)")) == Tri::No);
}

TEST_CASE("property: brute-force closure matches geq_c on the depth-3 universe") {
  for (bool idem : {false, true}) {
    CAPTURE(idem);
    Program p = tiny(idem);
    auto u = testing_support::term_universe(p, {"n", "ins"}, 3, true);
    REQUIRE(u.size() == 38);
    testing_support::GeqClosure closure(p, testing_support::term_universe(p, {"n", "ins"}, 4, true));
    size_t mismatches = 0, unknown = 0, totality = 0;
    for (const auto& s : u)
      for (const auto& t : u) {
        auto r = geq_c(p, s, t, 10000);
        bool brute = closure.geq(s, t);
        if (r.status == GeqStatus::Unknown) ++unknown;
        if ((r.status == GeqStatus::Proved) != brute) {
          ++mismatches;
          MESSAGE(to_string(s) << " >= " << to_string(t) << ": closure " << brute);
        }
        if (r.status == GeqStatus::Proved) {
          std::string why;
          CHECK(check_derivation(p, *r.proof, &why));
        }
        if (brute && testing_support::is_total(t) && !testing_support::is_total(s)) ++totality;
      }
    CHECK(mismatches == 0);
    CHECK(unknown == 0);
    CHECK(totality == 0);
  }
}

TEST_CASE("property: canonical forms agree with the generic search") {
  const size_t kGenericBudget = 300;
  std::mt19937 rng(3);
  for (bool idem : {false, true}) {
    Program p = parse_program(idem ? kSets : kMsets);
    std::vector<std::pair<std::string, int>> cons{{"a", 0}, {"b", 0}};
    auto set_of = [&](int n) {
      Term t = Term::app("empty");
      for (int i = 0; i < n; ++i) t = Term::app("ins", {testing_support::random_term(rng, cons, {}, 1), t});
      return t;
    };
    int decided = 0;
    for (int round = 0; round < 60; ++round) {
      Term s = set_of(static_cast<int>(rng() % 4)), t = set_of(static_cast<int>(rng() % 4));
      auto fast = geq_c(p, s, t, 10000);
      auto slow = geq_c_generic(p, s, t, kGenericBudget);
      if (slow.status == GeqStatus::Unknown) continue;
      ++decided;
      CAPTURE(to_string(s));
      CAPTURE(to_string(t));
      CHECK(fast.status == slow.status);
      Tri e = equiv_c(p, s, t);
      auto back = geq_c_generic(p, t, s, kGenericBudget);
      if (back.status != GeqStatus::Unknown)
        CHECK((e == Tri::Yes) == (back.status == GeqStatus::Proved && slow.status == GeqStatus::Proved));
    }
    CHECK(decided >= 20);
  }
}
