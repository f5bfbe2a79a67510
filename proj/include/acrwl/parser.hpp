#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "acrwl/program.hpp"

namespace acrwl {

// Surface syntax, `--` line comments:
//   datatype set(a).
//   cons ins : (a, set(a)) -> set(a).
//   fun select : set(a) -> a.
//   axiom ins(X, ins(Y, Zs)) ~ ins(Y, ins(X, Zs)).
//   rule f(P1, P2) -> Rhs <= A == B, C == D.
//   goal E1 == E2, E3 == E4.
Program parse_program(std::string_view text, const std::string& file = "<input>");
Program load_program(const std::string& path);

struct ParseOptions {
  bool allow_bottom = false;  // accept `_|_`
  std::unordered_map<const void*, SrcPos>* positions = nullptr;
  std::string source = "<goal>";
};

Term parse_expr(const Program& prog, std::string_view text, ParseOptions opts = {});
// `e1 == e1', ..., en == en'` with optional trailing '.'
std::vector<Join> parse_goal(const Program& prog, std::string_view text, ParseOptions opts = {});

// `lhs OP rhs` where OP is one of "==", "->", ">=".
struct Relation {
  Term lhs;
  std::string op;
  Term rhs;
};
Relation parse_relation(const Program& prog, std::string_view text, ParseOptions opts = {});

std::string print_program(const Program& prog);

}  // namespace acrwl
