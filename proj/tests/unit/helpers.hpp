#pragma once

#include <random>
#include <string>

#include "acrwl/parser.hpp"
#include "acrwl/program.hpp"

namespace testing_support {

inline acrwl::Program corpus(const std::string& name) {
  return acrwl::load_program(std::string(ACRWL_CORPUS_DIR) + "/" + name);
}

// Expression with `_|_` allowed.
inline acrwl::Term ex(const acrwl::Program& p, const std::string& text) {
  acrwl::ParseOptions o;
  o.allow_bottom = true;
  return acrwl::parse_expr(p, text, o);
}


// Random data term over the given constructors (name, arity), depth <= d.
inline acrwl::Term random_term(std::mt19937& rng, const std::vector<std::pair<std::string, int>>& cons,
                               const std::vector<std::string>& vars, int d) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(cons.size() + vars.size()) - 1);
  for (;;) {
    int k = pick(rng);
    if (k >= static_cast<int>(cons.size())) return acrwl::Term::var(vars[k - cons.size()]);
    const auto& [name, arity] = cons[k];
    if (arity > 0 && d <= 1) continue;
    std::vector<acrwl::Term> args;
    for (int i = 0; i < arity; ++i) args.push_back(random_term(rng, cons, vars, d - 1));
    return acrwl::Term::app(name, args);
  }
}

}  // namespace testing_support
