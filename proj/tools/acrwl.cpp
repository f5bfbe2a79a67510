#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "acrwl/axioms.hpp"
#include "acrwl/gorc.hpp"
#include "acrwl/parser.hpp"
#include "acrwl/report.hpp"
#include "acrwl/solver.hpp"
#include "acrwl/types.hpp"

using namespace acrwl;

namespace {

// 0 success, 1 negative result (no proof, no answer), 2 every branch
// failed, 64 usage error, 65 unreadable or rejected input.
constexpr int kOk = 0, kNo = 1, kFail = 2, kUsage = 64, kBadInput = 65;

uint32_t default_depth() {
  if (const char* d = std::getenv("ACRWL_DEPTH")) {
    try {
      return static_cast<uint32_t>(std::stoul(d));
    } catch (...) {
      std::cerr << "warning: ignoring ACRWL_DEPTH=" << d << '\n';
    }
  }
  return 30;
}

int cmd_check(const std::string& file, bool allow_collapsing) {
  Program prog;
  try {
    prog = load_program(file);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kNo;
  }
  auto diags = check_program(prog, {allow_collapsing, true});
  for (const auto& d : diags) std::cerr << format_diagnostic(prog, d) << '\n';
  if (!diags.empty()) return kNo;
  std::cout << "ok: " << prog.sig.datatypes().size() << " datatypes, " << prog.sig.constructors().size()
            << " constructors, " << prog.sig.functions().size()
            << " functions, " << prog.rules.size() << " rules, " << prog.axioms.size() << " axioms\n";
  for (const auto& ax : prog.axioms)
  {
    AxiomClass c = classify(ax);
    std::cout << "  axiom " << to_string(ax.lhs) << " ~ " << to_string(ax.rhs) << "  ["
              << (c.strongly_regular ? "strongly regular" : "regular") << (c.collapsing ? ", collapsing" : "")
              << "]\n";
  }
  return kOk;
}

int cmd_prove_geq(const std::string& file, const std::string& text, size_t budget) {
  Program prog = load_program(file);
  ParseOptions po;
  po.allow_bottom = true;
  auto rel = parse_relation(prog, text, po);
  if (rel.op != ">=") {
    std::cerr << "error: expected `s >= t`\n";
    return kUsage;
  }
  auto r = geq_c(prog, rel.lhs, rel.rhs, budget);
  switch (r.status) {
    case GeqStatus::Proved:
      std::cout << to_string(*r.proof);
      return kOk;
    case GeqStatus::Disproved:
      std::cout << "NOT DERIVABLE\n";
      return kNo;
    case GeqStatus::Unknown:
      break;
  }
  std::cout << "UNKNOWN (budget " << budget << " exhausted)\n";
  return kNo;
}

int cmd_prove(const std::string& file, const std::string& text, const std::string& calculus, size_t max_size,
              const std::string& emit) {
  Program prog = load_program(file);
  ParseOptions po;
  po.allow_bottom = true;
  auto rel = parse_relation(prog, text, po);
  if (rel.op == ">=") {
    std::cerr << "error: expected `e -> t` or `e == e'`\n";
    return kUsage;
  }
  Statement st = rel.op == "->" ? Statement::reduce(rel.lhs, rel.rhs) : Statement::join(rel.lhs, rel.rhs);
  ProofPtr proof;
  bool exhausted = false;
  if (calculus == "brc") {
    proof = brc_prove_bounded(prog, st, max_size ? max_size : 80);
  } else if (max_size) {
    proof = prove_bounded(prog, st, max_size);
  } else {
    auto r = oracle_prove(prog, st);
    proof = r.proof;
    exhausted = r.status == OracleStatus::WorkExhausted;
  }
  if (!proof) {
    std::cout << (exhausted ? "UNKNOWN (work limit reached)\n" : "NO PROOF within bounds\n");
    return kNo;
  }
  std::cout << to_string(*proof) << "size " << proof->size << '\n';
  if (!emit.empty()) {
    std::ofstream out(emit);
    if (!out) {
      std::cerr << "error: cannot write " << emit << '\n';
      return kBadInput;
    }
    out << proof_json(prog, *proof).dump(2) << '\n';
  }
  return kOk;
}

void print_answer(const Answer& a, bool trace) {
  if (trace)
    for (size_t k = 0; k < a.trace.size(); ++k)
      std::cout << "step " << k + 1 << ": " << rule_name(a.trace[k].rule) << " at " << a.trace[k].focus << " ⇒ "
                << a.trace[k].goal << '\n';
  std::cout << to_string(a) << (a.validated ? "" : "   (not validated)") << "   [" << a.steps << " steps]\n";
}

// Goal text is parsed with positions so type errors point into it.
std::vector<Join> read_goal(Program& prog, const std::string& text, const std::string& source) {
  ParseOptions po;
  po.positions = &prog.positions;
  po.source = source;
  return parse_goal(prog, text, po);
}

void typecheck_goal(const Program& prog, const std::vector<Join>& goal, const std::string& source,
                    const SolveConfig& cfg) {
  if (!cfg.typecheck) return;
  TypeError err;
  if (!check_goal_well_typed(prog, goal, nullptr, &err)) throw Error(source, err.pos, "type error: " + err.message);
}

std::vector<Join> goal_of(Program& prog, const std::string& text, const SolveConfig& cfg) {
  if (text.empty() && prog.goals.empty()) throw Error("<goal>", {}, "no --goal given and the program declares none");
  auto goal = text.empty() ? prog.goals.front() : read_goal(prog, text, "<goal>");
  typecheck_goal(prog, goal, text.empty() ? prog.file : "<goal>", cfg);
  return goal;
}

std::string failure_summary(const std::map<StepRule, size_t>& failures) {
  std::string out;
  for (const auto& [r, n] : failures) out += std::string(out.empty() ? "" : ", ") + rule_name(r);
  return out;
}

int cmd_solve(const std::string& file, const std::string& text, SolveConfig cfg, bool json) {
  Program prog = load_program(file);
  auto goal = goal_of(prog, text, cfg);
  Solver s(prog, goal, cfg);
  nlohmann::json out = nlohmann::json::array();
  size_t n = 0;
  while (auto a = s.next()) {
    ++n;
    if (json)
      out.push_back(answer_json(*a));
    else
      print_answer(*a, cfg.trace);
  }
  const bool exhausted = n < cfg.max_answers;
  const bool fail_only = n == 0 && s.complete() && s.fail_leaves() > 0;
  std::string why = s.complete()        ? "search space complete"
                    : s.hit_state_cap() ? "state limit reached"
                                        : "depth bound reached";
  if (json) {
    nlohmann::json failures = nlohmann::json::object();
    for (const auto& [r, k] : s.failures()) failures[rule_name(r)] = k;
    nlohmann::json j{{"answers", out},         {"exhausted", exhausted}, {"complete", s.complete()},
                     {"depth", s.depth()},     {"states", s.states()},   {"fail_leaves", s.fail_leaves()},
                     {"failures", failures}};
    std::cout << j.dump(2) << '\n';
  } else {
    if (fail_only) std::cout << "FAIL (" << failure_summary(s.failures()) << ")\n";
    if (exhausted)
      std::cout << "exhausted at depth " << s.depth() << " (" << why << ", " << s.states() << " states)\n";
    else
      std::cout << "stopped after " << n << " answers at depth " << s.depth() << '\n';
  }
  if (n) return kOk;
  return fail_only ? kFail : kNo;
}

int cmd_repl(const std::string& file, SolveConfig cfg) {
  Program prog = load_program(file);
  std::string line;
  std::cout << "?- " << std::flush;
  while (std::getline(std::cin, line)) {
    if (line.find_first_not_of(" \t") == std::string::npos) {
      std::cout << "?- " << std::flush;
      continue;
    }
    try {
      auto goal = read_goal(prog, line, "<stdin>");
      typecheck_goal(prog, goal, "<stdin>", cfg);
      Solver s(prog, goal, cfg);
      for (;;) {
        auto a = s.next();
        if (!a) {
          std::cout << "no (more) answers\n";
          break;
        }
        print_answer(*a, cfg.trace);
        std::string more;
        if (!std::getline(std::cin, more) || more.find(';') == std::string::npos) break;
      }
    } catch (const std::exception& e) {
      std::cout << "error: " << e.what() << '\n';
    }
    std::cout << "?- " << std::flush;
  }
  std::cout << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interpreter and goal solver for lazy functional logic programs with constructor axioms"};
  app.require_subcommand(1);

  std::string file, text, calculus = "gorc", emit, goal;
  bool allow_collapsing = false, json = false, all_raw = false, serial = false, no_validate = false, no_typecheck = false;
  size_t budget = kDefaultGeqBudget, max_size = 0;
  SolveConfig cfg;
  cfg.max_depth = default_depth();

  auto* check = app.add_subcommand("check", "Load, classify and type-check a program");
  check->add_option("file", file)->required()->check(CLI::ExistingFile);
  check->add_flag("--allow-collapsing", allow_collapsing, "Accept axioms with a bare variable side");

  auto* geq = app.add_subcommand("prove-geq", "Derive s >= t from the axioms");
  geq->add_option("file", file)->required()->check(CLI::ExistingFile);
  geq->add_option("relation", text, "\"s >= t\"")->required();
  geq->add_option("--budget", budget, "Node budget of the search");

  auto* prove = app.add_subcommand("prove", "Prove e -> t or e == e' in the rewriting calculi");
  prove->add_option("file", file)->required()->check(CLI::ExistingFile);
  prove->add_option("statement", text, "\"e -> t\" or \"e == e'\"")->required();
  prove->add_option("--calculus", calculus, "gorc or brc")->check(CLI::IsMember({"gorc", "brc"}));
  prove->add_option("--max-size", max_size, "Exhaustive search up to this proof size");
  prove->add_option("--emit-proof", emit, "Write the proof tree as JSON");

  auto add_solve_opts = [&](CLI::App* c) {
    c->add_option("file", file)->required()->check(CLI::ExistingFile);
    c->add_option("--depth", cfg.max_depth, "Maximum number of transformation steps (default $ACRWL_DEPTH or 30)");
    c->add_option("--max-answers", cfg.max_answers, "Stop after this many answers");
    c->add_option("--threads", cfg.threads, "Worker threads (0: all cores)");
    c->add_flag("--serial", serial, "Expand the frontier on one thread");
    c->add_flag("--trace", cfg.trace, "Print the derivation of each answer");
    c->add_flag("--no-validate", no_validate, "Skip the proof oracle");
    c->add_flag("--no-typecheck", no_typecheck, "Accept ill-typed goals");
    c->add_flag("--all-raw", all_raw, "Keep answers equivalent to earlier ones");
    c->add_option("--resize-penalty", cfg.resize_penalty, "Extra cost of size-changing mutations");
    c->add_flag("--check-invariants", cfg.check_invariants, "Check goal admissibility after every step");
  };
  auto* solve = app.add_subcommand("solve", "Enumerate answers of a goal");
  add_solve_opts(solve);
  solve->add_option("--goal", goal, "Goal \"e == e', ...\" (default: first goal of the file)");
  solve->add_flag("--json", json, "Print answers as JSON");

  auto* repl = app.add_subcommand("repl", "Read goals from stdin; `;` asks for the next answer");
  add_solve_opts(repl);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  if (serial) cfg.threads = 1;
  cfg.validate = !no_validate;
  cfg.typecheck = !no_typecheck;
  cfg.dedup = !all_raw;

  try {
    if (*check) return cmd_check(file, allow_collapsing);
    if (*geq) return cmd_prove_geq(file, text, budget);
    if (*prove) return cmd_prove(file, text, calculus, max_size, emit);
    if (*solve) return cmd_solve(file, goal, cfg, json);
    if (*repl) return cmd_repl(file, cfg);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kBadInput;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kUsage;
}
