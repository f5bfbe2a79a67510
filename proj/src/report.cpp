#include "acrwl/report.hpp"

namespace acrwl {

nlohmann::json proof_json(const Program& prog, const Proof& p) {
  nlohmann::json j;
  j["rule"] = rule_name(p.rule);
  j["conclusion"] = to_string(p.conclusion);
  j["premises"] = nlohmann::json::array();
  for (const auto& q : p.premises) j["premises"].push_back(proof_json(prog, *q));
  if (p.rule_index < 0) {
    j["instance"] = nullptr;
  } else {
    nlohmann::json inst;
    const bool axiom = p.rule == PRule::OMUT || p.rule == PRule::MUT;
    inst["kind"] = axiom ? "axiom" : "rule";
    inst["index"] = p.rule_index + 1;
    inst["text"] = axiom ? to_string(prog.oriented[p.rule_index]) : to_string(prog.rules[p.rule_index]);
    nlohmann::json sigma = nlohmann::json::object();
    for (const auto& [v, t] : p.sigma) sigma[var_name(v)] = to_string(t);
    inst["sigma"] = sigma;
    j["instance"] = inst;
  }
  j["size"] = p.size;
  return j;
}

nlohmann::json answer_json(const Answer& a) {
  nlohmann::json j;
  nlohmann::json b = nlohmann::json::object();
  for (const auto& [v, t] : a.bindings) b[var_name(v)] = to_string(t);
  j["bindings"] = b;
  j["validated"] = a.validated;
  j["steps"] = a.steps;
  j["witness"] = a.witness.sizes();
  if (!a.trace.empty()) {
    j["trace"] = nlohmann::json::array();
    for (const auto& s : a.trace)
      j["trace"].push_back({{"rule", rule_name(s.rule)}, {"focus", s.focus}, {"goal", s.goal}});
  }
  return j;
}

}  // namespace acrwl
