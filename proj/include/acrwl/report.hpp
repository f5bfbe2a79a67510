#pragma once

#include <json.hpp>

#include "acrwl/gorc.hpp"
#include "acrwl/solver.hpp"

namespace acrwl {

// {rule, conclusion, premises, instance}; instance is null unless the node
// applies a program or axiom rule.
nlohmann::json proof_json(const Program& prog, const Proof& p);
nlohmann::json answer_json(const Answer& a);

}  // namespace acrwl
