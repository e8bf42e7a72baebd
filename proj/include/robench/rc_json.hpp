#pragma once

#include <json.hpp>
#include <string>

#include "robench/lp.hpp"

namespace robench::lp {

// RC-JSON: the interchange format for deterministic LPs and candidate answers.
//   {"sense": "min"|"max",
//    "vars": [{"name": s, "lb": n|null, "ub": n|null}],
//    "obj": [..],
//    "cons": [{"coef": [..], "sense": "<="|">="|"=", "rhs": n}]}
// null encodes an infinite bound.
nlohmann::json to_rc_json(const DeterministicLP& lp);
DeterministicLP from_rc_json(const nlohmann::json& j);

std::string dump_rc_json(const DeterministicLP& lp);
// Throws nlohmann::json::exception or MalformedModel on bad input.
DeterministicLP parse_rc_json(const std::string& text);

}  // namespace robench::lp
