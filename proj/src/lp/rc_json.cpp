#include "robench/rc_json.hpp"

#include <cmath>

#include "robench/errors.hpp"

namespace robench::lp {

using nlohmann::json;

namespace {

json bound_to_json(double v) {
  if (std::isinf(v)) return nullptr;
  return v;
}

double bound_from_json(const json& j, double infinite) {
  if (j.is_null()) return infinite;
  return j.get<double>();
}

RowSense row_sense_from(const std::string& s) {
  if (s == "<=") return RowSense::LE;
  if (s == ">=") return RowSense::GE;
  if (s == "=" || s == "==") return RowSense::EQ;
  throw MalformedModel("unknown constraint sense '" + s + "'");
}

}  // namespace

json to_rc_json(const DeterministicLP& lp) {
  json vars = json::array();
  for (const auto& v : lp.variables) {
    vars.push_back(
        {{"name", v.name}, {"lb", bound_to_json(v.lower)}, {"ub", bound_to_json(v.upper)}});
  }
  json cons = json::array();
  for (const auto& c : lp.constraints) {
    cons.push_back({{"coef", c.coefficients}, {"sense", to_string(c.sense)}, {"rhs", c.rhs}});
  }
  return {{"sense", lp.sense == Sense::Minimize ? "min" : "max"},
          {"vars", std::move(vars)},
          {"obj", lp.objective},
          {"cons", std::move(cons)}};
}

DeterministicLP from_rc_json(const json& j) {
  if (!j.is_object()) throw MalformedModel("RC-JSON must be an object");
  DeterministicLP lp;
  const auto sense = j.at("sense").get<std::string>();
  if (sense == "min") {
    lp.sense = Sense::Minimize;
  } else if (sense == "max") {
    lp.sense = Sense::Maximize;
  } else {
    throw MalformedModel("unknown objective sense '" + sense + "'");
  }
  for (const auto& v : j.at("vars")) {
    lp.variables.push_back({v.at("name").get<std::string>(), bound_from_json(v.at("lb"), -kInf),
                            bound_from_json(v.at("ub"), kInf)});
  }
  lp.objective = j.at("obj").get<std::vector<double>>();
  for (const auto& c : j.at("cons")) {
    lp.constraints.push_back({c.at("coef").get<std::vector<double>>(),
                              row_sense_from(c.at("sense").get<std::string>()),
                              c.at("rhs").get<double>()});
  }
  validate(lp);
  return lp;
}

std::string dump_rc_json(const DeterministicLP& lp) { return to_rc_json(lp).dump(); }

DeterministicLP parse_rc_json(const std::string& text) { return from_rc_json(json::parse(text)); }

}  // namespace robench::lp
