#include <algorithm>
#include <cmath>

#include "robench/errors.hpp"
#include "robench/eval.hpp"
#include "robench/rc_json.hpp"

namespace robench {

using nlohmann::json;

double Tolerance::bound(double f_star) const { return std::max(abs, rel * std::abs(f_star)); }

bool Tolerance::matches(double f_hat, double f_star) const {
  return std::isfinite(f_hat) && std::abs(f_hat - f_star) <= bound(f_star);
}

const char* to_string(FailureKind kind) {
  switch (kind) {
    case FailureKind::ParseError:
      return "ParseError";
    case FailureKind::SolverInfeasible:
      return "SolverInfeasible";
    case FailureKind::SolverUnbounded:
      return "SolverUnbounded";
    case FailureKind::ValueMismatch:
      return "ValueMismatch";
    case FailureKind::AgentError:
      return "AgentError";
  }
  return "unknown";
}

FailureKind failure_kind_from_string(const std::string& s) {
  for (auto k :
       {FailureKind::ParseError, FailureKind::SolverInfeasible, FailureKind::SolverUnbounded,
        FailureKind::ValueMismatch, FailureKind::AgentError}) {
    if (s == to_string(k)) return k;
  }
  throw SchemaError("unknown failure kind '" + s + "'");
}

EvalRecord verify_candidate(const lp::DeterministicLP& rc, double f_star, const Tolerance& tol) {
  if (!std::isfinite(f_star)) throw InvalidParams("f_star must be finite");
  EvalRecord rec;
  rec.f_star = f_star;
  lp::LpSolution sol;
  try {
    sol = lp::solve_lp(rc);
  } catch (const MalformedModel& ex) {
    rec.failure_kind = FailureKind::ParseError;
    rec.detail = ex.what();
    return rec;
  } catch (const NumericalFailure& ex) {
    rec.failure_kind = FailureKind::SolverInfeasible;
    rec.detail = ex.what();
    return rec;
  }
  switch (sol.status) {
    case lp::Status::Infeasible:
      rec.failure_kind = FailureKind::SolverInfeasible;
      rec.detail = "candidate LP is infeasible";
      return rec;
    case lp::Status::Unbounded:
      rec.failure_kind = FailureKind::SolverUnbounded;
      rec.detail = "candidate LP is unbounded";
      return rec;
    case lp::Status::Optimal:
      break;
  }
  rec.f_hat = *sol.objective_value;
  rec.correct = tol.matches(*rec.f_hat, f_star);
  if (!rec.correct) {
    rec.failure_kind = FailureKind::ValueMismatch;
    rec.detail = "objective differs from the reference value";
  }
  return rec;
}

EvalRecord verify_candidate(const std::string& rc_json, double f_star, const Tolerance& tol) {
  if (!std::isfinite(f_star)) throw InvalidParams("f_star must be finite");
  lp::DeterministicLP lp;
  try {
    lp = lp::parse_rc_json(rc_json);
  } catch (const std::exception& ex) {  // json::exception or MalformedModel
    EvalRecord rec;
    rec.f_star = f_star;
    rec.failure_kind = FailureKind::ParseError;
    rec.detail = ex.what();
    return rec;
  }
  return verify_candidate(lp, f_star, tol);
}

json to_json(const EvalRecord& r) {
  json j = {{"instance_id", r.instance_id},
            {"f_hat", nullptr},
            {"f_star", r.f_star},
            {"correct", r.correct},
            {"failure_kind", nullptr},
            {"output_tokens", nullptr},
            {"matched_experience_ids", r.matched_experience_ids},
            {"detail", r.detail}};
  if (r.f_hat) j["f_hat"] = *r.f_hat;
  if (r.failure_kind) j["failure_kind"] = to_string(*r.failure_kind);
  if (r.output_tokens) j["output_tokens"] = *r.output_tokens;
  return j;
}

EvalRecord eval_record_from_json(const json& j) {
  EvalRecord r;
  r.instance_id = j.at("instance_id").get<std::string>();
  if (!j.at("f_hat").is_null()) r.f_hat = j["f_hat"].get<double>();
  r.f_star = j.at("f_star").get<double>();
  r.correct = j.at("correct").get<bool>();
  if (!j.at("failure_kind").is_null()) {
    r.failure_kind = failure_kind_from_string(j["failure_kind"].get<std::string>());
  }
  if (!j.at("output_tokens").is_null()) r.output_tokens = j["output_tokens"].get<long>();
  r.matched_experience_ids = j.value("matched_experience_ids", std::vector<long>{});
  r.detail = j.value("detail", std::string());
  return r;
}

}  // namespace robench
