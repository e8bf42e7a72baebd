#include "robench/lp.hpp"

#include <algorithm>
#include <cmath>

#include "robench/errors.hpp"

namespace robench::lp {

std::size_t DeterministicLP::add_variable(std::string name, double lower, double upper,
                                          double cost) {
  variables.push_back({std::move(name), lower, upper});
  objective.push_back(cost);
  for (auto& row : constraints) row.coefficients.push_back(0.0);
  return variables.size() - 1;
}

std::size_t DeterministicLP::add_constraint(std::vector<double> coefficients, RowSense sense,
                                            double rhs) {
  coefficients.resize(variables.size(), 0.0);
  constraints.push_back({std::move(coefficients), sense, rhs});
  return constraints.size() - 1;
}

std::optional<std::size_t> DeterministicLP::find_variable(const std::string& name) const {
  for (std::size_t j = 0; j < variables.size(); ++j) {
    if (variables[j].name == name) return j;
  }
  return std::nullopt;
}

void validate(const DeterministicLP& lp) {
  const std::size_t n = lp.variables.size();
  if (lp.objective.size() != n) {
    throw MalformedModel("objective has " + std::to_string(lp.objective.size()) +
                         " coefficients for " + std::to_string(n) + " variables");
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = lp.variables[j];
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper) {
      throw MalformedModel("variable '" + v.name + "' has invalid bounds");
    }
    if (v.lower == kInf || v.upper == -kInf) {
      throw MalformedModel("variable '" + v.name + "' has an empty domain");
    }
    if (!std::isfinite(lp.objective[j])) {
      throw MalformedModel("non-finite objective coefficient");
    }
  }
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& row = lp.constraints[i];
    if (row.coefficients.size() != n) {
      throw MalformedModel("constraint " + std::to_string(i) + " has " +
                           std::to_string(row.coefficients.size()) + " coefficients for " +
                           std::to_string(n) + " variables");
    }
    if (!std::isfinite(row.rhs)) {
      throw MalformedModel("constraint " + std::to_string(i) + " has a non-finite rhs");
    }
    for (double a : row.coefficients) {
      if (!std::isfinite(a)) {
        throw MalformedModel("constraint " + std::to_string(i) + " has a non-finite coefficient");
      }
    }
  }
}

FeasibilityReport check_feasible(const DeterministicLP& lp, std::span<const double> x, double tol) {
  if (x.size() != lp.variables.size()) {
    throw DimensionMismatch("point has " + std::to_string(x.size()) + " entries, model has " +
                            std::to_string(lp.variables.size()) + " variables");
  }
  FeasibilityReport report;
  auto note = [&](double violation) {
    report.max_violation = std::max(report.max_violation, violation);
    return violation > tol;
  };
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& row = lp.constraints[i];
    if (row.coefficients.size() != x.size()) {
      throw DimensionMismatch("constraint " + std::to_string(i) + " width mismatch");
    }
    double lhs = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += row.coefficients[j] * x[j];
    double violation = 0.0;
    switch (row.sense) {
      case RowSense::LE:
        violation = lhs - row.rhs;
        break;
      case RowSense::GE:
        violation = row.rhs - lhs;
        break;
      case RowSense::EQ:
        violation = std::abs(lhs - row.rhs);
        break;
    }
    if (note(violation)) report.violated_rows.push_back(i);
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    const auto& v = lp.variables[j];
    double violation = std::max(v.lower - x[j], x[j] - v.upper);
    if (note(violation)) report.violated_bounds.push_back(j);
  }
  report.feasible = report.violated_rows.empty() && report.violated_bounds.empty();
  return report;
}

double evaluate_objective(const DeterministicLP& lp, std::span<const double> x) {
  double value = 0.0;
  for (std::size_t j = 0; j < x.size() && j < lp.objective.size(); ++j) {
    value += lp.objective[j] * x[j];
  }
  return value;
}

const char* to_string(Status status) {
  switch (status) {
    case Status::Optimal:
      return "optimal";
    case Status::Infeasible:
      return "infeasible";
    case Status::Unbounded:
      return "unbounded";
  }
  return "unknown";
}

const char* to_string(RowSense sense) {
  switch (sense) {
    case RowSense::LE:
      return "<=";
    case RowSense::GE:
      return ">=";
    case RowSense::EQ:
      return "=";
  }
  return "?";
}

}  // namespace robench::lp
