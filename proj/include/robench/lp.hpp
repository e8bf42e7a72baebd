#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace robench::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Absolute feasibility tolerance on row residuals and bounds.
inline constexpr double kFeasTol = 1e-9;

enum class Sense { Minimize, Maximize };
enum class RowSense { LE, GE, EQ };

struct VariableDef {
  std::string name;
  double lower = 0.0;   // may be -kInf
  double upper = kInf;  // may be +kInf
};

struct LinearConstraint {
  std::vector<double> coefficients;
  RowSense sense = RowSense::LE;
  double rhs = 0.0;
};

// Dense LP: optimize objective^T x subject to constraints and variable bounds.
struct DeterministicLP {
  Sense sense = Sense::Minimize;
  std::vector<double> objective;
  std::vector<VariableDef> variables;
  std::vector<LinearConstraint> constraints;

  std::size_t num_variables() const { return variables.size(); }

  // Appends a variable and widens every existing row with a zero coefficient.
  std::size_t add_variable(std::string name, double lower, double upper, double cost = 0.0);
  std::size_t add_constraint(std::vector<double> coefficients, RowSense sense, double rhs);
  // Index of the variable with the given name, if any.
  std::optional<std::size_t> find_variable(const std::string& name) const;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct LpSolution {
  Status status = Status::Infeasible;
  std::vector<double> x;                  // non-empty iff Optimal
  std::optional<double> objective_value;  // present iff Optimal
  std::size_t iterations = 0;

  bool optimal() const { return status == Status::Optimal; }
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<std::size_t> violated_rows;
  std::vector<std::size_t> violated_bounds;  // variable indices
  double max_violation = 0.0;
};

// Throws MalformedModel when dimensions disagree or bounds are inverted.
void validate(const DeterministicLP& lp);

// Two-phase dense tableau simplex with Bland's rule. Pure and deterministic.
LpSolution solve_lp(const DeterministicLP& lp);

FeasibilityReport check_feasible(const DeterministicLP& lp, std::span<const double> x,
                                 double tol = kFeasTol);

double evaluate_objective(const DeterministicLP& lp, std::span<const double> x);

const char* to_string(Status status);
const char* to_string(RowSense sense);

}  // namespace robench::lp
