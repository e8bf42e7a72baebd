#include <cmath>

#include "robench/errors.hpp"
#include "robench/reformulate.hpp"

namespace robench {

OracleResult robust_value_oracle_detail(const RobustInstance& inst, std::size_t max_iters) {
  validate(inst);
  const std::size_t n = inst.n;
  const bool minimize = inst.sense == lp::Sense::Minimize;
  const bool uncertain_objective = !is_deterministic(inst.objective_uncertainty);

  lp::DeterministicLP master;
  master.sense = inst.sense;
  for (std::size_t j = 0; j < n; ++j) {
    master.add_variable("x" + std::to_string(j + 1), inst.x_lower, inst.x_upper,
                        uncertain_objective ? 0.0 : inst.c[j]);
  }
  std::size_t t = 0;
  if (uncertain_objective) t = master.add_variable("t", -lp::kInf, lp::kInf, 1.0);

  OracleResult result;
  auto add_row_cut = [&](const RowSpec& row, const WorstCase& wc) {
    if (!std::isfinite(wc.value)) throw UnsupportedSpec("unbounded uncertainty set");
    std::vector<double> coef(row.a);
    for (std::size_t j = 0; j < n; ++j) coef[j] += wc.zeta[j];
    master.add_constraint(std::move(coef), row.sense, row.b);
    ++result.cuts;
  };
  // Min: t >= (c + zeta)^T x.  Max: t <= (c + zeta)^T x.
  auto add_objective_cut = [&](const WorstCase& wc) {
    if (!std::isfinite(wc.value)) throw UnsupportedSpec("unbounded uncertainty set");
    std::vector<double> coef(inst.c);
    for (std::size_t j = 0; j < n; ++j) coef[j] += wc.zeta[j];
    coef.push_back(-1.0);
    master.add_constraint(std::move(coef), minimize ? lp::RowSense::LE : lp::RowSense::GE, 0.0);
    ++result.cuts;
  };

  const std::vector<double> mid(n, 0.5 * (inst.x_lower + inst.x_upper));
  for (const auto& row : inst.rows) {
    if (is_deterministic(row.uncertainty)) {
      master.add_constraint(row.a, row.sense, row.b);
    } else {
      add_row_cut(row, worst_case_row(row, mid));
    }
  }
  const auto objective_worst = [&](std::span<const double> x) {
    return worst_case(inst.objective_uncertainty, inst.c, x, inner_direction(inst.sense));
  };
  if (uncertain_objective) add_objective_cut(objective_worst(mid));

  for (result.iterations = 1; result.iterations <= max_iters; ++result.iterations) {
    const auto sol = lp::solve_lp(master);
    if (sol.status == lp::Status::Infeasible) {
      throw InfeasibleRobust(inst.id + ": scenario master is infeasible");
    }
    if (sol.status == lp::Status::Unbounded) {
      throw NumericalFailure(inst.id + ": scenario master is unbounded");
    }
    const std::span<const double> x(sol.x.data(), n);
    std::size_t added = 0;
    for (const auto& row : inst.rows) {
      if (is_deterministic(row.uncertainty)) continue;
      const auto wc = worst_case_row(row, x);
      const double violation = row.sense == lp::RowSense::LE ? wc.value - row.b : row.b - wc.value;
      if (violation > kCutTolerance) {
        add_row_cut(row, wc);
        ++added;
      }
    }
    if (uncertain_objective) {
      const auto wc = objective_worst(x);
      const double violation = minimize ? wc.value - sol.x[t] : sol.x[t] - wc.value;
      if (violation > kCutTolerance) {
        add_objective_cut(wc);
        ++added;
      }
    }
    if (added == 0) {
      result.value = *sol.objective_value;
      result.x.assign(x.begin(), x.end());
      return result;
    }
  }
  throw NoConvergence(inst.id + ": no convergence after " + std::to_string(max_iters) +
                      " iterations");
}

double robust_value_oracle(const RobustInstance& inst, std::size_t max_iters) {
  return robust_value_oracle_detail(inst, max_iters).value;
}

}  // namespace robench
