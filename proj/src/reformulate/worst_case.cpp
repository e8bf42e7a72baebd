#include <cmath>

#include "robench/errors.hpp"
#include "robench/reformulate.hpp"

namespace robench {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

// max over u+, u- in [0,1] with u+_k + u-_k <= 1 and sum(u+ + u-) <= gamma of
// sum_k w_k (u+_k - u-_k); returns u+ - u-.
std::vector<double> budget_inner(const BudgetSet& bud, const std::vector<double>& w) {
  const std::size_t s = bud.support.size();
  lp::DeterministicLP inner;
  inner.sense = lp::Sense::Maximize;
  for (std::size_t k = 0; k < s; ++k) inner.add_variable("up" + std::to_string(k), 0.0, 1.0, w[k]);
  for (std::size_t k = 0; k < s; ++k) inner.add_variable("um" + std::to_string(k), 0.0, 1.0, -w[k]);
  for (std::size_t k = 0; k < s; ++k) {
    std::vector<double> r(2 * s, 0.0);
    r[k] = r[s + k] = 1.0;
    inner.add_constraint(std::move(r), lp::RowSense::LE, 1.0);
  }
  inner.add_constraint(std::vector<double>(2 * s, 1.0), lp::RowSense::LE, bud.gamma);
  const auto sol = lp::solve_lp(inner);
  if (!sol.optimal()) throw NumericalFailure("budget inner problem did not solve");
  std::vector<double> u(s);
  for (std::size_t k = 0; k < s; ++k) u[k] = sol.x[k] - sol.x[s + k];
  return u;
}

}  // namespace

WorstCase worst_case(const UncertaintySpec& spec, std::span<const double> a,
                     std::span<const double> x, InnerDirection dir) {
  if (a.size() != x.size()) throw DimensionMismatch("row and x lengths differ");
  const double sign = dir == InnerDirection::Max ? 1.0 : -1.0;
  WorstCase wc;
  wc.zeta.assign(x.size(), 0.0);
  if (const auto* box = std::get_if<BoxSet>(&spec)) {
    for (std::size_t k = 0; k < box->support.size(); ++k) {
      const std::size_t j = box->support[k];
      wc.zeta[j] = (sign * x[j] >= 0.0 ? 1.0 : -1.0) * box->delta[k];
    }
  } else if (const auto* bud = std::get_if<BudgetSet>(&spec)) {
    std::vector<double> w;
    for (std::size_t k = 0; k < bud->support.size(); ++k) {
      w.push_back(sign * bud->delta[k] * x[bud->support[k]]);
    }
    const auto u = budget_inner(*bud, w);
    for (std::size_t k = 0; k < bud->support.size(); ++k) {
      wc.zeta[bud->support[k]] = bud->delta[k] * u[k];
    }
  } else if (const auto* poly = std::get_if<PolyhedralSet>(&spec)) {
    const std::size_t s = poly->support.size();
    lp::DeterministicLP inner;
    inner.sense = lp::Sense::Maximize;
    for (std::size_t k = 0; k < s; ++k) {
      inner.add_variable("zeta" + std::to_string(k), poly->lower[k], poly->upper[k],
                         sign * x[poly->support[k]]);
    }
    for (std::size_t r = 0; r < poly->F.size(); ++r) {
      inner.add_constraint(poly->F[r], lp::RowSense::LE, poly->g[r]);
    }
    const auto sol = lp::solve_lp(inner);
    if (sol.status == lp::Status::Infeasible) throw InvalidInstance("empty uncertainty set");
    if (sol.status == lp::Status::Unbounded) {
      wc.value = sign * lp::kInf;
      return wc;
    }
    for (std::size_t k = 0; k < s; ++k) wc.zeta[poly->support[k]] = sol.x[k];
  }
  wc.value = dot(a, x) + dot(wc.zeta, x);
  return wc;
}

WorstCase worst_case_row(const RowSpec& row, std::span<const double> x) {
  return worst_case(row.uncertainty, row.a, x, inner_direction(row.sense));
}

double worst_case_row_value(const RowSpec& row, std::span<const double> x) {
  return worst_case_row(row, x).value;
}

double worst_case_objective(const RobustInstance& inst, std::span<const double> x) {
  return worst_case(inst.objective_uncertainty, inst.c, x, inner_direction(inst.sense)).value;
}

}  // namespace robench
