#include "robench/reformulate.hpp"

#include <cmath>
#include <exception>

#include "robench/errors.hpp"

namespace robench {

namespace {

using Block = RobustCounterpart::Block;

std::string aux_name(const std::string& row, const char* kind, std::size_t index) {
  return row + "_" + kind + "_" + std::to_string(index);
}

std::vector<double> zeros(const lp::DeterministicLP& lp) {
  return std::vector<double>(lp.num_variables(), 0.0);
}

// Auxiliaries whose penalty bounds max_{zeta} sigma * zeta^T x from above.
Block add_block(lp::DeterministicLP& lp, std::size_t n, const std::string& row,
                const UncertaintySpec& spec, double sigma) {
  Block blk;
  blk.row = row;
  blk.sigma = sigma;
  if (const auto* box = std::get_if<BoxSet>(&spec)) {
    // t_j >= |Delta_j x_j|
    for (std::size_t k = 0; k < box->support.size(); ++k) {
      const std::size_t j = box->support[k];
      const std::size_t t = lp.add_variable(aux_name(row, "t", j + 1), 0.0, lp::kInf);
      blk.penalty.push_back({t, 1.0});
      for (double s : {-1.0, 1.0}) {
        auto r = zeros(lp);
        r[t] = 1.0;
        r[j] = s * box->delta[k];
        blk.aux_rows.push_back(lp.add_constraint(std::move(r), lp::RowSense::GE, 0.0));
      }
    }
  } else if (const auto* bud = std::get_if<BudgetSet>(&spec)) {
    // z_0 + z_j >= |Delta_j x_j|, penalty Gamma z_0 + sum z_j
    const std::size_t z0 = lp.add_variable(aux_name(row, "z", 0), 0.0, lp::kInf);
    blk.penalty.push_back({z0, bud->gamma});
    for (std::size_t k = 0; k < bud->support.size(); ++k) {
      const std::size_t j = bud->support[k];
      const std::size_t z = lp.add_variable(aux_name(row, "z", j + 1), 0.0, lp::kInf);
      blk.penalty.push_back({z, 1.0});
      for (double s : {-1.0, 1.0}) {
        auto r = zeros(lp);
        r[z0] = 1.0;
        r[z] = 1.0;
        r[j] = s * bud->delta[k];
        blk.aux_rows.push_back(lp.add_constraint(std::move(r), lp::RowSense::GE, 0.0));
      }
    }
  } else if (const auto* poly = std::get_if<PolyhedralSet>(&spec)) {
    // Full-space description M zeta <= q, E zeta = 0; dual: M^T lam + E^T mu = sigma x.
    std::vector<std::vector<double>> M;
    std::vector<double> q;
    for (std::size_t r = 0; r < poly->F.size(); ++r) {
      std::vector<double> m(n, 0.0);
      for (std::size_t k = 0; k < poly->support.size(); ++k) m[poly->support[k]] = poly->F[r][k];
      M.push_back(std::move(m));
      q.push_back(poly->g[r]);
    }
    for (std::size_t k = 0; k < poly->support.size(); ++k) {
      const std::size_t j = poly->support[k];
      if (std::isfinite(poly->upper[k])) {
        std::vector<double> m(n, 0.0);
        m[j] = 1.0;
        M.push_back(std::move(m));
        q.push_back(poly->upper[k]);
      }
      if (std::isfinite(poly->lower[k])) {
        std::vector<double> m(n, 0.0);
        m[j] = -1.0;
        M.push_back(std::move(m));
        q.push_back(-poly->lower[k]);
      }
    }
    std::vector<std::size_t> lam;
    for (std::size_t r = 0; r < M.size(); ++r) {
      lam.push_back(lp.add_variable(aux_name(row, "lam", r + 1), 0.0, lp::kInf));
      blk.penalty.push_back({lam.back(), q[r]});
    }
    std::vector<std::size_t> mu(n, SIZE_MAX);
    for (std::size_t j : poly->zero_eq) {
      mu[j] = lp.add_variable(aux_name(row, "mu", j + 1), -lp::kInf, lp::kInf);
    }
    for (std::size_t j = 0; j < n; ++j) {
      auto r = zeros(lp);
      for (std::size_t k = 0; k < M.size(); ++k) r[lam[k]] = M[k][j];
      if (mu[j] != SIZE_MAX) r[mu[j]] = 1.0;
      r[j] = -sigma;
      blk.aux_rows.push_back(lp.add_constraint(std::move(r), lp::RowSense::EQ, 0.0));
    }
  }
  return blk;
}

std::vector<double> row_with_penalty(const lp::DeterministicLP& lp, const std::vector<double>& a,
                                     const Block& blk, double scale) {
  auto r = zeros(lp);
  for (std::size_t j = 0; j < a.size(); ++j) r[j] = a[j];
  for (const auto& [idx, coef] : blk.penalty) r[idx] += scale * coef;
  return r;
}

void add_decision_variables(lp::DeterministicLP& lp, const RobustInstance& inst) {
  for (std::size_t j = 0; j < inst.n; ++j) {
    lp.add_variable("x" + std::to_string(j + 1), inst.x_lower, inst.x_upper, inst.c[j]);
  }
}

}  // namespace

RobustCounterpart build_robust_counterpart(const RobustInstance& inst) {
  validate(inst);
  RobustCounterpart rc;
  rc.n = inst.n;
  auto& lp = rc.lp;
  lp.sense = inst.sense;
  add_decision_variables(lp, inst);

  if (!is_deterministic(inst.objective_uncertainty)) {
    if (inst.sense == lp::Sense::Minimize) {
      // min c^T x + max_zeta zeta^T x
      Block blk = add_block(lp, inst.n, "obj", inst.objective_uncertainty, 1.0);
      for (const auto& [idx, coef] : blk.penalty) lp.objective[idx] += coef;
      rc.blocks.push_back(std::move(blk));
    } else {
      // max t  s.t.  t <= c^T x - max_zeta (-zeta)^T x
      const std::size_t t = lp.add_variable("obj_epi_0", -lp::kInf, lp::kInf);
      Block blk = add_block(lp, inst.n, "obj", inst.objective_uncertainty, -1.0);
      auto r = row_with_penalty(lp, inst.c, blk, -1.0);
      r[t] = -1.0;
      rc.epigraph_row = lp.add_constraint(std::move(r), lp::RowSense::GE, 0.0);
      rc.epigraph = t;
      for (std::size_t j = 0; j < lp.num_variables(); ++j) lp.objective[j] = 0.0;
      lp.objective[t] = 1.0;
      rc.blocks.push_back(std::move(blk));
    }
  }

  for (std::size_t i = 0; i < inst.rows.size(); ++i) {
    const auto& row = inst.rows[i];
    if (is_deterministic(row.uncertainty)) {
      lp.add_constraint(row.a, row.sense, row.b);
      continue;
    }
    if (row.sense == lp::RowSense::EQ) {
      throw UnsupportedSpec("row " + std::to_string(i + 1) + " is an equality with uncertainty");
    }
    const double sigma = row.sense == lp::RowSense::LE ? 1.0 : -1.0;
    Block blk = add_block(lp, inst.n, "con" + std::to_string(i + 1), row.uncertainty, sigma);
    blk.main_row = lp.add_constraint(row_with_penalty(lp, row.a, blk, sigma), row.sense, row.b);
    rc.blocks.push_back(std::move(blk));
  }
  return rc;
}

lp::DeterministicLP reformulate(const RobustInstance& inst) {
  return build_robust_counterpart(inst).lp;
}

lp::DeterministicLP nominal_lp(const RobustInstance& inst) {
  lp::DeterministicLP lp;
  lp.sense = inst.sense;
  add_decision_variables(lp, inst);
  for (const auto& row : inst.rows) lp.add_constraint(row.a, row.sense, row.b);
  return lp;
}

std::vector<double> complete_auxiliaries(const RobustCounterpart& rc, std::span<const double> x) {
  if (x.size() != rc.n) throw DimensionMismatch("x must have one entry per decision variable");
  lp::DeterministicLP sub;
  sub.sense = lp::Sense::Minimize;
  sub.variables = rc.lp.variables;
  sub.objective.assign(sub.variables.size(), 0.0);
  for (std::size_t j = 0; j < rc.n; ++j) sub.variables[j].lower = sub.variables[j].upper = x[j];
  for (const auto& blk : rc.blocks) {
    for (std::size_t r : blk.aux_rows) sub.constraints.push_back(rc.lp.constraints[r]);
    for (const auto& [idx, coef] : blk.penalty) sub.objective[idx] += coef;
  }
  if (rc.epigraph) sub.variables[*rc.epigraph].lower = sub.variables[*rc.epigraph].upper = 0.0;

  std::vector<double> full(rc.lp.num_variables(), 0.0);
  std::copy(x.begin(), x.end(), full.begin());
  const auto sol = lp::solve_lp(sub);
  if (sol.optimal()) {
    full = sol.x;
    std::copy(x.begin(), x.end(), full.begin());
  }
  if (rc.epigraph) {
    // t = c^T x - penalty, read off the epigraph row.
    const auto& row = rc.lp.constraints[*rc.epigraph_row];
    double t = 0.0;
    for (std::size_t j = 0; j < full.size(); ++j) {
      if (j != *rc.epigraph) t += row.coefficients[j] * full[j];
    }
    full[*rc.epigraph] = t;
  }
  return full;
}

RobustSolution solve_robust(const RobustInstance& inst) {
  const auto lp = reformulate(inst);
  const auto sol = lp::solve_lp(lp);
  RobustSolution out;
  out.status = sol.status;
  if (sol.optimal()) {
    out.full = sol.x;
    out.x.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(inst.n));
    out.value = *sol.objective_value;
  }
  return out;
}

std::vector<RobustSolution> solve_robust_batch_serial(std::span<const RobustInstance> batch) {
  std::vector<RobustSolution> out;
  out.reserve(batch.size());
  for (const auto& inst : batch) out.push_back(solve_robust(inst));
  return out;
}

std::vector<RobustSolution> solve_robust_batch(std::span<const RobustInstance> batch) {
  std::vector<RobustSolution> out(batch.size());
  std::vector<std::exception_ptr> errors(batch.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(batch.size()); ++i) {
    try {
      out[i] = solve_robust(batch[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace robench
