#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "robench/lp.hpp"
#include "robench/model.hpp"

namespace robench {

// Deterministic robust counterpart plus bookkeeping that lets callers fill in
// auxiliary values for a given x. Variables 0..n-1 are x1..xn; auxiliaries are
// named {row}_{kind}_{index} with row "obj" or "con<i>" (1-based) and kind one
// of t (box), z (budget; index 0 is the budget multiplier), lam, mu
// (polyhedral), epi (objective epigraph).
struct RobustCounterpart {
  lp::DeterministicLP lp;
  std::size_t n = 0;

  // One uncertain row or objective. The worst case of that row equals
  // a^T x + sigma * penalty, where penalty is a linear form over auxiliaries.
  struct Block {
    std::string row;
    double sigma = 1.0;
    std::vector<std::pair<std::size_t, double>> penalty;
    std::vector<std::size_t> aux_rows;    // constraints defining the auxiliaries
    std::optional<std::size_t> main_row;  // absent for the objective
  };
  std::vector<Block> blocks;
  std::optional<std::size_t> epigraph;  // index of obj_epi_0 when present
  std::optional<std::size_t> epigraph_row;
};

RobustCounterpart build_robust_counterpart(const RobustInstance& inst);

// The RC as a flat LP. Throws UnsupportedSpec for an uncertain equality row.
lp::DeterministicLP reformulate(const RobustInstance& inst);

// The certain problem obtained by dropping every uncertainty set.
lp::DeterministicLP nominal_lp(const RobustInstance& inst);

// Extends x (length n) to a full RC point by solving each row's inner dual at x.
std::vector<double> complete_auxiliaries(const RobustCounterpart& rc, std::span<const double> x);

struct WorstCase {
  double value = 0.0;        // a^T x + zeta^T x at the worst zeta
  std::vector<double> zeta;  // length n, zero off the support
};

// Worst case of (a + zeta)^T x over the set, as an inner max or min.
WorstCase worst_case(const UncertaintySpec& spec, std::span<const double> a,
                     std::span<const double> x, InnerDirection dir);
WorstCase worst_case_row(const RowSpec& row, std::span<const double> x);
double worst_case_row_value(const RowSpec& row, std::span<const double> x);
// Worst-case objective value (c + zeta)^T x.
double worst_case_objective(const RobustInstance& inst, std::span<const double> x);

struct RobustSolution {
  lp::Status status = lp::Status::Infeasible;
  std::vector<double> x;  // decision variables only
  double value = 0.0;
  std::vector<double> full;  // every RC variable
  bool operator==(const RobustSolution&) const = default;
};

// reformulate + solve_lp.
RobustSolution solve_robust(const RobustInstance& inst);

// solve_robust over a batch, in input order. The first failing instance's
// exception is rethrown. The OpenMP version matches the serial one exactly.
std::vector<RobustSolution> solve_robust_batch(std::span<const RobustInstance> batch);
std::vector<RobustSolution> solve_robust_batch_serial(std::span<const RobustInstance> batch);

struct OracleResult {
  double value = 0.0;
  std::vector<double> x;
  std::size_t iterations = 0;
  std::size_t cuts = 0;
};

inline constexpr double kCutTolerance = 1e-7;

// Robust optimum by scenario generation on the original rows, independent of
// the dual reformulation. Throws NoConvergence or InfeasibleRobust.
OracleResult robust_value_oracle_detail(const RobustInstance& inst, std::size_t max_iters = 200);
double robust_value_oracle(const RobustInstance& inst, std::size_t max_iters = 200);

}  // namespace robench
