#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "robench/model.hpp"
#include "robench/rng.hpp"

namespace robench {

enum class UncertaintyKind { Deterministic = 0, Box = 1, Budget = 2, Polyhedral = 3 };

const char* to_string(UncertaintyKind kind);
UncertaintyKind uncertainty_kind_from_string(const std::string& s);

struct GenConfig {
  std::vector<std::size_t> n_values{2, 3, 4, 5};  // n is drawn uniformly per candidate
  std::size_t count = 64;
  std::uint64_t seed = 0;
  std::vector<UncertaintyKind> types{UncertaintyKind::Box, UncertaintyKind::Budget,
                                     UncertaintyKind::Polyhedral};
  std::vector<TemplateId> templates = TemplateId::all();
  bool hard_mode = false;
  double coef_lo = -2.0;  // nominal constraint coefficient range
  double coef_hi = 2.0;
  std::size_t max_candidates = 0;  // 0 selects 1000 + 200 * count
  bool render = true;              // attach LaTeX and robust-extension text
};

// Throws InvalidParams.
void validate(const GenConfig& config);

struct PolytopeSample {
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  std::vector<lp::RowSense> senses;
};

inline constexpr int kMaxRowRetries = 50;

// Random inequality system with v0 strictly interior after rounding
// (coefficients 1 dp, rhs 2 dp). Throws RetryExhausted.
PolytopeSample feasible_polytope(std::size_t d, std::span<const double> v0, double lo, double hi,
                                 std::size_t m_rows, Rng& rng);

struct NominalProblem {
  lp::Sense sense = lp::Sense::Minimize;
  std::vector<double> c;
  std::vector<RowSpec> rows;  // all Deterministic at this stage
  double x_lower = 0.0;
  double x_upper = 0.0;
  double r = 0.0;  // nominal range
  std::vector<double> x0;
  std::optional<std::size_t> equality_row;
};

NominalProblem generate_nominal(const GenConfig& config, std::size_t n, Rng& rng);

struct UncertaintyAssignment {
  UncertaintyKind objective = UncertaintyKind::Deterministic;
  std::vector<UncertaintyKind> rows;
};

// Exactly one deterministic row among {objective, rows}: the equality row if
// any, else uniform. Hard mode tags every other row Polyhedral.
UncertaintyAssignment assign_uncertainty(const NominalProblem& nominal,
                                         std::span<const UncertaintyKind> types, bool hard_mode,
                                         Rng& rng);

// Shared per-instance polyhedral range.
struct PolyRange {
  double p_r = 0.1;
  double p_l = -0.1;
  double p_u = 0.1;
};
PolyRange sample_poly_range(double r, Rng& rng);

// Throws UnsampleableRow when `a` has fewer than two non-zeros.
UncertaintySpec sample_uncertainty_params(std::span<const double> a, UncertaintyKind kind,
                                          const PolyRange& range, Rng& rng);

enum class Rejection {
  None,
  AllDeterministic,
  Unsampleable,
  NotOptimal,
  Degenerate,
  HardConditions,
  RetryExhausted
};
const char* to_string(Rejection r);

// Coordinatewise |x_i - x_l| <= tol or |x_i - x_u| <= tol for every i.
bool is_degenerate(std::span<const double> x, double x_lower, double x_upper, double tol = 1e-6);

struct FilterReport {
  bool not_all_deterministic = false;
  bool optimal = false;
  bool non_degenerate = false;
  bool one_deterministic_row = false;
  bool passed() const {
    return not_all_deterministic && optimal && non_degenerate && one_deterministic_row;
  }
};
// Re-applies the acceptance filters from scratch (re-solves the RC).
FilterReport check_filters(const RobustInstance& inst);

struct HardReport {
  bool all_polyhedral = false;
  bool maximize = false;
  bool both_senses = false;
  bool signed_variables = false;
  bool passed() const { return all_polyhedral && maximize && both_senses && signed_variables; }
};
HardReport check_hard_conditions(const RobustInstance& inst);

// Candidate `index` from its own child stream. Returns nullopt when rejected.
std::optional<RobustInstance> generate_candidate(const GenConfig& config, std::uint64_t index,
                                                 Rejection* reason = nullptr);

struct GenStats {
  std::size_t candidates = 0;
  std::size_t rejected[7] = {};
};

// First `count` accepted candidates in index order. The parallel version
// evaluates candidates in OpenMP batches and yields the same dataset.
std::vector<RobustInstance> generate_dataset(const GenConfig& config, GenStats* stats = nullptr);
std::vector<RobustInstance> generate_dataset_serial(const GenConfig& config,
                                                    GenStats* stats = nullptr);

// Unbounded lazy sequence of accepted instances, e.g. training draws.
class InstanceStream {
 public:
  explicit InstanceStream(GenConfig config);
  RobustInstance next();
  std::uint64_t position() const { return next_index_; }

 private:
  GenConfig config_;
  std::uint64_t next_index_ = 0;
};

}  // namespace robench
