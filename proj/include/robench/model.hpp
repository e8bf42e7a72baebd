#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "robench/lp.hpp"

namespace robench {

// Element-wise perturbation model: a~_j = a_j + zeta_j for j in the support,
// zeta_j = 0 elsewhere. Support indices are 0-based variable positions.

struct Deterministic {
  bool operator==(const Deterministic&) const = default;
};

// |zeta_j| <= delta_j over the support.
struct BoxSet {
  std::vector<std::size_t> support;
  std::vector<double> delta;
  bool operator==(const BoxSet&) const = default;
};

// Box plus sum_j |zeta_j| / delta_j <= gamma.
struct BudgetSet {
  std::vector<std::size_t> support;
  std::vector<double> delta;
  double gamma = 0.0;
  bool operator==(const BudgetSet&) const = default;
};

// F zeta_S <= g and lower <= zeta_S <= upper on the support; zeta_j = 0 for
// every j in zero_eq (the complement of the support). Bounds may be infinite.
struct PolyhedralSet {
  std::vector<std::size_t> support;
  std::vector<std::vector<double>> F;  // k x |support|
  std::vector<double> g;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::size_t> zero_eq;
  std::optional<std::vector<double>> interior;  // strictly interior point over the support
  bool operator==(const PolyhedralSet&) const = default;
};

using UncertaintySpec = std::variant<Deterministic, BoxSet, BudgetSet, PolyhedralSet>;

bool is_deterministic(const UncertaintySpec& spec);
const std::vector<std::size_t>& support_of(const UncertaintySpec& spec);
const char* kind_name(const UncertaintySpec& spec);

struct RowSpec {
  std::vector<double> a;
  lp::RowSense sense = lp::RowSense::LE;
  double b = 0.0;
  UncertaintySpec uncertainty;
  bool operator==(const RowSpec&) const = default;
};

struct GroundTruth {
  std::vector<double> x_star;
  double f_star = 0.0;
  bool operator==(const GroundTruth&) const = default;
};

// One of the eight presentation templates T_{b0 b1 b2}.
struct TemplateId {
  bool explicit_worst_case = false;  // b0: nested min/max instead of a forall clause
  bool vector_notation = false;      // b1: inner-product form instead of element-wise sums
  bool type_labels = false;          // b2: named uncertainty labels

  std::string code() const;  // e.g. "011"
  int index() const;         // 0..7, b0 most significant
  static TemplateId from_index(int index);
  static TemplateId parse(const std::string& code);  // accepts "011" or "T011"
  static std::vector<TemplateId> all();
  bool operator==(const TemplateId&) const = default;
};

// A robust LP: optimize the worst case of (c + zeta_c)^T x subject to every
// row holding for all perturbations in its set, with x in [x_lower, x_upper]^n.
struct RobustInstance {
  std::string id;
  std::size_t n = 0;
  lp::Sense sense = lp::Sense::Minimize;
  std::vector<double> c;
  UncertaintySpec objective_uncertainty;
  std::vector<RowSpec> rows;
  double x_lower = 0.0;
  double x_upper = 0.0;
  std::optional<GroundTruth> ground_truth;
  std::optional<TemplateId> template_id;
  std::string latex;         // rendered problem statement, may be empty
  std::string nl_extension;  // natural-language robust extension, may be empty

  std::size_t num_uncertain_rows() const;
  bool operator==(const RobustInstance&) const = default;
};

// Worst case of a row: an inner max for <= rows and minimized objectives,
// an inner min for >= rows and maximized objectives.
enum class InnerDirection { Max, Min };
InnerDirection inner_direction(lp::RowSense sense);
InnerDirection inner_direction(lp::Sense objective_sense);

// Throws InvalidInstance describing the first broken invariant.
void validate(const RobustInstance& inst);
// validate() plus the generator's own guarantees (deviation floor of 0.1,
// square constraint system, at most one equality row).
void validate_generated(const RobustInstance& inst);

// Converts a diagonal deviation matrix diag(D) into support/delta form.
BoxSet box_from_diagonal(const std::vector<double>& diagonal);
BudgetSet budget_from_diagonal(const std::vector<double>& diagonal, double gamma);

// The reference sample instance 5_16_T011 with its published ground truth.
RobustInstance reference_instance_5_16_T011();

}  // namespace robench
