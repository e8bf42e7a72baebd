#include <cmath>

#include "robench/render.hpp"

namespace robench {

namespace {

std::string list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t k = 0; k < v.size(); ++k) {
    s += (k ? ", " : "") +
         (std::isinf(v[k]) ? std::string(v[k] > 0 ? "+inf" : "-inf") : format_number(v[k]));
  }
  return s + "]";
}

std::string variables(const std::vector<std::size_t>& support) {
  std::string s;
  for (std::size_t k = 0; k < support.size(); ++k) {
    s += (k ? ", " : "") + std::string("x_") + std::to_string(support[k] + 1);
  }
  return s;
}

bool all_equal(const std::vector<double>& v) {
  for (double x : v) {
    if (x != v.front()) return false;
  }
  return true;
}

std::string describe(const UncertaintySpec& spec) {
  if (const auto* box = std::get_if<BoxSet>(&spec)) {
    return "each coefficient may deviate by at most ±" + list(box->delta) +
           " from its nominal value.";
  }
  if (const auto* bud = std::get_if<BudgetSet>(&spec)) {
    return "each coefficient may deviate by at most ±" + list(bud->delta) +
           " from its nominal value. In addition, the sum of normalized deviations "
           "(sum of |xi_j| / Delta_j) must not exceed Γ_b = " +
           format_number(bud->gamma) + ".";
  }
  const auto& poly = std::get<PolyhedralSet>(spec);
  std::string F = "[";
  for (std::size_t r = 0; r < poly.F.size(); ++r) F += (r ? ", " : "") + list(poly.F[r]);
  F += "]";
  std::string s =
      "the perturbation vector xi over these coefficients must satisfy F xi <= g with F = " + F +
      " and g = " + list(poly.g) + "; ";
  if (all_equal(poly.lower) && all_equal(poly.upper)) {
    s += "each component lies in " + list({poly.lower.front(), poly.upper.front()}) + ".";
  } else {
    s += "component lower bounds are " + list(poly.lower) + " and upper bounds are " +
         list(poly.upper) + ".";
  }
  return s;
}

}  // namespace

std::string render_robust_extension(const RobustInstance& inst) {
  std::string out =
      "Robust Extension:\n\n"
      "Some coefficients of this problem are not known exactly. Each uncertain coefficient "
      "is its nominal value plus a perturbation, and the perturbations of a row are confined "
      "to the set described for that row. A solution has to remain feasible for every "
      "admissible perturbation, and its objective is judged at the least favorable one.\n\n"
      "The following parameters are subject to uncertainty:\n\n";
  if (!is_deterministic(inst.objective_uncertainty)) {
    out += "• Objective coefficients of " + variables(support_of(inst.objective_uncertainty)) +
           ": " + describe(inst.objective_uncertainty) + "\n\n";
  }
  for (std::size_t i = 0; i < inst.rows.size(); ++i) {
    const auto& row = inst.rows[i];
    if (is_deterministic(row.uncertainty)) continue;
    out += "• Coefficients of constraint " + std::to_string(i + 1) + " (" +
           lp::to_string(row.sense) + " row) on " + variables(support_of(row.uncertainty)) + ": " +
           describe(row.uncertainty) + "\n\n";
  }
  out += "The robust model seeks a decision that guarantees ";
  out += inst.sense == lp::Sense::Maximize ? "maximizing" : "minimizing";
  out +=
      " the objective value under all worst-case realizations within the uncertainty sets "
      "above.";
  return out;
}

}  // namespace robench
