#include "robench/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "robench/errors.hpp"

namespace robench {

namespace {

const std::vector<std::size_t> kEmptySupport;

[[noreturn]] void fail(const RobustInstance& inst, const std::string& what) {
  throw InvalidInstance((inst.id.empty() ? std::string("instance") : inst.id) + ": " + what);
}

void check_support(const RobustInstance& inst, const std::string& row,
                   const std::vector<double>& coefficients,
                   const std::vector<std::size_t>& support) {
  if (support.size() < 2) fail(inst, row + " support has fewer than 2 entries");
  for (std::size_t k = 0; k < support.size(); ++k) {
    const std::size_t j = support[k];
    if (j >= inst.n) fail(inst, row + " support index out of range");
    if (k > 0 && support[k - 1] >= j) fail(inst, row + " support must be strictly increasing");
    if (coefficients[j] == 0.0) fail(inst, row + " support includes a zero coefficient");
  }
}

void check_deviations(const RobustInstance& inst, const std::string& row,
                      const std::vector<std::size_t>& support, const std::vector<double>& delta) {
  if (delta.size() != support.size()) fail(inst, row + " delta/support size mismatch");
  for (double d : delta) {
    if (!(d > 0.0) || !std::isfinite(d)) fail(inst, row + " deviations must be positive");
  }
}

void check_spec(const RobustInstance& inst, const std::string& row,
                const std::vector<double>& coefficients, const UncertaintySpec& spec) {
  if (is_deterministic(spec)) return;
  check_support(inst, row, coefficients, support_of(spec));
  if (const auto* box = std::get_if<BoxSet>(&spec)) {
    check_deviations(inst, row, box->support, box->delta);
  } else if (const auto* bud = std::get_if<BudgetSet>(&spec)) {
    check_deviations(inst, row, bud->support, bud->delta);
    if (!(bud->gamma >= 0.0) || bud->gamma > static_cast<double>(bud->support.size())) {
      fail(inst, row + " budget gamma outside [0, |S|]");
    }
  } else if (const auto* poly = std::get_if<PolyhedralSet>(&spec)) {
    const std::size_t s = poly->support.size();
    if (poly->g.size() != poly->F.size()) fail(inst, row + " F/g row count mismatch");
    for (const auto& f : poly->F) {
      if (f.size() != s) fail(inst, row + " F row width differs from support size");
    }
    if (poly->lower.size() != s || poly->upper.size() != s) {
      fail(inst, row + " component bounds must cover the support");
    }
    for (std::size_t k = 0; k < s; ++k) {
      if (!(poly->lower[k] <= poly->upper[k])) fail(inst, row + " inverted component bounds");
    }
    std::vector<std::size_t> complement;
    for (std::size_t j = 0; j < inst.n; ++j) {
      if (!std::binary_search(poly->support.begin(), poly->support.end(), j)) {
        complement.push_back(j);
      }
    }
    if (poly->zero_eq != complement) {
      fail(inst, row + " zero_eq must pin exactly the off-support components");
    }
    if (poly->interior) {
      const auto& z = *poly->interior;
      if (z.size() != s) fail(inst, row + " interior point has wrong size");
      for (std::size_t k = 0; k < s; ++k) {
        if (!(poly->lower[k] < z[k] && z[k] < poly->upper[k])) {
          fail(inst, row + " interior point not strictly inside component bounds");
        }
      }
      for (std::size_t r = 0; r < poly->F.size(); ++r) {
        double lhs = 0.0;
        for (std::size_t k = 0; k < s; ++k) lhs += poly->F[r][k] * z[k];
        if (!(lhs < poly->g[r])) fail(inst, row + " interior point violates F zeta <= g");
      }
    }
  }
}

}  // namespace

bool is_deterministic(const UncertaintySpec& spec) {
  return std::holds_alternative<Deterministic>(spec);
}

const std::vector<std::size_t>& support_of(const UncertaintySpec& spec) {
  return std::visit(
      [](const auto& s) -> const std::vector<std::size_t>& {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Deterministic>) {
          return kEmptySupport;
        } else {
          return s.support;
        }
      },
      spec);
}

const char* kind_name(const UncertaintySpec& spec) {
  switch (spec.index()) {
    case 0:
      return "deterministic";
    case 1:
      return "box";
    case 2:
      return "budget";
    case 3:
      return "polyhedral";
  }
  return "unknown";
}

std::string TemplateId::code() const {
  std::string s = "000";
  s[0] = explicit_worst_case ? '1' : '0';
  s[1] = vector_notation ? '1' : '0';
  s[2] = type_labels ? '1' : '0';
  return s;
}

int TemplateId::index() const {
  return (explicit_worst_case ? 4 : 0) + (vector_notation ? 2 : 0) + (type_labels ? 1 : 0);
}

TemplateId TemplateId::from_index(int index) {
  if (index < 0 || index > 7) throw InvalidParams("template index must be in 0..7");
  return {(index & 4) != 0, (index & 2) != 0, (index & 1) != 0};
}

TemplateId TemplateId::parse(const std::string& code) {
  std::string bits = code;
  if (!bits.empty() && (bits[0] == 'T' || bits[0] == 't')) bits.erase(0, 1);
  if (bits.size() != 3 || bits.find_first_not_of("01") != std::string::npos) {
    throw InvalidParams("template code must be three bits, got '" + code + "'");
  }
  return {bits[0] == '1', bits[1] == '1', bits[2] == '1'};
}

std::vector<TemplateId> TemplateId::all() {
  std::vector<TemplateId> out;
  for (int i = 0; i < 8; ++i) out.push_back(from_index(i));
  return out;
}

std::size_t RobustInstance::num_uncertain_rows() const {
  std::size_t count = is_deterministic(objective_uncertainty) ? 0 : 1;
  for (const auto& r : rows) count += is_deterministic(r.uncertainty) ? 0 : 1;
  return count;
}

InnerDirection inner_direction(lp::RowSense sense) {
  return sense == lp::RowSense::GE ? InnerDirection::Min : InnerDirection::Max;
}

InnerDirection inner_direction(lp::Sense objective_sense) {
  return objective_sense == lp::Sense::Maximize ? InnerDirection::Min : InnerDirection::Max;
}

void validate(const RobustInstance& inst) {
  if (inst.n == 0) fail(inst, "n must be positive");
  if (inst.c.size() != inst.n) fail(inst, "objective length differs from n");
  if (!std::isfinite(inst.x_lower) || !std::isfinite(inst.x_upper) || inst.x_lower > inst.x_upper) {
    fail(inst, "variable bounds must be finite with x_lower <= x_upper");
  }
  std::size_t deterministic = is_deterministic(inst.objective_uncertainty) ? 1 : 0;
  check_spec(inst, "objective", inst.c, inst.objective_uncertainty);
  for (std::size_t i = 0; i < inst.rows.size(); ++i) {
    const auto& row = inst.rows[i];
    const std::string name = "row " + std::to_string(i + 1);
    if (row.a.size() != inst.n) fail(inst, name + " length differs from n");
    if (!std::isfinite(row.b)) fail(inst, name + " has a non-finite rhs");
    if (inst.n > 2) {
      auto nnz = std::count_if(row.a.begin(), row.a.end(), [](double v) { return v != 0.0; });
      if (nnz < 2) fail(inst, name + " has fewer than 2 non-zero coefficients");
    }
    deterministic += is_deterministic(row.uncertainty) ? 1 : 0;
    check_spec(inst, name, row.a, row.uncertainty);
  }
  if (deterministic != 1) {
    fail(inst, "exactly one row must be deterministic, found " + std::to_string(deterministic));
  }
  if (inst.ground_truth && inst.ground_truth->x_star.size() != inst.n) {
    fail(inst, "ground truth x* length differs from n");
  }
}

void validate_generated(const RobustInstance& inst) {
  validate(inst);
  if (inst.rows.size() != inst.n) fail(inst, "generated instances have m = n rows");
  std::size_t equalities = 0;
  auto floor_ok = [&](const UncertaintySpec& spec, const std::string& row) {
    const std::vector<double>* delta = nullptr;
    if (const auto* box = std::get_if<BoxSet>(&spec)) delta = &box->delta;
    if (const auto* bud = std::get_if<BudgetSet>(&spec)) delta = &bud->delta;
    if (!delta) return;
    for (double d : *delta) {
      if (d < 0.1 - 1e-12) fail(inst, row + " deviation below the 0.1 floor");
    }
  };
  floor_ok(inst.objective_uncertainty, "objective");
  for (std::size_t i = 0; i < inst.rows.size(); ++i) {
    if (inst.rows[i].sense == lp::RowSense::EQ) {
      ++equalities;
      if (!is_deterministic(inst.rows[i].uncertainty)) {
        fail(inst, "row " + std::to_string(i + 1) + " is an equality with uncertainty");
      }
    }
    floor_ok(inst.rows[i].uncertainty, "row " + std::to_string(i + 1));
  }
  if (equalities > 1) fail(inst, "at most one equality row");
}

BoxSet box_from_diagonal(const std::vector<double>& diagonal) {
  BoxSet box;
  for (std::size_t j = 0; j < diagonal.size(); ++j) {
    if (diagonal[j] != 0.0) {
      box.support.push_back(j);
      box.delta.push_back(std::abs(diagonal[j]));
    }
  }
  return box;
}

BudgetSet budget_from_diagonal(const std::vector<double>& diagonal, double gamma) {
  BoxSet box = box_from_diagonal(diagonal);
  return {std::move(box.support), std::move(box.delta), gamma};
}

}  // namespace robench
