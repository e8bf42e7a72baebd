#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "robench/errors.hpp"
#include "robench/lp.hpp"

namespace robench::lp {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kTieTol = 1e-12;

// How an original variable maps onto a standard-form column y >= 0 (or free).
enum class ColumnKind { Shifted, Reflected, Free };

struct StandardForm {
  std::size_t num_structural = 0;
  std::size_t num_slack = 0;
  std::vector<ColumnKind> kind;
  std::vector<double> offset;          // lb for Shifted, ub for Reflected
  std::vector<std::vector<double>> a;  // rows over structural + slack columns
  std::vector<double> b;               // all >= 0
  std::vector<long> slack_basis;       // slack column usable as initial basis, or -1
  std::vector<double> cost;            // min-form cost over structural + slack columns
};

StandardForm to_standard_form(const DeterministicLP& lp) {
  StandardForm sf;
  const std::size_t n = lp.variables.size();
  sf.num_structural = n;
  sf.kind.resize(n);
  sf.offset.assign(n, 0.0);

  struct Row {
    std::vector<double> coef;
    RowSense sense;
    double rhs;
  };
  std::vector<Row> rows;
  rows.reserve(lp.constraints.size() + n);

  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = lp.variables[j];
    if (std::isfinite(v.lower)) {
      sf.kind[j] = ColumnKind::Shifted;
      sf.offset[j] = v.lower;
    } else if (std::isfinite(v.upper)) {
      sf.kind[j] = ColumnKind::Reflected;
      sf.offset[j] = v.upper;
    } else {
      sf.kind[j] = ColumnKind::Free;
    }
  }

  auto transform = [&](const std::vector<double>& coef, double rhs, Row& out) {
    out.coef.assign(n, 0.0);
    out.rhs = rhs;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = coef[j];
      switch (sf.kind[j]) {
        case ColumnKind::Shifted:
          out.coef[j] = a;
          out.rhs -= a * sf.offset[j];
          break;
        case ColumnKind::Reflected:
          out.coef[j] = -a;
          out.rhs -= a * sf.offset[j];
          break;
        case ColumnKind::Free:
          out.coef[j] = a;
          break;
      }
    }
  };

  for (const auto& c : lp.constraints) {
    Row r;
    r.sense = c.sense;
    transform(c.coefficients, c.rhs, r);
    rows.push_back(std::move(r));
  }
  // Doubly bounded variables keep their upper bound as an explicit row y <= ub - lb.
  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = lp.variables[j];
    if (sf.kind[j] == ColumnKind::Shifted && std::isfinite(v.upper)) {
      Row r;
      r.coef.assign(n, 0.0);
      r.coef[j] = 1.0;
      r.sense = RowSense::LE;
      r.rhs = v.upper - v.lower;
      rows.push_back(std::move(r));
    }
  }

  for (const auto& r : rows) {
    if (r.sense != RowSense::EQ) ++sf.num_slack;
  }
  const std::size_t width = n + sf.num_slack;
  std::size_t slack = n;
  for (auto& r : rows) {
    std::vector<double> full(width, 0.0);
    std::copy(r.coef.begin(), r.coef.end(), full.begin());
    long basis = -1;
    double sign = 1.0;
    if (r.sense != RowSense::EQ) {
      full[slack] = (r.sense == RowSense::LE) ? 1.0 : -1.0;
    }
    if (r.rhs < 0.0) sign = -1.0;
    if (sign < 0.0) {
      for (double& a : full) a = -a;
      r.rhs = -r.rhs;
    }
    if (r.sense != RowSense::EQ) {
      if (full[slack] > 0.0) basis = static_cast<long>(slack);
      ++slack;
    }
    sf.a.push_back(std::move(full));
    sf.b.push_back(r.rhs);
    sf.slack_basis.push_back(basis);
  }

  const double dir = lp.sense == Sense::Maximize ? -1.0 : 1.0;
  sf.cost.assign(width, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double c = dir * lp.objective[j];
    sf.cost[j] = sf.kind[j] == ColumnKind::Reflected ? -c : c;
  }
  return sf;
}

class Tableau {
 public:
  Tableau(const StandardForm& sf, std::size_t num_artificial)
      : rows_(sf.a.size()),
        cols_(sf.num_structural + sf.num_slack + num_artificial),
        first_artificial_(sf.num_structural + sf.num_slack),
        data_(rows_ * (cols_ + 1), 0.0),
        obj_(cols_ + 1, 0.0),
        basis_(rows_, 0),
        is_free_(cols_, false),
        flipped_(cols_, false),
        is_basic_(cols_, false),
        active_(rows_, true) {
    std::size_t art = first_artificial_;
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < sf.a[i].size(); ++j) at(i, j) = sf.a[i][j];
      rhs(i) = sf.b[i];
      if (sf.slack_basis[i] >= 0) {
        basis_[i] = static_cast<std::size_t>(sf.slack_basis[i]);
      } else {
        at(i, art) = 1.0;
        basis_[i] = art++;
      }
      is_basic_[basis_[i]] = true;
    }
    for (std::size_t j = 0; j < sf.num_structural; ++j) {
      is_free_[j] = sf.kind[j] == ColumnKind::Free;
    }
  }

  double& at(std::size_t i, std::size_t j) { return data_[i * (cols_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * (cols_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, cols_); }
  double rhs(std::size_t i) const { return at(i, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t first_artificial() const { return first_artificial_; }
  const std::vector<std::size_t>& basis() const { return basis_; }
  bool flipped(std::size_t j) const { return flipped_[j]; }
  bool active(std::size_t i) const { return active_[i]; }
  bool any_row_dropped() const {
    return std::find(active_.begin(), active_.end(), false) != active_.end();
  }

  // Installs min-form costs and prices out the current basis.
  void set_costs(const std::vector<double>& cost) {
    std::fill(obj_.begin(), obj_.end(), 0.0);
    for (std::size_t j = 0; j < cols_; ++j) {
      double c = j < cost.size() ? cost[j] : 0.0;
      obj_[j] = flipped_[j] ? -c : c;
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!active_[i]) continue;
      const double cb = obj_[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) obj_[j] -= cb * at(i, j);
    }
  }

  double objective_value() const { return -obj_[cols_]; }

  enum class Outcome { Optimal, Unbounded };

  // Bland's rule: lowest-index improving column enters; among tied ratios the
  // lowest-index basic variable leaves. Free columns never leave once basic.
  Outcome optimize(std::size_t column_limit, std::size_t& iterations, std::size_t max_iterations) {
    for (;;) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < column_limit; ++j) {
        if (is_basic_[j]) continue;
        if (obj_[j] < -kCostTol) {
          enter = j;
          break;
        }
        if (is_free_[j] && obj_[j] > kCostTol) {
          flip(j);
          enter = j;
          break;
        }
      }
      if (enter == cols_) return Outcome::Optimal;

      std::size_t leave = rows_;
      double best = 0.0;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (!active_[i] || is_free_[basis_[i]]) continue;
        const double a = at(i, enter);
        if (a <= kPivotTol) continue;
        const double ratio = std::max(rhs(i), 0.0) / a;
        if (leave == rows_ || ratio < best - kTieTol ||
            (ratio <= best + kTieTol && basis_[i] < basis_[leave])) {
          if (leave == rows_ || ratio < best - kTieTol) best = ratio;
          leave = i;
        }
      }
      if (leave == rows_) return Outcome::Unbounded;
      pivot(leave, enter);
      if (++iterations > max_iterations) {
        throw NumericalFailure("simplex iteration limit exceeded");
      }
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    for (std::size_t j = 0; j <= cols_; ++j) at(r, j) /= p;
    at(r, c) = 1.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r || !active_[i]) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
      if (!is_free_[basis_[i]] && rhs(i) < 0.0 && rhs(i) > -kTieTol) rhs(i) = 0.0;
    }
    const double f = obj_[c];
    if (f != 0.0) {
      for (std::size_t j = 0; j <= cols_; ++j) obj_[j] -= f * at(r, j);
      obj_[c] = 0.0;
    }
    is_basic_[basis_[r]] = false;
    basis_[r] = c;
    is_basic_[c] = true;
  }

  // Pivots zero-valued artificials out of the basis; rows that cannot be
  // pivoted are linearly dependent and are dropped.
  void expel_artificials() {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!active_[i] || basis_[i] < first_artificial_) continue;
      std::size_t col = cols_;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (!is_basic_[j] && std::abs(at(i, j)) > kPivotTol) {
          col = j;
          break;
        }
      }
      if (col == cols_) {
        active_[i] = false;
        is_basic_[basis_[i]] = false;
      } else {
        rhs(i) = 0.0;
        pivot(i, col);
      }
    }
  }

 private:
  void flip(std::size_t j) {
    for (std::size_t i = 0; i < rows_; ++i) at(i, j) = -at(i, j);
    obj_[j] = -obj_[j];
    flipped_[j] = !flipped_[j];
  }

  std::size_t rows_;
  std::size_t cols_;
  std::size_t first_artificial_;
  std::vector<double> data_;
  std::vector<double> obj_;
  std::vector<std::size_t> basis_;
  std::vector<bool> is_free_;
  std::vector<bool> flipped_;
  std::vector<bool> is_basic_;
  std::vector<bool> active_;
};

// Solves the square system with partial pivoting; false if singular.
bool solve_dense(std::vector<std::vector<double>> m, std::vector<double> rhs,
                 std::vector<double>& out) {
  const std::size_t n = rhs.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(m[i][k]) > std::abs(m[p][k])) p = i;
    }
    if (std::abs(m[p][k]) < 1e-12) return false;
    std::swap(m[p], m[k]);
    std::swap(rhs[p], rhs[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = m[i][k] / m[k][k];
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
      rhs[i] -= f * rhs[k];
    }
  }
  out.assign(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double s = rhs[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= m[k][j] * out[j];
    out[k] = s / m[k][k];
  }
  return true;
}

}  // namespace

LpSolution solve_lp(const DeterministicLP& lp) {
  validate(lp);
  const StandardForm sf = to_standard_form(lp);
  std::size_t num_artificial = 0;
  for (long s : sf.slack_basis) num_artificial += s < 0 ? 1 : 0;

  Tableau t(sf, num_artificial);
  const std::size_t max_iterations = 50000 + 100 * (t.rows() + t.cols());
  LpSolution result;

  double b_scale = 1.0;
  for (double b : sf.b) b_scale = std::max(b_scale, std::abs(b));

  if (num_artificial > 0) {
    std::vector<double> phase1(t.cols(), 0.0);
    for (std::size_t j = t.first_artificial(); j < t.cols(); ++j) phase1[j] = 1.0;
    t.set_costs(phase1);
    t.optimize(t.cols(), result.iterations, max_iterations);
    if (t.objective_value() > 1e-9 * b_scale) {
      result.status = Status::Infeasible;
      return result;
    }
    t.expel_artificials();
  }

  t.set_costs(sf.cost);
  if (t.optimize(t.first_artificial(), result.iterations, max_iterations) ==
      Tableau::Outcome::Unbounded) {
    result.status = Status::Unbounded;
    return result;
  }

  const std::size_t width = sf.num_structural + sf.num_slack;
  std::vector<double> y(width, 0.0);
  const auto& basis = t.basis();
  for (std::size_t i = 0; i < t.rows(); ++i) {
    if (!t.active(i) || basis[i] >= width) continue;
    y[basis[i]] = t.flipped(basis[i]) ? -t.rhs(i) : t.rhs(i);
  }

  // Recompute basic values from the original data to shed accumulated
  // tableau round-off.
  if (!t.any_row_dropped()) {
    bool basis_structural = true;
    for (std::size_t i = 0; i < t.rows(); ++i) basis_structural &= basis[i] < width;
    if (basis_structural) {
      const std::size_t m = t.rows();
      std::vector<std::vector<double>> bmat(m, std::vector<double>(m, 0.0));
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < m; ++k) bmat[i][k] = sf.a[i][basis[k]];
      }
      std::vector<double> xb;
      if (solve_dense(std::move(bmat), sf.b, xb)) {
        for (std::size_t k = 0; k < m; ++k) y[basis[k]] = xb[k];
      }
    }
  }

  result.x.resize(sf.num_structural);
  for (std::size_t j = 0; j < sf.num_structural; ++j) {
    double v = y[j];
    if (sf.kind[j] != ColumnKind::Free) v = std::max(v, 0.0);
    switch (sf.kind[j]) {
      case ColumnKind::Shifted:
        v = sf.offset[j] + v;
        break;
      case ColumnKind::Reflected:
        v = sf.offset[j] - v;
        break;
      case ColumnKind::Free:
        break;
    }
    const auto& var = lp.variables[j];
    result.x[j] = std::clamp(v, var.lower, var.upper);
  }
  result.status = Status::Optimal;
  result.objective_value = evaluate_objective(lp, result.x);
  return result;
}

}  // namespace robench::lp
