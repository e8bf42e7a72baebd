#include "oracles.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <regex>

namespace oracle {

using robench::BoxSet;
using robench::BudgetSet;
using robench::PolyhedralSet;
using robench::lp::DeterministicLP;
using robench::lp::RowSense;

std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> A,
                                                std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    }
    if (std::abs(A[piv][col]) < 1e-12) return std::nullopt;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = A[r][col] / A[col][col];
      if (f == 0.0) continue;
      for (std::size_t k = col; k < n; ++k) A[r][k] -= f * A[col][k];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
  return x;
}

namespace {

// Calls fn for every k-subset of {0..n-1}, in lexicographic order.
void for_each_subset(std::size_t n, std::size_t k,
                     const std::function<void(const std::vector<std::size_t>&)>& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

bool satisfies(const Halfspaces& p, const std::vector<double>& z, double tol) {
  for (std::size_t r = 0; r < p.G.size(); ++r) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) lhs += p.G[r][j] * z[j];
    if (lhs > p.h[r] + tol) return false;
  }
  return true;
}

}  // namespace

std::vector<std::vector<double>> enumerate_vertices(const Halfspaces& p, std::size_t d,
                                                    double tol) {
  std::vector<std::vector<double>> out;
  if (d == 0) {
    out.push_back({});
    return out;
  }
  for_each_subset(p.G.size(), d, [&](const std::vector<std::size_t>& rows) {
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (auto r : rows) {
      A.push_back(p.G[r]);
      b.push_back(p.h[r]);
    }
    auto z = solve_square(A, b);
    if (!z || !satisfies(p, *z, tol)) return;
    for (const auto& v : out) {
      double diff = 0.0;
      for (std::size_t j = 0; j < d; ++j) diff = std::max(diff, std::abs(v[j] - (*z)[j]));
      if (diff < 1e-9) return;
    }
    out.push_back(*z);
  });
  return out;
}

std::optional<double> vertex_lp_value(const DeterministicLP& lp, double tol) {
  const std::size_t n = lp.variables.size();
  Halfspaces p;
  for (const auto& c : lp.constraints) {
    if (c.sense != RowSense::GE) {
      p.G.push_back(c.coefficients);
      p.h.push_back(c.rhs);
    }
    if (c.sense != RowSense::LE) {
      std::vector<double> neg(c.coefficients);
      for (auto& v : neg) v = -v;
      p.G.push_back(neg);
      p.h.push_back(-c.rhs);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    assert(std::isfinite(lp.variables[j].lower) && std::isfinite(lp.variables[j].upper));
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    p.G.push_back(e);
    p.h.push_back(lp.variables[j].upper);
    e[j] = -1.0;
    p.G.push_back(e);
    p.h.push_back(-lp.variables[j].lower);
  }
  std::optional<double> best;
  const bool maximize = lp.sense == robench::lp::Sense::Maximize;
  for (const auto& z : enumerate_vertices(p, n, tol)) {
    double v = 0.0;
    for (std::size_t j = 0; j < n; ++j) v += lp.objective[j] * z[j];
    if (!best || (maximize ? v > *best : v < *best)) best = v;
  }
  return best;
}

double worst_case_value(const robench::UncertaintySpec& spec, const std::vector<double>& a,
                        const std::vector<double>& x, bool maximize) {
  double nominal = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) nominal += a[j] * x[j];
  const double s = maximize ? 1.0 : -1.0;
  if (const auto* box = std::get_if<BoxSet>(&spec)) {
    double pen = 0.0;
    for (std::size_t k = 0; k < box->support.size(); ++k) {
      pen += box->delta[k] * std::abs(x[box->support[k]]);
    }
    return nominal + s * pen;
  }
  if (const auto* bud = std::get_if<BudgetSet>(&spec)) {
    std::vector<double> w;
    for (std::size_t k = 0; k < bud->support.size(); ++k) {
      w.push_back(bud->delta[k] * std::abs(x[bud->support[k]]));
    }
    std::sort(w.rbegin(), w.rend());
    double left = bud->gamma;
    double pen = 0.0;
    for (double v : w) {
      const double take = std::min(1.0, std::max(0.0, left));
      pen += take * v;
      left -= take;
    }
    return nominal + s * pen;
  }
  if (std::holds_alternative<PolyhedralSet>(spec)) {
    double best = maximize ? -INFINITY : INFINITY;
    for (const auto& zeta : uncertainty_vertices(spec, a.size())) {
      double v = nominal;
      for (std::size_t j = 0; j < a.size(); ++j) v += zeta[j] * x[j];
      best = maximize ? std::max(best, v) : std::min(best, v);
    }
    return best;
  }
  return nominal;
}

std::vector<std::vector<double>> uncertainty_vertices(const robench::UncertaintySpec& spec,
                                                      std::size_t n) {
  std::vector<std::vector<double>> out;
  const auto& support = robench::support_of(spec);
  const std::size_t m = support.size();
  auto lift = [&](const std::vector<double>& local) {
    std::vector<double> full(n, 0.0);
    for (std::size_t k = 0; k < m; ++k) full[support[k]] = local[k];
    out.push_back(full);
  };
  if (const auto* box = std::get_if<BoxSet>(&spec)) {
    for (std::size_t mask = 0; mask < (1u << m); ++mask) {
      std::vector<double> z(m);
      for (std::size_t k = 0; k < m; ++k) z[k] = (mask >> k & 1u) ? box->delta[k] : -box->delta[k];
      lift(z);
    }
  } else if (const auto* bud = std::get_if<BudgetSet>(&spec)) {
    // Vertices of {|u|_inf <= 1, |u|_1 <= gamma} scaled by delta: floor(gamma)
    // unit coordinates plus one coordinate at the fractional remainder.
    const double g = std::min(bud->gamma, static_cast<double>(m));
    const std::size_t k_full = static_cast<std::size_t>(std::floor(g + 1e-12));
    const double frac = g - static_cast<double>(k_full);
    const bool has_frac = frac > 1e-12 && k_full < m;
    const std::size_t nz = k_full + (has_frac ? 1 : 0);
    if (nz == 0) {
      lift(std::vector<double>(m, 0.0));
      return out;
    }
    for_each_subset(m, nz, [&](const std::vector<std::size_t>& chosen) {
      // Which chosen coordinate carries the fractional part.
      const std::size_t frac_choices = has_frac ? nz : 1;
      for (std::size_t f = 0; f < frac_choices; ++f) {
        for (std::size_t mask = 0; mask < (1u << nz); ++mask) {
          std::vector<double> z(m, 0.0);
          for (std::size_t c = 0; c < nz; ++c) {
            const double mag = (has_frac && c == f) ? frac : 1.0;
            z[chosen[c]] = ((mask >> c & 1u) ? 1.0 : -1.0) * mag * bud->delta[chosen[c]];
          }
          lift(z);
        }
      }
    });
  } else if (const auto* poly = std::get_if<PolyhedralSet>(&spec)) {
    Halfspaces p;
    for (std::size_t r = 0; r < poly->F.size(); ++r) {
      p.G.push_back(poly->F[r]);
      p.h.push_back(poly->g[r]);
    }
    for (std::size_t k = 0; k < m; ++k) {
      assert(std::isfinite(poly->lower[k]) && std::isfinite(poly->upper[k]));
      std::vector<double> e(m, 0.0);
      e[k] = 1.0;
      p.G.push_back(e);
      p.h.push_back(poly->upper[k]);
      e[k] = -1.0;
      p.G.push_back(e);
      p.h.push_back(-poly->lower[k]);
    }
    for (const auto& z : enumerate_vertices(p, m)) lift(z);
  } else {
    out.push_back(std::vector<double>(n, 0.0));
  }
  return out;
}

DeterministicLP scenario_lp(const robench::RobustInstance& inst) {
  DeterministicLP lp;
  lp.sense = inst.sense;
  for (std::size_t j = 0; j < inst.n; ++j) {
    lp.add_variable("x" + std::to_string(j + 1), inst.x_lower, inst.x_upper, inst.c[j]);
  }
  for (const auto& row : inst.rows) {
    for (const auto& zeta : uncertainty_vertices(row.uncertainty, inst.n)) {
      std::vector<double> coef(inst.n);
      for (std::size_t j = 0; j < inst.n; ++j) coef[j] = row.a[j] + zeta[j];
      lp.add_constraint(coef, row.sense, row.b);
    }
  }
  if (!robench::is_deterministic(inst.objective_uncertainty)) {
    const bool maximize = inst.sense == robench::lp::Sense::Maximize;
    std::fill(lp.objective.begin(), lp.objective.end(), 0.0);
    const std::size_t t = lp.add_variable("t", -robench::lp::kInf, robench::lp::kInf, 1.0);
    for (const auto& zeta : uncertainty_vertices(inst.objective_uncertainty, inst.n)) {
      std::vector<double> coef(t + 1, 0.0);
      for (std::size_t j = 0; j < inst.n; ++j) coef[j] = inst.c[j] + zeta[j];
      coef[t] = -1.0;
      // max t with t <= (c + zeta)^T x, or min t with t >= (c + zeta)^T x.
      lp.add_constraint(coef, maximize ? RowSense::GE : RowSense::LE, 0.0);
    }
  }
  return lp;
}

namespace {

// Removes `_{...}`/`^{...}` groups with balanced braces and `_c`/`^c` singles.
std::string strip_scripts(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((s[i] == '_' || s[i] == '^') && i + 1 < s.size()) {
      if (s[i + 1] == '{') {
        int depth = 0;
        std::size_t j = i + 1;
        for (; j < s.size(); ++j) {
          if (s[j] == '{') ++depth;
          if (s[j] == '}' && --depth == 0) break;
        }
        i = j;
        continue;
      }
      ++i;  // single-character script
      continue;
    }
    out += s[i];
  }
  return out;
}

}  // namespace

std::vector<double> latex_numbers(const std::string& latex) {
  std::string s = strip_scripts(latex);
  s = std::regex_replace(s, std::regex(R"(\\\{[0-9,\s]*\\\})"), " ");
  std::vector<double> out;
  static const std::regex number(R"(-?\d+(\.\d+)?)");
  for (auto it = std::sregex_iterator(s.begin(), s.end(), number); it != std::sregex_iterator();
       ++it) {
    out.push_back(std::stod(it->str()));
  }
  return out;
}

std::vector<double> stored_numbers(const robench::RobustInstance& inst) {
  std::vector<double> out(inst.c.begin(), inst.c.end());
  auto add_spec = [&](const robench::UncertaintySpec& spec) {
    if (const auto* box = std::get_if<BoxSet>(&spec)) {
      out.insert(out.end(), box->delta.begin(), box->delta.end());
    } else if (const auto* bud = std::get_if<BudgetSet>(&spec)) {
      out.insert(out.end(), bud->delta.begin(), bud->delta.end());
      out.push_back(bud->gamma);
    } else if (const auto* poly = std::get_if<PolyhedralSet>(&spec)) {
      for (const auto& row : poly->F) out.insert(out.end(), row.begin(), row.end());
      out.insert(out.end(), poly->g.begin(), poly->g.end());
      for (double v : poly->lower) {
        if (std::isfinite(v)) out.push_back(v);
      }
      for (double v : poly->upper) {
        if (std::isfinite(v)) out.push_back(v);
      }
    }
  };
  add_spec(inst.objective_uncertainty);
  for (const auto& row : inst.rows) {
    out.insert(out.end(), row.a.begin(), row.a.end());
    out.push_back(row.b);
    add_spec(row.uncertainty);
  }
  out.push_back(inst.x_lower);
  out.push_back(inst.x_upper);
  return out;
}

}  // namespace oracle

namespace oracle {

namespace {

bool fail_with(std::string* why, const std::string& msg) {
  if (why) *why = msg;
  return false;
}

}  // namespace

bool passes_filters(const robench::RobustInstance& inst, std::string* why) {
  std::size_t deterministic = robench::is_deterministic(inst.objective_uncertainty) ? 1 : 0;
  for (const auto& r : inst.rows) deterministic += robench::is_deterministic(r.uncertainty);
  if (deterministic == inst.rows.size() + 1) return fail_with(why, "all deterministic");
  if (deterministic != 1) return fail_with(why, "deterministic rows != 1");
  if (!inst.ground_truth) return fail_with(why, "no ground truth");

  const auto scen = robench::lp::solve_lp(scenario_lp(inst));
  if (!scen.optimal()) return fail_with(why, "scenario LP not optimal");
  const double f = inst.ground_truth->f_star;
  if (std::abs(*scen.objective_value - f) > 1e-6 * std::max(1.0, std::abs(f))) {
    return fail_with(why, "scenario optimum differs from f*");
  }
  const auto& x = inst.ground_truth->x_star;
  // x* must be robust feasible and attain f* under the worst-case objective.
  for (std::size_t j = 0; j < inst.n; ++j) {
    if (x[j] < inst.x_lower - 1e-7 || x[j] > inst.x_upper + 1e-7) {
      return fail_with(why, "x* outside bounds");
    }
  }
  for (const auto& row : inst.rows) {
    const bool le = row.sense == robench::lp::RowSense::LE;
    const double wc = worst_case_value(row.uncertainty, row.a, x, le);
    const double alt = worst_case_value(row.uncertainty, row.a, x, !le);
    if (row.sense == robench::lp::RowSense::LE && wc > row.b + 1e-7) {
      return fail_with(why, "x* violates a <= row");
    }
    if (row.sense == robench::lp::RowSense::GE && wc < row.b - 1e-7) {
      return fail_with(why, "x* violates a >= row");
    }
    if (row.sense == robench::lp::RowSense::EQ &&
        (std::abs(wc - row.b) > 1e-7 || std::abs(alt - row.b) > 1e-7)) {
      return fail_with(why, "x* violates an equality row");
    }
  }
  const bool obj_max = inst.sense == robench::lp::Sense::Minimize;
  const double fx = worst_case_value(inst.objective_uncertainty, inst.c, x, obj_max);
  if (std::abs(fx - f) > 1e-6 * std::max(1.0, std::abs(f))) {
    return fail_with(why, "x* does not attain f*");
  }
  bool interior = false;
  for (double v : x) {
    interior = interior || (std::abs(v - inst.x_lower) > 1e-6 && std::abs(v - inst.x_upper) > 1e-6);
  }
  if (!interior) return fail_with(why, "x* degenerate");
  return true;
}

bool passes_hard_conditions(const robench::RobustInstance& inst, std::string* why) {
  if (inst.sense != robench::lp::Sense::Maximize) return fail_with(why, "not maximize");
  if (!(inst.x_lower < 0.0 && inst.x_upper > 0.0)) return fail_with(why, "variables not signed");
  auto ok = [](const robench::UncertaintySpec& s) {
    return std::holds_alternative<robench::Deterministic>(s) ||
           std::holds_alternative<robench::PolyhedralSet>(s);
  };
  if (!ok(inst.objective_uncertainty)) return fail_with(why, "objective set not polyhedral");
  bool le = false;
  bool ge = false;
  for (const auto& r : inst.rows) {
    if (!ok(r.uncertainty)) return fail_with(why, "row set not polyhedral");
    if (std::holds_alternative<robench::Deterministic>(r.uncertainty)) continue;
    le = le || r.sense == robench::lp::RowSense::LE;
    ge = ge || r.sense == robench::lp::RowSense::GE;
  }
  if (!(le && ge)) return fail_with(why, "uncertain rows lack both senses");
  return true;
}

}  // namespace oracle
