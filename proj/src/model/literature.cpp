#include "robench/literature.hpp"

#include <algorithm>
#include <cmath>

#include "robench/errors.hpp"
#include "robench/rng.hpp"

namespace robench {

namespace {

struct SumBounds {
  double sum_lo, sum_hi;
  double comp_lo, comp_hi;
  double center;  // per-component interior value
};

SumBounds bounds_of(const CltSet& s, double m) {
  if (!(s.sigma > 0.0)) throw InvalidParams("CLT sigma must be positive");
  const double half = s.gamma * s.sigma * std::sqrt(m);
  const double comp = s.gamma * s.sigma / std::sqrt(m);
  return {m * s.mu - half, m * s.mu + half, s.mu - comp, s.mu + comp, s.mu};
}

SumBounds bounds_of(const HeavyTailSet& s, double m) {
  if (!(s.alpha > 1.0 && s.alpha <= 2.0)) throw InvalidParams("heavy-tail alpha must be in (1, 2]");
  const double half = s.gamma * std::pow(m, 1.0 / s.alpha);
  const double comp = s.gamma * std::pow(m, 1.0 / s.alpha - 1.0);
  return {m * s.mu - half, m * s.mu + half, s.mu - comp, s.mu + comp, s.mu};
}

SumBounds bounds_of(const TypicalExpSet& s, double m) {
  if (!(s.lambda > 0.0)) throw InvalidParams("exponential lambda must be positive");
  const double half = std::sqrt(m) / s.lambda * s.gamma;
  return {m / s.lambda - half, m / s.lambda + half, 0.0, lp::kInf, 1.0 / s.lambda};
}

SumBounds bounds_of(const TypicalUniformSet& s, double m) {
  if (!(s.a < s.b)) throw InvalidParams("uniform typical set needs a < b");
  const double mid = (s.a + s.b) / 2.0;
  const double half = s.gamma * std::sqrt(m);
  return {m * mid - half, m * mid + half, s.a, s.b, mid};
}

PolyhedralSet make_polyhedral(const LiteratureUncertainty& u, const SumBounds& sb, double gamma) {
  const std::size_t m = u.m();
  PolyhedralSet p;
  p.support = u.support;
  p.F = {std::vector<double>(m, 1.0), std::vector<double>(m, -1.0)};
  p.g = {sb.sum_hi, -sb.sum_lo};
  p.lower.assign(m, sb.comp_lo);
  p.upper.assign(m, sb.comp_hi);
  const std::size_t n = u.n > 0 ? u.n : u.support.back() + 1;
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::binary_search(u.support.begin(), u.support.end(), j)) p.zero_eq.push_back(j);
  }
  if (gamma > 0.0) p.interior = std::vector<double>(m, sb.center);
  return p;
}

std::vector<double> pct_deltas(const LiteratureUncertainty& u, double p) {
  if (!(p > 0.0)) throw InvalidParams("percentage deviation must be positive");
  if (u.nominal.size() != u.m()) throw InvalidParams("nominal coefficients must cover the support");
  std::vector<double> delta;
  for (double a : u.nominal) delta.push_back(p * std::abs(a));
  return delta;
}

}  // namespace

double LiteratureUncertainty::scale() const {
  if (nominal.empty()) return 0.0;
  double s = 0.0;
  for (double a : nominal) s += std::abs(a);
  return s / static_cast<double>(nominal.size());
}

std::vector<std::size_t> qualifying_support(std::span<const double> a) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] != 0.0 && std::abs(a[j]) != 1.0) out.push_back(j);
  }
  return out;
}

bool qualifies_for_uncertainty(std::span<const double> a) {
  return qualifying_support(a).size() > 2;
}

double heavy_tail_component_halfwidth(const HeavyTailSet& set, std::size_t m) {
  return set.gamma * std::pow(static_cast<double>(m), 1.0 / set.alpha - 1.0);
}

UncertaintySpec literature_to_polyhedral(const LiteratureUncertainty& u) {
  if (u.m() < 2) throw InvalidParams("literature sets need m >= 2");
  if (!std::is_sorted(u.support.begin(), u.support.end()) ||
      std::adjacent_find(u.support.begin(), u.support.end()) != u.support.end()) {
    throw InvalidParams("support must be strictly increasing");
  }
  if (u.n > 0 && u.support.back() >= u.n) throw InvalidParams("support index out of range");
  const double m = static_cast<double>(u.m());
  return std::visit(
      [&](const auto& k) -> UncertaintySpec {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, BoxPct>) {
          return BoxSet{u.support, pct_deltas(u, k.p)};
        } else if constexpr (std::is_same_v<T, BudgetPct>) {
          if (!(k.gamma_b >= 0.0 && k.gamma_b <= m)) throw InvalidParams("budget outside [0, m]");
          return BudgetSet{u.support, pct_deltas(u, k.p), k.gamma_b};
        } else {
          if (!(k.gamma >= 0.0)) throw InvalidParams("robustness level must be non-negative");
          return make_polyhedral(u, bounds_of(k, m), k.gamma);
        }
      },
      u.kind);
}

LiteratureUncertainty sample_literature(std::span<const double> a, int kind_index, Rng& rng) {
  LiteratureUncertainty u;
  u.support = qualifying_support(a);
  if (u.support.size() <= 2) throw UnsampleableRow("row has at most two qualifying coefficients");
  u.n = a.size();
  for (std::size_t j : u.support) u.nominal.push_back(a[j]);
  const double s = u.scale();
  const double m = static_cast<double>(u.m());
  static constexpr double kPcts[] = {0.0001, 0.001, 0.01};
  static constexpr double kFractions[] = {0.4, 0.6, 0.8};
  switch (kind_index) {
    case 0:
      u.kind = BoxPct{kPcts[rng.index(3)]};
      break;
    case 1: {
      const double p = kPcts[rng.index(3)];
      u.kind = BudgetPct{p, kFractions[rng.index(3)] * m};
      break;
    }
    case 2: {
      const double mu = rng.uniform(-0.1 * s, 0.1 * s);
      const double sigma = rng.uniform(0.05 * s, 0.2 * s);
      u.kind = CltSet{mu, sigma, 2.0};
      break;
    }
    case 3:
      u.kind = HeavyTailSet{rng.uniform(-0.1 * s, 0.1 * s), 1.5, 2.0};
      break;
    case 4:
      u.kind = TypicalExpSet{rng.uniform(1.0 / (0.2 * s), 1.0 / (0.05 * s)), 2.0};
      break;
    case 5: {
      double lo = 0.0, hi = 0.0;
      while (!(lo < hi)) {
        lo = rng.uniform(-0.2 * s, 0.2 * s);
        hi = rng.uniform(-0.2 * s, 0.2 * s);
        if (lo > hi) std::swap(lo, hi);
      }
      u.kind = TypicalUniformSet{lo, hi, 2.0};
      break;
    }
    default:
      throw InvalidParams("literature kind index must be in 0..5");
  }
  return u;
}

}  // namespace robench
