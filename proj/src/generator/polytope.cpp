#include <cmath>

#include "robench/errors.hpp"
#include "robench/generator.hpp"

namespace robench {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

std::vector<double> sample_coefficients(std::size_t d, double lo, double hi, Rng& rng) {
  std::vector<double> a(d);
  for (auto& v : a) {
    v = rng.uniform(lo, hi);
    if (std::abs(v) < 0.1) v = v < 0.0 ? -0.1 : 0.1;
    v = round_to(v, 1);
  }
  if (d > 2) {
    std::vector<bool> keep(d);
    std::size_t kept = 0;
    while (kept < 2) {
      kept = 0;
      for (std::size_t j = 0; j < d; ++j) {
        keep[j] = rng.bernoulli(0.5);
        kept += keep[j] ? 1 : 0;
      }
    }
    for (std::size_t j = 0; j < d; ++j) {
      if (!keep[j]) a[j] = 0.0;
    }
  }
  return a;
}

}  // namespace

PolytopeSample feasible_polytope(std::size_t d, std::span<const double> v0, double lo, double hi,
                                 std::size_t m_rows, Rng& rng) {
  if (v0.size() != d) throw InvalidParams("interior point has the wrong dimension");
  if (!(lo < hi)) throw InvalidParams("coefficient range must satisfy l < u");
  PolytopeSample out;
  const double reach = std::abs(hi);
  for (std::size_t i = 0; i < m_rows; ++i) {
    bool done = false;
    for (int attempt = 0; attempt < kMaxRowRetries && !done; ++attempt) {
      auto a = sample_coefficients(d, lo, hi, rng);
      const bool le = rng.bernoulli(0.5);
      const double v = dot(a, v0);
      double l1 = 0.0;
      for (double x : a) l1 += std::abs(x);
      const double width = l1 * reach;
      const double b = round_to(le ? rng.uniform(v, v + width) : rng.uniform(v - width, v), 2);
      if (le ? !(v < b) : !(v > b)) continue;
      out.A.push_back(std::move(a));
      out.b.push_back(b);
      out.senses.push_back(le ? lp::RowSense::LE : lp::RowSense::GE);
      done = true;
    }
    if (!done) {
      throw RetryExhausted("row " + std::to_string(i + 1) + " stayed non-strict after " +
                           std::to_string(kMaxRowRetries) + " draws");
    }
  }
  return out;
}

}  // namespace robench
