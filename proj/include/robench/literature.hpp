#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "robench/model.hpp"

namespace robench {

class Rng;

// Perturbation sets motivated by statistical arguments, applied to the
// coefficients of one row over the index set `support` (m = |support|).
struct BoxPct {
  double p = 0.01;  // Delta_j = p * |a_j|
};
struct BudgetPct {
  double p = 0.01;
  double gamma_b = 0.0;  // budget threshold, a fraction of m
};
struct CltSet {
  double mu = 0.0;
  double sigma = 1.0;
  double gamma = 2.0;
};
struct HeavyTailSet {
  double mu = 0.0;
  double alpha = 1.5;
  double gamma = 2.0;
};
struct TypicalExpSet {
  double lambda = 1.0;
  double gamma = 2.0;
};
struct TypicalUniformSet {
  double a = 0.0;
  double b = 1.0;
  double gamma = 2.0;
};

using LiteratureKind =
    std::variant<BoxPct, BudgetPct, CltSet, HeavyTailSet, TypicalExpSet, TypicalUniformSet>;

struct LiteratureUncertainty {
  LiteratureKind kind;
  std::vector<std::size_t> support;
  std::vector<double> nominal;  // |a_j| source for BoxPct/BudgetPct, indexed like support
  std::size_t n = 0;            // number of decision variables (for zero_eq)

  std::size_t m() const { return support.size(); }
  double scale() const;  // s = mean |a_j| over the support
};

// Positions with a_j != 0 and |a_j| != 1.
std::vector<std::size_t> qualifying_support(std::span<const double> a);
// A row is eligible for literature uncertainty when more than two positions qualify.
bool qualifies_for_uncertainty(std::span<const double> a);

// Box and budget percentages map onto BoxSet/BudgetSet; the four statistical
// sets become a PolyhedralSet with the two sum rows, component bounds, and an
// interior point. Bounds are evaluated at full precision. Throws InvalidParams.
UncertaintySpec literature_to_polyhedral(const LiteratureUncertainty& u);

// Per-component half-width of the heavy-tail set: gamma * m^(1/alpha - 1).
double heavy_tail_component_halfwidth(const HeavyTailSet& set, std::size_t m);

// Samples one literature set for row `a` (which must qualify). `kind_index`
// selects 0 box, 1 budget, 2 CLT, 3 heavy-tail, 4 exponential, 5 uniform.
LiteratureUncertainty sample_literature(std::span<const double> a, int kind_index, Rng& rng);

}  // namespace robench
