#include "robench/model.hpp"

namespace robench {

namespace {

PolyhedralSet nonpositive_box_poly(std::vector<std::size_t> support,
                                   std::vector<std::vector<double>> F, std::vector<double> g,
                                   std::size_t n) {
  PolyhedralSet p;
  const std::size_t s = support.size();
  p.F = std::move(F);
  p.g = std::move(g);
  p.lower.assign(s, -0.2);
  p.upper.assign(s, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    bool on = false;
    for (std::size_t k : support) on = on || k == j;
    if (!on) p.zero_eq.push_back(j);
  }
  p.support = std::move(support);
  return p;
}

}  // namespace

RobustInstance reference_instance_5_16_T011() {
  constexpr std::size_t n = 5;
  RobustInstance inst;
  inst.id = "5_16_T011";
  inst.n = n;
  inst.sense = lp::Sense::Maximize;
  inst.c = {7.7, -1.8, 8.8, -2.9, 2.7};
  inst.objective_uncertainty = budget_from_diagonal({0, 0, 0, 0.5, 0.5}, 0.8);
  inst.x_lower = 0.0;
  inst.x_upper = 1.8;

  inst.rows.push_back(
      {{0, 0, -0.1, 0, -0.7}, lp::RowSense::GE, -1.0, box_from_diagonal({0, 0, 0.1, 0, 0.1})});
  inst.rows.push_back({{-0.2, -1.3, 0, -0.7, -1.3}, lp::RowSense::LE, -2.73, Deterministic{}});
  inst.rows.push_back({{-0.4, 0, 0, 0, -1.1},
                       lp::RowSense::GE,
                       -2.64,
                       nonpositive_box_poly({0, 4}, {{-0.2, -0.2}}, {0.06}, n)});
  inst.rows.push_back(
      {{0, 1.8, -1.4, -0.2, 0.9},
       lp::RowSense::LE,
       6.8,
       nonpositive_box_poly({1, 3, 4}, {{-0.2, 0, -0.1}, {-0.1, 0.1, 0}}, {0.04, 0.01}, n)});
  inst.rows.push_back({{0.3, 1, -1.1, 0, 0},
                       lp::RowSense::GE,
                       -2.76,
                       nonpositive_box_poly({0, 1}, {{-0.1, -0.1}}, {0.04}, n)});

  inst.ground_truth = GroundTruth{{1.8, 1.0231, 1.8, 0.0, 0.8}, 29.6985};
  inst.template_id = TemplateId::parse("011");
  return inst;
}

}  // namespace robench
