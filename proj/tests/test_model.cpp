#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "robench/errors.hpp"
#include "robench/generator.hpp"
#include "robench/literature.hpp"
#include "robench/model.hpp"
#include "robench/model_json.hpp"
#include "robench/rng.hpp"

using namespace robench;

TEST(TemplateId, CodesAndIndicesAgree) {
  const auto all = TemplateId::all();
  ASSERT_EQ(all.size(), 8u);
  for (int i = 0; i < 8; ++i) {
    EXPECT_EQ(all[i].index(), i);
    EXPECT_EQ(TemplateId::from_index(i), all[i]);
    EXPECT_EQ(TemplateId::parse(all[i].code()), all[i]);
    EXPECT_EQ(TemplateId::parse("T" + all[i].code()), all[i]);
  }
  const auto t = TemplateId::parse("011");
  EXPECT_FALSE(t.explicit_worst_case);
  EXPECT_TRUE(t.vector_notation);
  EXPECT_TRUE(t.type_labels);
  EXPECT_EQ(t.index(), 3);
  EXPECT_ANY_THROW(TemplateId::parse("012"));
  EXPECT_ANY_THROW(TemplateId::parse("01"));
  EXPECT_ANY_THROW(TemplateId::from_index(8));
}

TEST(ReferenceInstance, EncodesTheSampleData) {
  const auto inst = reference_instance_5_16_T011();
  EXPECT_NO_THROW(validate(inst));
  EXPECT_EQ(inst.id, "5_16_T011");
  EXPECT_EQ(inst.n, 5u);
  EXPECT_EQ(inst.sense, lp::Sense::Maximize);
  EXPECT_EQ(inst.c, (std::vector<double>{7.7, -1.8, 8.8, -2.9, 2.7}));
  ASSERT_EQ(inst.rows.size(), 5u);
  EXPECT_EQ(inst.x_lower, 0.0);
  EXPECT_EQ(inst.x_upper, 1.8);
  EXPECT_EQ(inst.num_uncertain_rows(), 5u);  // objective included

  const auto& obj = std::get<BudgetSet>(inst.objective_uncertainty);
  EXPECT_EQ(obj.support, (std::vector<std::size_t>{3, 4}));
  EXPECT_EQ(obj.delta, (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(obj.gamma, 0.8);

  const auto& r1 = std::get<BoxSet>(inst.rows[0].uncertainty);
  EXPECT_EQ(r1.support, (std::vector<std::size_t>{2, 4}));
  EXPECT_EQ(inst.rows[0].sense, lp::RowSense::GE);
  EXPECT_EQ(inst.rows[0].b, -1.0);
  EXPECT_TRUE(is_deterministic(inst.rows[1].uncertainty));
  EXPECT_EQ(inst.rows[1].b, -2.73);

  const auto& r4 = std::get<PolyhedralSet>(inst.rows[3].uncertainty);
  EXPECT_EQ(r4.zero_eq, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(inst.rows[3].b, 6.8);

  ASSERT_TRUE(inst.ground_truth);
  EXPECT_EQ(inst.ground_truth->f_star, 29.6985);
  EXPECT_EQ(inst.ground_truth->x_star, (std::vector<double>{1.8, 1.0231, 1.8, 0, 0.8}));
}

TEST(Validate, RejectsBrokenInvariants) {
  auto base = reference_instance_5_16_T011();
  {
    auto inst = base;
    inst.c.pop_back();
    EXPECT_THROW(validate(inst), InvalidInstance);
  }
  {
    auto inst = base;
    inst.x_upper = -1.0;
    EXPECT_THROW(validate(inst), InvalidInstance);
  }
  {
    auto inst = base;
    std::get<BoxSet>(inst.rows[0].uncertainty).delta[0] = -0.1;
    EXPECT_THROW(validate(inst), InvalidInstance);
  }
  {
    auto inst = base;
    std::get<BudgetSet>(inst.objective_uncertainty).gamma = 3.0;  // above |S| = 2
    EXPECT_THROW(validate(inst), InvalidInstance);
  }
  {
    auto inst = base;
    std::get<BoxSet>(inst.rows[0].uncertainty).support = {4, 2};
    EXPECT_THROW(validate(inst), InvalidInstance);
  }
  {
    auto inst = base;
    inst.rows[2].a.push_back(1.0);
    EXPECT_THROW(validate(inst), InvalidInstance);
  }
}

TEST(Diagonal, ZeroEntriesLeaveTheSupport) {
  const auto box = box_from_diagonal({0, 0, 0.1, 0, 0.1});
  EXPECT_EQ(box.support, (std::vector<std::size_t>{2, 4}));
  EXPECT_EQ(box.delta, (std::vector<double>{0.1, 0.1}));
  const auto bud = budget_from_diagonal({0, 0, 0, 0.5, 0.5}, 0.8);
  EXPECT_EQ(bud.support, (std::vector<std::size_t>{3, 4}));
  EXPECT_EQ(bud.gamma, 0.8);
}

TEST(InnerDirection, FollowsRowAndObjectiveSense) {
  EXPECT_EQ(inner_direction(lp::RowSense::LE), InnerDirection::Max);
  EXPECT_EQ(inner_direction(lp::RowSense::GE), InnerDirection::Min);
  EXPECT_EQ(inner_direction(lp::Sense::Minimize), InnerDirection::Max);
  EXPECT_EQ(inner_direction(lp::Sense::Maximize), InnerDirection::Min);
}

TEST(Json, ReferenceInstanceRoundTrips) {
  const auto inst = reference_instance_5_16_T011();
  const auto back = instance_from_json(nlohmann::json::parse(to_json(inst).dump()));
  EXPECT_EQ(back, inst);
}

TEST(Json, GeneratedDatasetRoundTripsThroughJsonl) {
  GenConfig cfg;
  cfg.seed = 31;
  cfg.count = 24;
  const auto data = generate_dataset(cfg);
  std::stringstream ss;
  write_jsonl(ss, data);
  const auto back = read_jsonl(ss);
  ASSERT_EQ(back.size(), data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    EXPECT_EQ(back[i], data[i]) << data[i].id;
    EXPECT_NO_THROW(validate(back[i]));
    EXPECT_EQ(to_jsonl_line(back[i]), to_jsonl_line(data[i]));
  }
}

TEST(Json, InfinitePolyhedralBoundsUseNull) {
  PolyhedralSet p;
  p.support = {0, 1};
  p.F = {{1.0, 1.0}};
  p.g = {1.0};
  p.lower = {0.0, 0.0};
  p.upper = {lp::kInf, lp::kInf};
  const auto j = to_json(UncertaintySpec{p});
  EXPECT_NE(j.dump().find("null"), std::string::npos);
  EXPECT_EQ(std::get<PolyhedralSet>(uncertainty_from_json(j)), p);
}

TEST(Json, SchemaErrorsBecomeInvalidInstance) {
  auto j = to_json(reference_instance_5_16_T011());
  j.erase("c");
  EXPECT_THROW(instance_from_json(j), InvalidInstance);
  auto k = to_json(reference_instance_5_16_T011());
  k["rows"][0]["uncertainty"]["kind"] = "ellipsoid";
  EXPECT_THROW(instance_from_json(k), InvalidInstance);
}

// Half-widths below are computed by hand from the set definitions.

TEST(Literature, HeavyTailComponentHalfWidth) {
  const HeavyTailSet ht{-0.8139, 1.5, 2.0};
  const double expected = 2.0 * std::pow(2.0, -1.0 / 3.0);
  EXPECT_NEAR(expected, 1.5874010519681994, 1e-15);
  EXPECT_NEAR(heavy_tail_component_halfwidth(ht, 2), expected, 1e-9);

  LiteratureUncertainty u{ht, {0, 1}, {}, 2};
  const auto p = std::get<PolyhedralSet>(literature_to_polyhedral(u));
  ASSERT_EQ(p.lower.size(), 2u);
  EXPECT_NEAR(p.upper[0] - (-0.8139), expected, 1e-9);
  EXPECT_NEAR(-0.8139 - p.lower[1], expected, 1e-9);
  // Sum range m mu +- Gamma m^(1/alpha).
  const double sum_half = 2.0 * std::cbrt(4.0);
  EXPECT_NEAR(p.g[0], 2 * -0.8139 + sum_half, 1e-12);
  EXPECT_NEAR(-p.g[1], 2 * -0.8139 - sum_half, 1e-12);
  EXPECT_TRUE(p.zero_eq.empty());
}

TEST(Literature, CltAndTypicalSetBounds) {
  {
    LiteratureUncertainty u{CltSet{0.1, 0.5, 2.0}, {0, 2, 3}, {}, 5};
    const auto p = std::get<PolyhedralSet>(literature_to_polyhedral(u));
    EXPECT_NEAR(p.g[0], 0.3 + 2.0 * 0.5 * std::sqrt(3.0), 1e-12);
    EXPECT_NEAR(-p.g[1], 0.3 - 2.0 * 0.5 * std::sqrt(3.0), 1e-12);
    EXPECT_EQ(p.zero_eq, (std::vector<std::size_t>{1, 4}));
  }
  {
    LiteratureUncertainty u{TypicalExpSet{4.0, 2.0}, {0, 1, 2, 3}, {}, 4};
    const auto p = std::get<PolyhedralSet>(literature_to_polyhedral(u));
    EXPECT_NEAR(p.g[0], 1.0 + 2.0 / 4.0 * 2.0, 1e-12);
    EXPECT_NEAR(-p.g[1], 1.0 - 2.0 / 4.0 * 2.0, 1e-12);
    EXPECT_EQ(p.lower, std::vector<double>(4, 0.0));
  }
  {
    LiteratureUncertainty u{TypicalUniformSet{-0.2, 0.4, 2.0}, {1, 2}, {}, 3};
    const auto p = std::get<PolyhedralSet>(literature_to_polyhedral(u));
    EXPECT_NEAR(p.g[0], 2 * 0.1 + 2.0 * std::sqrt(2.0), 1e-12);
    EXPECT_EQ(p.lower, (std::vector<double>{-0.2, -0.2}));
    EXPECT_EQ(p.upper, (std::vector<double>{0.4, 0.4}));
  }
}

TEST(Literature, PercentageSetsScaleNominals) {
  LiteratureUncertainty box{BoxPct{0.01}, {0, 1, 2}, {2.5, -4.0, 0.5}, 3};
  const auto b = std::get<BoxSet>(literature_to_polyhedral(box));
  EXPECT_NEAR(b.delta[1], 0.04, 1e-15);
  LiteratureUncertainty bud{BudgetPct{0.001, 1.8}, {0, 1, 2}, {2.5, -4.0, 0.5}, 3};
  const auto g = std::get<BudgetSet>(literature_to_polyhedral(bud));
  EXPECT_EQ(g.gamma, 1.8);
  EXPECT_NEAR(g.delta[0], 0.0025, 1e-15);
}

TEST(Literature, ParameterChecks) {
  EXPECT_THROW(literature_to_polyhedral({HeavyTailSet{0, 2.5, 2}, {0, 1}, {}, 2}), InvalidParams);
  EXPECT_THROW(literature_to_polyhedral({CltSet{0, 0, 2}, {0, 1}, {}, 2}), InvalidParams);
  EXPECT_THROW(literature_to_polyhedral({TypicalUniformSet{1, 1, 2}, {0, 1}, {}, 2}),
               InvalidParams);
  EXPECT_THROW(literature_to_polyhedral({CltSet{0, 1, 2}, {0}, {}, 2}), InvalidParams);
}

TEST(Literature, RowSelectionRule) {
  const std::vector<double> a{0, 1, 2.5, -1, 0.3, 4};
  EXPECT_EQ(qualifying_support(a), (std::vector<std::size_t>{2, 4, 5}));
  EXPECT_TRUE(qualifies_for_uncertainty(a));
  EXPECT_FALSE(qualifies_for_uncertainty(std::vector<double>{2, 3, 1, -1}));
}

TEST(Literature, SampledParametersStayInRange) {
  const std::vector<double> a{2.0, -3.0, 4.0, 1.0};
  const double s = 3.0;
  Rng rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    const int kind = rep % 6;
    const auto u = sample_literature(a, kind, rng);
    EXPECT_EQ(u.support, (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_NEAR(u.scale(), s, 1e-12);
    EXPECT_NO_THROW(literature_to_polyhedral(u));
    if (const auto* h = std::get_if<HeavyTailSet>(&u.kind)) {
      EXPECT_GE(h->mu, -0.1 * s);
      EXPECT_LT(h->mu, 0.1 * s);
      EXPECT_EQ(h->alpha, 1.5);
      EXPECT_EQ(h->gamma, 2.0);
    }
    if (const auto* c = std::get_if<CltSet>(&u.kind)) {
      EXPECT_GE(c->sigma, 0.05 * s);
      EXPECT_LT(c->sigma, 0.2 * s);
    }
    if (const auto* e = std::get_if<TypicalExpSet>(&u.kind)) {
      EXPECT_GE(e->lambda, 1.0 / (0.2 * s));
      EXPECT_LE(e->lambda, 1.0 / (0.05 * s));
    }
    if (const auto* t = std::get_if<TypicalUniformSet>(&u.kind)) {
      EXPECT_LT(t->a, t->b);
      EXPECT_GE(t->a, -0.2 * s);
      EXPECT_LE(t->b, 0.2 * s);
    }
    if (const auto* b = std::get_if<BudgetPct>(&u.kind)) {
      const double f = b->gamma_b / 3.0;
      EXPECT_TRUE(std::abs(f - 0.4) < 1e-12 || std::abs(f - 0.6) < 1e-12 ||
                  std::abs(f - 0.8) < 1e-12);
    }
  }
  EXPECT_THROW(sample_literature(std::vector<double>{2, 3, 1}, 0, rng), UnsampleableRow);
}
