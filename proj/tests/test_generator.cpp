#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "robench/errors.hpp"
#include "robench/generator.hpp"
#include "robench/model_json.hpp"
#include "robench/rng.hpp"

using namespace robench;

namespace {

std::string as_jsonl(const std::vector<RobustInstance>& data) {
  std::ostringstream out;
  write_jsonl(out, data);
  return out.str();
}

bool is_rounded(double v, int decimals) {
  const double scaled = v * std::pow(10.0, decimals);
  return std::abs(scaled - std::round(scaled)) < 1e-9;
}

}  // namespace

TEST(Rng, SameSeedSameStream) {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  Rng c(43);
  EXPECT_NE(Rng(42).next_u64(), c.next_u64());
}

TEST(Rng, ChildStreamsIgnoreParentConsumption) {
  Rng parent(7);
  const Rng fresh(7);
  for (int i = 0; i < 10; ++i) parent.next_u64();
  auto c1 = parent.child(3);
  auto c2 = fresh.child(3);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(c1.next_u64(), c2.next_u64());
  EXPECT_NE(fresh.child(3).next_u64(), fresh.child(4).next_u64());
}

TEST(Rng, DrawsStayInRange) {
  Rng r(1);
  std::set<std::size_t> seen;
  for (int i = 0; i < 5000; ++i) {
    const double u = r.uniform01();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const double v = r.uniform(-2.0, 3.0);
    EXPECT_GE(v, -2.0);
    EXPECT_LT(v, 3.0);
    const auto k = r.range(2, 5);
    EXPECT_GE(k, 2u);
    EXPECT_LE(k, 5u);
    seen.insert(r.index(6));
  }
  EXPECT_EQ(seen.size(), 6u);
}

TEST(Rng, RoundingIsHalfAwayFromZero) {
  EXPECT_EQ(round_to(0.25, 1), 0.3);
  EXPECT_EQ(round_to(-0.25, 1), -0.3);
  EXPECT_EQ(round_to(0.125, 2), 0.13);  // exact in binary
  EXPECT_EQ(round_to(-1.234, 2), -1.23);
  EXPECT_FALSE(std::signbit(round_to(-0.04, 1)));
}

TEST(GenConfig, ValidationRejectsBadParameters) {
  GenConfig ok;
  EXPECT_NO_THROW(validate(ok));
  auto bad = ok;
  bad.count = 0;
  EXPECT_THROW(validate(bad), InvalidParams);
  bad = ok;
  bad.n_values = {10};
  EXPECT_THROW(validate(bad), InvalidParams);
  bad = ok;
  bad.types.clear();
  EXPECT_THROW(validate(bad), InvalidParams);
  bad = ok;
  bad.templates.clear();
  EXPECT_THROW(validate(bad), InvalidParams);
}

TEST(FeasiblePolytope, AnchorIsStrictlyInteriorAfterRounding) {
  Rng rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t d = 2 + rep % 6;
    std::vector<double> v0(d);
    for (auto& v : v0) v = rng.uniform(-1.0, 1.0);
    const auto sys = feasible_polytope(d, v0, -2.0, 2.0, d, rng);
    ASSERT_EQ(sys.A.size(), d);
    for (std::size_t i = 0; i < d; ++i) {
      double lhs = 0.0;
      std::size_t nnz = 0;
      for (std::size_t j = 0; j < d; ++j) {
        const double a = sys.A[i][j];
        EXPECT_TRUE(is_rounded(a, 1)) << a;
        if (a != 0.0) {
          EXPECT_GE(std::abs(a), 0.1 - 1e-12);
          ++nnz;
        }
        lhs += a * v0[j];
      }
      EXPECT_TRUE(is_rounded(sys.b[i], 2)) << sys.b[i];
      if (d > 2) {
        EXPECT_GE(nnz, 2u);
      }
      if (sys.senses[i] == lp::RowSense::LE) {
        EXPECT_LT(lhs, sys.b[i]);
      } else {
        EXPECT_GT(lhs, sys.b[i]);
      }
    }
  }
}

TEST(Uncertainty, SamplingRespectsSupportAndRanges) {
  Rng rng(3);
  const std::vector<double> a{1.5, 0.0, -0.7, 2.0};
  const PolyRange range{0.2, -0.1, 0.15};
  for (int rep = 0; rep < 100; ++rep) {
    const auto box =
        std::get<BoxSet>(sample_uncertainty_params(a, UncertaintyKind::Box, range, rng));
    EXPECT_GE(box.support.size(), 2u);
    for (std::size_t j : box.support) EXPECT_NE(a[j], 0.0);
    // Relative deviation in [0.05, 0.2] of |a_j|, floored at 0.1 and kept at 1 dp.
    for (std::size_t k = 0; k < box.support.size(); ++k) {
      const double d = box.delta[k];
      EXPECT_GE(d, 0.1 - 1e-12);
      EXPECT_LE(d, std::max(0.1, round_to(0.2 * std::abs(a[box.support[k]]), 1)) + 1e-12);
      EXPECT_TRUE(is_rounded(d, 1));
    }
    const auto bud =
        std::get<BudgetSet>(sample_uncertainty_params(a, UncertaintyKind::Budget, range, rng));
    EXPECT_GE(bud.gamma, 0.0);
    EXPECT_LE(bud.gamma, static_cast<double>(bud.support.size()));
    const auto poly = std::get<PolyhedralSet>(
        sample_uncertainty_params(a, UncertaintyKind::Polyhedral, range, rng));
    EXPECT_EQ(poly.F.size() + 1, poly.support.size());
    EXPECT_EQ(poly.zero_eq.size() + poly.support.size(), a.size());
    ASSERT_TRUE(poly.interior);
    // The stored interior point satisfies every inequality strictly.
    for (std::size_t r = 0; r < poly.F.size(); ++r) {
      double lhs = 0.0;
      for (std::size_t k = 0; k < poly.support.size(); ++k)
        lhs += poly.F[r][k] * (*poly.interior)[k];
      EXPECT_LT(lhs, poly.g[r]);
    }
    for (std::size_t k = 0; k < poly.support.size(); ++k) {
      EXPECT_EQ(poly.lower[k], range.p_l);
      EXPECT_EQ(poly.upper[k], range.p_u);
    }
  }
  const std::vector<double> sparse{0.0, 3.0, 0.0};
  EXPECT_THROW(sample_uncertainty_params(sparse, UncertaintyKind::Box, range, rng),
               UnsampleableRow);
}

TEST(Assignment, ExactlyOneDeterministicAndEqualityStaysCertain) {
  GenConfig cfg;
  Rng root(5);
  const std::vector<UncertaintyKind> types = cfg.types;
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng = root.child(i);
    const auto nominal = generate_nominal(cfg, 2 + i % 4, rng);
    const auto asg = assign_uncertainty(nominal, types, false, rng);
    std::size_t det = asg.objective == UncertaintyKind::Deterministic ? 1 : 0;
    for (auto k : asg.rows) det += k == UncertaintyKind::Deterministic;
    EXPECT_EQ(det, 1u);
    if (nominal.equality_row) {
      EXPECT_EQ(asg.rows[*nominal.equality_row], UncertaintyKind::Deterministic);
    }
  }
}

TEST(Dataset, SameConfigGivesByteIdenticalJsonl) {
  GenConfig cfg;
  cfg.seed = 99;
  cfg.count = 16;
  EXPECT_EQ(as_jsonl(generate_dataset(cfg)), as_jsonl(generate_dataset(cfg)));
  auto other = cfg;
  other.seed = 100;
  EXPECT_NE(as_jsonl(generate_dataset(cfg)), as_jsonl(generate_dataset(other)));
}

TEST(Dataset, ParallelMatchesSerial) {
  GenConfig cfg;
  cfg.seed = 8;
  cfg.count = 24;
  GenStats ps, ss;
  const auto par = generate_dataset(cfg, &ps);
  const auto ser = generate_dataset_serial(cfg, &ss);
  EXPECT_EQ(as_jsonl(par), as_jsonl(ser));
  EXPECT_EQ(ps.candidates, ss.candidates);
  for (int k = 0; k < 7; ++k) EXPECT_EQ(ps.rejected[k], ss.rejected[k]);
}

TEST(Dataset, SmallerCountIsAPrefix) {
  GenConfig cfg;
  cfg.seed = 12;
  cfg.count = 8;
  const auto small = generate_dataset(cfg);
  cfg.count = 20;
  const auto big = generate_dataset(cfg);
  for (std::size_t i = 0; i < small.size(); ++i) EXPECT_EQ(small[i], big[i]);
}

TEST(Dataset, StreamYieldsTheSameSequence) {
  GenConfig cfg;
  cfg.seed = 21;
  cfg.count = 6;
  const auto data = generate_dataset(cfg);
  InstanceStream stream(cfg);
  for (const auto& inst : data) EXPECT_EQ(stream.next(), inst);
}

TEST(Dataset, EveryInstancePassesIndependentFilters) {
  GenConfig cfg;
  cfg.seed = 4;
  cfg.count = 40;
  for (const auto& inst : generate_dataset(cfg)) {
    std::string why;
    EXPECT_TRUE(oracle::passes_filters(inst, &why)) << inst.id << ": " << why;
    EXPECT_NO_THROW(validate_generated(inst));
    EXPECT_TRUE(check_filters(inst).passed()) << inst.id;
    EXPECT_FALSE(inst.latex.empty());
    EXPECT_FALSE(inst.nl_extension.empty());
    EXPECT_TRUE(is_rounded(inst.x_upper, 1));
    for (const auto& r : inst.rows) {
      EXPECT_TRUE(is_rounded(r.b, 2));
      for (double a : r.a) EXPECT_TRUE(is_rounded(a, 1));
    }
  }
}

TEST(Dataset, RestrictionsOnTypesTemplatesAndSizes) {
  GenConfig cfg;
  cfg.seed = 6;
  cfg.count = 20;
  cfg.n_values = {3};
  cfg.types = {UncertaintyKind::Budget};
  cfg.templates = {TemplateId::parse("101"), TemplateId::parse("010")};
  for (const auto& inst : generate_dataset(cfg)) {
    EXPECT_EQ(inst.n, 3u);
    const auto code = inst.template_id->code();
    EXPECT_TRUE(code == "101" || code == "010") << code;
    auto ok = [](const UncertaintySpec& s) {
      return is_deterministic(s) || std::holds_alternative<BudgetSet>(s);
    };
    EXPECT_TRUE(ok(inst.objective_uncertainty));
    for (const auto& r : inst.rows) EXPECT_TRUE(ok(r.uncertainty));
  }
}

TEST(Dataset, HardModeMeetsAllStructuralConditions) {
  GenConfig cfg;
  cfg.seed = 9;
  cfg.count = 16;
  cfg.hard_mode = true;
  for (const auto& inst : generate_dataset(cfg)) {
    std::string why;
    EXPECT_TRUE(oracle::passes_hard_conditions(inst, &why)) << inst.id << ": " << why;
    EXPECT_TRUE(oracle::passes_filters(inst, &why)) << inst.id << ": " << why;
    EXPECT_TRUE(check_hard_conditions(inst).passed());
  }
}

TEST(Dataset, DegeneracyRule) {
  EXPECT_TRUE(is_degenerate(std::vector<double>{0.0, 5.0, 5.0}, 0.0, 5.0));
  EXPECT_TRUE(is_degenerate(std::vector<double>{1e-7, 5.0}, 0.0, 5.0));
  EXPECT_FALSE(is_degenerate(std::vector<double>{0.0, 2.5}, 0.0, 5.0));
}

TEST(Dataset, CandidateCapRaisesGenerationStalled) {
  GenConfig cfg;
  cfg.seed = 2;
  cfg.count = 30;
  cfg.max_candidates = 20;
  cfg.render = false;
  EXPECT_THROW(generate_dataset(cfg), GenerationStalled);
  EXPECT_THROW(generate_dataset_serial(cfg), GenerationStalled);
  cfg.max_candidates = 0;
  EXPECT_EQ(generate_dataset(cfg).size(), 30u);
}
