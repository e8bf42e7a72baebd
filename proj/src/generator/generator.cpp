#include "robench/generator.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>

#include "robench/errors.hpp"
#include "robench/reformulate.hpp"
#include "robench/render.hpp"

namespace robench {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

std::vector<std::size_t> sample_support(std::span<const double> a, Rng& rng) {
  std::vector<std::size_t> nz;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] != 0.0) nz.push_back(j);
  }
  if (nz.size() < 2) throw UnsampleableRow("row has fewer than two non-zero coefficients");
  const std::size_t size = rng.range(2, nz.size());
  for (std::size_t k = 0; k < size; ++k) std::swap(nz[k], nz[k + rng.index(nz.size() - k)]);
  nz.resize(size);
  std::sort(nz.begin(), nz.end());
  return nz;
}

std::vector<double> sample_deltas(std::span<const double> a, const std::vector<std::size_t>& s,
                                  Rng& rng) {
  std::vector<double> delta;
  for (std::size_t j : s) {
    const double d = rng.uniform(0.05, 0.20);
    delta.push_back(round_to(std::max(0.1, d * std::abs(a[j])), 1));
  }
  return delta;
}

std::size_t max_candidates(const GenConfig& config) {
  return config.max_candidates > 0 ? config.max_candidates : 1000 + 200 * config.count;
}

}  // namespace

const char* to_string(UncertaintyKind kind) {
  switch (kind) {
    case UncertaintyKind::Deterministic:
      return "deterministic";
    case UncertaintyKind::Box:
      return "box";
    case UncertaintyKind::Budget:
      return "budget";
    case UncertaintyKind::Polyhedral:
      return "polyhedral";
  }
  return "unknown";
}

UncertaintyKind uncertainty_kind_from_string(const std::string& s) {
  if (s == "box") return UncertaintyKind::Box;
  if (s == "budget") return UncertaintyKind::Budget;
  if (s == "polyhedral" || s == "poly") return UncertaintyKind::Polyhedral;
  throw InvalidParams("unknown uncertainty type '" + s + "'");
}

const char* to_string(Rejection r) {
  switch (r) {
    case Rejection::None:
      return "none";
    case Rejection::AllDeterministic:
      return "all_deterministic";
    case Rejection::Unsampleable:
      return "unsampleable";
    case Rejection::NotOptimal:
      return "not_optimal";
    case Rejection::Degenerate:
      return "degenerate";
    case Rejection::HardConditions:
      return "hard_conditions";
    case Rejection::RetryExhausted:
      return "retry_exhausted";
  }
  return "unknown";
}

void validate(const GenConfig& config) {
  if (config.n_values.empty()) throw InvalidParams("at least one n is required");
  for (std::size_t n : config.n_values) {
    if (n < 2 || n > 9) throw InvalidParams("n must lie in [2, 9]");
  }
  if (config.count == 0) throw InvalidParams("count must be positive");
  if (config.types.empty()) throw InvalidParams("uncertainty type set must be non-empty");
  for (auto t : config.types) {
    if (t == UncertaintyKind::Deterministic) {
      throw InvalidParams("deterministic is not an uncertainty type");
    }
  }
  if (config.templates.empty()) throw InvalidParams("template set must be non-empty");
  if (!(config.coef_lo < config.coef_hi)) throw InvalidParams("coefficient range is empty");
}

NominalProblem generate_nominal(const GenConfig& config, std::size_t n, Rng& rng) {
  NominalProblem p;
  p.r = round_to(rng.uniform(1.0, 10.0), 1);
  const int tau_x = config.hard_mode ? 0 : static_cast<int>(rng.index(3));
  switch (tau_x) {
    case 0:
      p.x_lower = -p.r;
      p.x_upper = p.r;
      break;
    case 1:
      p.x_lower = 0.0;
      p.x_upper = p.r;
      break;
    default:
      p.x_lower = -p.r;
      p.x_upper = 0.0;
      break;
  }
  p.x0.resize(n);
  for (auto& v : p.x0) v = round_to(rng.uniform(p.x_lower, p.x_upper), 1);
  p.c.resize(n);
  for (auto& v : p.c) v = round_to(rng.uniform(-10.0, 10.0), 1);
  const bool maximize = rng.bernoulli(0.5);
  p.sense = (config.hard_mode || maximize) ? lp::Sense::Maximize : lp::Sense::Minimize;

  auto poly = feasible_polytope(n, p.x0, config.coef_lo, config.coef_hi, n, rng);
  for (std::size_t i = 0; i < n; ++i) {
    p.rows.push_back({std::move(poly.A[i]), poly.senses[i], poly.b[i], Deterministic{}});
  }
  if (n >= 3 && rng.bernoulli(0.5)) {
    const std::size_t i = rng.index(n);
    p.rows[i].sense = lp::RowSense::EQ;
    p.rows[i].b = round_to(dot(p.rows[i].a, p.x0), 2);
    p.equality_row = i;
  }
  return p;
}

UncertaintyAssignment assign_uncertainty(const NominalProblem& nominal,
                                         std::span<const UncertaintyKind> types, bool hard_mode,
                                         Rng& rng) {
  const std::size_t n = nominal.rows.size();
  // Row 0 is the objective, rows 1..n the constraints.
  const std::size_t deterministic =
      nominal.equality_row ? *nominal.equality_row + 1 : rng.index(n + 1);
  auto draw = [&]() {
    return hard_mode ? UncertaintyKind::Polyhedral : types[rng.index(types.size())];
  };
  UncertaintyAssignment out;
  out.objective = deterministic == 0 ? UncertaintyKind::Deterministic : draw();
  out.rows.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.rows[i] = deterministic == i + 1 ? UncertaintyKind::Deterministic : draw();
  }
  return out;
}

PolyRange sample_poly_range(double r, Rng& rng) {
  PolyRange range;
  range.p_r = round_to(0.1 * r, 1);
  switch (rng.index(3)) {
    case 0:
      range.p_l = -range.p_r;
      range.p_u = range.p_r;
      break;
    case 1:
      range.p_l = 0.0;
      range.p_u = range.p_r;
      break;
    default:
      range.p_l = -range.p_r;
      range.p_u = 0.0;
      break;
  }
  return range;
}

UncertaintySpec sample_uncertainty_params(std::span<const double> a, UncertaintyKind kind,
                                          const PolyRange& range, Rng& rng) {
  if (kind == UncertaintyKind::Deterministic) return Deterministic{};
  auto support = sample_support(a, rng);
  const std::size_t s = support.size();
  switch (kind) {
    case UncertaintyKind::Box: {
      auto delta = sample_deltas(a, support, rng);
      return BoxSet{std::move(support), std::move(delta)};
    }
    case UncertaintyKind::Budget: {
      auto delta = sample_deltas(a, support, rng);
      const double gamma = round_to(rng.uniform(0.0, static_cast<double>(s)), 1);
      return BudgetSet{std::move(support), std::move(delta), gamma};
    }
    default:
      break;
  }
  PolyhedralSet p;
  std::vector<double> zeta0(s);
  for (auto& z : zeta0) {
    do {
      z = rng.uniform(range.p_l, range.p_u);
    } while (!(range.p_l < z && z < range.p_u));
  }
  auto sys = feasible_polytope(s, zeta0, -range.p_r, range.p_r, s, rng);
  for (std::size_t r = 0; r + 1 < s; ++r) {
    if (sys.senses[r] == lp::RowSense::GE) {
      for (auto& v : sys.A[r]) v = v == 0.0 ? 0.0 : -v;
      sys.b[r] = sys.b[r] == 0.0 ? 0.0 : -sys.b[r];
    }
    p.F.push_back(std::move(sys.A[r]));
    p.g.push_back(sys.b[r]);
  }
  p.lower.assign(s, range.p_l);
  p.upper.assign(s, range.p_u);
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (!std::binary_search(support.begin(), support.end(), j)) p.zero_eq.push_back(j);
  }
  p.support = std::move(support);
  p.interior = std::move(zeta0);
  return p;
}

bool is_degenerate(std::span<const double> x, double x_lower, double x_upper, double tol) {
  for (double v : x) {
    if (std::abs(v - x_lower) > tol && std::abs(v - x_upper) > tol) return false;
  }
  return true;
}

FilterReport check_filters(const RobustInstance& inst) {
  FilterReport rep;
  rep.not_all_deterministic = inst.num_uncertain_rows() > 0;
  std::size_t det = is_deterministic(inst.objective_uncertainty) ? 1 : 0;
  for (const auto& r : inst.rows) det += is_deterministic(r.uncertainty) ? 1 : 0;
  rep.one_deterministic_row = det == 1;
  const auto sol = solve_robust(inst);
  rep.optimal = sol.status == lp::Status::Optimal;
  rep.non_degenerate = rep.optimal && !is_degenerate(sol.x, inst.x_lower, inst.x_upper);
  return rep;
}

HardReport check_hard_conditions(const RobustInstance& inst) {
  HardReport rep;
  rep.maximize = inst.sense == lp::Sense::Maximize;
  rep.signed_variables = inst.x_lower < 0.0 && inst.x_upper > 0.0;
  rep.all_polyhedral = true;
  bool le = false, ge = false;
  auto poly_or_det = [](const UncertaintySpec& s) {
    return is_deterministic(s) || std::holds_alternative<PolyhedralSet>(s);
  };
  rep.all_polyhedral = poly_or_det(inst.objective_uncertainty);
  for (const auto& r : inst.rows) {
    rep.all_polyhedral = rep.all_polyhedral && poly_or_det(r.uncertainty);
    if (is_deterministic(r.uncertainty)) continue;
    le = le || r.sense == lp::RowSense::LE;
    ge = ge || r.sense == lp::RowSense::GE;
  }
  rep.both_senses = le && ge;
  return rep;
}

std::optional<RobustInstance> generate_candidate(const GenConfig& config, std::uint64_t index,
                                                 Rejection* reason) {
  auto reject = [&](Rejection r) -> std::optional<RobustInstance> {
    if (reason) *reason = r;
    return std::nullopt;
  };
  if (reason) *reason = Rejection::None;
  Rng rng = Rng(config.seed).child(index);
  const std::size_t n = config.n_values[rng.index(config.n_values.size())];

  RobustInstance inst;
  try {
    const auto nominal = generate_nominal(config, n, rng);
    const auto tags = assign_uncertainty(nominal, config.types, config.hard_mode, rng);
    if (tags.objective == UncertaintyKind::Deterministic &&
        std::all_of(tags.rows.begin(), tags.rows.end(),
                    [](auto k) { return k == UncertaintyKind::Deterministic; })) {
      return reject(Rejection::AllDeterministic);
    }
    const auto range = sample_poly_range(nominal.r, rng);
    inst.n = n;
    inst.sense = nominal.sense;
    inst.c = nominal.c;
    inst.x_lower = nominal.x_lower;
    inst.x_upper = nominal.x_upper;
    inst.objective_uncertainty = sample_uncertainty_params(inst.c, tags.objective, range, rng);
    inst.rows = nominal.rows;
    for (std::size_t i = 0; i < n; ++i) {
      inst.rows[i].uncertainty =
          sample_uncertainty_params(inst.rows[i].a, tags.rows[i], range, rng);
    }
    inst.template_id = config.templates[rng.index(config.templates.size())];
  } catch (const UnsampleableRow&) {
    return reject(Rejection::Unsampleable);
  } catch (const RetryExhausted&) {
    return reject(Rejection::RetryExhausted);
  }
  inst.id = std::to_string(n) + "_" + std::to_string(index) + "_T" + inst.template_id->code();

  if (config.hard_mode && !check_hard_conditions(inst).passed()) {
    return reject(Rejection::HardConditions);
  }
  const auto sol = solve_robust(inst);
  if (sol.status != lp::Status::Optimal) return reject(Rejection::NotOptimal);
  if (is_degenerate(sol.x, inst.x_lower, inst.x_upper)) return reject(Rejection::Degenerate);
  inst.ground_truth = GroundTruth{sol.x, sol.value};
  validate_generated(inst);
  if (config.render) {
    inst.latex = render_latex(inst, *inst.template_id);
    inst.nl_extension = render_robust_extension(inst);
  }
  return inst;
}

std::vector<RobustInstance> generate_dataset_serial(const GenConfig& config, GenStats* stats) {
  validate(config);
  std::vector<RobustInstance> out;
  GenStats local;
  const std::size_t limit = max_candidates(config);
  for (std::uint64_t k = 0; out.size() < config.count; ++k) {
    if (k >= limit) {
      throw GenerationStalled("accepted " + std::to_string(out.size()) + " of " +
                              std::to_string(config.count) + " after " + std::to_string(k) +
                              " candidates");
    }
    Rejection why;
    auto inst = generate_candidate(config, k, &why);
    ++local.candidates;
    ++local.rejected[static_cast<int>(why)];
    if (inst) out.push_back(std::move(*inst));
  }
  if (stats) *stats = local;
  return out;
}

std::vector<RobustInstance> generate_dataset(const GenConfig& config, GenStats* stats) {
  validate(config);
  std::vector<RobustInstance> out;
  GenStats local;
  const std::size_t limit = max_candidates(config);
  const std::size_t threads = static_cast<std::size_t>(std::max(1, omp_get_max_threads()));
  std::uint64_t base = 0;
  while (out.size() < config.count) {
    if (base >= limit) {
      throw GenerationStalled("accepted " + std::to_string(out.size()) + " of " +
                              std::to_string(config.count) + " after " + std::to_string(base) +
                              " candidates");
    }
    // Size the batch from the acceptance rate so far; results do not depend on it.
    const std::size_t remaining = config.count - out.size();
    const double rate = base == 0 ? 1.0 : std::max(0.05, static_cast<double>(out.size()) / base);
    const auto wanted = static_cast<std::size_t>(std::ceil(remaining / rate * 1.1));
    const std::size_t width = std::min<std::size_t>(std::max(threads, wanted), limit - base);
    std::vector<std::optional<RobustInstance>> results(width);
    std::vector<Rejection> reasons(width, Rejection::None);
    std::vector<std::exception_ptr> errors(width);
#pragma omp parallel for schedule(dynamic)
    for (long b = 0; b < static_cast<long>(width); ++b) {
      try {
        results[b] = generate_candidate(config, base + static_cast<std::uint64_t>(b), &reasons[b]);
      } catch (...) {
        errors[b] = std::current_exception();
      }
    }
    // Keep index order and stop exactly where the serial loop would.
    for (std::size_t b = 0; b < width && out.size() < config.count; ++b) {
      if (errors[b]) std::rethrow_exception(errors[b]);
      ++local.candidates;
      ++local.rejected[static_cast<int>(reasons[b])];
      if (results[b]) out.push_back(std::move(*results[b]));
    }
    base += width;
  }
  if (stats) *stats = local;
  return out;
}

InstanceStream::InstanceStream(GenConfig config) : config_(std::move(config)) { validate(config_); }

RobustInstance InstanceStream::next() {
  const std::uint64_t stop = next_index_ + max_candidates(config_);
  while (next_index_ < stop) {
    auto inst = generate_candidate(config_, next_index_++);
    if (inst) return std::move(*inst);
  }
  throw GenerationStalled("instance stream found no acceptable candidate");
}

}  // namespace robench
