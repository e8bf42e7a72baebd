#include "robench/model_json.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "robench/errors.hpp"

namespace robench {

using nlohmann::json;

namespace {

json number(double v) {
  if (std::isinf(v)) return nullptr;
  return v;
}

double number_from(const json& j, double infinite) {
  if (j.is_null()) return infinite;
  return j.get<double>();
}

json numbers(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

std::vector<double> numbers_from(const json& j, double infinite) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number_from(x, infinite));
  return out;
}

const char* sense_name(lp::RowSense s) { return lp::to_string(s); }

lp::RowSense row_sense_from(const std::string& s) {
  if (s == "<=") return lp::RowSense::LE;
  if (s == ">=") return lp::RowSense::GE;
  if (s == "=") return lp::RowSense::EQ;
  throw InvalidInstance("unknown row sense '" + s + "'");
}

}  // namespace

json to_json(const UncertaintySpec& spec) {
  json j = {{"kind", kind_name(spec)}};
  if (const auto* box = std::get_if<BoxSet>(&spec)) {
    j["support"] = box->support;
    j["delta"] = box->delta;
  } else if (const auto* bud = std::get_if<BudgetSet>(&spec)) {
    j["support"] = bud->support;
    j["delta"] = bud->delta;
    j["gamma"] = bud->gamma;
  } else if (const auto* poly = std::get_if<PolyhedralSet>(&spec)) {
    j["support"] = poly->support;
    j["F"] = poly->F;
    j["g"] = poly->g;
    j["lower"] = numbers(poly->lower);
    j["upper"] = numbers(poly->upper);
    j["zero_eq"] = poly->zero_eq;
    j["interior"] = poly->interior ? json(*poly->interior) : json(nullptr);
  }
  return j;
}

UncertaintySpec uncertainty_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "deterministic") return Deterministic{};
  if (kind == "box") {
    return BoxSet{j.at("support").get<std::vector<std::size_t>>(),
                  j.at("delta").get<std::vector<double>>()};
  }
  if (kind == "budget") {
    return BudgetSet{j.at("support").get<std::vector<std::size_t>>(),
                     j.at("delta").get<std::vector<double>>(), j.at("gamma").get<double>()};
  }
  if (kind == "polyhedral") {
    PolyhedralSet p;
    p.support = j.at("support").get<std::vector<std::size_t>>();
    p.F = j.at("F").get<std::vector<std::vector<double>>>();
    p.g = j.at("g").get<std::vector<double>>();
    p.lower = numbers_from(j.at("lower"), -lp::kInf);
    p.upper = numbers_from(j.at("upper"), lp::kInf);
    p.zero_eq = j.at("zero_eq").get<std::vector<std::size_t>>();
    if (j.contains("interior") && !j.at("interior").is_null()) {
      p.interior = j.at("interior").get<std::vector<double>>();
    }
    return p;
  }
  throw InvalidInstance("unknown uncertainty kind '" + kind + "'");
}

json to_json(const RobustInstance& inst) {
  json rows = json::array();
  for (const auto& r : inst.rows) {
    rows.push_back({{"a", r.a},
                    {"sense", sense_name(r.sense)},
                    {"b", r.b},
                    {"uncertainty", to_json(r.uncertainty)}});
  }
  json j = {{"id", inst.id},
            {"n", inst.n},
            {"sense", inst.sense == lp::Sense::Minimize ? "min" : "max"},
            {"c", inst.c},
            {"objective_uncertainty", to_json(inst.objective_uncertainty)},
            {"rows", std::move(rows)},
            {"bounds", {inst.x_lower, inst.x_upper}}};
  j["ground_truth"] = inst.ground_truth ? json{{"x_star", inst.ground_truth->x_star},
                                               {"f_star", inst.ground_truth->f_star}}
                                        : json(nullptr);
  j["template"] = inst.template_id ? json("T" + inst.template_id->code()) : json(nullptr);
  if (!inst.latex.empty()) j["latex"] = inst.latex;
  if (!inst.nl_extension.empty()) j["nl_extension"] = inst.nl_extension;
  return j;
}

RobustInstance instance_from_json(const json& j) {
  RobustInstance inst;
  try {
    inst.id = j.at("id").get<std::string>();
    inst.n = j.at("n").get<std::size_t>();
    const auto sense = j.at("sense").get<std::string>();
    if (sense != "min" && sense != "max") throw InvalidInstance("unknown sense '" + sense + "'");
    inst.sense = sense == "min" ? lp::Sense::Minimize : lp::Sense::Maximize;
    inst.c = j.at("c").get<std::vector<double>>();
    inst.objective_uncertainty = uncertainty_from_json(j.at("objective_uncertainty"));
    for (const auto& r : j.at("rows")) {
      inst.rows.push_back({r.at("a").get<std::vector<double>>(),
                           row_sense_from(r.at("sense").get<std::string>()),
                           r.at("b").get<double>(), uncertainty_from_json(r.at("uncertainty"))});
    }
    const auto& bounds = j.at("bounds");
    if (!bounds.is_array() || bounds.size() != 2) throw InvalidInstance("bounds must be [lo, hi]");
    inst.x_lower = bounds[0].get<double>();
    inst.x_upper = bounds[1].get<double>();
    if (j.contains("ground_truth") && !j.at("ground_truth").is_null()) {
      const auto& gt = j.at("ground_truth");
      inst.ground_truth =
          GroundTruth{gt.at("x_star").get<std::vector<double>>(), gt.at("f_star").get<double>()};
    }
    if (j.contains("template") && !j.at("template").is_null()) {
      inst.template_id = TemplateId::parse(j.at("template").get<std::string>());
    }
    if (j.contains("latex")) inst.latex = j.at("latex").get<std::string>();
    if (j.contains("nl_extension")) inst.nl_extension = j.at("nl_extension").get<std::string>();
  } catch (const json::exception& e) {
    throw InvalidInstance(std::string("schema: ") + e.what());
  } catch (const InvalidParams& e) {
    throw InvalidInstance(e.what());
  }
  validate(inst);
  return inst;
}

std::string to_jsonl_line(const RobustInstance& inst) { return to_json(inst).dump(); }

void write_jsonl(std::ostream& out, const std::vector<RobustInstance>& instances) {
  for (const auto& inst : instances) out << to_jsonl_line(inst) << '\n';
}

std::vector<RobustInstance> read_jsonl(std::istream& in) {
  std::vector<RobustInstance> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(instance_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw InvalidInstance("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void save_dataset(const std::string& path, const std::vector<RobustInstance>& instances) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidParams("cannot write " + path);
  write_jsonl(out, instances);
}

std::vector<RobustInstance> load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInstance("cannot read " + path);
  return read_jsonl(in);
}

}  // namespace robench
