#include <cmath>

#include "robench/render.hpp"

namespace robench {

namespace {

// Row key: "c" for the objective, "1".."m" for constraints.
std::string sub(const std::string& key) { return key == "c" ? "_c" : "_{" + key + "}"; }
std::string sub2(const std::string& key, const std::string& idx) {
  return "_{" + key + "," + idx + "}";
}

std::string bound_text(double v) {
  if (std::isinf(v)) return v > 0 ? "\\infty" : "-\\infty";
  return format_number(v);
}

std::string column(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + bound_text(v[k]);
  return s + "]^\\top";
}

std::string bmatrix(const std::vector<std::vector<double>>& rows) {
  std::string s = "\\begin{bmatrix} ";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r) s += " \\\\ ";
    for (std::size_t k = 0; k < rows[r].size(); ++k)
      s += (k ? " & " : "") + format_number(rows[r][k]);
  }
  return s + " \\end{bmatrix}";
}

std::string index_set(const std::vector<std::size_t>& support) {
  std::string s = "\\{";
  for (std::size_t k = 0; k < support.size(); ++k) {
    s += (k ? ", " : "") + std::to_string(support[k] + 1);
  }
  return s + "\\}";
}

const char* relation(lp::RowSense s) {
  switch (s) {
    case lp::RowSense::LE:
      return "\\le";
    case lp::RowSense::GE:
      return "\\ge";
    case lp::RowSense::EQ:
      return "=";
  }
  return "";
}

const char* kind_label(const UncertaintySpec& spec) {
  switch (spec.index()) {
    case 1:
      return "Box Uncertainty";
    case 2:
      return "Budgeted Uncertainty";
    case 3:
      return "Polyhedral Uncertainty";
  }
  return "Deterministic";
}

class LatexWriter {
 public:
  LatexWriter(const RobustInstance& inst, TemplateId t) : inst_(inst), t_(t) {}

  std::string run() {
    objective();
    for (std::size_t i = 0; i < inst_.rows.size(); ++i) constraint(i);
    where();
    std::string out = "\\begin{align*}\n";
    for (std::size_t k = 0; k < lines_.size(); ++k) {
      out += lines_[k];
      out += k + 1 < lines_.size() ? " \\\\\n" : "\n";
    }
    return out + "\\end{align*}";
  }

 private:
  std::string zeta(const std::string& key) const { return "\\boldsymbol{\\zeta}" + sub(key); }
  std::string set(const std::string& key) const { return "\\mathcal{U}" + sub(key); }

  std::string worst(const std::string& key, bool inner_max) const {
    return std::string(inner_max ? "\\max" : "\\min") + "_{" + zeta(key) + " \\in " + set(key) +
           "} ";
  }

  void add_line(std::string body, bool quantified, const std::string& key,
                const std::string& label) {
    std::string line = std::move(body);
    if (quantified || t_.type_labels) {
      line += " && ";
      if (quantified) line += "\\forall " + zeta(key) + " \\in " + set(key);
    }
    if (t_.type_labels) line += " && \\text{(" + label + ")}";
    lines_.push_back(std::move(line));
  }

  void objective() {
    const bool unc = !is_deterministic(inst_.objective_uncertainty);
    std::string expr;
    if (!unc) {
      expr = t_.vector_notation ? "\\bar{\\mathbf{c}}^\\top \\mathbf{x}"
                                : "\\sum_{j} \\bar{c}_{j} x_{j}";
    } else {
      expr = t_.vector_notation ? "(\\bar{\\mathbf{c}} + " + zeta("c") + ")^\\top \\mathbf{x}"
                                : "\\sum_{j} (\\bar{c}_{j} + \\zeta_{c,j}) x_{j}";
      if (t_.explicit_worst_case) {
        expr = worst("c", inner_direction(inst_.sense) == InnerDirection::Max) + expr;
      }
    }
    const char* head = inst_.sense == lp::Sense::Maximize ? "\\text{Maximize}" : "\\text{Minimize}";
    add_line(std::string(head) + " \\quad & " + expr, unc && !t_.explicit_worst_case, "c",
             std::string(kind_label(inst_.objective_uncertainty)) + " Objective");
  }

  void constraint(std::size_t i) {
    const auto& row = inst_.rows[i];
    const std::string key = std::to_string(i + 1);
    const bool unc = !is_deterministic(row.uncertainty);
    std::string expr;
    if (!unc) {
      expr = t_.vector_notation ? "\\mathbf{a}" + sub(key) + "^\\top \\mathbf{x}"
                                : "\\sum_{j} a" + sub2(key, "j") + " x_{j}";
    } else {
      expr =
          t_.vector_notation
              ? "(\\bar{\\mathbf{a}}" + sub(key) + " + " + zeta(key) + ")^\\top \\mathbf{x}"
              : "\\sum_{j} (\\bar{a}" + sub2(key, "j") + " + \\zeta" + sub2(key, "j") + ") x_{j}";
      if (t_.explicit_worst_case) {
        expr = worst(key, inner_direction(row.sense) == InnerDirection::Max) + expr;
      }
    }
    expr += std::string(" ") + relation(row.sense) + " b" + sub(key);
    const std::string prefix = i == 0 ? "\\text{subject to} \\quad & " : "& ";
    add_line(prefix + expr, unc && !t_.explicit_worst_case, key,
             std::string(kind_label(row.uncertainty)) + " Constraint");
  }

  void set_definition(const std::string& key, const UncertaintySpec& spec) {
    const std::string S = "\\mathcal{S}" + sub(key);
    const std::string z = zeta(key);
    std::string body = set(key) + " = \\{ " + z + " \\in \\mathbb{R}^{" + std::to_string(inst_.n) +
                       "} : \\operatorname{supp}(" + z + ") \\subseteq " + S;
    const bool vec = t_.vector_notation;
    const std::string zs = "(" + z + ")_{" + S + "}";
    if (std::holds_alternative<BoxSet>(spec) || std::holds_alternative<BudgetSet>(spec)) {
      body += vec ? ",\\ |" + zs + "| \\le \\boldsymbol{\\Delta}" + sub(key)
                  : ",\\ |\\zeta" + sub2(key, "j") + "| \\le \\Delta" + sub2(key, "j") +
                        "\\ \\forall j \\in " + S;
    }
    if (std::holds_alternative<BudgetSet>(spec)) {
      body += vec ? ",\\ \\|\\operatorname{diag}(\\boldsymbol{\\Delta}" + sub(key) + ")^{-1} " +
                        zs + "\\|_{1} \\le \\Gamma" + sub(key)
                  : ",\\ \\sum_{j \\in " + S + "} |\\zeta" + sub2(key, "j") + "| / \\Delta" +
                        sub2(key, "j") + " \\le \\Gamma" + sub(key);
    }
    if (std::holds_alternative<PolyhedralSet>(spec)) {
      body += vec ? ",\\ \\mathbf{F}" + sub(key) + " " + zs + " \\le \\mathbf{g}" + sub(key) +
                        ",\\ \\underline{\\mathbf{p}}" + sub(key) + " \\le " + zs +
                        " \\le \\overline{\\mathbf{p}}" + sub(key)
                  : ",\\ \\sum_{j \\in " + S + "} F_{" + key + ",r,j} \\zeta" + sub2(key, "j") +
                        " \\le g" + sub2(key, "r") + "\\ \\forall r,\\ \\underline{p}" +
                        sub2(key, "j") + " \\le \\zeta" + sub2(key, "j") + " \\le \\overline{p}" +
                        sub2(key, "j") + "\\ \\forall j \\in " + S;
    }
    lines_.push_back("& " + body + " \\}");
  }

  // Scalar notation: one line of name = value pairs.
  void scalar_line(const std::vector<std::pair<std::string, double>>& items) {
    std::string line = "& ";
    for (std::size_t k = 0; k < items.size(); ++k) {
      if (k) line += ",\\ ";
      line += items[k].first + " = " + bound_text(items[k].second);
    }
    lines_.push_back(std::move(line));
  }

  void set_data(const std::string& key, const UncertaintySpec& spec) {
    const auto& support = support_of(spec);
    lines_.push_back("& \\mathcal{S}" + sub(key) + " = " + index_set(support));
    const bool vec = t_.vector_notation;
    auto per_support = [&](const std::string& name, const std::vector<double>& values) {
      if (vec) {
        lines_.push_back("& " + name + sub(key) + " = " + column(values));
        return;
      }
      std::vector<std::pair<std::string, double>> items;
      for (std::size_t k = 0; k < support.size(); ++k) {
        items.push_back({name + sub2(key, std::to_string(support[k] + 1)), values[k]});
      }
      scalar_line(items);
    };
    if (const auto* box = std::get_if<BoxSet>(&spec)) {
      per_support(vec ? "\\boldsymbol{\\Delta}" : "\\Delta", box->delta);
    } else if (const auto* bud = std::get_if<BudgetSet>(&spec)) {
      per_support(vec ? "\\boldsymbol{\\Delta}" : "\\Delta", bud->delta);
      lines_.push_back("& \\Gamma" + sub(key) + " = " + format_number(bud->gamma));
    } else if (const auto* poly = std::get_if<PolyhedralSet>(&spec)) {
      if (vec) {
        lines_.push_back("& \\mathbf{F}" + sub(key) + " = " + bmatrix(poly->F));
        lines_.push_back("& \\mathbf{g}" + sub(key) + " = " + column(poly->g));
      } else {
        for (std::size_t r = 0; r < poly->F.size(); ++r) {
          std::vector<std::pair<std::string, double>> items;
          const std::string rs = std::to_string(r + 1);
          for (std::size_t k = 0; k < support.size(); ++k) {
            items.push_back({"F_{" + key + "," + rs + "," + std::to_string(support[k] + 1) + "}",
                             poly->F[r][k]});
          }
          items.push_back({"g" + sub2(key, rs), poly->g[r]});
          scalar_line(items);
        }
      }
      per_support(vec ? "\\underline{\\mathbf{p}}" : "\\underline{p}", poly->lower);
      per_support(vec ? "\\overline{\\mathbf{p}}" : "\\overline{p}", poly->upper);
    }
  }

  void where() {
    std::vector<std::pair<std::string, const UncertaintySpec*>> uncertain;
    if (!is_deterministic(inst_.objective_uncertainty)) {
      uncertain.push_back({"c", &inst_.objective_uncertainty});
    }
    for (std::size_t i = 0; i < inst_.rows.size(); ++i) {
      if (!is_deterministic(inst_.rows[i].uncertainty)) {
        uncertain.push_back({std::to_string(i + 1), &inst_.rows[i].uncertainty});
      }
    }
    lines_.push_back("\\text{where:} \\quad & \\mathbf{x} = [" + variables() + "]^\\top");
    for (const auto& [key, spec] : uncertain) set_definition(key, *spec);

    const bool vec = t_.vector_notation;
    if (vec) {
      lines_.push_back("& \\bar{\\mathbf{c}} = " + column(inst_.c));
    } else {
      std::vector<std::pair<std::string, double>> items;
      for (std::size_t j = 0; j < inst_.n; ++j) {
        items.push_back({"\\bar{c}_{" + std::to_string(j + 1) + "}", inst_.c[j]});
      }
      scalar_line(items);
    }
    for (std::size_t i = 0; i < inst_.rows.size(); ++i) {
      const auto& row = inst_.rows[i];
      const std::string key = std::to_string(i + 1);
      const bool unc = !is_deterministic(row.uncertainty);
      if (vec) {
        lines_.push_back(std::string("& ") + (unc ? "\\bar{\\mathbf{a}}" : "\\mathbf{a}") +
                         sub(key) + " = " + column(row.a));
        lines_.push_back("& b" + sub(key) + " = " + format_number(row.b));
      } else {
        std::vector<std::pair<std::string, double>> items;
        for (std::size_t j = 0; j < inst_.n; ++j) {
          items.push_back(
              {std::string(unc ? "\\bar{a}" : "a") + sub2(key, std::to_string(j + 1)), row.a[j]});
        }
        items.push_back({"b" + sub(key), row.b});
        scalar_line(items);
      }
    }
    for (const auto& [key, spec] : uncertain) set_data(key, *spec);

    std::string bounds = "& " + format_number(inst_.x_lower) + " \\le x_{j} \\le " +
                         format_number(inst_.x_upper) + " \\quad \\forall j";
    if (t_.type_labels) bounds += " && && \\text{(Variable Bounds)}";
    lines_.push_back(std::move(bounds));
  }

  std::string variables() const {
    std::string s;
    for (std::size_t j = 0; j < inst_.n; ++j) {
      s += (j ? ", " : "") + std::string("x_{") + std::to_string(j + 1) + "}";
    }
    return s;
  }

  const RobustInstance& inst_;
  TemplateId t_;
  std::vector<std::string> lines_;
};

}  // namespace

std::string render_latex(const RobustInstance& inst, TemplateId t) {
  return LatexWriter(inst, t).run();
}

}  // namespace robench
