#pragma once

#include <string>

#include "robench/model.hpp"

namespace robench {

// Shortest fixed-notation text that round-trips to v; -0 prints as "0".
// Generated values are stored already rounded (1 dp coefficients, 2 dp rhs),
// so this reproduces their stored precision without padding.
std::string format_number(double v);

// align* block for one of the eight templates. Numeric data appears only in
// the "where" assignments; the model lines stay symbolic.
std::string render_latex(const RobustInstance& inst, TemplateId t);

// Plain-text robust extension: preamble, one bullet per uncertain row, and a
// closing sentence naming the objective direction.
std::string render_robust_extension(const RobustInstance& inst);

}  // namespace robench
