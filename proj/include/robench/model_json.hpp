#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "robench/model.hpp"

namespace robench {

// Dataset line format. Support indices are 0-based; infinite bounds are null.
nlohmann::json to_json(const UncertaintySpec& spec);
UncertaintySpec uncertainty_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RobustInstance& inst);
// Parses and validates; throws InvalidInstance on schema or invariant errors.
RobustInstance instance_from_json(const nlohmann::json& j);

std::string to_jsonl_line(const RobustInstance& inst);
void write_jsonl(std::ostream& out, const std::vector<RobustInstance>& instances);
std::vector<RobustInstance> read_jsonl(std::istream& in);

void save_dataset(const std::string& path, const std::vector<RobustInstance>& instances);
std::vector<RobustInstance> load_dataset(const std::string& path);

}  // namespace robench
