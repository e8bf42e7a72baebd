#include <fstream>

#include "robench/adapt.hpp"
#include "robench/errors.hpp"

namespace robench {

using nlohmann::json;

void write_trace(const std::string& path, const std::vector<json>& events) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& ev : events) out << ev.dump() << "\n";
}

std::vector<json> read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<json> events;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) events.push_back(json::parse(line));
  }
  return events;
}

ExperienceMemory replay_trace(const std::vector<json>& events) {
  ExperienceMemory memory;
  ExperienceMemory candidate;
  ExperienceMemory best;
  bool started = false;
  for (const auto& ev : events) {
    const std::string kind = ev.at("event").get<std::string>();
    if (kind == "init") {
      memory = memory_from_json(ev.at("memory"));
      started = true;
    } else if (kind == "baseline") {
      best = memory;
    } else if (kind == "usage") {
      auto& target = ev.at("target").get<std::string>() == "memory" ? memory : candidate;
      record_usage(target, ev.at("ids").get<std::vector<long>>(), ev.at("success").get<bool>());
    } else if (kind == "invoke") {
      candidate = memory;
    } else if (kind == "reflect") {
      std::vector<MemoryOp> ops;
      for (const auto& op : ev.at("ops")) ops.push_back(memory_op_from_json(op));
      candidate = apply_ops(candidate, ops);
    } else if (kind == "commit") {
      memory = candidate;
    } else if (kind == "epoch_end") {
      if (ev.at("action").get<std::string>() == "accept") {
        best = memory;
      } else {
        memory = best;
      }
    }
  }
  if (!started) throw SchemaError("trace has no init event");
  return best;
}

}  // namespace robench
