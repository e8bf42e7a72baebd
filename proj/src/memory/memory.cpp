#include "robench/memory.hpp"

#include <algorithm>
#include <fstream>

#include "robench/errors.hpp"

namespace robench {

using nlohmann::json;

const ExperienceEntry* ExperienceMemory::find(long id) const {
  for (const auto& e : entries) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

ExperienceEntry* ExperienceMemory::find(long id) {
  for (auto& e : entries) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

long ExperienceMemory::max_id() const {
  long m = 0;
  for (const auto& e : entries) m = std::max(m, e.id);
  return m;
}

const char* to_string(MemoryOp::Kind kind) {
  switch (kind) {
    case MemoryOp::Kind::Add:
      return "add";
    case MemoryOp::Kind::Update:
      return "update";
    case MemoryOp::Kind::Delete:
      return "delete";
  }
  return "unknown";
}

ExperienceMemory apply_ops(const ExperienceMemory& memory, const std::vector<MemoryOp>& ops) {
  std::set<long> seen;
  for (const auto& op : ops) {
    if (!seen.insert(op.id).second) {
      throw DuplicateId("experience id " + std::to_string(op.id) + " appears twice in one op list");
    }
  }
  ExperienceMemory out = memory;
  const long base = memory.max_id();
  long adds = 0;
  for (const auto& op : ops) {
    const std::string id = std::to_string(op.id);
    switch (op.kind) {
      case MemoryOp::Kind::Add: {
        if (memory.find(op.id)) throw DuplicateId("add of existing experience id " + id);
        ++adds;
        if (op.id != base + adds) {
          throw IdOutOfSequence("add #" + std::to_string(adds) + " must use id " +
                                std::to_string(base + adds) + ", got " + id);
        }
        out.entries.push_back({op.id, op.content, 0, 0});
        break;
      }
      case MemoryOp::Kind::Update: {
        auto* e = out.find(op.id);
        if (!e) throw UnknownId("update of missing experience id " + id);
        e->content = op.content;
        break;
      }
      case MemoryOp::Kind::Delete: {
        auto it = std::find_if(out.entries.begin(), out.entries.end(),
                               [&](const ExperienceEntry& e) { return e.id == op.id; });
        if (it == out.entries.end()) throw UnknownId("delete of missing experience id " + id);
        out.entries.erase(it);
        break;
      }
    }
  }
  return out;
}

void record_usage(ExperienceMemory& memory, const std::vector<long>& ids, bool success) {
  std::set<long> unique(ids.begin(), ids.end());
  for (long id : unique) {
    if (auto* e = memory.find(id)) ++(success ? e->success_count : e->failure_count);
  }
}

std::string render_memory(const ExperienceMemory& memory) {
  if (memory.entries.empty()) return "(empty)";
  std::string out;
  for (const auto& e : memory.entries) {
    if (!out.empty()) out += "\n\n";
    out += "[experience_id: " + std::to_string(e.id) +
           "] (success: " + std::to_string(e.success_count) +
           " / failure: " + std::to_string(e.failure_count) + ")\n" + e.content;
  }
  return out;
}

void CorrespondenceMap::record_correct(const std::string& instance_id,
                                       const std::vector<long>& ids) {
  for (auto it = links.begin(); it != links.end();) {
    it->second.erase(instance_id);
    it = it->second.empty() ? links.erase(it) : std::next(it);
  }
  for (long id : ids) links[id].insert(instance_id);
}

void CorrespondenceMap::prune(const ExperienceMemory& memory) {
  for (auto it = links.begin(); it != links.end();) {
    it = memory.find(it->first) ? std::next(it) : links.erase(it);
  }
}

bool CorrespondenceMap::linked(const std::string& instance_id, const std::set<long>& ids) const {
  for (long id : ids) {
    auto it = links.find(id);
    if (it != links.end() && it->second.count(instance_id)) return true;
  }
  return false;
}

std::set<long> modified_ids(const std::vector<MemoryOp>& ops) {
  std::set<long> out;
  for (const auto& op : ops) out.insert(op.id);
  return out;
}

std::vector<std::string> select_dc_batch(const CorrespondenceMap& map,
                                         const std::set<long>& modified,
                                         const std::vector<std::string>& validation_order,
                                         const std::map<std::string, bool>& currently_correct,
                                         std::size_t batch) {
  auto is_correct = [&](const std::string& id) {
    auto it = currently_correct.find(id);
    return it != currently_correct.end() && it->second;
  };
  std::vector<std::string> linked;
  std::vector<std::string> unlinked;
  for (const auto& id : validation_order) {
    if (!is_correct(id)) continue;
    (map.linked(id, modified) ? linked : unlinked).push_back(id);
  }
  std::vector<std::string> out;
  for (const auto* group : {&linked, &unlinked}) {
    for (const auto& id : *group) {
      if (out.size() == batch) return out;
      out.push_back(id);
    }
  }
  return out;
}

json to_json(const ExperienceMemory& memory) {
  json arr = json::array();
  for (const auto& e : memory.entries) {
    arr.push_back({{"experience_id", e.id},
                   {"content", e.content},
                   {"success_count", e.success_count},
                   {"failure_count", e.failure_count}});
  }
  return arr;
}

ExperienceMemory memory_from_json(const json& j) {
  ExperienceMemory m;
  for (const auto& e : j) {
    ExperienceEntry entry{e.at("experience_id").get<long>(), e.at("content").get<std::string>(),
                          e.value("success_count", 0L), e.value("failure_count", 0L)};
    if (m.find(entry.id)) throw DuplicateId("memory file repeats id " + std::to_string(entry.id));
    m.entries.push_back(std::move(entry));
  }
  return m;
}

json to_json(const MemoryOp& op) {
  json j = {{"operator", to_string(op.kind)}, {"experience_id", op.id}};
  if (op.kind != MemoryOp::Kind::Delete) j["content"] = op.content;
  return j;
}

MemoryOp memory_op_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("memory operation must be an object");
  if (!j.contains("operator") || !j["operator"].is_string()) {
    throw SchemaError("memory operation lacks a string 'operator'");
  }
  if (!j.contains("experience_id") || !j["experience_id"].is_number_integer()) {
    throw SchemaError("memory operation lacks an integer 'experience_id'");
  }
  MemoryOp op;
  const auto name = j["operator"].get<std::string>();
  if (name == "add") {
    op.kind = MemoryOp::Kind::Add;
  } else if (name == "update") {
    op.kind = MemoryOp::Kind::Update;
  } else if (name == "delete") {
    op.kind = MemoryOp::Kind::Delete;
  } else {
    throw SchemaError("unknown memory operator '" + name + "'");
  }
  op.id = j["experience_id"].get<long>();
  if (op.kind != MemoryOp::Kind::Delete) {
    if (!j.contains("content") || !j["content"].is_string()) {
      throw SchemaError(name + " operation lacks a string 'content'");
    }
    op.content = j["content"].get<std::string>();
  }
  return op;
}

json to_json(const CorrespondenceMap& map) {
  json j = json::object();
  for (const auto& [id, instances] : map.links) j[std::to_string(id)] = instances;
  return j;
}

CorrespondenceMap correspondence_from_json(const json& j) {
  CorrespondenceMap map;
  for (const auto& [key, value] : j.items()) {
    map.links[std::stol(key)] = value.get<std::set<std::string>>();
  }
  return map;
}

void save_memory(const std::string& path, const ExperienceMemory& memory,
                 const CorrespondenceMap* map) {
  json j = {{"entries", to_json(memory)}};
  if (map) j["correspondence"] = to_json(*map);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

ExperienceMemory load_memory(const std::string& path, CorrespondenceMap* map) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  const json j = json::parse(in);
  if (j.is_array()) return memory_from_json(j);
  if (map && j.contains("correspondence")) *map = correspondence_from_json(j["correspondence"]);
  return memory_from_json(j.at("entries"));
}

}  // namespace robench
