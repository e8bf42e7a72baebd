#pragma once

#include <json.hpp>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace robench {

struct ExperienceEntry {
  long id = 0;
  std::string content;
  long success_count = 0;
  long failure_count = 0;
  bool operator==(const ExperienceEntry&) const = default;
};

// Ordered experience list. Ids are unique; order is insertion order.
struct ExperienceMemory {
  std::vector<ExperienceEntry> entries;

  const ExperienceEntry* find(long id) const;
  ExperienceEntry* find(long id);
  long max_id() const;  // 0 when empty
  bool empty() const { return entries.empty(); }
  bool operator==(const ExperienceMemory&) const = default;
};

struct MemoryOp {
  enum class Kind { Add, Update, Delete };
  Kind kind = Kind::Add;
  long id = 0;
  std::string content;  // unused for Delete
  bool operator==(const MemoryOp&) const = default;
};

const char* to_string(MemoryOp::Kind kind);

// Applies the list to a copy of `memory` and returns it. The input is never
// modified. Throws before any change is visible:
//   DuplicateId      an id appears twice in `ops`, or Add collides with an entry
//   IdOutOfSequence  the k-th Add does not use max_id() + k
//   UnknownId        Update/Delete of a missing id
ExperienceMemory apply_ops(const ExperienceMemory& memory, const std::vector<MemoryOp>& ops);

// Bumps success or failure counts of the listed ids; unknown ids are ignored.
void record_usage(ExperienceMemory& memory, const std::vector<long>& ids, bool success);

// Text inlined into agent prompts.
std::string render_memory(const ExperienceMemory& memory);

// experience id -> validation instances whose last correct answer cited it.
struct CorrespondenceMap {
  std::map<long, std::set<std::string>> links;

  // Replaces the instance's previous attribution with `ids`.
  void record_correct(const std::string& instance_id, const std::vector<long>& ids);
  // Drops links for ids no longer present in `memory`.
  void prune(const ExperienceMemory& memory);
  bool linked(const std::string& instance_id, const std::set<long>& ids) const;
  bool operator==(const CorrespondenceMap&) const = default;
};

// Ids touched by an op list.
std::set<long> modified_ids(const std::vector<MemoryOp>& ops);

// Up to `batch` instances in validation order: currently-correct instances
// linked to a modified id first, then currently-correct unlinked ones.
std::vector<std::string> select_dc_batch(const CorrespondenceMap& map,
                                         const std::set<long>& modified,
                                         const std::vector<std::string>& validation_order,
                                         const std::map<std::string, bool>& currently_correct,
                                         std::size_t batch);

nlohmann::json to_json(const ExperienceMemory& memory);
ExperienceMemory memory_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MemoryOp& op);
MemoryOp memory_op_from_json(const nlohmann::json& j);  // throws SchemaError
nlohmann::json to_json(const CorrespondenceMap& map);
CorrespondenceMap correspondence_from_json(const nlohmann::json& j);

// Memory file: {"entries": [...], "correspondence": {...}}. The bare entry
// array is also accepted on load.
void save_memory(const std::string& path, const ExperienceMemory& memory,
                 const CorrespondenceMap* map = nullptr);
ExperienceMemory load_memory(const std::string& path, CorrespondenceMap* map = nullptr);

}  // namespace robench
