#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <json.hpp>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "robench/eval.hpp"
#include "robench/memory.hpp"
#include "robench/model.hpp"

namespace robench {

struct AdaptConfig {
  std::size_t epochs = 10;          // E
  std::size_t steps_per_epoch = 8;  // S
  std::size_t dc_batch = 4;         // B
  std::size_t inner_iters = 3;      // K
  std::uint64_t train_seed = 1;     // training stream, disjoint from validation
  Tolerance tol;
  int max_inflight = 4;
};

// Throws InvalidParams unless E, S, B, K >= 1 and max_inflight >= 1.
void validate(const AdaptConfig& config);

using TrainingStream = std::function<RobustInstance()>;
using TraceSink = std::function<void(const nlohmann::json&)>;

// One entry per step that entered the reflection loop.
struct Invocation {
  std::size_t epoch = 0;
  std::size_t step = 0;
  std::vector<std::string> outcomes;  // "training_fail" | "dc_fail" | "dc_pass" per iteration
  bool committed = false;
  bool aborted = false;  // an agent error ended the step
  bool operator==(const Invocation&) const = default;
};

struct AdaptResult {
  ExperienceMemory best_memory;  // M*
  CorrespondenceMap best_map;
  std::size_t validation_size = 0;
  std::size_t initial_correct = 0;
  std::size_t best_correct = 0;
  std::vector<std::size_t> epoch_correct;      // full-validation count at each epoch end
  std::vector<ExperienceMemory> epoch_memory;  // memory entering the next epoch
  std::vector<std::size_t> rollback_epochs;    // 1-based
  std::vector<Invocation> invocations;
  std::vector<nlohmann::json> trace;

  double accuracy(std::size_t correct) const;
};

// Offline adaptation of the experience memory. Validation instances must carry
// unique ids. Agent failures abort the current step only; they are traced.
AdaptResult run_offline_adaptation(const AdaptConfig& config,
                                   const std::vector<RobustInstance>& validation,
                                   const TrainingStream& next_training, AgentClient& reformulator,
                                   AgentClient& reflector, AgentClient& coder,
                                   ExperienceMemory initial = {}, const TraceSink& sink = {});

// Trace files are JSONL, one event object per line.
void write_trace(const std::string& path, const std::vector<nlohmann::json>& events);
std::vector<nlohmann::json> read_trace(const std::string& path);

// Rebuilds M* from a trace alone by re-applying every traced op list, usage
// update, commit and rollback.
ExperienceMemory replay_trace(const std::vector<nlohmann::json>& events);

// Fully offline world whose adaptation run follows a fixed script: three
// reflection invocations at (epoch, step) = (1,1), (4,2), (7,2) committing at
// iterations 3, 2 and 1, and a rollback at the end of epoch 7. Validation
// accuracy per epoch: 56/64 initially, then 57, 57, 57, 63, 63, 63, 61, 63, 63, 63.
class ScriptedWorld {
 public:
  // Instances come from the generator with the given seed.
  explicit ScriptedWorld(std::uint64_t seed = 2024);

  const std::vector<RobustInstance>& validation() const { return validation_; }
  TrainingStream training_stream();
  AgentClient& reformulator() { return *reformulator_; }
  AgentClient& reflector() { return *reflector_; }
  AgentClient& coder() { return *coder_; }
  static AdaptConfig config();

  // Reformulation unit a given instance exercises in this world.
  const std::string& tag_of(const std::string& instance_id) const;

 private:
  std::vector<RobustInstance> validation_;
  std::vector<RobustInstance> training_;
  std::map<std::string, std::string> tags_;
  std::unique_ptr<AgentClient> reformulator_;
  std::unique_ptr<AgentClient> reflector_;
  std::unique_ptr<AgentClient> coder_;
};

}  // namespace robench
