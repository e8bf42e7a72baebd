#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <set>

#include "robench/adapt.hpp"
#include "robench/errors.hpp"
#include "robench/memory.hpp"

using namespace robench;
using json = nlohmann::json;

namespace {

ExperienceMemory seven_entries() {
  ExperienceMemory m;
  for (long id : {1, 2, 4, 7}) m.entries.push_back({id, "rule " + std::to_string(id), 0, 0});
  return m;
}

MemoryOp add(long id, std::string text) { return {MemoryOp::Kind::Add, id, std::move(text)}; }
MemoryOp update(long id, std::string text) { return {MemoryOp::Kind::Update, id, std::move(text)}; }
MemoryOp del(long id) { return {MemoryOp::Kind::Delete, id, {}}; }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("robench_mem_" + name)).string();
}

// One scripted run shared by the adaptation tests.
const AdaptResult& scripted_run() {
  static const AdaptResult result = [] {
    ScriptedWorld world;
    return run_offline_adaptation(ScriptedWorld::config(), world.validation(),
                                  world.training_stream(), world.reformulator(), world.reflector(),
                                  world.coder());
  }();
  return result;
}

class ThrowingAgent : public AgentClient {
 public:
  AgentReply complete(const AgentRequest&) override { throw TransportError("offline"); }
};

}  // namespace

TEST(ApplyOps, AddsContinueFromMaxId) {
  const auto before = seven_entries();
  const auto after = apply_ops(before, {add(8, "a"), update(2, "b"), del(4), add(9, "c")});
  EXPECT_EQ(before, seven_entries());
  ASSERT_EQ(after.entries.size(), 5u);
  EXPECT_EQ(after.max_id(), 9);
  EXPECT_EQ(after.find(2)->content, "b");
  EXPECT_EQ(after.find(4), nullptr);
  EXPECT_EQ(after.entries[3].id, 8);
  EXPECT_EQ(after.entries[4].id, 9);
  EXPECT_EQ(ExperienceMemory{}.max_id(), 0);
}

TEST(ApplyOps, UpdateKeepsCounts) {
  auto m = seven_entries();
  // Repeated ids in one citation count once.
  record_usage(m, {2, 2, 99}, true);
  record_usage(m, {2, 4}, true);
  record_usage(m, {2}, false);
  EXPECT_EQ(m.find(2)->success_count, 2);
  EXPECT_EQ(m.find(2)->failure_count, 1);
  EXPECT_EQ(m.find(4)->success_count, 1);
  const auto after = apply_ops(m, {update(2, "new")});
  EXPECT_EQ(after.find(2)->content, "new");
  EXPECT_EQ(after.find(2)->success_count, 2);
  EXPECT_EQ(after.find(2)->failure_count, 1);
}

TEST(ApplyOps, RejectsBadListsWithoutSideEffects) {
  const auto m = seven_entries();
  EXPECT_THROW(apply_ops(m, {add(7, "x")}), DuplicateId);
  EXPECT_THROW(apply_ops(m, {del(99)}), UnknownId);
  EXPECT_THROW(apply_ops(m, {update(3, "x")}), UnknownId);
  EXPECT_THROW(apply_ops(m, {add(9, "x")}), IdOutOfSequence);
  EXPECT_THROW(apply_ops(m, {add(8, "x"), add(10, "y")}), IdOutOfSequence);
  EXPECT_THROW(apply_ops(m, {update(2, "x"), del(2)}), DuplicateId);
  EXPECT_THROW(apply_ops(m, {update(1, "x"), del(99)}), UnknownId);
  EXPECT_EQ(m, seven_entries());
}

TEST(ApplyOps, EmptyListIsIdentity) {
  EXPECT_EQ(apply_ops(seven_entries(), {}), seven_entries());
  EXPECT_EQ(modified_ids({add(8, "a"), del(2), update(4, "u")}), (std::set<long>{2, 4, 8}));
}

TEST(Memory, RenderingListsEveryEntry) {
  EXPECT_EQ(render_memory(ExperienceMemory{}).find("[experience_id"), std::string::npos);
  ExperienceMemory m;
  m.entries.push_back({3, "box rows dualize to an l1 term", 4, 1});
  const auto text = render_memory(m);
  EXPECT_NE(
      text.find("[experience_id: 3] (success: 4 / failure: 1)\nbox rows dualize to an l1 term"),
      std::string::npos)
      << text;
}

TEST(Memory, JsonRoundTripAndFiles) {
  auto m = seven_entries();
  record_usage(m, {1}, true);
  EXPECT_EQ(memory_from_json(to_json(m)), m);
  for (const auto& op : {add(8, "a"), update(1, "b"), del(4)}) {
    const auto j = to_json(op);
    EXPECT_TRUE(j.contains("operator"));
    EXPECT_TRUE(j.contains("experience_id"));
    EXPECT_EQ(memory_op_from_json(j), op);
  }
  EXPECT_EQ(to_json(add(8, "a"))["operator"], "add");
  EXPECT_THROW(memory_op_from_json(json{{"operator", "merge"}, {"experience_id", 1}}), SchemaError);
  EXPECT_THROW(memory_op_from_json(json{{"operator", "add"}}), SchemaError);

  CorrespondenceMap map;
  map.record_correct("v1", {1, 2});
  map.record_correct("v2", {2});
  EXPECT_EQ(correspondence_from_json(to_json(map)), map);

  const auto path = temp_path("file.json");
  save_memory(path, m, &map);
  CorrespondenceMap loaded_map;
  EXPECT_EQ(load_memory(path, &loaded_map), m);
  EXPECT_EQ(loaded_map, map);
  std::filesystem::remove(path);
}

TEST(Correspondence, ReattributionAndPrune) {
  CorrespondenceMap map;
  map.record_correct("v1", {1, 2});
  map.record_correct("v1", {4});
  EXPECT_FALSE(map.linked("v1", {1, 2}));
  EXPECT_TRUE(map.linked("v1", {4}));
  map.record_correct("v2", {7});
  ExperienceMemory m;
  m.entries.push_back({4, "kept", 0, 0});
  map.prune(m);
  EXPECT_TRUE(map.linked("v1", {4}));
  EXPECT_FALSE(map.linked("v2", {7}));
}

TEST(DualCheck, LinkedFirstThenFillInValidationOrder) {
  CorrespondenceMap map;
  map.record_correct("v3", {5});
  map.record_correct("v5", {5});
  map.record_correct("v1", {2});
  const std::vector<std::string> order{"v0", "v1", "v2", "v3", "v4", "v5", "v6"};
  std::map<std::string, bool> correct;
  for (const auto& id : order) correct[id] = true;
  correct["v2"] = false;

  EXPECT_EQ(select_dc_batch(map, {5}, order, correct, 4),
            (std::vector<std::string>{"v3", "v5", "v0", "v1"}));
  // Incorrect instances are never drawn.
  EXPECT_EQ(select_dc_batch(map, {}, order, correct, 3),
            (std::vector<std::string>{"v0", "v1", "v3"}));
  // Linked but currently wrong is skipped.
  correct["v3"] = false;
  EXPECT_EQ(select_dc_batch(map, {5}, order, correct, 2), (std::vector<std::string>{"v5", "v0"}));
  EXPECT_EQ(select_dc_batch(map, {5}, order, correct, 100).size(), 5u);
}

TEST(AdaptConfig, Validation) {
  EXPECT_NO_THROW(validate(AdaptConfig{}));
  for (int field = 0; field < 5; ++field) {
    AdaptConfig c;
    switch (field) {
      case 0:
        c.epochs = 0;
        break;
      case 1:
        c.steps_per_epoch = 0;
        break;
      case 2:
        c.dc_batch = 0;
        break;
      case 3:
        c.inner_iters = 0;
        break;
      default:
        c.max_inflight = 0;
    }
    EXPECT_THROW(validate(c), InvalidParams) << field;
  }
}

TEST(Adaptation, ScriptedInvocationsCommitAtTheScriptedIterations) {
  const auto& r = scripted_run();
  ASSERT_EQ(r.invocations.size(), 3u);
  const std::vector<Invocation> expected{
      {1, 1, {"training_fail", "dc_fail", "dc_pass"}, true, false},
      {4, 2, {"dc_fail", "dc_pass"}, true, false},
      {7, 2, {"dc_pass"}, true, false},
  };
  EXPECT_EQ(r.invocations, expected);
}

TEST(Adaptation, ScriptedAccuracyAndRollback) {
  const auto& r = scripted_run();
  EXPECT_EQ(r.validation_size, 64u);
  EXPECT_EQ(r.initial_correct, 56u);
  EXPECT_EQ(r.epoch_correct, (std::vector<std::size_t>{57, 57, 57, 63, 63, 63, 61, 63, 63, 63}));
  EXPECT_EQ(r.best_correct, 63u);
  EXPECT_EQ(r.rollback_epochs, (std::vector<std::size_t>{7}));
  ASSERT_EQ(r.epoch_memory.size(), 10u);
  EXPECT_EQ(r.epoch_memory[6], r.epoch_memory[5]);
  // Ties keep the newer memory, so the final epoch's memory is the best one.
  EXPECT_EQ(r.epoch_memory[9], r.best_memory);
  EXPECT_EQ(to_json(r.epoch_memory[6]).dump(), to_json(r.epoch_memory[5]).dump());
  EXPECT_DOUBLE_EQ(r.accuracy(r.best_correct), 63.0 / 64.0);
}

TEST(Adaptation, CorrectStepsSkipReflection) {
  const auto& r = scripted_run();
  std::size_t wrong_steps = 0;
  std::size_t invokes = 0;
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    const auto& ev = r.trace[i];
    if (ev["event"] == "invoke") ++invokes;
    if (ev["event"] != "step") continue;
    const bool correct = ev["correct"].get<bool>();
    wrong_steps += !correct;
    ASSERT_LT(i + 1, r.trace.size());
    const auto& next = r.trace[i + 1];
    EXPECT_EQ(next["event"] == "invoke", !correct) << ev.dump();
  }
  EXPECT_EQ(wrong_steps, 3u);
  EXPECT_EQ(invokes, 3u);
}

TEST(Adaptation, DualCheckBatchIsLockedOncePerInvocation) {
  const auto& r = scripted_run();
  std::map<std::pair<int, int>, int> locks;
  std::map<std::pair<int, int>, int> dc_iters;
  for (const auto& ev : r.trace) {
    if (!ev.contains("epoch") || !ev.contains("step")) continue;
    const std::pair<int, int> key{ev["epoch"].get<int>(), ev["step"].get<int>()};
    if (ev["event"] == "dc_lock") {
      ++locks[key];
      EXPECT_EQ(ev["batch"].size(), ScriptedWorld::config().dc_batch);
    }
    if (ev["event"] == "iter" && ev["outcome"] != "training_fail") ++dc_iters[key];
  }
  EXPECT_EQ(locks.size(), 3u);
  for (const auto& [key, n] : locks) {
    EXPECT_EQ(n, 1) << key.first << "," << key.second;
    EXPECT_GE(dc_iters[key], 1);
  }
  // The second invocation's batch leads with the instance linked to the edited entry.
  for (const auto& ev : r.trace) {
    if (ev["event"] == "dc_lock" && ev["epoch"] == 4) {
      const auto& batch = ev["batch"];
      EXPECT_TRUE(r.best_map.linked(batch[0].get<std::string>(), {1}) ||
                  r.best_map.linked(batch[0].get<std::string>(), {2}))
          << batch.dump();
    }
  }
}

TEST(Adaptation, TraceReplayRebuildsBestMemory) {
  const auto& r = scripted_run();
  EXPECT_EQ(replay_trace(r.trace), r.best_memory);
  const auto path = temp_path("trace.jsonl");
  write_trace(path, r.trace);
  const auto back = read_trace(path);
  EXPECT_EQ(back, r.trace);
  EXPECT_EQ(replay_trace(back), r.best_memory);
  std::filesystem::remove(path);
}

TEST(Adaptation, RerunIsIdentical) {
  ScriptedWorld world;
  std::vector<json> sunk;
  const auto again = run_offline_adaptation(
      ScriptedWorld::config(), world.validation(), world.training_stream(), world.reformulator(),
      world.reflector(), world.coder(), {}, [&](const json& ev) { sunk.push_back(ev); });
  const auto& first = scripted_run();
  EXPECT_EQ(again.trace, first.trace);
  EXPECT_EQ(sunk, first.trace);
  EXPECT_EQ(again.best_memory, first.best_memory);
  EXPECT_EQ(again.best_map, first.best_map);
}

TEST(Adaptation, AgentFailuresAbortOnlyTheStep) {
  ScriptedWorld world;
  ThrowingAgent broken;
  auto cfg = ScriptedWorld::config();
  cfg.epochs = 2;
  const auto r = run_offline_adaptation(cfg, world.validation(), world.training_stream(),
                                        world.reformulator(), broken, world.coder());
  ASSERT_FALSE(r.invocations.empty());
  for (const auto& inv : r.invocations) {
    EXPECT_TRUE(inv.aborted);
    EXPECT_FALSE(inv.committed);
  }
  EXPECT_TRUE(r.best_memory.empty());
  EXPECT_EQ(r.epoch_correct.size(), 2u);
  bool saw_abort = false;
  for (const auto& ev : r.trace) saw_abort |= ev["event"] == "abort";
  EXPECT_TRUE(saw_abort);
}

TEST(Adaptation, RejectsDuplicateValidationIds) {
  ScriptedWorld world;
  auto val = world.validation();
  val.push_back(val.front());
  EXPECT_THROW(run_offline_adaptation(ScriptedWorld::config(), val, world.training_stream(),
                                      world.reformulator(), world.reflector(), world.coder()),
               InvalidParams);
}
