#include "robench/adapt.hpp"

#include <exception>
#include <optional>

#include "robench/errors.hpp"
#include "robench/prompts.hpp"

namespace robench {

using nlohmann::json;

namespace {

json ops_json(const std::vector<MemoryOp>& ops) {
  json arr = json::array();
  for (const auto& op : ops) arr.push_back(to_json(op));
  return arr;
}

bool agent_failed(const InstanceOutcome& o) {
  return o.record.failure_kind == FailureKind::AgentError;
}

class StepAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Adapter {
 public:
  Adapter(const AdaptConfig& config, const std::vector<RobustInstance>& validation,
          AgentClient& reformulator, AgentClient& reflector, AgentClient& coder,
          const TraceSink& sink, AdaptResult& result)
      : config_(config),
        validation_(validation),
        reformulator_(reformulator),
        reflector_(reflector),
        coder_(coder),
        sink_(sink),
        result_(result) {
    for (const auto& inst : validation_) order_.push_back(inst.id);
  }

  void run(ExperienceMemory initial, const TrainingStream& next_training) {
    memory_ = std::move(initial);
    emit({{"event", "init"}, {"memory", to_json(memory_)}, {"validation_size", order_.size()}});
    const std::size_t correct = eval_validation();
    best_ = {memory_, map_, state_};
    best_correct_ = correct;
    result_.initial_correct = correct;
    emit({{"event", "baseline"}, {"correct", correct}, {"total", order_.size()}});

    for (std::size_t e = 1; e <= config_.epochs; ++e) {
      for (std::size_t s = 1; s <= config_.steps_per_epoch; ++s) {
        RobustInstance q = next_training();
        step(e, s, q);
      }
      const std::size_t acc = eval_validation();
      result_.epoch_correct.push_back(acc);
      json ev = {{"event", "epoch_end"},
                 {"epoch", e},
                 {"correct", acc},
                 {"total", order_.size()},
                 {"best_correct", best_correct_}};
      if (acc >= best_correct_) {
        best_ = {memory_, map_, state_};
        best_correct_ = acc;
        ev["action"] = "accept";
      } else {
        memory_ = best_.memory;
        map_ = best_.map;
        state_ = best_.state;
        result_.rollback_epochs.push_back(e);
        ev["action"] = "rollback";
      }
      ev["memory"] = to_json(memory_);
      emit(ev);
      result_.epoch_memory.push_back(memory_);
    }
    result_.best_memory = best_.memory;
    result_.best_map = best_.map;
    result_.best_correct = best_correct_;
  }

 private:
  struct Snapshot {
    ExperienceMemory memory;
    CorrespondenceMap map;
    std::map<std::string, bool> state;
  };

  void emit(json ev) {
    if (sink_) sink_(ev);
    result_.trace.push_back(std::move(ev));
  }

  void usage(ExperienceMemory& m, const char* target, const InstanceOutcome& o) {
    const auto& ids = o.record.matched_experience_ids;
    if (ids.empty()) return;
    record_usage(m, ids, o.record.correct);
    emit({{"event", "usage"}, {"target", target}, {"ids", ids}, {"success", o.record.correct}});
  }

  std::vector<InstanceOutcome> evaluate_many(const std::vector<const RobustInstance*>& items,
                                             const ExperienceMemory& m) {
    const long count = static_cast<long>(items.size());
    std::vector<InstanceOutcome> out(items.size());
    std::vector<std::exception_ptr> errors(items.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(config_.max_inflight)
    for (long i = 0; i < count; ++i) {
      try {
        out[i] = evaluate_instance(*items[i], reformulator_, coder_, &m, config_.tol);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    return out;
  }

  std::size_t eval_validation() {
    std::vector<const RobustInstance*> items;
    for (const auto& inst : validation_) items.push_back(&inst);
    const auto outcomes = evaluate_many(items, memory_);
    std::size_t correct = 0;
    for (const auto& o : outcomes) {
      usage(memory_, "memory", o);
      state_[o.record.instance_id] = o.record.correct;
      if (o.record.correct) {
        ++correct;
        map_.record_correct(o.record.instance_id, o.record.matched_experience_ids);
      }
    }
    map_.prune(memory_);
    return correct;
  }

  InstanceOutcome evaluate_one(const RobustInstance& q, ExperienceMemory& m, const char* target) {
    InstanceOutcome o = evaluate_instance(q, reformulator_, coder_, &m, config_.tol);
    usage(m, target, o);
    return o;
  }

  void step(std::size_t e, std::size_t s, const RobustInstance& q) {
    const json where = {{"epoch", e}, {"step", s}};
    auto with = [&](json ev) {
      ev.update(where);
      return ev;
    };
    InstanceOutcome first = evaluate_one(q, memory_, "memory");
    emit(with({{"event", "step"}, {"instance_id", q.id}, {"correct", first.record.correct}}));
    if (agent_failed(first)) {
      emit(with({{"event", "abort"}, {"error", first.record.detail}}));
      return;
    }
    if (first.record.correct) return;

    Invocation inv{e, s, {}, false, false};
    ExperienceMemory candidate = memory_;
    emit(with({{"event", "invoke"}}));
    std::string y = first.reformulator_output;
    std::string fb = first.feedback;
    bool y_correct = false;
    std::string prev_trace;
    std::vector<std::pair<const RobustInstance*, InstanceOutcome>> dc_fail;
    std::optional<std::vector<std::string>> locked;
    std::set<long> touched;

    try {
      for (std::size_t k = 1; k <= config_.inner_iters; ++k) {
        std::vector<ReflectionSample> samples;
        samples.push_back(
            {y_correct, problem_text(q), y, prev_trace.empty() ? fb : fb + "\n\n" + prev_trace});
        for (const auto& [inst, o] : dc_fail) {
          samples.push_back({false, problem_text(*inst), o.reformulator_output,
                             "DUAL-CHECK REGRESSION: " + o.feedback});
        }
        const std::vector<MemoryOp> ops = reflect(q, candidate, samples);
        try {
          candidate = apply_ops(candidate, ops);
        } catch (const Error& ex) {
          throw StepAborted(ex.what());
        }
        for (long id : modified_ids(ops)) touched.insert(id);
        emit(with({{"event", "reflect"}, {"iter", k}, {"ops", ops_json(ops)}}));

        InstanceOutcome again = evaluate_one(q, candidate, "candidate");
        if (agent_failed(again)) throw StepAborted(again.record.detail);
        prev_trace = "PREVIOUS ITERATION " + std::to_string(k) + ": operations " +
                     ops_json(ops).dump() + " left the training sample " +
                     (again.record.correct ? "CORRECT" : "INCORRECT") + ". " + again.feedback;
        dc_fail.clear();
        y = again.reformulator_output;
        fb = again.feedback;
        y_correct = again.record.correct;
        if (!again.record.correct) {
          inv.outcomes.push_back("training_fail");
          emit(with({{"event", "iter"}, {"iter", k}, {"outcome", "training_fail"}}));
          continue;
        }
        if (!locked) {
          locked = select_dc_batch(map_, touched, order_, state_, config_.dc_batch);
          emit(with({{"event", "dc_lock"}, {"iter", k}, {"batch", *locked}}));
        }
        std::vector<const RobustInstance*> batch;
        for (const auto& id : *locked) batch.push_back(find_validation(id));
        const auto outcomes = evaluate_many(batch, candidate);
        std::vector<std::string> failed;
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
          usage(candidate, "candidate", outcomes[i]);
          if (agent_failed(outcomes[i])) throw StepAborted(outcomes[i].record.detail);
          if (!outcomes[i].record.correct) {
            failed.push_back(outcomes[i].record.instance_id);
            dc_fail.emplace_back(batch[i], outcomes[i]);
          }
        }
        if (failed.empty()) {
          memory_ = candidate;
          for (const auto& o : outcomes) {
            map_.record_correct(o.record.instance_id, o.record.matched_experience_ids);
          }
          map_.prune(memory_);
          inv.outcomes.push_back("dc_pass");
          inv.committed = true;
          emit(with({{"event", "iter"}, {"iter", k}, {"outcome", "dc_pass"}}));
          emit(with({{"event", "commit"}, {"iter", k}, {"memory", to_json(memory_)}}));
          break;
        }
        inv.outcomes.push_back("dc_fail");
        emit(with({{"event", "iter"}, {"iter", k}, {"outcome", "dc_fail"}, {"failed", failed}}));
      }
      if (!inv.committed) emit(with({{"event", "discard"}}));
    } catch (const StepAborted& ex) {
      inv.aborted = true;
      emit(with({{"event", "abort"}, {"error", ex.what()}}));
    }
    result_.invocations.push_back(std::move(inv));
  }

  std::vector<MemoryOp> reflect(const RobustInstance& q, const ExperienceMemory& candidate,
                                const std::vector<ReflectionSample>& samples) {
    AgentRequest req{AgentRole::Reflector,
                     build_reflector_prompt(render_memory(candidate), samples), q.id, &q,
                     &candidate};
    try {
      return parse_reflector_response(reflector_.complete(req).text).ops;
    } catch (const TransportError& ex) {
      throw StepAborted(ex.what());
    } catch (const SchemaError& ex) {
      throw StepAborted(ex.what());
    }
  }

  const RobustInstance* find_validation(const std::string& id) const {
    for (const auto& inst : validation_) {
      if (inst.id == id) return &inst;
    }
    throw InvalidParams("unknown validation instance " + id);
  }

  const AdaptConfig& config_;
  const std::vector<RobustInstance>& validation_;
  AgentClient& reformulator_;
  AgentClient& reflector_;
  AgentClient& coder_;
  const TraceSink& sink_;
  AdaptResult& result_;

  std::vector<std::string> order_;
  ExperienceMemory memory_;
  CorrespondenceMap map_;
  std::map<std::string, bool> state_;
  Snapshot best_;
  std::size_t best_correct_ = 0;
};

}  // namespace

void validate(const AdaptConfig& c) {
  if (c.epochs < 1 || c.steps_per_epoch < 1 || c.dc_batch < 1 || c.inner_iters < 1) {
    throw InvalidParams("epochs, steps, dc batch and inner iterations must all be >= 1");
  }
  if (c.max_inflight < 1) throw InvalidParams("max_inflight must be >= 1");
}

double AdaptResult::accuracy(std::size_t correct) const {
  return validation_size ? static_cast<double>(correct) / static_cast<double>(validation_size)
                         : 0.0;
}

AdaptResult run_offline_adaptation(const AdaptConfig& config,
                                   const std::vector<RobustInstance>& validation,
                                   const TrainingStream& next_training, AgentClient& reformulator,
                                   AgentClient& reflector, AgentClient& coder,
                                   ExperienceMemory initial, const TraceSink& sink) {
  validate(config);
  if (validation.empty()) throw InvalidParams("validation set is empty");
  std::set<std::string> ids;
  for (const auto& inst : validation) {
    if (!ids.insert(inst.id).second) throw InvalidParams("duplicate validation id " + inst.id);
  }
  AdaptResult result;
  result.validation_size = validation.size();
  Adapter adapter(config, validation, reformulator, reflector, coder, sink, result);
  adapter.run(std::move(initial), next_training);
  return result;
}

}  // namespace robench
