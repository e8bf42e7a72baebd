#include "robench/adapt.hpp"
#include "robench/errors.hpp"
#include "robench/generator.hpp"
#include "robench/rc_json.hpp"
#include "robench/reformulate.hpp"

namespace robench {

using nlohmann::json;

namespace {

// Units the base reformulator handles without help.
bool innate(const std::string& tag) { return tag == "box" || tag == "budget-le"; }

const char* const kBudgetVague =
    "Budgeted rows: treat the budget like a box and keep the nominal row. [note:budget-ge]";
const char* const kBudgetOverreach =
    "Budgeted >= row: dualize the inner min with z0 >= 0, z_j >= 0, z0 + z_j >= Delta_j x_j and "
    "subtract Gamma z0 + sum z_j. Apply the same rewrite to every box row. "
    "[fixes:budget-ge] [breaks:box]";
const char* const kBudgetGe =
    "Budgeted >= row: dualize the inner min with z0 >= 0, z_j >= 0, z0 + z_j >= Delta_j x_j and "
    "subtract Gamma z0 + sum z_j from the nominal left-hand side. [fixes:budget-ge]";
const char* const kPolyhedral =
    "Polyhedral row: introduce lambda >= 0 for F zeta <= g and the component bounds, require "
    "F^T lambda = sigma x on the support, and add g^T lambda to the nominal row. "
    "[fixes:polyhedral]";
const char* const kHeavyTail =
    "Heavy-tail row: bound the sum by m mu +- Gamma m^(1/alpha) and dualize as a polyhedral set; "
    "reuse the same dual for budget rows with <= sense. [fixes:heavy-tail] [breaks:budget-le]";

std::vector<RobustInstance> usable_instances(std::uint64_t seed, std::size_t count,
                                             const std::string& prefix) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.count = count + count / 2 + 8;
  auto pool = generate_dataset(cfg);
  std::vector<RobustInstance> out;
  for (auto& inst : pool) {
    // Keep only instances where ignoring uncertainty gives a wrong answer.
    const auto nominal = verify_candidate(nominal_lp(inst), inst.ground_truth->f_star);
    if (nominal.correct) continue;
    inst.id = prefix + std::to_string(out.size()) + "_" + inst.id;
    out.push_back(std::move(inst));
    if (out.size() == count) return out;
  }
  throw GenerationStalled("scripted world could not find enough instances");
}

bool mentions(const ExperienceEntry& e, const std::string& marker, const std::string& tag) {
  return e.content.find("[" + marker + ":" + tag + "]") != std::string::npos;
}

class WorldReformulator : public AgentClient {
 public:
  explicit WorldReformulator(const std::map<std::string, std::string>& tags) : tags_(tags) {}

  AgentReply complete(const AgentRequest& request) override {
    if (!request.instance) throw TransportError("scripted reformulator needs the instance");
    const RobustInstance& inst = *request.instance;
    const std::string& tag = tags_.at(inst.id);
    bool fixed = innate(tag);
    bool broken = false;
    std::vector<long> matched;
    if (request.memory) {
      for (const auto& e : request.memory->entries) {
        const bool f = mentions(e, "fixes", tag);
        const bool b = mentions(e, "breaks", tag);
        fixed = fixed || f;
        broken = broken || b;
        if (f || b || mentions(e, "note", tag)) matched.push_back(e.id);
      }
    }
    const bool correct = fixed && !broken;
    const auto lp = correct ? reformulate(inst) : nominal_lp(inst);
    return {make_reply_json("Unit " + tag + (correct ? ": dualized." : ": kept nominal."), matched,
                            lp::to_rc_json(lp)),
            {}};
  }

 private:
  const std::map<std::string, std::string>& tags_;
};

// Stateless: the iteration is read off the memory it is shown.
class WorldReflector : public AgentClient {
 public:
  explicit WorldReflector(const std::map<std::string, std::string>& tags) : tags_(tags) {}

  AgentReply complete(const AgentRequest& request) override {
    if (!request.instance || !request.memory) {
      throw TransportError("scripted reflector needs the instance and memory");
    }
    const ExperienceMemory& m = *request.memory;
    const std::string& tag = tags_.at(request.instance->id);
    const ExperienceEntry* first = m.find(1);
    const std::string head = first ? first->content : "";
    const long next = m.max_id() + 1;
    std::vector<MemoryOp> ops;
    using K = MemoryOp::Kind;
    if (tag == "budget-ge") {
      if (!first) ops = {{K::Add, next, kBudgetVague}};
      if (head == kBudgetVague) ops = {{K::Update, 1, kBudgetOverreach}};
      if (head == kBudgetOverreach) ops = {{K::Update, 1, kBudgetGe}};
    } else if (tag == "polyhedral") {
      if (head == kBudgetGe) ops = {{K::Update, 1, kPolyhedral}};
      if (head == kPolyhedral) ops = {{K::Update, 1, kBudgetGe}, {K::Add, next, kPolyhedral}};
    } else if (tag == "heavy-tail") {
      ops = {{K::Add, next, kHeavyTail}};
    }
    json list = json::array();
    for (const auto& op : ops) list.push_back(to_json(op));
    json reply = {{"reasoning", "Scripted reflection for unit " + tag}, {"final_answer", list}};
    return {reply.dump(), {}};
  }

 private:
  const std::map<std::string, std::string>& tags_;
};

// Validation layout: 54 innate box units, one budget >= unit, six polyhedral
// units, two innate budget <= units and one unit no experience ever fixes.
std::vector<std::string> validation_tags() {
  std::vector<std::string> tags(54, "box");
  tags.push_back("budget-ge");
  tags.insert(tags.end(), 6, "polyhedral");
  tags.insert(tags.end(), 2, "budget-le");
  tags.push_back("uniform-sum");
  return tags;
}

std::string training_tag(std::size_t epoch, std::size_t step) {
  if (epoch == 1 && step == 1) return "budget-ge";
  if (epoch == 4 && step == 2) return "polyhedral";
  if (epoch == 7 && step == 2) return "heavy-tail";
  // Filler steps must be correct on entry: innate units, or units learned earlier.
  if (epoch != 7 && step % 4 == 3) return "budget-le";
  if (epoch >= 2 && step == 5) return "budget-ge";
  if (epoch >= 5 && step == 6) return "polyhedral";
  return "box";
}

}  // namespace

ScriptedWorld::ScriptedWorld(std::uint64_t seed) {
  const auto vtags = validation_tags();
  validation_ = usable_instances(seed, vtags.size(), "val");
  for (std::size_t i = 0; i < vtags.size(); ++i) tags_[validation_[i].id] = vtags[i];
  const AdaptConfig cfg = config();
  training_ = usable_instances(seed + 1, cfg.epochs * cfg.steps_per_epoch, "train");
  for (std::size_t e = 1; e <= cfg.epochs; ++e) {
    for (std::size_t s = 1; s <= cfg.steps_per_epoch; ++s) {
      tags_[training_[(e - 1) * cfg.steps_per_epoch + (s - 1)].id] = training_tag(e, s);
    }
  }
  reformulator_ = std::make_unique<WorldReformulator>(tags_);
  reflector_ = std::make_unique<WorldReflector>(tags_);
  coder_ = std::make_unique<PassThroughCoder>();
}

TrainingStream ScriptedWorld::training_stream() {
  auto pos = std::make_shared<std::size_t>(0);
  return [this, pos]() {
    if (*pos >= training_.size()) throw InvalidParams("scripted training stream exhausted");
    return training_[(*pos)++];
  };
}

AdaptConfig ScriptedWorld::config() {
  AdaptConfig c;
  c.epochs = 10;
  c.steps_per_epoch = 8;
  c.dc_batch = 4;
  c.inner_iters = 3;
  return c;
}

const std::string& ScriptedWorld::tag_of(const std::string& instance_id) const {
  return tags_.at(instance_id);
}

}  // namespace robench
