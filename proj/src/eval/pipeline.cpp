#include <algorithm>
#include <exception>
#include <filesystem>
#include <fstream>

#include "robench/errors.hpp"
#include "robench/eval.hpp"
#include "robench/prompts.hpp"
#include "robench/reformulate.hpp"
#include "robench/render.hpp"

namespace robench {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Sends one request and records it. Returns nullopt on transport failure.
std::optional<AgentReply> exchange(AgentClient& client, const AgentRequest& req,
                                   Transcript& transcript, std::string& error) {
  Exchange ex{req.role, req.prompt, {}, {}, {}};
  std::optional<AgentReply> reply;
  try {
    reply = client.complete(req);
    ex.response = reply->text;
    ex.output_tokens = reply->output_tokens;
  } catch (const TransportError& e) {
    ex.error = e.what();
    error = e.what();
  }
  transcript.exchanges.push_back(std::move(ex));
  return reply;
}

std::string feedback_for(const EvalRecord& r) {
  if (r.correct) {
    return "CORRECT: the counterpart solves to " + format_number(*r.f_hat) +
           ", matching the reference value " + format_number(r.f_star) + ".";
  }
  std::string out = "INCORRECT (" + std::string(to_string(*r.failure_kind)) + "): ";
  if (r.f_hat) {
    out += "the counterpart solves to " + format_number(*r.f_hat) + " but the reference value is " +
           format_number(r.f_star) + ".";
  } else {
    out += r.detail;
  }
  return out;
}

}  // namespace

std::string problem_text(const RobustInstance& inst) {
  std::string latex = inst.latex;
  if (latex.empty()) latex = render_latex(inst, inst.template_id.value_or(TemplateId{}));
  std::string ext = inst.nl_extension;
  if (ext.empty()) ext = render_robust_extension(inst);
  return latex + "\n\n" + ext;
}

double reference_value(const RobustInstance& inst) {
  if (inst.ground_truth) return inst.ground_truth->f_star;
  const auto sol = solve_robust(inst);
  if (sol.status != lp::Status::Optimal) {
    throw InvalidInstance(inst.id + ": no finite robust optimum to compare against");
  }
  return sol.value;
}

InstanceOutcome evaluate_instance(const RobustInstance& inst, AgentClient& reformulator,
                                  AgentClient& coder, const ExperienceMemory* memory,
                                  const Tolerance& tol) {
  InstanceOutcome out;
  out.transcript.instance_id = inst.id;
  const double f_star = reference_value(inst);
  long tokens = 0;
  std::vector<long> matched;

  auto agent_failure = [&](const std::string& why) {
    EvalRecord& r = out.record;
    r.f_star = f_star;
    r.failure_kind = FailureKind::AgentError;
    r.detail = why;
  };

  const std::string memory_text = render_memory(memory ? *memory : ExperienceMemory{});
  AgentRequest req{AgentRole::Reformulator,
                   build_reformulator_prompt(problem_text(inst), memory_text), inst.id, &inst,
                   memory};
  std::string error;
  auto reply = exchange(reformulator, req, out.transcript, error);
  if (!reply) {
    agent_failure(error);
  } else {
    tokens += reply_tokens(*reply);
    out.reformulator_output = reply->text;
    std::optional<AgentResponse> parsed;
    try {
      parsed = parse_reformulator_response(reply->text);
      matched = parsed->matched_experience_ids;
    } catch (const SchemaError& e) {
      agent_failure(e.what());
    }
    if (parsed) {
      req.role = AgentRole::Coder;
      req.prompt = build_coder_prompt(parsed->final_answer);
      auto code = exchange(coder, req, out.transcript, error);
      if (!code) {
        agent_failure(error);
      } else {
        tokens += reply_tokens(*code);
        try {
          out.record = verify_candidate(parse_coder_response(code->text).final_answer, f_star, tol);
        } catch (const SchemaError& e) {
          agent_failure(e.what());
        }
      }
    }
  }
  out.record.instance_id = inst.id;
  out.record.matched_experience_ids = matched;
  if (!out.transcript.exchanges.empty() && out.transcript.exchanges.front().error.empty()) {
    out.record.output_tokens = tokens;
  }
  out.feedback = feedback_for(out.record);
  return out;
}

Summary summarize(const std::vector<EvalRecord>& records) {
  Summary s;
  s.total = records.size();
  for (auto k :
       {FailureKind::ParseError, FailureKind::SolverInfeasible, FailureKind::SolverUnbounded,
        FailureKind::ValueMismatch, FailureKind::AgentError}) {
    s.failures_by_kind[to_string(k)] = 0;
  }
  long token_sum = 0;
  std::size_t token_count = 0;
  for (const auto& r : records) {
    if (r.correct) ++s.correct;
    if (r.failure_kind) ++s.failures_by_kind[to_string(*r.failure_kind)];
    if (r.output_tokens) {
      token_sum += *r.output_tokens;
      ++token_count;
    }
  }
  s.accuracy = s.total ? static_cast<double>(s.correct) / static_cast<double>(s.total) : 0.0;
  if (token_count) s.mean_output_tokens = static_cast<double>(token_sum) / token_count;
  return s;
}

json to_json(const Summary& s) {
  return {
      {"total", s.total},
      {"correct", s.correct},
      {"accuracy", s.accuracy},
      {"mean_output_tokens", s.mean_output_tokens ? json(*s.mean_output_tokens) : json(nullptr)},
      {"failures_by_kind", s.failures_by_kind}};
}

PipelineResult run_pipeline(const std::vector<RobustInstance>& dataset, AgentClient& reformulator,
                            AgentClient& coder, const ExperienceMemory* memory,
                            const PipelineOptions& options) {
  if (dataset.empty()) throw InvalidParams("dataset is empty");
  if (options.max_inflight < 1) throw InvalidParams("max_inflight must be >= 1");
  const long count = static_cast<long>(dataset.size());
  std::vector<InstanceOutcome> outcomes(dataset.size());
  std::vector<std::exception_ptr> errors(dataset.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(options.max_inflight)
  for (long i = 0; i < count; ++i) {
    try {
      outcomes[i] = evaluate_instance(dataset[i], reformulator, coder, memory, options.tol);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  PipelineResult result;
  for (auto& o : outcomes) {
    result.records.push_back(std::move(o.record));
    result.transcripts.push_back(std::move(o.transcript));
  }
  result.summary = summarize(result.records);
  return result;
}

json to_json(const Transcript& t) {
  json ex = json::array();
  for (const auto& e : t.exchanges) {
    ex.push_back({{"role", to_string(e.role)},
                  {"prompt", e.prompt},
                  {"response", e.response},
                  {"output_tokens", e.output_tokens ? json(*e.output_tokens) : json(nullptr)},
                  {"error", e.error}});
  }
  return {{"instance_id", t.instance_id}, {"exchanges", std::move(ex)}};
}

Transcript transcript_from_json(const json& j) {
  Transcript t;
  t.instance_id = j.at("instance_id").get<std::string>();
  for (const auto& e : j.at("exchanges")) {
    Exchange ex;
    ex.role = agent_role_from_string(e.at("role").get<std::string>());
    ex.prompt = e.at("prompt").get<std::string>();
    ex.response = e.at("response").get<std::string>();
    if (!e.at("output_tokens").is_null()) ex.output_tokens = e["output_tokens"].get<long>();
    ex.error = e.value("error", std::string());
    t.exchanges.push_back(std::move(ex));
  }
  return t;
}

void save_transcripts(const std::string& dir, const std::vector<Transcript>& transcripts) {
  fs::create_directories(dir);
  for (const auto& t : transcripts) {
    std::ofstream out(fs::path(dir) / (t.instance_id + ".json"));
    if (!out) throw std::runtime_error("cannot write transcript for " + t.instance_id);
    out << to_json(t).dump(2) << "\n";
  }
}

std::vector<Transcript> load_transcripts(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Transcript> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    out.push_back(transcript_from_json(json::parse(in)));
  }
  return out;
}

ReplayAgent::ReplayAgent(const std::vector<Transcript>& transcripts) {
  for (const auto& t : transcripts) {
    for (const auto& e : t.exchanges) log_[{t.instance_id, e.role, e.prompt}] = e;
  }
}

AgentReply ReplayAgent::complete(const AgentRequest& request) {
  auto it = log_.find({request.instance_id, request.role, request.prompt});
  if (it == log_.end()) {
    throw TransportError("no recorded " + std::string(to_string(request.role)) + " exchange for " +
                         request.instance_id);
  }
  const Exchange& e = it->second;
  if (!e.error.empty()) {
    // Re-raise with the original message so replayed records match exactly.
    const std::string prefix = "TransportError: ";
    throw TransportError(e.error.rfind(prefix, 0) == 0 ? e.error.substr(prefix.size()) : e.error);
  }
  return {e.response, e.output_tokens};
}

}  // namespace robench
