#pragma once

#include <chrono>
#include <functional>
#include <json.hpp>
#include <map>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <tuple>
#include <vector>

#include "robench/lp.hpp"
#include "robench/memory.hpp"
#include "robench/model.hpp"

namespace robench {

// ---- agents -----------------------------------------------------------------

enum class AgentRole { Reformulator, Coder, Reflector };
const char* to_string(AgentRole role);
AgentRole agent_role_from_string(const std::string& s);

struct AgentRequest {
  AgentRole role = AgentRole::Reformulator;
  std::string prompt;
  std::string instance_id;
  // Structured context for offline mocks; network clients see only the prompt.
  const RobustInstance* instance = nullptr;
  const ExperienceMemory* memory = nullptr;
};

struct AgentReply {
  std::string text;
  std::optional<long> output_tokens;  // backend usage report, if any
};

class AgentClient {
 public:
  virtual ~AgentClient() = default;
  // Called concurrently from worker threads. Throws TransportError.
  virtual AgentReply complete(const AgentRequest& request) = 0;
};

// Token surrogate for backends without a usage report: ceil(bytes / 4).
long surrogate_tokens(const std::string& text);
long reply_tokens(const AgentReply& reply);

// Parsed reformulator or coder reply. Coders return an empty id list.
struct AgentResponse {
  std::string reasoning;
  std::vector<long> matched_experience_ids;
  std::string final_answer;
};

struct ReflectorResponse {
  std::string reasoning;
  std::vector<MemoryOp> ops;
};

// Strict parsers for the three reply schemas; throw SchemaError. A coder
// final_answer given as a JSON object is re-serialized to a string.
AgentResponse parse_reformulator_response(const std::string& text);
AgentResponse parse_coder_response(const std::string& text);
ReflectorResponse parse_reflector_response(const std::string& text);

// complete() followed by the role's parser. Reflector requests are rejected;
// use parse_reflector_response on the raw reply.
AgentResponse agent_call(AgentClient& client, const AgentRequest& request);

// OpenAI-compatible chat-completions client.
struct HttpAgentConfig {
  std::string base_url = "https://api.openai.com";
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string api_key_env = "OPENAI_API_KEY";  // the key itself never lives in config
  double temperature = 0.0;
  int max_retries = 4;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::milliseconds max_backoff{8000};
  int max_inflight = 4;
  int timeout_seconds = 120;
};

// Reads {"base_url", "path", "model", "api_key_env", "temperature",
// "max_retries", "initial_backoff_ms", "max_backoff_ms", "max_inflight",
// "timeout_seconds"}; absent keys keep their defaults.
HttpAgentConfig http_agent_config_from_json(const nlohmann::json& j);

class HttpAgent : public AgentClient {
 public:
  // Transport hook for tests: (request body, Authorization header) ->
  // (status, body), status <= 0 meaning no response. Defaults to httplib.
  struct RawResponse {
    int status = 0;
    std::string body;
  };
  using Transport =
      std::function<RawResponse(const std::string& body, const std::string& auth_header)>;
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  explicit HttpAgent(HttpAgentConfig config, Transport transport = {}, Sleeper sleeper = {});
  AgentReply complete(const AgentRequest& request) override;

  nlohmann::json request_body(const std::string& prompt) const;

 private:
  HttpAgentConfig config_;
  Transport transport_;
  Sleeper sleeper_;
  std::unique_ptr<std::counting_semaphore<>> inflight_;
};

// ---- offline agents ---------------------------------------------------------

// Reformulator that answers with the exact robust counterpart as RC-JSON.
class OracleReformulator : public AgentClient {
 public:
  AgentReply complete(const AgentRequest& request) override;
};

// Reformulator that ignores uncertainty and answers with the nominal LP.
class NominalReformulator : public AgentClient {
 public:
  AgentReply complete(const AgentRequest& request) override;
};

// Coder that copies an RC-JSON counterpart from its prompt into final_answer.
class PassThroughCoder : public AgentClient {
 public:
  AgentReply complete(const AgentRequest& request) override;
};

// Delegates to a function; the function must be thread-safe.
class ScriptedAgent : public AgentClient {
 public:
  using Script = std::function<AgentReply(const AgentRequest&)>;
  explicit ScriptedAgent(Script script) : script_(std::move(script)) {}
  AgentReply complete(const AgentRequest& request) override { return script_(request); }

 private:
  Script script_;
};

std::string make_reply_json(const std::string& reasoning, const std::vector<long>& ids,
                            const nlohmann::json& final_answer);

// ---- verification -----------------------------------------------------------

struct Tolerance {
  double abs = 1e-4;
  double rel = 1e-3;
  double bound(double f_star) const;
  bool matches(double f_hat, double f_star) const;
};

enum class FailureKind { ParseError, SolverInfeasible, SolverUnbounded, ValueMismatch, AgentError };
const char* to_string(FailureKind kind);
FailureKind failure_kind_from_string(const std::string& s);

struct EvalRecord {
  std::string instance_id;
  std::optional<double> f_hat;
  double f_star = 0.0;
  bool correct = false;
  std::optional<FailureKind> failure_kind;
  std::optional<long> output_tokens;
  std::vector<long> matched_experience_ids;
  std::string detail;  // human-readable failure reason
  bool operator==(const EvalRecord&) const = default;
};

// Solves the candidate and compares against f_star. Failures are returned as
// data; only a non-finite f_star throws (InvalidParams).
EvalRecord verify_candidate(const std::string& rc_json, double f_star, const Tolerance& tol = {});
EvalRecord verify_candidate(const lp::DeterministicLP& rc, double f_star,
                            const Tolerance& tol = {});

nlohmann::json to_json(const EvalRecord& record);
EvalRecord eval_record_from_json(const nlohmann::json& j);

// ---- pipeline ---------------------------------------------------------------

struct Exchange {
  AgentRole role = AgentRole::Reformulator;
  std::string prompt;
  std::string response;
  std::optional<long> output_tokens;
  std::string error;  // transport failure message; response is empty then
  bool operator==(const Exchange&) const = default;
};

struct Transcript {
  std::string instance_id;
  std::vector<Exchange> exchanges;
  bool operator==(const Transcript&) const = default;
};

nlohmann::json to_json(const Transcript& t);
Transcript transcript_from_json(const nlohmann::json& j);
// One <instance_id>.json file per transcript.
void save_transcripts(const std::string& dir, const std::vector<Transcript>& transcripts);
std::vector<Transcript> load_transcripts(const std::string& dir);

// Answers from recorded exchanges keyed by (instance, role, prompt). A missing
// entry or a recorded transport failure throws TransportError.
class ReplayAgent : public AgentClient {
 public:
  explicit ReplayAgent(const std::vector<Transcript>& transcripts);
  AgentReply complete(const AgentRequest& request) override;

 private:
  std::map<std::tuple<std::string, AgentRole, std::string>, Exchange> log_;
};

// Problem text shown to the reformulator: LaTeX plus robust extension,
// rendered on demand with the instance's template (T000 if none).
std::string problem_text(const RobustInstance& inst);
// Stored f* or, when absent, the value of the robust counterpart.
double reference_value(const RobustInstance& inst);

struct InstanceOutcome {
  EvalRecord record;
  Transcript transcript;
  std::string reformulator_output;  // raw reply, for reflection
  std::string feedback;             // environment feedback text
};

// Reformulator (memory inlined when given) -> coder -> verify_candidate.
InstanceOutcome evaluate_instance(const RobustInstance& inst, AgentClient& reformulator,
                                  AgentClient& coder, const ExperienceMemory* memory,
                                  const Tolerance& tol);

struct Summary {
  std::size_t total = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;  // correct / total
  std::optional<double> mean_output_tokens;
  std::map<std::string, std::size_t> failures_by_kind;
  bool operator==(const Summary&) const = default;
};

Summary summarize(const std::vector<EvalRecord>& records);
nlohmann::json to_json(const Summary& s);

struct PipelineOptions {
  Tolerance tol;
  int max_inflight = 4;
};

struct PipelineResult {
  std::vector<EvalRecord> records;  // dataset order
  std::vector<Transcript> transcripts;
  Summary summary;
};

// Evaluates every instance, max_inflight at a time. Never throws for a single
// instance's agent or solver failure.
PipelineResult run_pipeline(const std::vector<RobustInstance>& dataset, AgentClient& reformulator,
                            AgentClient& coder, const ExperienceMemory* memory,
                            const PipelineOptions& options = {});

}  // namespace robench
