#include <algorithm>
#include <cctype>

#include "robench/errors.hpp"
#include "robench/eval.hpp"

namespace robench {

using nlohmann::json;

namespace {

json parse_object(const std::string& text, const char* role) {
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  if (b == e || text[b] != '{' || text[e - 1] != '}') {
    throw SchemaError(std::string(role) + " reply is not a bare JSON object");
  }
  try {
    return json::parse(text.begin() + b, text.begin() + e);
  } catch (const json::exception& ex) {
    throw SchemaError(std::string(role) + " reply is not valid JSON: " + ex.what());
  }
}

std::string require_string(const json& j, const char* key, const char* role) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw SchemaError(std::string(role) + " reply lacks string field '" + key + "'");
  }
  return j[key].get<std::string>();
}

std::string answer_text(const json& j, const char* role) {
  if (!j.contains("final_answer")) {
    throw SchemaError(std::string(role) + " reply lacks field 'final_answer'");
  }
  const json& a = j["final_answer"];
  if (a.is_string()) return a.get<std::string>();
  if (a.is_object()) return a.dump();
  throw SchemaError(std::string(role) + " final_answer must be a string or an object");
}

}  // namespace

const char* to_string(AgentRole role) {
  switch (role) {
    case AgentRole::Reformulator:
      return "reformulator";
    case AgentRole::Coder:
      return "coder";
    case AgentRole::Reflector:
      return "reflector";
  }
  return "unknown";
}

AgentRole agent_role_from_string(const std::string& s) {
  if (s == "reformulator") return AgentRole::Reformulator;
  if (s == "coder") return AgentRole::Coder;
  if (s == "reflector") return AgentRole::Reflector;
  throw SchemaError("unknown agent role '" + s + "'");
}

long surrogate_tokens(const std::string& text) { return static_cast<long>((text.size() + 3) / 4); }

long reply_tokens(const AgentReply& reply) {
  return reply.output_tokens.value_or(surrogate_tokens(reply.text));
}

AgentResponse parse_reformulator_response(const std::string& text) {
  const json j = parse_object(text, "reformulator");
  AgentResponse r;
  r.reasoning = require_string(j, "reasoning", "reformulator");
  if (!j.contains("matched_experience_ids") || !j["matched_experience_ids"].is_array()) {
    throw SchemaError("reformulator reply lacks list field 'matched_experience_ids'");
  }
  for (const auto& id : j["matched_experience_ids"]) {
    if (!id.is_number_integer()) throw SchemaError("matched_experience_ids must be integers");
    r.matched_experience_ids.push_back(id.get<long>());
  }
  r.final_answer = answer_text(j, "reformulator");
  return r;
}

AgentResponse parse_coder_response(const std::string& text) {
  const json j = parse_object(text, "coder");
  AgentResponse r;
  r.reasoning = require_string(j, "reasoning", "coder");
  r.final_answer = answer_text(j, "coder");
  return r;
}

ReflectorResponse parse_reflector_response(const std::string& text) {
  const json j = parse_object(text, "reflector");
  ReflectorResponse r;
  r.reasoning = require_string(j, "reasoning", "reflector");
  if (!j.contains("final_answer") || !j["final_answer"].is_array()) {
    throw SchemaError("reflector final_answer must be a list of operations");
  }
  std::set<long> seen;
  for (const auto& op : j["final_answer"]) {
    r.ops.push_back(memory_op_from_json(op));
    if (!seen.insert(r.ops.back().id).second) {
      throw SchemaError("experience id " + std::to_string(r.ops.back().id) +
                        " appears in more than one operation");
    }
  }
  return r;
}

AgentResponse agent_call(AgentClient& client, const AgentRequest& request) {
  switch (request.role) {
    case AgentRole::Reformulator:
      return parse_reformulator_response(client.complete(request).text);
    case AgentRole::Coder:
      return parse_coder_response(client.complete(request).text);
    case AgentRole::Reflector:
      break;
  }
  throw SchemaError("agent_call does not handle reflector replies");
}

std::string make_reply_json(const std::string& reasoning, const std::vector<long>& ids,
                            const json& final_answer) {
  return json{
      {"reasoning", reasoning}, {"matched_experience_ids", ids}, {"final_answer", final_answer}}
      .dump();
}

}  // namespace robench
